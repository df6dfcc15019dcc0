#pragma once

// The membrane as a quantum particle in the effective potential: ground
// states by implicit imaginary-time stepping, quadrature moments, Wigner
// functions and the fidelity susceptibility.

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "optodicke/exec.hpp"
#include "optodicke/model.hpp"

namespace optodicke::quantum1d {

using cplx = std::complex<double>;

// Uniform nodes x_i = centre + (i - (n-1)/2) h with psi = 0 outside.
struct Grid1D {
    double x_min = -10.0;
    double x_max = 10.0;
    std::size_t n_points = 2048;

    double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double x(std::size_t i) const;
    void validate() const;
};

enum class Domain { full, half }; // half: reflecting wall at x = 0, x > 0 only

// Default grid: full domain symmetric about 0 with half-width
// |x_ss| + max(10, 8 sigma); half domain runs from h to |x_ss| + max(10, 8 sigma).
Grid1D default_grid(const DimensionlessParams& p, Domain domain = Domain::full, std::size_t n_points = 2048);

struct ImagTimeConfig {
    double dtau = 0.1;
    double tol = 1e-12;            // |dE| / dtau
    std::size_t max_steps = 1000000;

    void validate() const;
};

struct WaveFunction {
    Grid1D grid;
    std::vector<cplx> psi;
    double energy = 0.0; // relative to the minimum of V_eff
    std::size_t steps = 0;
};

// V_eff(x_i) - V_eff(x_ss): energies are measured from the mean-field minimum.
std::vector<double> shifted_potential(const DimensionlessParams& p, const Grid1D& grid);

// Ground state of p^2/2 + V_eff - min V_eff on the grid. The default start
// is an even superposition of Gaussians at the mean-field minima (one
// Gaussian at +x_ss when the grid lies at x > 0).
WaveFunction ground_state(const DimensionlessParams& p, const Grid1D& grid, const ImagTimeConfig& itc = {});
WaveFunction ground_state(const DimensionlessParams& p, const Grid1D& grid, const ImagTimeConfig& itc,
                          std::vector<cplx> initial);

// <psi|H|psi> with the same stencil as the solver.
double energy(const DimensionlessParams& p, const WaveFunction& wf);

// h * sum |psi|^2.
double norm_squared(const WaveFunction& wf);

struct Moments {
    double mean_x = 0.0;
    double dx = 0.0;
    double mean_p = 0.0;
    double dp = 0.0;
};

Moments moments(const WaveFunction& wf);

struct WignerOptions {
    double p_min = -8.0;
    double p_max = 8.0;
    std::size_t n_p = 512;
    std::size_t x_stride = 1; // keep every x_stride-th grid node
    double imag_tol = 1e-10;
};

struct WignerGrid {
    std::vector<double> x;
    std::vector<double> p;
    std::vector<double> w; // row-major, w[ip * x.size() + ix]
    double max_imag = 0.0;

    double at(std::size_t ip, std::size_t ix) const { return w[ip * x.size() + ix]; }
};

WignerGrid wigner(const WaveFunction& wf, const WignerOptions& opt = {}, Exec exec = Exec::parallel);

// Trapezoid integrals over p (and x for the norm); x spacing from the grid.
double wigner_norm(const WignerGrid& w);
std::vector<double> wigner_x_marginal(const WignerGrid& w);

struct FsResult {
    double chi_lambda = 0.0; // second derivative in lambda
    double chi_mu = 0.0;     // lambda_c^2 chi_lambda
    double f_plus = 0.0;
    double f_minus = 0.0;
    Domain domain = Domain::full;
};

// (2 - F(+d) - F(-d)) / (2 d^2) with F = Re <psi0(lambda)|psi0(lambda + d)>.
// Above the transition the states live on the half domain (one well).
FsResult fs_numeric(const DimensionlessParams& p, double lambda, double delta = 1e-3, std::size_t n_points = 2048);

// Width of the harmonic approximation to a well.
double gaussian_variance(double mu);

// Leading-order fidelity susceptibility in mu.
double fs_analytic(double mu, double eps0);

struct AlphaFit {
    double alpha_minus = 0.0;
    double alpha_plus = 0.0;
};

// Exponents from chi ~ |mu - 1|^(-alpha) on mu in [0.9, 0.99] and
// [1.01, 1.1], fitted as ln chi = c - alpha ln|mu - 1| + b |mu - 1|.
double fit_alpha_window(const std::vector<double>& mu, const std::vector<double>& chi, double lo, double hi);
AlphaFit fit_alpha(const std::vector<double>& mu, const std::vector<double>& chi);

struct SqueezingRow {
    double lambda = 0.0;
    double dx = 0.0;
    double dp = 0.0;
};

// Full-domain ground-state widths for each lambda.
std::vector<SqueezingRow> squeezing_sweep(const DimensionlessParams& p, const std::vector<double>& lambdas,
                                          std::size_t n_points = 2048, Exec exec = Exec::parallel);

inline constexpr const char* wavefunction_csv_header = "x,re_psi,im_psi";
inline constexpr const char* wigner_csv_header = "x,p,w";
inline constexpr const char* squeezing_csv_header = "lambda,dx,dp";
std::string wavefunction_csv(const WaveFunction& wf);
std::string wigner_csv(const WignerGrid& w);
std::string squeezing_csv(const std::vector<SqueezingRow>& rows);

} // namespace optodicke::quantum1d
