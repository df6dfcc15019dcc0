#pragma once

// Adiabatic (mean-field) steady states: the optical fields slaved to the
// membrane displacement, the resulting effective potential, and the
// order-parameter observables across the transition.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "optodicke/exec.hpp"
#include "optodicke/model.hpp"

namespace optodicke::meanfield {

using cplx = std::complex<double>;

enum class Branch { normal, broken_plus, broken_minus };

std::string to_string(Branch b);

struct FieldAmplitudes {
    cplx a;
    cplx b;
};

struct SteadyState {
    double x_ss = 0.0;
    cplx a_ss{};
    cplx b_ss{};
    double n_a = 0.0;
    double n_b = 0.0;
    double n_c = 0.0;
    Branch branch = Branch::normal;
    bool saddle = false; // stationary point that is a maximum of V_eff
};

// Stationary field amplitudes for a fixed membrane displacement x.
FieldAmplitudes field_steady_states(const DimensionlessParams& p, double x);

// Full effective potential including the odd arctan term for unequal pumps.
double effective_potential(const DimensionlessParams& p, double x);

// -x - (lambda / sqrt V)(n_a - n_b), equal to -dV_eff/dx.
double effective_force(const DimensionlessParams& p, double x);

// Builds the SteadyState record at displacement x (fields, occupations, branch label).
SteadyState make_steady_state(const DimensionlessParams& p, double x, bool saddle = false);

// All stationary points of V_eff, minima first, ordered by x. Balanced
// antisymmetric pumping uses the closed form; other pumping patterns are
// handled by bracketed bisection on effective_force.
std::vector<SteadyState> steady_positions(const DimensionlessParams& p);

// Global minimum of V_eff (first broken branch when degenerate).
SteadyState global_minimum(const DimensionlessParams& p);

// E0 / eps0 as a function of mu.
double ground_energy_ratio(double mu);
double ground_energy(const DimensionlessParams& p);

struct PhotonObservables {
    Branch branch = Branch::normal;
    double n_sum = 0.0;  // n_a + n_b
    double n_diff = 0.0; // n_a - n_b
};

// Closed-form photon numbers on the requested branch. Broken branches are
// rejected for mu <= 1.
PhotonObservables photon_observables(const DimensionlessParams& p, Branch branch);

// n_c = x_ss^2 / 2 on the stable branch.
double phonon_number(const DimensionlessParams& p);

struct GridSpec {
    double mu_min = 0.0;
    double mu_max = 3.0;
    std::size_t n_points = 301;
    bool log_near_one = false; // mu = 1 + logspace(mu_min - 1, mu_max - 1)
};

std::vector<double> make_mu_grid(const GridSpec& spec);

struct SweepRow {
    double mu = 0.0;
    double x_ss_plus = 0.0;
    double n_a = 0.0;
    double n_b = 0.0;
    double n_diff = 0.0;
    double n_c = 0.0;
    double E0_over_eps0 = 0.0;
};

struct SweepTable {
    GridSpec grid;
    std::vector<SweepRow> rows;
};

// One row per grid point on the + branch; the grid must be strictly increasing.
SweepTable sweep(const DimensionlessParams& p, const std::vector<double>& mu_grid, Exec exec = Exec::parallel);
SweepTable sweep(const DimensionlessParams& p, const GridSpec& grid, Exec exec = Exec::parallel);

// Least-squares slope of log n_c against log(mu - 1) over rows with
// mu in [mu_lo, mu_hi]; the window must lie in (1, 1.1].
double fit_beta(const SweepTable& table, double mu_lo, double mu_hi);

inline constexpr const char* sweep_csv_header = "mu,x_ss_plus,n_a,n_b,n_diff,n_c,E0_over_eps0";
std::string sweep_csv(const SweepTable& table);

} // namespace optodicke::meanfield
