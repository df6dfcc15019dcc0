#pragma once

// Linear fluctuations about a steady state. The drift matrix acts on
// u = (dx, dp, dX_a, dP_a, dX_b, dP_b) with X = (a + a^dag)/sqrt2 and
// P = (a^dag - a)/(i sqrt2); excitation frequencies are the eigenvalues of
// iD, so decay shows up as a negative imaginary part.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "optodicke/exec.hpp"
#include "optodicke/linalg.hpp"
#include "optodicke/meanfield.hpp"
#include "optodicke/model.hpp"

namespace optodicke::stability {

using cplx = std::complex<double>;
using DriftMatrix = linalg::RealMatrix;

struct ExcitationSpectrum {
    std::array<cplx, 6> omega{}; // sorted by (Re, Im)
    double max_residual = 0.0;   // max ||iD v - omega v|| over the six pairs
};

// Drift matrix at the normal branch for balanced antisymmetric pumping,
// written in terms of mu = lambda / lambda_c.
DriftMatrix drift_matrix(const DimensionlessParams& p, double mu);

// Linearization about any steady state (fields and x taken from ss).
DriftMatrix drift_matrix_general(const DimensionlessParams& p, const meanfield::SteadyState& ss);

// Eigenvalues of iD with eigenvector residuals checked against 1e-9 ||D||.
ExcitationSpectrum spectrum(const DriftMatrix& d);

// Closed-form frequencies for kappa = 0, sorted by (Re, Im).
std::array<cplx, 6> analytic_spectrum_lossless(double g, double mu);

// Largest imaginary part: > 0 means a growing mode.
double max_growth_rate(const ExcitationSpectrum& s);

enum class Label { light1_plus, light1_minus, light2_plus, light2_minus, membrane_plus, membrane_minus };

inline constexpr std::array<const char*, 6> label_names = {"light1+", "light1-", "light2+",
                                                            "light2-", "membrane+", "membrane-"};

struct ScanRow {
    double mu = 0.0;
    std::array<cplx, 6> omega{}; // indexed by Label
};

struct ScanTable {
    std::vector<ScanRow> rows;
};

// Normal-branch spectra over a strictly increasing grid of mu >= 0 with
// branch labels fixed at mu = 0 and carried along by minimal-distance
// assignment between consecutive points.
ScanTable scan_spectrum(const DimensionlessParams& p, const std::vector<double>& mu_grid, Exec exec = Exec::parallel);

// mu at which the membrane branch's real part first reaches zero (linear
// interpolation between grid points); NaN when it never does.
double membrane_real_zero(const ScanTable& t);

inline constexpr const char* spectrum_csv_header = "mu,branch,re_omega,im_omega";
std::string spectrum_csv(const ScanTable& t);

} // namespace optodicke::stability
