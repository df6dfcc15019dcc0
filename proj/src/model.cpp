#include "optodicke/model.hpp"

#include <cmath>

#include "optodicke/constants.hpp"
#include "optodicke/error.hpp"

namespace optodicke {

double DimensionlessParams::eta() const { return std::abs(eta_a); }

void DimensionlessParams::validate() const {
    require(std::isfinite(g) && g > 0.0, "g must be > 0");
    require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be >= 0");
    require(std::isfinite(V) && V > 0.0, "V must be > 0");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
    require(std::isfinite(eta_a) && std::isfinite(eta_b), "pump amplitudes must be finite");
    require(std::isfinite(lambda), "lambda must be finite");
    require(std::isfinite(delta), "delta must be finite");
}

void PhysicalParams::validate() const {
    for (double v : {L, m, omega, omega_centre, R_membrane, P, Q, V})
        require(std::isfinite(v) && v > 0.0, "physical parameters must be positive and finite");
    require(R_membrane < 1.0, "membrane reflectivity must be < 1");
}

PhysicalParams PhysicalParams::reference_membrane() { return PhysicalParams{}; }

double coupling_from_reflectivity(const PhysicalParams& p) {
    require(p.R_membrane > 0.0 && p.R_membrane < 1.0, "reflectivity must lie in (0, 1)");
    require(p.L > 0.0, "cavity length must be > 0");
    return (constants::c / p.L) * std::sqrt((1.0 - p.R_membrane) / p.R_membrane);
}

double lambda_from_physical(const PhysicalParams& p) {
    require(p.L > 0.0 && p.m > 0.0 && p.omega > 0.0 && p.omega_centre > 0.0,
            "L, m, omega and omega_centre must be > 0");
    return (2.0 / p.L) * (p.omega_centre / p.omega) * std::sqrt(constants::hbar / (p.m * p.omega));
}

double eta_from_power(double P, double kappa, double omega_centre) {
    require(P >= 0.0 && kappa > 0.0 && omega_centre > 0.0,
            "eta_from_power needs P >= 0, kappa > 0, omega_centre > 0");
    return std::sqrt(kappa * P / (constants::hbar * omega_centre));
}

double critical_coupling(double g, double kappa, double eta) {
    require(g > 0.0, "critical coupling needs g > 0");
    require(eta != 0.0, "no transition without pumping (eta = 0)");
    return (g * g + kappa * kappa) / (2.0 * std::abs(eta) * std::sqrt(g));
}

double detuned_critical_coupling(double g, double kappa, double eta, double delta) {
    require(eta != 0.0, "no transition without pumping (eta = 0)");
    if (g + delta <= 0.0)
        throw ValidationError("criticality lost: g + delta <= 0");
    const double k2 = kappa * kappa;
    const double num = ((g - delta) * (g - delta) + k2) * ((g + delta) * (g + delta) + k2);
    return std::sqrt(num / (g + delta)) / (2.0 * std::abs(eta));
}

double critical_power(const PhysicalParams& p, double g, double kappa) {
    require(g > 0.0 && kappa > 0.0, "critical power needs dimensional g, kappa > 0");
    const double s = g * g + kappa * kappa;
    return (1.0 / 16.0) * (p.omega * p.omega * p.L * p.L * p.m / p.omega_centre) * s * s / (g * kappa);
}

double epsilon0(const DimensionlessParams& p) {
    const double eta = p.eta();
    return 2.0 * p.g * eta * eta * p.V / (p.g * p.g + p.kappa * p.kappa);
}

double critical_coupling(const DimensionlessParams& p) { return critical_coupling(p.g, p.kappa, p.eta()); }

double mu(const DimensionlessParams& p) { return p.lambda / critical_coupling(p); }

CriticalSet critical_set(const DimensionlessParams& p) {
    CriticalSet c;
    c.lambda_c = critical_coupling(p);
    c.lambda_c_detuned = detuned_critical_coupling(p.g, p.kappa, p.eta(), p.delta);
    c.mu = p.lambda / c.lambda_c;
    c.epsilon0 = epsilon0(p);
    return c;
}

DimensionlessParams at_mu(DimensionlessParams p, double mu) {
    p.lambda = mu * critical_coupling(p);
    return p;
}

} // namespace optodicke
