#include "optodicke/experiment.hpp"

#include <cmath>
#include <limits>

#include "optodicke/constants.hpp"
#include "optodicke/error.hpp"
#include "optodicke/meanfield.hpp"

namespace optodicke::experiment {

namespace {

using constants::hbar;
using constants::pi;

void check_rates(double g, double kappa) {
    require(std::isfinite(g) && g > 0.0, "g must be > 0 (rad/s)");
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be > 0 (rad/s)");
}

DimensionlessParams reference_pumping(DimensionlessParams p) {
    const double eta = 0.5 * (std::abs(p.eta_a) + std::abs(p.eta_b));
    p.eta_a = eta;
    p.eta_b = -eta;
    return p;
}

} // namespace

DimensionlessParams to_dimensionless(const PhysicalParams& pp, double g, double kappa) {
    pp.validate();
    check_rates(g, kappa);
    const double eta = eta_from_power(pp.P, kappa, pp.omega_centre) / pp.omega;
    DimensionlessParams p;
    p.g = g / pp.omega;
    p.kappa = kappa / pp.omega;
    p.eta_a = eta;
    p.eta_b = -eta;
    p.lambda = lambda_from_physical(pp);
    p.V = pp.V;
    return p;
}

double signal_to_noise(const PhysicalParams& pp, double g, double kappa) {
    pp.validate();
    check_rates(g, kappa);
    const double pc = critical_power(pp, g, kappa);
    require(pp.P > pc, "signal-to-noise needs P > P_c");
    const double mu_p = std::sqrt(pp.P / pc);
    return (pp.omega * pp.L / pp.omega_centre) * std::sqrt(g * pp.m * pp.V / (2.0 * hbar)) *
           std::sqrt(1.0 - 1.0 / mu_p);
}

LabEstimate lab_report(const PhysicalParams& pp, double g, double kappa, double P_over_Pc) {
    pp.validate();
    check_rates(g, kappa);
    require(std::isfinite(P_over_Pc) && P_over_Pc > 0.0, "P/P_c must be > 0");
    LabEstimate e;
    e.P_c = critical_power(pp, g, kappa);
    e.P = P_over_Pc * e.P_c;
    e.mu_P = std::sqrt(P_over_Pc);
    auto at_p = pp;
    at_p.P = e.P;
    const auto p = to_dimensionless(at_p, g, kappa);
    e.lambda = p.lambda;
    e.lambda_c = critical_coupling(p);
    e.mu = mu(p);
    e.eta = p.eta();
    if (e.mu > 1.0) {
        const auto o = meanfield::photon_observables(p, meanfield::Branch::broken_plus);
        e.n_tot = o.n_sum;
        e.n_diff = std::abs(o.n_diff);
        e.n_c = p.lambda * p.lambda * e.n_diff * e.n_diff / (2.0 * p.V);
        e.R_snr = signal_to_noise(at_p, g, kappa);
    } else {
        e.n_tot = meanfield::photon_observables(p, meanfield::Branch::normal).n_sum;
    }
    e.mech_loss_W = (pp.omega / pp.Q) * e.n_c * hbar * pp.omega;
    e.opt_loss_W = kappa * e.n_tot * hbar * pp.omega_centre;
    return e;
}

WkbSplitting wkb_splitting(double m, double eps0) {
    require(std::isfinite(m) && m > 1.0, "tunnel splitting needs mu > 1");
    require(std::isfinite(eps0) && eps0 > 0.0, "eps0 must be > 0");
    const double r = (m - 1.0) / m;
    const double barrier = eps0 * (m - 1.0) * (m - 1.0) / (m * m);
    require(barrier > std::sqrt(r), "barrier lies below the well zero-point energy");
    WkbSplitting w;
    w.Omega = 2.0 * std::sqrt(r);
    w.E_well = std::sqrt(r) + eps0 * meanfield::ground_energy_ratio(m);
    const double a2 = (2.0 * eps0 * (m - 1.0) / (m * m) - 2.0 * std::sqrt(1.0 / (m * (m - 1.0)))) / (1.0 + m);
    require(a2 > 0.0, "turning point is not real for these parameters");
    w.a_turn = std::sqrt(a2);
    const double expo = -pi * (barrier - std::sqrt(r)) / std::sqrt(m * m - 1.0);
    const double log_pref = std::log((2.0 / pi) * std::sqrt(r));
    w.log10_dE_split = (log_pref + expo) / std::log(10.0);
    w.dE_split = std::exp(log_pref + expo);
    return w;
}

Imbalance critical_imbalance(const DimensionlessParams& p) {
    p.validate();
    const auto q = reference_pumping(p);
    require(q.eta_a != 0.0, "critical imbalance needs pumping");
    const double m = std::abs(mu(q));
    require(m > 1.0, "critical imbalance needs mu > 1");
    const double s = p.g * p.g + p.kappa * p.kappa;
    const double gk = p.g * p.g - p.kappa * p.kappa;
    if (gk == 0.0) throw ValidationError("imbalance energy vanishes to first order at g == kappa");
    const double s32 = std::pow(s, 1.5);
    Imbalance r;
    r.dE_imb = 2.0 * p.V * (p.eta_a * p.eta_a - p.eta_b * p.eta_b) * gk * std::sqrt(m - 1.0) / s32;
    const double r_ = (m - 1.0) / m;
    const double e0 = epsilon0(q);
    const double expo = -pi * (e0 * (m - 1.0) * (m - 1.0) / (m * m) - std::sqrt(r_)) / std::sqrt(m * m - 1.0);
    const double pref = s32 / (p.V * pi * std::sqrt(m) * gk);
    r.log10_abs_eta_sq_diff_critical = (std::log(std::abs(pref)) + expo) / std::log(10.0);
    r.eta_sq_diff_critical = pref * std::exp(expo);
    return r;
}

PowerImbalance power_imbalance(const PhysicalParams& pp, double g, double kappa, double P_over_Pc) {
    pp.validate();
    check_rates(g, kappa);
    require(std::isfinite(P_over_Pc) && P_over_Pc > 1.0, "power imbalance needs P/P_c > 1");
    const double gk = g * g - kappa * kappa;
    if (gk == 0.0) throw ValidationError("power imbalance is singular at g == kappa");
    const double mu_p = std::sqrt(P_over_Pc);
    const double s = g * g + kappa * kappa;
    const double w = pp.omega, wc = pp.omega_centre;
    PowerImbalance r;
    r.C1 = hbar * w * wc * std::pow(s, 1.5) / (pp.V * pi * kappa * std::sqrt(mu_p) * gk);
    r.C2 = pp.V * pp.L * pp.L * w * w * pp.m * s / (8.0 * wc * wc);
    const double expo = -pi * (r.C2 / (hbar * w) * (mu_p - 1.0) * (mu_p - 1.0) - std::sqrt((mu_p - 1.0) / mu_p)) /
                        std::sqrt(mu_p * mu_p - 1.0);
    r.log10_dP = (std::log(std::abs(r.C1)) + expo) / std::log(10.0);
    r.dP_W = r.C1 * std::exp(expo);
    r.representable = r.dP_W != 0.0 && std::isfinite(r.dP_W) && std::abs(r.dP_W) >= std::numeric_limits<double>::min();
    if (!r.representable) r.dP_W = 0.0;
    return r;
}

CatSensitivity cat_sensitivity(const DimensionlessParams& p) {
    const auto q = reference_pumping(p);
    CatSensitivity c;
    c.wkb = wkb_splitting(std::abs(mu(q)), epsilon0(q));
    // At g == kappa the linear imbalance vanishes; only the splitting is defined.
    c.has_imbalance = p.g != p.kappa;
    if (c.has_imbalance) c.imbalance = critical_imbalance(p);
    return c;
}

CatSensitivity cat_sensitivity(const PhysicalParams& pp, double g, double kappa, double P_over_Pc) {
    require(std::isfinite(P_over_Pc) && P_over_Pc > 1.0, "cat sensitivity needs P/P_c > 1");
    auto at_p = pp;
    at_p.P = P_over_Pc * critical_power(pp, g, kappa);
    auto c = cat_sensitivity(to_dimensionless(at_p, g, kappa));
    c.has_power = c.has_imbalance;
    if (c.has_power) c.power = power_imbalance(pp, g, kappa, P_over_Pc);
    return c;
}

} // namespace optodicke::experiment
