#include <doctest.h>

#include <cmath>

#include "optodicke/error.hpp"
#include "optodicke/experiment.hpp"
#include "optodicke/meanfield.hpp"
#include "oracles.hpp"

using namespace optodicke;
using namespace optodicke::experiment;

namespace {

// Section-6 occupations in SI, evaluated from scratch at P = r P_c.
struct LabOracle {
    double pc, lambda, mu, n_sum, n_diff, n_c, R;
};

LabOracle lab_oracle(const PhysicalParams& pp, double g, double kappa, double r) {
    LabOracle o;
    o.pc = oracle::critical_power_chain(pp, g, kappa);
    const double P = r * o.pc;
    const double eta = std::sqrt(kappa * P / (oracle::hbar * pp.omega_centre)) / pp.omega;
    const double gd = g / pp.omega, kd = kappa / pp.omega;
    o.lambda = (2.0 / pp.L) * (pp.omega_centre / pp.omega) * std::sqrt(oracle::hbar / (pp.m * pp.omega));
    o.mu = o.lambda / oracle::critical_coupling(gd, kd, eta);
    o.n_sum = eta * pp.V / (std::sqrt(gd) * o.lambda);
    o.n_diff = pp.V / (o.lambda * o.lambda) * std::sqrt((gd * gd + kd * kd) * (o.mu - 1.0));
    o.n_c = o.lambda * o.lambda * o.n_diff * o.n_diff / (2.0 * pp.V);
    o.R = o.n_diff / std::sqrt(o.n_sum);
    return o;
}

// Tunnel splitting by quadrature of the action under the exact barrier.
double wkb_quadrature(double m, double eps0) {
    DimensionlessParams p;
    p.g = 1.0;
    p.kappa = 1.0;
    p.eta_a = 1.0;
    p.eta_b = -1.0;
    p.V = eps0;
    p = at_mu(p, m);
    const double xs = std::sqrt(2.0 * eps0) * std::sqrt(m - 1.0) / m;
    const double omega = 2.0 * std::sqrt((m - 1.0) / m);
    const double E = meanfield::effective_potential(p, xs) + 0.5 * omega;
    double lo = 0.0, hi = xs;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (meanfield::effective_potential(p, mid) > E ? lo : hi) = mid;
    }
    const double a = lo;
    const int n = 20000;
    double S = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = -a + (i + 0.5) * 2.0 * a / n;
        S += std::sqrt(std::max(0.0, 2.0 * (meanfield::effective_potential(p, x) - E))) * 2.0 * a / n;
    }
    return (omega / oracle::pi) * std::exp(-S);
}

} // namespace

TEST_SUITE("experiment") {

TEST_CASE("laboratory point") {
    const auto pp = oracle::lab_point();
    const auto e = lab_report(pp, oracle::lab_g, oracle::lab_kappa, 1.1);
    const auto o = lab_oracle(pp, oracle::lab_g, oracle::lab_kappa, 1.1);
    CHECK(e.P_c == doctest::Approx(o.pc).epsilon(1e-10));
    CHECK(e.lambda == doctest::Approx(o.lambda).epsilon(1e-12));
    CHECK(e.mu == doctest::Approx(o.mu).epsilon(1e-10));
    CHECK(e.mu == doctest::Approx(std::sqrt(1.1)).epsilon(1e-3));
    CHECK(e.n_tot == doctest::Approx(o.n_sum).epsilon(1e-9));
    CHECK(e.n_diff == doctest::Approx(o.n_diff).epsilon(1e-9));
    CHECK(e.n_c == doctest::Approx(o.n_c).epsilon(1e-9));
    CHECK(e.R_snr == doctest::Approx(o.R).epsilon(1e-6));

    CHECK(std::abs(e.P_c / 1.2e-3 - 1.0) < 0.05);
    CHECK(std::abs(e.R_snr / 625.0 - 1.0) < 0.05);
    CHECK(std::abs(e.n_tot / 2.2e6 - 1.0) < 0.05);
    CHECK(std::abs(e.n_diff / 9.3e5 - 1.0) < 0.05);
    CHECK(std::abs(e.n_c / 1.0e7 - 1.0) < 0.05);
    CHECK(std::abs(e.mech_loss_W / 4.2e-22 - 1.0) < 0.1);
    CHECK(std::abs(e.opt_loss_W / 2.6e-7 - 1.0) < 0.1);
    CHECK(e.mech_loss_W == doctest::Approx((pp.omega / pp.Q) * o.n_c * oracle::hbar * pp.omega).epsilon(1e-9));
    CHECK(e.opt_loss_W == doctest::Approx(oracle::lab_kappa * o.n_sum * oracle::hbar * pp.omega_centre).epsilon(1e-9));
}

TEST_CASE("signal-to-noise closed form equals the occupation ratio") {
    const auto pp = oracle::lab_point();
    for (double r = 1.05; r <= 2.0 + 1e-12; r += 0.05) {
        auto at = pp;
        at.P = r * oracle::critical_power_chain(pp, oracle::lab_g, oracle::lab_kappa);
        const double R = signal_to_noise(at, oracle::lab_g, oracle::lab_kappa);
        CHECK(R == doctest::Approx(lab_oracle(pp, oracle::lab_g, oracle::lab_kappa, r).R).epsilon(1e-6));
        CHECK(R >= 0.0);
    }
    auto at = pp;
    at.P = critical_power(pp, oracle::lab_g, oracle::lab_kappa);
    CHECK_THROWS_AS(signal_to_noise(at, oracle::lab_g, oracle::lab_kappa), ValidationError);
    at.P *= 1.0 + 1e-10;
    CHECK(signal_to_noise(at, oracle::lab_g, oracle::lab_kappa) < 0.1);
}

TEST_CASE("Kac scaling of the laboratory estimate") {
    auto pp = oracle::lab_point();
    const auto a = lab_report(pp, oracle::lab_g, oracle::lab_kappa, 1.1);
    pp.V = 2.0;
    const auto b = lab_report(pp, oracle::lab_g, oracle::lab_kappa, 1.1);
    CHECK(b.n_tot == doctest::Approx(2.0 * a.n_tot).epsilon(1e-12));
    CHECK(b.n_diff == doctest::Approx(2.0 * a.n_diff).epsilon(1e-12));
    CHECK(b.n_c == doctest::Approx(2.0 * a.n_c).epsilon(1e-12));
    CHECK(b.R_snr == doctest::Approx(std::sqrt(2.0) * a.R_snr).epsilon(1e-12));
}

TEST_CASE("below threshold only the normal phase is reported") {
    const auto e = lab_report(oracle::lab_point(), oracle::lab_g, oracle::lab_kappa, 0.5);
    CHECK(e.mu < 1.0);
    CHECK(e.n_diff == 0.0);
    CHECK(e.n_c == 0.0);
    CHECK(e.R_snr == 0.0);
    CHECK(e.n_tot > 0.0);
}

TEST_CASE("WKB splitting closed form") {
    const auto w = wkb_splitting(2.0, 100.0);
    const double expo = -oracle::pi * (25.0 - std::sqrt(0.5)) / std::sqrt(3.0);
    CHECK(expo == doctest::Approx(-44.06).epsilon(1e-3));
    CHECK(w.dE_split == doctest::Approx((2.0 / oracle::pi) * std::sqrt(0.5) * std::exp(expo)).epsilon(1e-12));
    CHECK(w.log10_dE_split == doctest::Approx(std::log10((2.0 / oracle::pi) * std::sqrt(0.5)) + expo / std::log(10.0)).epsilon(1e-12));
    CHECK(w.Omega == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(w.dE_split > 0.0);
    CHECK(wkb_splitting(2.0, 200.0).dE_split < w.dE_split * 1e-15);
    CHECK_THROWS_AS(wkb_splitting(0.9, 100.0), ValidationError);
    CHECK_THROWS_AS(wkb_splitting(1.01, 1.0), ValidationError);
}

TEST_CASE("WKB closed form is within a factor 3 of the quadrature" * doctest::should_fail()) {
    for (double m : {1.5, 2.0, 3.0})
        for (double e : {50.0, 100.0, 200.0}) {
            const double ratio = wkb_splitting(m, e).dE_split / wkb_quadrature(m, e);
            CHECK(ratio <= 3.0);
            CHECK(ratio >= 1.0 / 3.0);
        }
}

TEST_CASE("WKB closed form and quadrature fall off together with the barrier") {
    // Both are exponentially small in eps0; the log-ratio grows at most linearly.
    for (double m : {1.5, 2.0, 3.0}) {
        const double l50 = std::log(wkb_splitting(m, 50.0).dE_split), l100 = std::log(wkb_splitting(m, 100.0).dE_split);
        const double q50 = std::log(wkb_quadrature(m, 50.0)), q100 = std::log(wkb_quadrature(m, 100.0));
        CHECK(l100 < l50);
        CHECK(q100 < q50);
        CHECK((l100 - l50) / (q100 - q50) == doctest::Approx(1.0).epsilon(0.35));
    }
}

TEST_CASE("critical pump imbalance") {
    DimensionlessParams p;
    p.g = 2.0;
    p.kappa = 1.0;
    p = at_mu(p, 1.5);
    CHECK(critical_imbalance(p).dE_imb == 0.0);
    auto q = p;
    q.eta_b = -0.99;
    const auto a = critical_imbalance(q);
    auto ref = q;
    ref.eta_a = 0.5 * (std::abs(q.eta_a) + std::abs(q.eta_b));
    ref.eta_b = -ref.eta_a;
    const double mq = mu(ref);
    CHECK(a.dE_imb == doctest::Approx(2.0 * q.V * (q.eta_a * q.eta_a - 0.99 * 0.99) * 3.0 * std::sqrt(mq - 1.0) /
                                      std::pow(5.0, 1.5)).epsilon(1e-12));
    const double m = mu(p);
    auto flipped = q;
    flipped.g = 0.5;
    flipped.kappa = 1.0;
    CHECK((critical_imbalance(flipped).dE_imb < 0.0) != (a.dE_imb < 0.0));

    // Same eps0 and mu at twice V: the threshold halves.
    auto v2 = p;
    v2.V *= 2.0;
    v2.eta_a /= std::sqrt(2.0);
    v2.eta_b /= std::sqrt(2.0);
    v2 = at_mu(v2, m);
    CHECK(critical_imbalance(v2).eta_sq_diff_critical ==
          doctest::Approx(0.5 * critical_imbalance(p).eta_sq_diff_critical).epsilon(1e-12));

    auto equal = p;
    equal.kappa = equal.g;
    CHECK_THROWS_AS(critical_imbalance(equal), ValidationError);
    CHECK_THROWS_AS(critical_imbalance(at_mu(p, 0.8)), ValidationError);
}

TEST_CASE("critical power imbalance") {
    const auto pp = oracle::lab_point();
    const auto far = power_imbalance(pp, oracle::lab_g, oracle::lab_kappa, 1.1);
    CHECK(std::abs(far.log10_dP / -2.1e6 - 1.0) < 0.05);
    CHECK_FALSE(far.representable);
    CHECK(far.dP_W == 0.0);
    const auto near = power_imbalance(pp, oracle::lab_g, oracle::lab_kappa, 1.00001);
    CHECK(near.representable);
    CHECK(near.dP_W > 0.1e-12);
    CHECK(near.dP_W < 0.4e-12);
    CHECK(near.log10_dP == doctest::Approx(std::log10(near.dP_W)).epsilon(1e-12));
    double prev = power_imbalance(pp, oracle::lab_g, oracle::lab_kappa, 1.0001).log10_dP;
    for (double r = 1.01; r <= 1.2 + 1e-12; r += 0.01) {
        const double cur = power_imbalance(pp, oracle::lab_g, oracle::lab_kappa, r).log10_dP;
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS_AS(power_imbalance(pp, oracle::lab_kappa, oracle::lab_kappa, 1.1), ValidationError);
    CHECK_THROWS_AS(power_imbalance(pp, oracle::lab_g, oracle::lab_kappa, 0.9), ValidationError);
}

TEST_CASE("cat sensitivity bundles") {
    DimensionlessParams p = at_mu(DimensionlessParams{}, 2.0);
    p.g = 2.0;
    p = at_mu(p, 2.0);
    const auto c = cat_sensitivity(p);
    CHECK_FALSE(c.has_power);
    CHECK(c.wkb.dE_split > 0.0);
    const auto cp = cat_sensitivity(oracle::lab_point(), oracle::lab_g, oracle::lab_kappa, 1.1);
    CHECK(cp.has_power);
    CHECK(cp.power.log10_dP < -1e6);
}

}
