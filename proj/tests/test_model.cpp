#include <doctest.h>

#include <cmath>

#include "optodicke/error.hpp"
#include "optodicke/model.hpp"
#include "oracles.hpp"

using namespace optodicke;

TEST_SUITE("model") {

TEST_CASE("coupling from reflectivity") {
    PhysicalParams p;
    p.L = 0.067;
    p.R_membrane = 0.5;
    CHECK(coupling_from_reflectivity(p) == doctest::Approx(oracle::c_light / 0.067).epsilon(1e-12));
    CHECK(coupling_from_reflectivity(p) == doctest::Approx(4.475e9).epsilon(1e-3));

    auto half = p;
    half.L = p.L / 2.0;
    CHECK(coupling_from_reflectivity(half) == doctest::Approx(2.0 * coupling_from_reflectivity(p)).epsilon(1e-14));

    auto near_mirror = p;
    near_mirror.R_membrane = 1.0 - 1e-12;
    CHECK(coupling_from_reflectivity(near_mirror) < 1e-5 * coupling_from_reflectivity(p));

    auto bad = p;
    bad.R_membrane = 1.0;
    CHECK_THROWS_AS(coupling_from_reflectivity(bad), ValidationError);
    bad.R_membrane = 0.0;
    CHECK_THROWS_AS(coupling_from_reflectivity(bad), ValidationError);
}

TEST_CASE("lambda from physical") {
    const auto pp = oracle::lab_point();
    const double expected = (2.0 / pp.L) * (pp.omega_centre / pp.omega) * std::sqrt(oracle::hbar / (pp.m * pp.omega));
    CHECK(lambda_from_physical(pp) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(lambda_from_physical(pp) == doctest::Approx(4.87e-3).epsilon(2e-3));

    auto heavy = pp;
    heavy.m *= 4.0;
    CHECK(lambda_from_physical(heavy) == doctest::Approx(lambda_from_physical(pp) / 2.0).epsilon(1e-14));
    auto blue = pp;
    blue.omega_centre *= 2.0;
    CHECK(lambda_from_physical(blue) == doctest::Approx(2.0 * lambda_from_physical(pp)).epsilon(1e-14));
}

TEST_CASE("eta from power") {
    CHECK(eta_from_power(0.0, 1.0, 1.0) == 0.0);
    CHECK(eta_from_power(4.0, 2.0, 3.0) == doctest::Approx(2.0 * eta_from_power(1.0, 2.0, 3.0)).epsilon(1e-14));

    const auto pp = oracle::lab_point();
    const double pc = oracle::critical_power_chain(pp, oracle::lab_g, oracle::lab_kappa);
    const double eta = eta_from_power(pc, oracle::lab_kappa, pp.omega_centre) / pp.omega;
    CHECK(eta == doctest::Approx(1.03e5).epsilon(0.01));
}

TEST_CASE("critical coupling closed form") {
    CHECK(critical_coupling(1.0, 1.0, 1.0) == 1.0);
    CHECK(critical_coupling(3.0, 2.0, 4.0) == doctest::Approx(13.0 / (8.0 * std::sqrt(3.0))).epsilon(1e-14));
    CHECK(critical_coupling(1.0, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(critical_coupling(1.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("detuned critical coupling") {
    CHECK(detuned_critical_coupling(1.0, 1.0, 1.0, 0.5) ==
          doctest::Approx(0.5 * std::sqrt(1.25 * 3.25 / 1.5)).epsilon(1e-14));
    CHECK(detuned_critical_coupling(1.0, 1.0, 1.0, -1.0 + 1e-10) > 1e4);
    CHECK_THROWS_AS(detuned_critical_coupling(1.0, 1.0, 1.0, -1.0), ValidationError);

    oracle::Draw d(11);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double g = d.uniform(0.01, 10.0), k = d.uniform(0.0, 10.0), eta = d.uniform(0.01, 10.0);
        const double a = critical_coupling(g, k, eta), b = detuned_critical_coupling(g, k, eta, 0.0);
        worst = std::max(worst, std::abs(a - b) / a);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("critical power") {
    const auto pp = oracle::lab_point();
    const double pc = critical_power(pp, oracle::lab_g, oracle::lab_kappa);
    CHECK(pc == doctest::Approx(oracle::critical_power_chain(pp, oracle::lab_g, oracle::lab_kappa)).epsilon(1e-10));
    CHECK(pc == doctest::Approx(1.237e-3).epsilon(0.01));
    CHECK(std::abs(pc - 1.2e-3) / 1.2e-3 < 0.05);

    auto longer = pp;
    longer.L *= 2.0;
    CHECK(critical_power(longer, oracle::lab_g, oracle::lab_kappa) == doctest::Approx(4.0 * pc).epsilon(1e-14));

    // Self-consistency: eta(P_c) gives lambda_c equal to the physical lambda.
    const double eta = eta_from_power(pc, oracle::lab_kappa, pp.omega_centre) / pp.omega;
    const double lc = critical_coupling(oracle::lab_g / pp.omega, oracle::lab_kappa / pp.omega, eta);
    CHECK(std::abs(lc / lambda_from_physical(pp) - 1.0) < 5e-3);
}

TEST_CASE("critical set and parameter checks") {
    DimensionlessParams p;
    p.g = 2.0;
    p.kappa = 1.0;
    p.eta_a = 1.5;
    p.eta_b = -1.5;
    p.V = 10.0;
    p.lambda = 0.7;
    const auto c = critical_set(p);
    CHECK(c.lambda_c == doctest::Approx(oracle::critical_coupling(2.0, 1.0, 1.5)).epsilon(1e-15));
    CHECK(c.lambda_c_detuned == doctest::Approx(c.lambda_c).epsilon(1e-15));
    CHECK(c.mu == doctest::Approx(0.7 / c.lambda_c).epsilon(1e-15));
    CHECK(c.epsilon0 == doctest::Approx(2.0 * 2.0 * 2.25 * 10.0 / 5.0).epsilon(1e-15));
    CHECK(mu(at_mu(p, 1.7)) == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(p.balanced_antisymmetric());
    CHECK(p.parity_symmetric());

    auto bad = p;
    bad.g = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = p;
    bad.kappa = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = p;
    bad.V = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = p;
    bad.gamma = -0.1;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

}
