#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "optodicke/dynamics.hpp"
#include "optodicke/error.hpp"
#include "oracles.hpp"

using namespace optodicke;
using namespace optodicke::dynamics;

namespace {

StateVector mirror(const StateVector& s) { return {-s.x, -s.p, -s.re_b, -s.im_b, -s.re_a, -s.im_a}; }

double dist(const StateVector& a, const StateVector& b) {
    double acc = 0.0;
    const auto x = a.as_array(), y = b.as_array();
    for (std::size_t i = 0; i < 6; ++i) acc = std::max(acc, std::abs(x[i] - y[i]));
    return acc;
}

// Exact solution of the decoupled case (lambda = eta = 0, gamma = 0).
StateVector decoupled_exact(const DimensionlessParams& p, const StateVector& s0, double t) {
    using oracle::cplx;
    const cplx I(0.0, 1.0);
    const cplx a0(s0.re_a, s0.im_a), b0(s0.re_b, s0.im_b);
    // a' = -i g b - kappa a, b' = -i g a - kappa b: symmetric/antisymmetric modes.
    const cplx sp = (a0 + b0) * std::exp((-I * p.g - p.kappa) * t);
    const cplx sm = (a0 - b0) * std::exp((I * p.g - p.kappa) * t);
    const cplx a = 0.5 * (sp + sm), b = 0.5 * (sp - sm);
    return {s0.x * std::cos(t) + s0.p * std::sin(t), -s0.x * std::sin(t) + s0.p * std::cos(t), a.real(), a.imag(),
            b.real(), b.imag()};
}

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("steady states are fixed points of the flow") {
    oracle::Draw draw(21);
    for (int i = 0; i < 100; ++i) {
        const auto p = draw.balanced();
        for (const auto& ss : meanfield::steady_positions(p)) {
            const auto d = eom_rhs(p, state_from_steady(ss));
            const double scale = std::max(1.0, norm(state_from_steady(ss)));
            CHECK(norm(d) <= 1e-12 * scale * std::max(1.0, p.g + p.kappa + p.lambda));
        }
    }
}

TEST_CASE("decoupled system: decaying fields and unit-frequency membrane") {
    DimensionlessParams p;
    p.lambda = 0.0;
    p.eta_a = p.eta_b = 0.0;
    p.g = 1.3;
    p.kappa = 0.4;
    const StateVector s0{0.7, -0.2, 1.0, 0.5, -0.3, 0.2};
    IntegratorConfig cfg;
    cfg.stride = 1;
    const auto tr = integrate(p, s0, 5.0, cfg);
    const auto exact = decoupled_exact(p, s0, 5.0);
    CHECK(tr.back().t == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(dist(tr.back().s, exact) < 1e-10);
    const double n0 = s0.re_a * s0.re_a + s0.im_a * s0.im_a + s0.re_b * s0.re_b + s0.im_b * s0.im_b;
    const auto& s = tr.back().s;
    const double n = s.re_a * s.re_a + s.im_a * s.im_a + s.re_b * s.re_b + s.im_b * s.im_b;
    CHECK(n == doctest::Approx(n0 * std::exp(-2.0 * p.kappa * 5.0)).epsilon(1e-9));
}

TEST_CASE("RK4 global error is fourth order") {
    DimensionlessParams p;
    p.lambda = 0.0;
    p.eta_a = p.eta_b = 0.0;
    p.g = 0.8;
    p.kappa = 0.3;
    const StateVector s0{1.0, 0.0, 0.5, -0.5, 0.1, 0.4};
    auto run = [&](double dt) {
        StateVector s = s0;
        const int n = static_cast<int>(std::lround(4.0 / dt));
        for (int k = 0; k < n; ++k) s = rk4_step(p, s, dt);
        return dist(s, decoupled_exact(p, s0, 4.0));
    };
    const double e1 = run(0.1), e2 = run(0.05), e3 = run(0.025);
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
    CHECK(std::log2(e2 / e3) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("Richardson: step halving changes the trajectory by O(dt^4)") {
    DimensionlessParams p;
    p.lambda = 1.5;
    auto run = [&](double dt) {
        auto f = meanfield::field_steady_states(p, 0.0);
        StateVector s{0.3, 0.1, f.a.real(), f.a.imag(), f.b.real(), f.b.imag()};
        const int n = static_cast<int>(std::lround(3.0 / dt));
        for (int k = 0; k < n; ++k) s = rk4_step(p, s, dt);
        return s;
    };
    const auto a = run(0.02), b = run(0.01), c = run(0.005);
    const double ratio = dist(a, b) / dist(b, c);
    CHECK(ratio == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("parity equivariance of the flow") {
    oracle::Draw draw(23);
    for (int i = 0; i < 100; ++i) {
        const auto p = draw.balanced();
        StateVector s{draw.uniform(-5, 5), draw.uniform(-5, 5), draw.uniform(-5, 5),
                      draw.uniform(-5, 5), draw.uniform(-5, 5), draw.uniform(-5, 5)};
        const double dt = 1e-3;
        const auto a = rk4_step(p, mirror(s), dt);
        const auto b = mirror(rk4_step(p, s, dt));
        CHECK(dist(a, b) <= 1e-10);
    }
}

TEST_CASE("relaxation below threshold returns the origin") {
    DimensionlessParams p;
    p.lambda = 0.5;
    const auto f = meanfield::field_steady_states(p, 0.0);
    const auto r = relax_to_steady(p, {0.0, 0.0, f.a.real(), f.a.imag(), f.b.real(), f.b.imag()}, {});
    CHECK(std::abs(r.steady.x_ss) < 1e-8);
    CHECK(r.mean_residual <= 1e-9);
}

TEST_CASE("relaxation just above threshold reaches the broken steady state") {
    for (double m : {1.05, 1.2}) {
        DimensionlessParams p = at_mu(DimensionlessParams{}, m);
        const auto ss = meanfield::steady_positions(p)[1];
        const auto r = relax_to_steady(p, state_from_steady(ss), {});
        CHECK(r.steady.x_ss == doctest::Approx(ss.x_ss).epsilon(1e-6));
        CHECK(r.steady.branch == meanfield::Branch::broken_plus);
    }
}

TEST_CASE("relaxation at mu = 2 without membrane damping: the broken state is not an attractor") {
    // The linearized flow at the displaced minimum has a growing pair, so
    // the trajectory settles on a limit cycle instead.
    DimensionlessParams p = at_mu(DimensionlessParams{}, 2.0);
    const auto ss = meanfield::steady_positions(p)[1];
    IntegratorConfig cfg;
    cfg.t_max = 500.0;
    CHECK_THROWS_AS(relax_to_steady(p, state_from_steady(ss), cfg), NumericalError);
}

TEST_CASE("relaxation at mu = 2 reproduces the closed-form displacement" * doctest::should_fail()) {
    DimensionlessParams p = at_mu(DimensionlessParams{}, 2.0);
    const auto ss = meanfield::steady_positions(p)[1];
    IntegratorConfig cfg;
    cfg.t_max = 500.0;
    double x = 0.0;
    try {
        x = relax_to_steady(p, state_from_steady(ss), cfg).steady.x_ss;
    } catch (const NumericalError&) {
    }
    CHECK(x == doctest::Approx(7.0710678118654755).epsilon(1e-6));
}

TEST_CASE("bifurcation location") {
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    DimensionlessParams p;
    const double l0 = locate_bifurcation(p, {0.8, 1.2}, cfg);
    CHECK(l0 == doctest::Approx(oracle::critical_coupling(1.0, 1.0, 1.0)).epsilon(1e-3));
    p.gamma = 0.5;
    CHECK(locate_bifurcation(p, {1.0, 1.3}, cfg) / l0 == doctest::Approx(std::sqrt(1.25)).epsilon(0.01));
    p.gamma = 0.3;
    CHECK(locate_bifurcation(p, {0.9, 1.3}, cfg) / l0 == doctest::Approx(std::sqrt(1.09)).epsilon(0.01));

    DimensionlessParams sym;
    sym.eta_b = sym.eta_a;
    CHECK_THROWS_AS(locate_bifurcation(sym, {0.1, 20.0}, cfg), NumericalError);
    CHECK_THROWS_AS(locate_bifurcation(DimensionlessParams{}, {1.2, 1.5}, cfg), NumericalError);
    CHECK_THROWS_AS(locate_bifurcation(DimensionlessParams{}, {1.5, 1.2}, cfg), ValidationError);
}

TEST_CASE("integrator configuration and step rule") {
    IntegratorConfig cfg;
    DimensionlessParams p;
    p.g = 100.0;
    CHECK(effective_dt(p, cfg) == doctest::Approx(1e-4).epsilon(1e-15));
    p.g = 1.0;
    CHECK(effective_dt(p, cfg) == 1e-3);
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.residual_tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    DimensionlessParams still;
    still.kappa = 0.0;
    CHECK_THROWS_AS(relax_to_steady(still, {}, {}), ValidationError);
}

TEST_CASE("divergence is detected") {
    DimensionlessParams p;
    StateVector s{1e13, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(integrate(p, s, 1.0, {}), NumericalError);
}

TEST_CASE("trajectory csv") {
    DimensionlessParams p;
    IntegratorConfig cfg;
    cfg.stride = 250;
    const auto tr = integrate(p, {}, 1.0, cfg);
    CHECK(tr.size() == 5);
    const auto csv = trajectory_csv(tr);
    CHECK(csv.rfind("t,x,p,re_a,im_a,re_b,im_b\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}

}
