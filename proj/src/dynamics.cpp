#include "optodicke/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "optodicke/constants.hpp"
#include "optodicke/error.hpp"

namespace optodicke::dynamics {

namespace {

constexpr double kick = 1e-3;
constexpr double blowup = 1e12;

StateVector axpy(const StateVector& s, double h, const StateVector& k) {
    return {s.x + h * k.x, s.p + h * k.p, s.re_a + h * k.re_a, s.im_a + h * k.im_a, s.re_b + h * k.re_b,
            s.im_b + h * k.im_b};
}

bool diverged(const StateVector& s) {
    for (double v : s.as_array())
        if (!std::isfinite(v) || std::abs(v) > blowup) return true;
    return false;
}

enum class RelaxStatus { converged, timeout, diverged };

struct RelaxRun {
    RelaxStatus status = RelaxStatus::timeout;
    StateVector s;
    double t = 0.0;
    double mean_residual = 0.0;
    double env_prev = 0.0; // max |x| over the second-to-last complete period
    double env_last = 0.0; // max |x| over the last complete period
};

RelaxRun run_relax(const DimensionlessParams& p, StateVector s, const IntegratorConfig& cfg) {
    const double dt = effective_dt(p, cfg);
    const auto per_period = static_cast<std::size_t>(std::ceil(2.0 * constants::pi / dt));
    const auto max_steps = static_cast<std::size_t>(std::ceil(cfg.t_max / dt));
    RelaxRun run;
    double acc = 0.0;
    double env = 0.0;
    std::size_t in_block = 0;
    for (std::size_t step = 0; step < max_steps; ++step) {
        s = rk4_step(p, s, dt);
        run.t = static_cast<double>(step + 1) * dt;
        if (diverged(s)) {
            run.status = RelaxStatus::diverged;
            run.s = s;
            return run;
        }
        acc += norm(eom_rhs(p, s));
        env = std::max(env, std::abs(s.x));
        if (++in_block == per_period) {
            run.mean_residual = acc / static_cast<double>(per_period);
            run.env_prev = run.env_last;
            run.env_last = env;
            env = 0.0;
            if (run.mean_residual <= cfg.residual_tol) {
                run.status = RelaxStatus::converged;
                run.s = s;
                return run;
            }
            acc = 0.0;
            in_block = 0;
        }
    }
    run.s = s;
    return run;
}

StateVector origin_state(const DimensionlessParams& p) {
    const auto f = meanfield::field_steady_states(p, 0.0);
    StateVector s;
    s.re_a = f.a.real();
    s.im_a = f.a.imag();
    s.re_b = f.b.real();
    s.im_b = f.b.imag();
    return s;
}

} // namespace

void IntegratorConfig::validate() const {
    require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    require(std::isfinite(t_max) && t_max > 0.0, "t_max must be > 0");
    require(std::isfinite(residual_tol) && residual_tol > 0.0, "residual_tol must be > 0");
    require(stride >= 1, "stride must be >= 1");
}

double effective_dt(const DimensionlessParams& p, const IntegratorConfig& cfg) {
    return std::min(cfg.dt, 0.01 / std::max({p.g, p.kappa, 1.0}));
}

StateVector eom_rhs(const DimensionlessParams& p, const StateVector& s) {
    const double sc = p.lambda / std::sqrt(p.V);
    const double rv = std::sqrt(p.V);
    const double n_diff = s.re_a * s.re_a + s.im_a * s.im_a - s.re_b * s.re_b - s.im_b * s.im_b;
    StateVector d;
    d.x = s.p - p.gamma * s.x;
    d.p = -s.x - sc * n_diff - p.gamma * s.p;
    // a' = -i (g b + sc x a + eta_a sqrt V) - kappa a
    d.re_a = p.g * s.im_b + sc * s.x * s.im_a - p.kappa * s.re_a;
    d.im_a = -p.g * s.re_b - sc * s.x * s.re_a - p.eta_a * rv - p.kappa * s.im_a;
    // b' = -i (g a - sc x b + eta_b sqrt V) - kappa b
    d.re_b = p.g * s.im_a - sc * s.x * s.im_b - p.kappa * s.re_b;
    d.im_b = -p.g * s.re_a + sc * s.x * s.re_b - p.eta_b * rv - p.kappa * s.im_b;
    return d;
}

StateVector rk4_step(const DimensionlessParams& p, const StateVector& s, double dt) {
    const auto k1 = eom_rhs(p, s);
    const auto k2 = eom_rhs(p, axpy(s, 0.5 * dt, k1));
    const auto k3 = eom_rhs(p, axpy(s, 0.5 * dt, k2));
    const auto k4 = eom_rhs(p, axpy(s, dt, k3));
    StateVector out = s;
    const double w = dt / 6.0;
    out.x += w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    out.p += w * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    out.re_a += w * (k1.re_a + 2.0 * k2.re_a + 2.0 * k3.re_a + k4.re_a);
    out.im_a += w * (k1.im_a + 2.0 * k2.im_a + 2.0 * k3.im_a + k4.im_a);
    out.re_b += w * (k1.re_b + 2.0 * k2.re_b + 2.0 * k3.re_b + k4.re_b);
    out.im_b += w * (k1.im_b + 2.0 * k2.im_b + 2.0 * k3.im_b + k4.im_b);
    return out;
}

double norm(const StateVector& s) {
    double acc = 0.0;
    for (double v : s.as_array()) acc += v * v;
    return std::sqrt(acc);
}

StateVector state_from_steady(const meanfield::SteadyState& ss) {
    return {ss.x_ss, 0.0, ss.a_ss.real(), ss.a_ss.imag(), ss.b_ss.real(), ss.b_ss.imag()};
}

std::vector<TrajectoryPoint> integrate(const DimensionlessParams& p, const StateVector& init, double t_end,
                                       const IntegratorConfig& cfg) {
    p.validate();
    cfg.validate();
    require(std::isfinite(t_end) && t_end >= 0.0, "t_end must be >= 0");
    const double dt = effective_dt(p, cfg);
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    std::vector<TrajectoryPoint> out;
    out.push_back({0.0, init});
    StateVector s = init;
    for (std::size_t k = 1; k <= steps; ++k) {
        s = rk4_step(p, s, dt);
        if (diverged(s))
            throw NumericalError("trajectory diverged", {{"t", static_cast<double>(k) * dt}});
        if (k % cfg.stride == 0 || k == steps) out.push_back({static_cast<double>(k) * dt, s});
    }
    return out;
}

RelaxResult relax_to_steady(const DimensionlessParams& p, const StateVector& init, const IntegratorConfig& cfg) {
    p.validate();
    cfg.validate();
    require(p.kappa > 0.0 || p.gamma > 0.0, "relaxation needs kappa > 0 or gamma > 0");
    StateVector s = init;
    s.x += kick;
    const auto run = run_relax(p, s, cfg);
    if (run.status == RelaxStatus::diverged)
        throw NumericalError("relaxation diverged", {{"t", run.t}, {"x", run.s.x}});
    if (run.status == RelaxStatus::timeout)
        throw NumericalError("relaxation did not converge within t_max",
                             {{"t_max", cfg.t_max}, {"mean_residual", run.mean_residual}, {"x", run.s.x}});
    RelaxResult r;
    r.steady = meanfield::make_steady_state(p, run.s.x);
    r.steady.a_ss = {run.s.re_a, run.s.im_a};
    r.steady.b_ss = {run.s.re_b, run.s.im_b};
    r.steady.n_a = std::norm(r.steady.a_ss);
    r.steady.n_b = std::norm(r.steady.b_ss);
    r.final_state = run.s;
    r.t = run.t;
    r.mean_residual = run.mean_residual;
    return r;
}

double locate_bifurcation(const DimensionlessParams& p, std::pair<double, double> lambda_range,
                          const IntegratorConfig& cfg) {
    p.validate();
    cfg.validate();
    auto [lo, hi] = lambda_range;
    require(std::isfinite(lo) && std::isfinite(hi) && 0.0 <= lo && lo < hi, "lambda range must satisfy 0 <= lo < hi");
    require(p.kappa > 0.0 || p.gamma > 0.0, "bifurcation search needs kappa > 0 or gamma > 0");

    // A converged residual r only bounds |x| by r / (decay rate), which is
    // large near threshold, so converged probes are compared with the kick.
    // Probes that run out of time are judged by whether the envelope is
    // still growing over the final two periods.
    auto broken = [&](double lambda) {
        auto q = p;
        q.lambda = lambda;
        StateVector s = origin_state(q);
        s.x += kick;
        const auto run = run_relax(q, s, cfg);
        if (run.status == RelaxStatus::diverged) return true;
        if (run.status == RelaxStatus::converged) return std::abs(run.s.x) > kick;
        return run.env_last > run.env_prev;
    };

    const bool at_lo = broken(lo);
    const bool at_hi = broken(hi);
    if (at_lo || !at_hi)
        throw NumericalError("lambda range does not bracket a bifurcation",
                             {{"lambda_lo", lo}, {"lambda_hi", hi}, {"broken_lo", at_lo ? 1.0 : 0.0},
                              {"broken_hi", at_hi ? 1.0 : 0.0}});
    while (hi - lo > 1e-4 * 0.5 * (lo + hi)) {
        const double mid = 0.5 * (lo + hi);
        if (broken(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::string trajectory_csv(const std::vector<TrajectoryPoint>& traj) {
    std::string out = trajectory_csv_header;
    out += '\n';
    char buf[512];
    for (const auto& pt : traj) {
        const auto& s = pt.s;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", pt.t, s.x, s.p, s.re_a,
                      s.im_a, s.re_b, s.im_b);
        out += buf;
    }
    return out;
}

} // namespace optodicke::dynamics
