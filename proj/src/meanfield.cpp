#include "optodicke/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "optodicke/error.hpp"
#include "optodicke/fit.hpp"

namespace optodicke::meanfield {

namespace {

double sum_sq(const DimensionlessParams& p) { return p.g * p.g + p.kappa * p.kappa; }

Branch branch_of(double x) {
    if (x > 0.0) return Branch::broken_plus;
    if (x < 0.0) return Branch::broken_minus;
    return Branch::normal;
}

// Displacement scale over which the fields respond to x.
double field_width(const DimensionlessParams& p) {
    if (p.lambda == 0.0) return 1.0;
    return std::sqrt(p.V * sum_sq(p)) / std::abs(p.lambda);
}

// Upper bound on |x| for any zero of the force: |x| = |s (n_a - n_b)|.
double root_bound(const DimensionlessParams& p) {
    const double S = sum_sq(p);
    const double rv = std::sqrt(p.V);
    const double ea = std::abs(p.eta_a), eb = std::abs(p.eta_b);
    const double half = rv / (2.0 * std::sqrt(S));
    const double A = rv * (p.kappa * ea + p.g * eb) / S + ea * half;
    const double B = rv * (p.kappa * eb + p.g * ea) / S + eb * half;
    return std::abs(p.lambda / rv) * (A * A + B * B) * 1.01 + 1.0;
}

double bisect_force(const DimensionlessParams& p, double lo, double hi) {
    double flo = effective_force(p, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) return mid;
        const double fm = effective_force(p, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) return 0.5 * (lo + hi);
    }
    throw NumericalError("steady-state bisection did not converge",
                         {{"bracket_lo", lo}, {"bracket_hi", hi}, {"force_lo", flo}});
}

std::vector<SteadyState> numeric_positions(const DimensionlessParams& p) {
    // Scan in u with x = w sinh(u): fine near the origin, coarse far out.
    const double w = field_width(p);
    const double umax = std::asinh(root_bound(p) / w);
    constexpr int n = 8001; // odd, so u = 0 is a node
    std::vector<double> xs(n), fs(n);
    for (int i = 0; i < n; ++i) {
        const double u = umax * (2.0 * i / (n - 1) - 1.0);
        xs[i] = (i == n / 2) ? 0.0 : w * std::sinh(u);
        fs[i] = effective_force(p, xs[i]);
    }
    std::vector<SteadyState> out;
    for (int i = 0; i < n; ++i) {
        if (fs[i] == 0.0) {
            const double left = i > 0 ? fs[i - 1] : fs[i + 1];
            const double right = i + 1 < n ? fs[i + 1] : fs[i - 1];
            // force decreasing through the root means V_eff has a minimum
            out.push_back(make_steady_state(p, xs[i], !(left > 0.0 && right < 0.0)));
            continue;
        }
        if (i + 1 < n && fs[i + 1] != 0.0 && (fs[i] > 0.0) != (fs[i + 1] > 0.0)) {
            const double x = bisect_force(p, xs[i], xs[i + 1]);
            out.push_back(make_steady_state(p, x, fs[i] < 0.0));
        }
    }
    require(!out.empty(), "no stationary point of the effective potential found");
    return out;
}

} // namespace

std::string to_string(Branch b) {
    switch (b) {
    case Branch::normal: return "normal";
    case Branch::broken_plus: return "broken_plus";
    case Branch::broken_minus: return "broken_minus";
    }
    return "normal";
}

FieldAmplitudes field_steady_states(const DimensionlessParams& p, double x) {
    const double rv = std::sqrt(p.V);
    const double D = sum_sq(p) + x * x * p.lambda * p.lambda / p.V;
    const cplx a = -cplx(p.g * p.eta_b * rv + x * p.eta_a * p.lambda, p.eta_a * rv * p.kappa) / D;
    const cplx b = -cplx(p.g * p.eta_a * rv - x * p.eta_b * p.lambda, p.eta_b * rv * p.kappa) / D;
    return {a, b};
}

double effective_potential(const DimensionlessParams& p, double x) {
    const double S = sum_sq(p);
    const double rS = std::sqrt(S);
    const double rv = std::sqrt(p.V);
    const double D = S + x * x * p.lambda * p.lambda / p.V;
    double v = 0.5 * x * x - 2.0 * p.g * p.eta_a * p.eta_b * p.V / D;
    const double imb = p.eta_a * p.eta_a - p.eta_b * p.eta_b;
    if (imb != 0.0) {
        const double y = x * p.lambda / rv;
        v += p.V * imb / S * (p.kappa * p.kappa * std::atan(y / rS) / rS - p.g * p.g * y / D);
    }
    return v;
}

double effective_force(const DimensionlessParams& p, double x) {
    const auto f = field_steady_states(p, x);
    return -x - (p.lambda / std::sqrt(p.V)) * (std::norm(f.a) - std::norm(f.b));
}

SteadyState make_steady_state(const DimensionlessParams& p, double x, bool saddle) {
    const auto f = field_steady_states(p, x);
    SteadyState s;
    s.x_ss = x;
    s.a_ss = f.a;
    s.b_ss = f.b;
    s.n_a = std::norm(f.a);
    s.n_b = std::norm(f.b);
    s.n_c = 0.5 * x * x;
    s.branch = branch_of(x);
    s.saddle = saddle;
    return s;
}

std::vector<SteadyState> steady_positions(const DimensionlessParams& p) {
    p.validate();
    std::vector<SteadyState> out;
    if (p.balanced_antisymmetric() && p.eta_a != 0.0) {
        const double m = std::abs(mu(p));
        if (m <= 1.0) {
            out.push_back(make_steady_state(p, 0.0));
            return out;
        }
        const double x = std::sqrt(2.0 * epsilon0(p)) * std::sqrt(m - 1.0) / m;
        out.push_back(make_steady_state(p, -x));
        out.push_back(make_steady_state(p, x));
        out.push_back(make_steady_state(p, 0.0, true));
        return out;
    }
    if (p.eta_a == 0.0 && p.eta_b == 0.0) {
        out.push_back(make_steady_state(p, 0.0));
        return out;
    }
    auto all = numeric_positions(p);
    std::stable_partition(all.begin(), all.end(), [](const SteadyState& s) { return !s.saddle; });
    return all;
}

SteadyState global_minimum(const DimensionlessParams& p) {
    const auto all = steady_positions(p);
    const SteadyState* best = nullptr;
    double best_v = 0.0;
    for (const auto& s : all) {
        if (s.saddle) continue;
        const double v = effective_potential(p, s.x_ss);
        // ties go to the larger x, i.e. the + branch
        if (!best || v <= best_v) {
            best = &s;
            best_v = v;
        }
    }
    require(best != nullptr, "effective potential has no minimum");
    return *best;
}

double ground_energy_ratio(double m) {
    m = std::abs(m);
    if (m <= 1.0) return 1.0;
    return (2.0 * m - 1.0) / (m * m);
}

double ground_energy(const DimensionlessParams& p) {
    require(p.balanced_antisymmetric(), "ground_energy needs eta_a == -eta_b");
    return epsilon0(p) * ground_energy_ratio(mu(p));
}

PhotonObservables photon_observables(const DimensionlessParams& p, Branch branch) {
    p.validate();
    require(p.balanced_antisymmetric(), "photon_observables needs eta_a == -eta_b");
    const double S = sum_sq(p);
    const double eta = p.eta();
    const double m = std::abs(mu(p));
    PhotonObservables o;
    o.branch = branch;
    if (branch == Branch::normal) {
        o.n_sum = 2.0 * eta * eta * p.V / S;
        o.n_diff = 0.0;
        return o;
    }
    require(m > 1.0, "broken-phase photon numbers need mu > 1");
    const double l = std::abs(p.lambda);
    o.n_sum = eta * p.V / (std::sqrt(p.g) * l);
    const double mag = p.V / (l * l) * std::sqrt(S * (m - 1.0));
    // x_ss = -(lambda / sqrt V)(n_a - n_b)
    const double xsign = branch == Branch::broken_plus ? 1.0 : -1.0;
    const double lsign = p.lambda >= 0.0 ? 1.0 : -1.0;
    o.n_diff = -xsign * lsign * mag;
    return o;
}

double phonon_number(const DimensionlessParams& p) {
    const auto s = global_minimum(p);
    return 0.5 * s.x_ss * s.x_ss;
}

std::vector<double> make_mu_grid(const GridSpec& spec) {
    require(spec.n_points >= 2, "mu grid needs at least 2 points");
    require(spec.mu_max > spec.mu_min, "mu grid needs mu_max > mu_min");
    std::vector<double> out(spec.n_points);
    const double n1 = static_cast<double>(spec.n_points - 1);
    if (spec.log_near_one) {
        require(spec.mu_min > 1.0, "log spacing needs mu_min > 1");
        const double a = std::log(spec.mu_min - 1.0), b = std::log(spec.mu_max - 1.0);
        for (std::size_t i = 0; i < spec.n_points; ++i)
            out[i] = 1.0 + std::exp(a + (b - a) * static_cast<double>(i) / n1);
    } else {
        for (std::size_t i = 0; i < spec.n_points; ++i)
            out[i] = spec.mu_min + (spec.mu_max - spec.mu_min) * static_cast<double>(i) / n1;
    }
    out.front() = spec.mu_min;
    out.back() = spec.mu_max;
    return out;
}

SweepTable sweep(const DimensionlessParams& p, const std::vector<double>& mu_grid, Exec exec) {
    p.validate();
    require(p.balanced_antisymmetric() && p.eta_a != 0.0, "sweep needs eta_a == -eta_b != 0");
    require(!mu_grid.empty(), "empty mu grid");
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        require(std::isfinite(mu_grid[i]) && mu_grid[i] >= 0.0, "mu grid values must be finite and >= 0");
        if (i > 0) require(mu_grid[i] > mu_grid[i - 1], "mu grid must be strictly increasing");
    }
    SweepTable t;
    t.grid = {mu_grid.front(), mu_grid.back(), mu_grid.size(), false};
    t.rows.resize(mu_grid.size());
    const double e0 = epsilon0(p);
    for_each_index(mu_grid.size(), exec, [&](std::size_t i) {
        const auto q = at_mu(p, mu_grid[i]);
        const auto pos = steady_positions(q);
        const SteadyState* plus = &pos.front();
        for (const auto& s : pos)
            if (!s.saddle && s.x_ss >= plus->x_ss) plus = &s;
        SweepRow r;
        r.mu = mu_grid[i];
        r.x_ss_plus = plus->x_ss;
        r.n_a = plus->n_a;
        r.n_b = plus->n_b;
        r.n_diff = plus->n_a - plus->n_b;
        r.n_c = plus->n_c;
        r.E0_over_eps0 = effective_potential(q, plus->x_ss) / e0;
        t.rows[i] = r;
    });
    return t;
}

SweepTable sweep(const DimensionlessParams& p, const GridSpec& grid, Exec exec) {
    auto t = sweep(p, make_mu_grid(grid), exec);
    t.grid = grid;
    return t;
}

double fit_beta(const SweepTable& table, double mu_lo, double mu_hi) {
    require(mu_lo > 1.0 && mu_hi <= 1.1 && mu_lo < mu_hi, "beta window must lie inside (1, 1.1]");
    std::vector<double> t, y;
    for (const auto& r : table.rows) {
        if (r.mu < mu_lo || r.mu > mu_hi) continue;
        require(r.n_c > 0.0, "n_c vanishes inside the beta window");
        t.push_back(r.mu - 1.0);
        y.push_back(r.n_c);
    }
    require(t.size() >= 5, "beta fit needs at least 5 points in the window");
    return fit::log_log_slope(t, y);
}

std::string sweep_csv(const SweepTable& table) {
    std::string out = sweep_csv_header;
    out += '\n';
    char buf[512];
    for (const auto& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.mu, r.x_ss_plus, r.n_a,
                      r.n_b, r.n_diff, r.n_c, r.E0_over_eps0);
        out += buf;
    }
    return out;
}

} // namespace optodicke::meanfield
