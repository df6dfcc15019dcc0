#include "optodicke/quantum1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "optodicke/constants.hpp"
#include "optodicke/error.hpp"
#include "optodicke/fit.hpp"
#include "optodicke/meanfield.hpp"

namespace optodicke::quantum1d {

namespace {

// -(1/2) d^2/dx^2 to fourth order: coefficients of psi_i, psi_{i+-1}, psi_{i+-2} times h^2.
constexpr double k0 = 1.25;
constexpr double k1 = -2.0 / 3.0;
constexpr double k2 = 1.0 / 24.0;

double mu_or_zero(const DimensionlessParams& p) { return p.eta() == 0.0 ? 0.0 : std::abs(mu(p)); }

double sigma_estimate(const DimensionlessParams& p) {
    const double m = mu_or_zero(p);
    double s = std::numeric_limits<double>::infinity();
    if (m != 1.0) s = std::sqrt(gaussian_variance(m));
    if (m > 0.0 && p.eta() != 0.0) {
        const double e0 = epsilon0(p);
        s = std::min(s, 0.6 * std::pow(std::pow(m, 4) / (4.0 * e0), -1.0 / 6.0));
    }
    return s;
}

// Banded Cholesky factor of I + dtau H (pentadiagonal, SPD).
struct Pentadiagonal {
    std::vector<double> d, l1, l2;

    Pentadiagonal(const std::vector<double>& U, double h, double dtau) : d(U.size()), l1(U.size()), l2(U.size()) {
        const std::size_t n = U.size();
        const double c0 = dtau * k0 / (h * h);
        const double c1 = dtau * k1 / (h * h);
        const double c2 = dtau * k2 / (h * h);
        for (std::size_t i = 0; i < n; ++i) {
            l2[i] = i >= 2 ? c2 / d[i - 2] : 0.0;
            l1[i] = i >= 1 ? (c1 - (i >= 2 ? l2[i] * l1[i - 1] : 0.0)) / d[i - 1] : 0.0;
            const double diag = 1.0 + c0 + dtau * U[i] - l1[i] * l1[i] - l2[i] * l2[i];
            if (!(diag > 0.0)) throw NumericalError("imaginary-time matrix is not positive definite", {{"row", static_cast<double>(i)}});
            d[i] = std::sqrt(diag);
        }
    }

    void solve(std::vector<cplx>& b) const {
        const std::size_t n = b.size();
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = b[i];
            if (i >= 1) s -= l1[i] * b[i - 1];
            if (i >= 2) s -= l2[i] * b[i - 2];
            b[i] = s / d[i];
        }
        for (std::size_t i = n; i-- > 0;) {
            cplx s = b[i];
            if (i + 1 < n) s -= l1[i + 1] * b[i + 1];
            if (i + 2 < n) s -= l2[i + 2] * b[i + 2];
            b[i] = s / d[i];
        }
    }
};

double sum_sq(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return s;
}

// h^2 <psi|-(1/2) d^2|psi> / h as a sum of squared differences (well conditioned):
// (2/3) sum |psi_{i+1} - psi_i|^2 - (1/24) sum |psi_{i+2} - psi_i|^2, psi = 0 outside.
double kinetic_form(const std::vector<cplx>& v) {
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    auto at = [&](std::ptrdiff_t i) { return (i < 0 || i >= n) ? cplx(0.0) : v[static_cast<std::size_t>(i)]; };
    double s1 = 0.0, s2 = 0.0;
    for (std::ptrdiff_t i = -2; i < n; ++i) {
        s1 += std::norm(at(i + 1) - at(i));
        s2 += std::norm(at(i + 2) - at(i));
    }
    return (2.0 / 3.0) * s1 - (1.0 / 24.0) * s2;
}

double energy_of(const std::vector<cplx>& v, const std::vector<double>& U, double h) {
    double pot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) pot += U[i] * std::norm(v[i]);
    return (kinetic_form(v) / (h * h) + pot) / sum_sq(v);
}

void normalize(std::vector<cplx>& v, double h) {
    const double nrm = std::sqrt(h * sum_sq(v));
    require(nrm > 0.0 && std::isfinite(nrm), "wave function has zero or non-finite norm");
    for (auto& c : v) c /= nrm;
}

std::vector<cplx> default_initial(const DimensionlessParams& p, const Grid1D& grid) {
    const double s = std::clamp(sigma_estimate(p), 0.3, 5.0);
    std::vector<double> centres;
    for (const auto& st : meanfield::steady_positions(p))
        if (!st.saddle && st.x_ss >= grid.x_min && st.x_ss <= grid.x_max) centres.push_back(st.x_ss);
    if (centres.empty()) centres.push_back(0.5 * (grid.x_min + grid.x_max));
    std::vector<cplx> v(grid.n_points, 0.0);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        double acc = 0.0;
        for (double c : centres) acc += std::exp(-(x - c) * (x - c) / (4.0 * s * s));
        v[i] = acc;
    }
    return v;
}

} // namespace

double Grid1D::x(std::size_t i) const {
    const double centre = 0.5 * (x_min + x_max);
    return centre + (static_cast<double>(i) - 0.5 * static_cast<double>(n_points - 1)) * spacing();
}

void Grid1D::validate() const {
    require(n_points >= 256, "grid needs at least 256 points");
    require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min, "grid needs x_max > x_min");
}

void ImagTimeConfig::validate() const {
    require(std::isfinite(dtau) && dtau > 0.0, "dtau must be > 0");
    require(std::isfinite(tol) && tol > 0.0, "imaginary-time tolerance must be > 0");
    require(max_steps >= 1, "max_steps must be >= 1");
}

Grid1D default_grid(const DimensionlessParams& p, Domain domain, std::size_t n_points) {
    p.validate();
    require(n_points >= 256, "grid needs at least 256 points");
    const double xs = std::abs(meanfield::global_minimum(p).x_ss);
    const double half_width = xs + std::max(10.0, 8.0 * sigma_estimate(p));
    if (domain == Domain::full) return {-half_width, half_width, n_points};
    return {half_width / static_cast<double>(n_points), half_width, n_points};
}

std::vector<double> shifted_potential(const DimensionlessParams& p, const Grid1D& grid) {
    const double vmin = meanfield::effective_potential(p, meanfield::global_minimum(p).x_ss);
    std::vector<double> U(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i)
        U[i] = std::max(0.0, meanfield::effective_potential(p, grid.x(i)) - vmin);
    return U;
}

WaveFunction ground_state(const DimensionlessParams& p, const Grid1D& grid, const ImagTimeConfig& itc) {
    grid.validate();
    return ground_state(p, grid, itc, default_initial(p, grid));
}

WaveFunction ground_state(const DimensionlessParams& p, const Grid1D& grid, const ImagTimeConfig& itc,
                          std::vector<cplx> initial) {
    p.validate();
    grid.validate();
    itc.validate();
    require(initial.size() == grid.n_points, "initial state does not match the grid");
    const double h = grid.spacing();
    const auto U = shifted_potential(p, grid);
    const Pentadiagonal factor(U, h, itc.dtau);

    WaveFunction wf;
    wf.grid = grid;
    wf.psi = std::move(initial);
    normalize(wf.psi, h);
    double e_old = energy_of(wf.psi, U, h);
    for (std::size_t step = 1; step <= itc.max_steps; ++step) {
        factor.solve(wf.psi);
        normalize(wf.psi, h);
        const double e = energy_of(wf.psi, U, h);
        if (std::abs(e - e_old) / itc.dtau < itc.tol) {
            wf.energy = e;
            wf.steps = step;
            return wf;
        }
        e_old = e;
    }
    throw NumericalError("imaginary-time propagation did not converge",
                         {{"max_steps", static_cast<double>(itc.max_steps)}, {"energy", e_old}});
}

double energy(const DimensionlessParams& p, const WaveFunction& wf) {
    return energy_of(wf.psi, shifted_potential(p, wf.grid), wf.grid.spacing());
}

double norm_squared(const WaveFunction& wf) { return wf.grid.spacing() * sum_sq(wf.psi); }

Moments moments(const WaveFunction& wf) {
    const double h = wf.grid.spacing();
    const auto n = static_cast<std::ptrdiff_t>(wf.psi.size());
    auto at = [&](std::ptrdiff_t i) { return (i < 0 || i >= n) ? cplx(0.0) : wf.psi[static_cast<std::size_t>(i)]; };
    double nrm = 0.0, mx = 0.0, mx2 = 0.0, mp = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double x = wf.grid.x(static_cast<std::size_t>(i));
        const double w = std::norm(at(i));
        nrm += w;
        mx += x * w;
        mx2 += x * x * w;
        const cplx d1 = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
        mp += (std::conj(at(i)) * d1).imag();
    }
    Moments m;
    m.mean_x = mx / nrm;
    m.dx = std::sqrt(std::max(0.0, mx2 / nrm - m.mean_x * m.mean_x));
    m.mean_p = mp / nrm;
    const double p2 = 2.0 * kinetic_form(wf.psi) / (h * h) / nrm;
    m.dp = std::sqrt(std::max(0.0, p2 - m.mean_p * m.mean_p));
    return m;
}

WignerGrid wigner(const WaveFunction& wf, const WignerOptions& opt, Exec exec) {
    require(opt.n_p >= 2 && opt.p_max > opt.p_min, "Wigner p grid needs n_p >= 2 and p_max > p_min");
    require(opt.x_stride >= 1, "x_stride must be >= 1");
    const std::size_t n = wf.psi.size();
    const double h = wf.grid.spacing();

    double peak = 0.0;
    for (const auto& c : wf.psi) peak = std::max(peak, std::abs(c));
    std::size_t lo = n, hi = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(wf.psi[i]) > 1e-17 * peak) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    require(lo <= hi, "wave function vanishes");

    WignerGrid out;
    for (std::size_t i = 0; i < n; i += opt.x_stride) out.x.push_back(wf.grid.x(i));
    out.p.resize(opt.n_p);
    for (std::size_t k = 0; k < opt.n_p; ++k)
        out.p[k] = opt.p_min + (opt.p_max - opt.p_min) * static_cast<double>(k) / static_cast<double>(opt.n_p - 1);
    const std::size_t nx = out.x.size();
    out.w.assign(opt.n_p * nx, 0.0);
    std::vector<double> row_imag(opt.n_p, 0.0);

    const std::size_t kmax = (hi - lo) / 2 + 1;
    for_each_index(opt.n_p, exec, [&](std::size_t ip) {
        std::vector<cplx> phase(kmax + 1);
        for (std::size_t k = 0; k <= kmax; ++k)
            phase[k] = std::polar(1.0, 2.0 * out.p[ip] * static_cast<double>(k) * h);
        double worst = 0.0;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const std::size_t i = ix * opt.x_stride;
            if (i < lo || i > hi) continue;
            const std::size_t K = std::min(i - lo, hi - i);
            cplx acc = std::norm(wf.psi[i]);
            for (std::size_t k = 1; k <= K; ++k) {
                acc += std::conj(wf.psi[i + k]) * wf.psi[i - k] * phase[k];
                acc += std::conj(wf.psi[i - k]) * wf.psi[i + k] * std::conj(phase[k]);
            }
            acc *= h / constants::pi;
            out.w[ip * nx + ix] = acc.real();
            worst = std::max(worst, std::abs(acc.imag()));
        }
        row_imag[ip] = worst;
    });
    out.max_imag = *std::max_element(row_imag.begin(), row_imag.end());
    if (out.max_imag > opt.imag_tol)
        throw NumericalError("Wigner function has an imaginary residue above tolerance",
                             {{"max_imag", out.max_imag}, {"tolerance", opt.imag_tol}});
    return out;
}

std::vector<double> wigner_x_marginal(const WignerGrid& w) {
    const std::size_t nx = w.x.size(), np = w.p.size();
    const double dp = (w.p.back() - w.p.front()) / static_cast<double>(np - 1);
    std::vector<double> out(nx, 0.0);
    for (std::size_t ip = 0; ip < np; ++ip) {
        const double wt = (ip == 0 || ip + 1 == np) ? 0.5 * dp : dp;
        for (std::size_t ix = 0; ix < nx; ++ix) out[ix] += wt * w.at(ip, ix);
    }
    return out;
}

double wigner_norm(const WignerGrid& w) {
    require(w.x.size() >= 2, "Wigner grid needs at least two x nodes");
    const double hx = w.x[1] - w.x[0];
    double s = 0.0;
    for (double v : wigner_x_marginal(w)) s += v;
    return s * hx;
}

FsResult fs_numeric(const DimensionlessParams& p, double lambda, double delta, std::size_t n_points) {
    require(std::isfinite(lambda), "lambda must be finite");
    require(std::isfinite(delta) && delta >= 1e-5, "delta below the resolvable limit (1e-5)");
    auto q = p;
    q.lambda = lambda;
    q.validate();
    require(q.balanced_antisymmetric() && q.eta_a != 0.0, "fidelity susceptibility needs eta_a == -eta_b != 0");
    const double lc = critical_coupling(q);
    const double m = std::abs(lambda) / lc;
    require(std::abs(m - 1.0) > 1e-9, "fidelity susceptibility is singular at mu = 1");

    FsResult r;
    r.domain = m > 1.0 ? Domain::half : Domain::full;
    const Grid1D grid = default_grid(q, r.domain, n_points);
    ImagTimeConfig itc;
    itc.tol = 1e-14;
    const auto psi0 = ground_state(q, grid, itc);
    auto overlap = [&](double shift) {
        auto s = q;
        s.lambda = lambda + shift;
        const auto psi = ground_state(s, grid, itc, psi0.psi);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < grid.n_points; ++i) acc += std::conj(psi0.psi[i]) * psi.psi[i];
        return (acc * grid.spacing()).real();
    };
    r.f_plus = overlap(delta);
    r.f_minus = overlap(-delta);
    r.chi_lambda = (2.0 - r.f_plus - r.f_minus) / (2.0 * delta * delta);
    r.chi_mu = lc * lc * r.chi_lambda;
    return r;
}

double gaussian_variance(double m) {
    require(std::isfinite(m) && m >= 0.0, "mu must be finite and >= 0");
    if (m == 1.0) throw ValidationError("Gaussian variance is singular at mu = 1");
    if (m < 1.0) return 1.0 / (2.0 * std::sqrt(1.0 - m * m));
    return 1.0 / (2.0 * std::sqrt(4.0 * (m - 1.0) / m));
}

double fs_analytic(double m, double eps0) {
    require(std::isfinite(m) && m >= 0.0, "mu must be finite and >= 0");
    require(std::isfinite(eps0) && eps0 >= 0.0, "eps0 must be finite and >= 0");
    if (m == 1.0) throw ValidationError("fidelity susceptibility is singular at mu = 1");
    if (m < 1.0) return m * m / (16.0 * (m * m - 1.0) * (m * m - 1.0));
    return eps0 * std::sqrt(m) * (m - 2.0) * (m - 2.0) / (8.0 * std::pow(m, 5) * std::sqrt(m - 1.0)) +
           1.0 / (64.0 * m * m * (m - 1.0) * (m - 1.0));
}

double fit_alpha_window(const std::vector<double>& mu, const std::vector<double>& chi, double lo, double hi) {
    require(mu.size() == chi.size(), "mu and chi sizes differ");
    std::vector<double> t, y;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] >= lo && mu[i] <= hi) {
            t.push_back(std::abs(mu[i] - 1.0));
            y.push_back(chi[i]);
        }
    require(t.size() >= 5, "alpha fit needs at least 5 points in the window");
    return -fit::log_log_slope_corrected(t, y);
}

AlphaFit fit_alpha(const std::vector<double>& mu, const std::vector<double>& chi) {
    return {fit_alpha_window(mu, chi, 0.9, 0.99), fit_alpha_window(mu, chi, 1.01, 1.1)};
}

std::vector<SqueezingRow> squeezing_sweep(const DimensionlessParams& p, const std::vector<double>& lambdas,
                                          std::size_t n_points, Exec exec) {
    p.validate();
    for (double l : lambdas) require(std::isfinite(l), "lambda values must be finite");
    std::vector<SqueezingRow> rows(lambdas.size());
    for_each_index(lambdas.size(), exec, [&](std::size_t i) {
        auto q = p;
        q.lambda = lambdas[i];
        const auto wf = ground_state(q, default_grid(q, Domain::full, n_points));
        const auto m = moments(wf);
        rows[i] = {lambdas[i], m.dx, m.dp};
    });
    return rows;
}

std::string wavefunction_csv(const WaveFunction& wf) {
    std::string out = wavefunction_csv_header;
    out += '\n';
    char buf[256];
    for (std::size_t i = 0; i < wf.psi.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", wf.grid.x(i), wf.psi[i].real(), wf.psi[i].imag());
        out += buf;
    }
    return out;
}

std::string wigner_csv(const WignerGrid& w) {
    std::string out = wigner_csv_header;
    out += '\n';
    char buf[256];
    for (std::size_t ip = 0; ip < w.p.size(); ++ip)
        for (std::size_t ix = 0; ix < w.x.size(); ++ix) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", w.x[ix], w.p[ip], w.at(ip, ix));
            out += buf;
        }
    return out;
}

std::string squeezing_csv(const std::vector<SqueezingRow>& rows) {
    std::string out = squeezing_csv_header;
    out += '\n';
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.lambda, r.dx, r.dp);
        out += buf;
    }
    return out;
}

} // namespace optodicke::quantum1d
