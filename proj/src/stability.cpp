#include "optodicke/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "optodicke/error.hpp"

namespace optodicke::stability {

namespace {

bool by_re_im(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

std::array<cplx, 6> sorted(std::array<cplx, 6> w) {
    std::sort(w.begin(), w.end(), by_re_im);
    return w;
}

// Reorders cur to best match prev (sum of |difference|). Permutations are
// visited in lexicographic order and only a strictly better one replaces the
// incumbent, so ties keep the earlier ordering.
std::array<cplx, 6> match(const std::array<cplx, 6>& prev, const std::array<cplx, 6>& cur) {
    std::array<double, 36> cost{};
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) cost[i * 6 + j] = std::abs(prev[i] - cur[j]);
    std::array<std::size_t, 6> perm{0, 1, 2, 3, 4, 5}, best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < 6; ++i) c += cost[i * 6 + perm[i]];
        if (c < best_cost) {
            best_cost = c;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::array<cplx, 6> out{};
    for (std::size_t i = 0; i < 6; ++i) out[i] = cur[best[i]];
    return out;
}

std::array<cplx, 6> seeds(const DimensionlessParams& p) {
    const cplx light_p(p.g, -p.kappa), light_m(-p.g, -p.kappa);
    const cplx mem_p(1.0, -p.gamma), mem_m(-1.0, -p.gamma);
    return {light_p, light_m, light_p, light_m, mem_p, mem_m};
}

} // namespace

DriftMatrix drift_matrix(const DimensionlessParams& p, double mu) {
    p.validate();
    require(p.balanced_antisymmetric(), "drift_matrix needs eta_a == -eta_b");
    require(std::isfinite(mu), "mu must be finite");
    const double g = p.g, k = p.kappa;
    const double c1 = mu * std::sqrt(g / 2.0);
    const double c2 = mu * k / std::sqrt(2.0 * g);
    DriftMatrix d(6);
    const double rows[6][6] = {
        {-p.gamma, -1.0, 0.0, 0.0, 0.0, 0.0},
        {1.0, -p.gamma, c1, c2, c1, c2},
        {-c2, 0.0, -k, 0.0, 0.0, -g},
        {c1, 0.0, 0.0, -k, g, 0.0},
        {-c2, 0.0, 0.0, -g, -k, 0.0},
        {c1, 0.0, g, 0.0, 0.0, -k},
    };
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) d(i, j) = rows[i][j];
    return d;
}

DriftMatrix drift_matrix_general(const DimensionlessParams& p, const meanfield::SteadyState& ss) {
    p.validate();
    const double s = p.lambda / std::sqrt(p.V);
    const double x = ss.x_ss;
    const double ar = ss.a_ss.real(), ai = ss.a_ss.imag();
    const double br = ss.b_ss.real(), bi = ss.b_ss.imag();
    const double g = p.g, k = p.kappa, gm = p.gamma;
    // Jacobian of the equations of motion in (x, p, Re a, Im a, Re b, Im b).
    const double J[6][6] = {
        {-gm, 1.0, 0.0, 0.0, 0.0, 0.0},
        {-1.0, -gm, -2.0 * s * ar, -2.0 * s * ai, 2.0 * s * br, 2.0 * s * bi},
        {s * ai, 0.0, -k, s * x, 0.0, g},
        {-s * ar, 0.0, -s * x, -k, -g, 0.0},
        {-s * bi, 0.0, 0.0, g, -k, -s * x},
        {s * br, 0.0, -g, 0.0, s * x, -k},
    };
    // u = T (x, p, Re a, Im a, Re b, Im b); the minus signs follow P = (a^dag - a)/(i sqrt2).
    const double r2 = std::sqrt(2.0);
    const double T[6] = {1.0, -1.0, r2, -r2, r2, -r2};
    DriftMatrix d(6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) d(i, j) = T[i] * J[i][j] / T[j];
    return d;
}

ExcitationSpectrum spectrum(const DriftMatrix& d) {
    require(d.n == 6, "drift matrix must be 6x6");
    const auto raw = linalg::eigenvalues(d);
    const double scale = std::max(linalg::inf_norm(d), std::numeric_limits<double>::min());
    auto lam = raw;
    linalg::merge_clusters(lam, std::sqrt(std::numeric_limits<double>::epsilon()) * scale);
    ExcitationSpectrum out;
    for (std::size_t i = 0; i < 6; ++i) {
        auto v = linalg::eigenvector(d, lam[i]);
        double res = linalg::residual(d, lam[i], v);
        // A nearly degenerate but diagonalizable pair must not be merged.
        if (lam[i] != raw[i] && res > 1e-12 * scale) {
            const auto vr = linalg::eigenvector(d, raw[i]);
            const double rr = linalg::residual(d, raw[i], vr);
            if (rr < res) {
                lam[i] = raw[i];
                res = rr;
            }
        }
        out.max_residual = std::max(out.max_residual, res);
        out.omega[i] = cplx(0.0, 1.0) * lam[i];
    }
    if (out.max_residual > 1e-9 * scale)
        throw NumericalError("eigenpair residual above tolerance",
                             {{"residual", out.max_residual}, {"norm", scale}});
    out.omega = sorted(out.omega);
    return out;
}

std::array<cplx, 6> analytic_spectrum_lossless(double g, double mu) {
    require(g > 0.0 && std::isfinite(mu), "analytic spectrum needs g > 0 and finite mu");
    const double inner = std::sqrt((g * g - 1.0) * (g * g - 1.0) + 4.0 * g * g * mu * mu);
    const cplx w_hi = std::sqrt(cplx((1.0 + g * g + inner) / 2.0, 0.0));
    const cplx w_lo = std::sqrt(cplx((1.0 + g * g - inner) / 2.0, 0.0));
    return sorted({cplx(g, 0.0), cplx(-g, 0.0), w_hi, -w_hi, w_lo, -w_lo});
}

double max_growth_rate(const ExcitationSpectrum& s) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& w : s.omega) best = std::max(best, w.imag());
    return best;
}

ScanTable scan_spectrum(const DimensionlessParams& p, const std::vector<double>& mu_grid, Exec exec) {
    p.validate();
    require(p.balanced_antisymmetric(), "scan_spectrum needs eta_a == -eta_b");
    require(!mu_grid.empty(), "empty mu grid");
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        require(std::isfinite(mu_grid[i]) && mu_grid[i] >= 0.0, "mu grid values must be finite and >= 0");
        if (i > 0) require(mu_grid[i] > mu_grid[i - 1], "mu grid must be strictly increasing");
    }
    // Walk from mu = 0 to the first grid point so the labels set at mu = 0 carry over.
    std::vector<double> lead;
    const double step = 0.01;
    for (double m = step; m < mu_grid.front(); m += step) lead.push_back(m);

    std::vector<double> all = lead;
    all.insert(all.end(), mu_grid.begin(), mu_grid.end());
    std::vector<std::array<cplx, 6>> spectra(all.size());
    for_each_index(all.size(), exec, [&](std::size_t i) { spectra[i] = spectrum(drift_matrix(p, all[i])).omega; });

    ScanTable t;
    auto prev = match(seeds(p), spectrum(drift_matrix(p, 0.0)).omega);
    for (std::size_t i = 0; i < all.size(); ++i) {
        prev = match(prev, spectra[i]);
        if (i >= lead.size()) t.rows.push_back({all[i], prev});
    }
    return t;
}

double membrane_real_zero(const ScanTable& t) {
    const auto idx = static_cast<std::size_t>(Label::membrane_plus);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double re = std::abs(t.rows[i].omega[idx].real());
        if (re <= 1e-7) {
            if (i == 0) return t.rows[0].mu;
            const double r0 = std::abs(t.rows[i - 1].omega[idx].real());
            // Re ~ sqrt(mu_c - mu) near the coalescence: interpolate Re^2 linearly.
            const double m0 = t.rows[i - 1].mu, m1 = t.rows[i].mu;
            const double a = r0 * r0, b = re * re;
            return a == b ? m1 : m0 + (m1 - m0) * a / (a - b);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string spectrum_csv(const ScanTable& t) {
    std::string out = spectrum_csv_header;
    out += '\n';
    char buf[256];
    for (const auto& r : t.rows)
        for (std::size_t k = 0; k < 6; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g\n", r.mu, label_names[k], r.omega[k].real(),
                          r.omega[k].imag());
            out += buf;
        }
    return out;
}

} // namespace optodicke::stability
