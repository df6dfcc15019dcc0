#include "optodicke/fockcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "optodicke/error.hpp"

namespace optodicke::fockcheck {

namespace {

using cplx = std::complex<double>;

OperatorMatrix identity(const FockTruncation& t) {
    const auto n = static_cast<Eigen::Index>(t.dimension());
    return OperatorMatrix::Identity(n, n);
}

OperatorMatrix hermitian_part(const OperatorMatrix& m) { return 0.5 * (m + m.adjoint()); }

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

} // namespace

std::size_t FockTruncation::dimension() const {
    return static_cast<std::size_t>(n_max_a + 1) * static_cast<std::size_t>(n_max_b + 1) *
           static_cast<std::size_t>(n_max_c + 1);
}

std::size_t FockTruncation::index(int na, int nb, int nc) const {
    return (static_cast<std::size_t>(na) * static_cast<std::size_t>(n_max_b + 1) + static_cast<std::size_t>(nb)) *
               static_cast<std::size_t>(n_max_c + 1) +
           static_cast<std::size_t>(nc);
}

void FockTruncation::validate() const {
    require(n_max_a >= 2 && n_max_b >= 2 && n_max_c >= 2, "Fock cutoffs must each be >= 2");
    require(dimension() <= budget, "Fock space dimension exceeds the budget");
}

Occupations occupations(const FockTruncation& t, std::size_t index) {
    const auto cc = static_cast<std::size_t>(t.n_max_c + 1);
    const auto cb = static_cast<std::size_t>(t.n_max_b + 1);
    Occupations o;
    o.nc = static_cast<int>(index % cc);
    o.nb = static_cast<int>((index / cc) % cb);
    o.na = static_cast<int>(index / (cc * cb));
    return o;
}

bool truncation_exact(const FockTruncation& t, std::size_t index) {
    const auto o = occupations(t, index);
    return o.na < t.n_max_a && o.nb < t.n_max_b && o.nc < t.n_max_c;
}

Ladder ladder_operators(const FockTruncation& t) {
    t.validate();
    const auto n = static_cast<Eigen::Index>(t.dimension());
    Ladder l{OperatorMatrix::Zero(n, n), OperatorMatrix::Zero(n, n), OperatorMatrix::Zero(n, n)};
    for (int na = 0; na <= t.n_max_a; ++na)
        for (int nb = 0; nb <= t.n_max_b; ++nb)
            for (int nc = 0; nc <= t.n_max_c; ++nc) {
                const auto col = idx(t.index(na, nb, nc));
                if (na > 0) l.a(idx(t.index(na - 1, nb, nc)), col) = std::sqrt(static_cast<double>(na));
                if (nb > 0) l.b(idx(t.index(na, nb - 1, nc)), col) = std::sqrt(static_cast<double>(nb));
                if (nc > 0) l.c(idx(t.index(na, nb, nc - 1)), col) = std::sqrt(static_cast<double>(nc));
            }
    return l;
}

OperatorMatrix build_hamiltonian(const DimensionlessParams& p, const FockTruncation& t) {
    p.validate();
    const auto L = ladder_operators(t);
    const double r2 = std::sqrt(2.0);
    const OperatorMatrix x = (L.c + L.c.adjoint()) / r2;
    const OperatorMatrix pm = cplx(0.0, 1.0) * (L.c.adjoint() - L.c) / r2;
    const OperatorMatrix na = L.a.adjoint() * L.a;
    const OperatorMatrix nb = L.b.adjoint() * L.b;
    const double rv = std::sqrt(p.V);
    OperatorMatrix h = 0.5 * (pm * pm + x * x);
    h += p.g * (L.a.adjoint() * L.b + L.b.adjoint() * L.a);
    h += (p.lambda / rv) * x * (na - nb);
    h += p.eta_a * rv * (L.a + L.a.adjoint());
    h += p.eta_b * rv * (L.b + L.b.adjoint());
    return hermitian_part(h);
}

OperatorMatrix build_dicke_hamiltonian(const DimensionlessParams& p, const FockTruncation& t) {
    p.validate();
    const auto L = ladder_operators(t);
    const auto S = schwinger_operators(t);
    OperatorMatrix h = L.c.adjoint() * L.c;
    h += p.g * S.sx;
    h += std::sqrt(2.0 / p.V) * p.lambda * (L.c + L.c.adjoint()) * S.sz;
    return hermitian_part(h);
}

Schwinger schwinger_operators(const FockTruncation& t) {
    const auto L = ladder_operators(t);
    const OperatorMatrix ab = L.a.adjoint() * L.b;
    const OperatorMatrix ba = L.b.adjoint() * L.a;
    Schwinger s;
    s.sx = ab + ba;
    s.sy = cplx(0.0, 1.0) * (ab - ba);
    s.sz = 0.5 * (L.a.adjoint() * L.a - L.b.adjoint() * L.b);
    return s;
}

OperatorMatrix total_photon_number(const FockTruncation& t) {
    t.validate();
    const auto n = static_cast<Eigen::Index>(t.dimension());
    OperatorMatrix m = OperatorMatrix::Zero(n, n);
    for (std::size_t i = 0; i < t.dimension(); ++i) {
        const auto o = occupations(t, i);
        m(idx(i), idx(i)) = static_cast<double>(o.na + o.nb);
    }
    return m;
}

OperatorMatrix parity_operator(const FockTruncation& t, int sign) {
    t.validate();
    require(sign == 1 || sign == -1, "parity sign must be +1 or -1");
    require(t.n_max_a == t.n_max_b, "mode swap needs n_max_a == n_max_b");
    const auto n = static_cast<Eigen::Index>(t.dimension());
    OperatorMatrix u = OperatorMatrix::Zero(n, n);
    for (std::size_t i = 0; i < t.dimension(); ++i) {
        const auto o = occupations(t, i);
        double phase = (o.nc % 2 == 0) ? 1.0 : -1.0;
        if (sign == -1 && (o.na + o.nb) % 2 == 1) phase = -phase;
        u(idx(t.index(o.nb, o.na, o.nc)), idx(i)) = phase;
    }
    return u;
}

double max_on_exact(const FockTruncation& t, const OperatorMatrix& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < t.dimension(); ++i) {
        if (!truncation_exact(t, i)) continue;
        for (std::size_t j = 0; j < t.dimension(); ++j)
            if (truncation_exact(t, j)) best = std::max(best, std::abs(m(idx(i), idx(j))));
    }
    return best;
}

double max_on_sectors(const FockTruncation& t, const OperatorMatrix& m) {
    const int nmax = std::min(t.n_max_a, t.n_max_b);
    auto inside = [&](std::size_t i) {
        const auto o = occupations(t, i);
        return o.na + o.nb <= nmax;
    };
    double best = 0.0;
    for (std::size_t i = 0; i < t.dimension(); ++i) {
        if (!inside(i)) continue;
        for (std::size_t j = 0; j < t.dimension(); ++j)
            if (inside(j)) best = std::max(best, std::abs(m(idx(i), idx(j))));
    }
    return best;
}

double check_number_conservation(const DimensionlessParams& p, const FockTruncation& t) {
    const auto h = build_hamiltonian(p, t);
    const auto n = total_photon_number(t);
    return max_on_exact(t, h * n - n * h);
}

double check_dicke_equivalence(const DimensionlessParams& p, const FockTruncation& t) {
    require(p.eta_a == 0.0 && p.eta_b == 0.0, "Dicke equivalence holds only without pumping");
    const auto h = build_hamiltonian(p, t);
    const auto hd = build_dicke_hamiltonian(p, t);
    const OperatorMatrix diff = h - hd - 0.5 * identity(t);
    double best = 0.0;
    for (std::size_t i = 0; i < t.dimension(); ++i) {
        if (!truncation_exact(t, i)) continue;
        const auto oi = occupations(t, i);
        for (std::size_t j = 0; j < t.dimension(); ++j) {
            if (!truncation_exact(t, j)) continue;
            const auto oj = occupations(t, j);
            if (oi.na + oi.nb != oj.na + oj.nb) continue;
            best = std::max(best, std::abs(diff(idx(i), idx(j))));
        }
    }
    return best;
}

double check_parity(const DimensionlessParams& p, const FockTruncation& t, int sign) {
    const auto h = build_hamiltonian(p, t);
    const auto u = parity_operator(t, sign);
    return max_on_exact(t, h * u - u * h);
}

SchwingerReport check_schwinger(const FockTruncation& t) {
    const auto s = schwinger_operators(t);
    const auto n = total_photon_number(t);
    SchwingerReport r;
    r.commutator = max_on_sectors(t, s.sx * s.sy - s.sy * s.sx + cplx(0.0, 4.0) * s.sz);
    r.sz_number = max_on_sectors(t, s.sz * n - n * s.sz);
    const OperatorMatrix cas = s.sx * s.sx + s.sy * s.sy + 4.0 * s.sz * s.sz - n * (n + 2.0 * identity(t));
    r.casimir = max_on_sectors(t, cas);
    return r;
}

std::string operator_csv(const OperatorMatrix& m) {
    std::string out = operator_csv_header;
    out += '\n';
    char buf[256];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const cplx v = m(i, j);
            if (v == cplx(0.0)) continue;
            std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%.17g\n", static_cast<long>(i), static_cast<long>(j), v.real(),
                          v.imag());
            out += buf;
        }
    return out;
}

} // namespace optodicke::fockcheck
