#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "optodicke/error.hpp"
#include "optodicke/fockcheck.hpp"
#include "oracles.hpp"

using namespace optodicke;
using namespace optodicke::fockcheck;

namespace {

DimensionlessParams undriven(double g, double lambda) {
    DimensionlessParams p;
    p.g = g;
    p.lambda = lambda;
    p.eta_a = p.eta_b = 0.0;
    return p;
}

Eigen::MatrixXcd block(const OperatorMatrix& m, const std::vector<std::size_t>& rows) {
    const auto n = static_cast<long>(rows.size());
    Eigen::MatrixXcd out(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) out(i, j) = m(static_cast<long>(rows[i]), static_cast<long>(rows[j]));
    return out;
}

} // namespace

TEST_SUITE("fockcheck") {

TEST_CASE("basis order and dimension") {
    FockTruncation t;
    CHECK(t.dimension() == 5 * 5 * 7);
    CHECK(t.index(0, 0, 1) == 1);
    CHECK(t.index(0, 1, 0) == 7);
    CHECK(t.index(1, 0, 0) == 35);
    const auto o = occupations(t, t.index(3, 2, 5));
    CHECK(o.na == 3);
    CHECK(o.nb == 2);
    CHECK(o.nc == 5);
    CHECK(truncation_exact(t, t.index(3, 3, 5)));
    CHECK_FALSE(truncation_exact(t, t.index(4, 0, 0)));
    FockTruncation big{20, 20, 20};
    CHECK_THROWS_AS(big.validate(), ValidationError);
    FockTruncation tiny{1, 4, 4};
    CHECK_THROWS_AS(tiny.validate(), ValidationError);
}

TEST_CASE("ladder commutators on the exact region") {
    FockTruncation t;
    const auto l = ladder_operators(t);
    const auto id = OperatorMatrix::Identity(static_cast<long>(t.dimension()), static_cast<long>(t.dimension()));
    CHECK(max_on_exact(t, l.a * l.a.adjoint() - l.a.adjoint() * l.a - id) < 1e-14);
    CHECK(max_on_exact(t, l.b * l.b.adjoint() - l.b.adjoint() * l.b - id) < 1e-14);
    CHECK(max_on_exact(t, l.c * l.c.adjoint() - l.c.adjoint() * l.c - id) < 1e-14);
    CHECK(max_on_exact(t, l.a * l.b - l.b * l.a) == 0.0);
}

TEST_CASE("Hamiltonian matrix elements") {
    FockTruncation t;
    const auto h = build_hamiltonian(undriven(1.0, 0.0), t);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(h(0, 0) - 0.5) < 1e-14);
    const auto i1 = static_cast<long>(t.index(0, 0, 1));
    CHECK(std::abs(h(i1, i1) - 1.5) < 1e-14);
    // one photon, no phonons: 1/2 +- g
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block(h, {t.index(1, 0, 0), t.index(0, 1, 0)}));
    CHECK(es.eigenvalues()(0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1.5).epsilon(1e-14));

    // Light-membrane coupling scales as lambda / sqrt(V).
    auto p1 = undriven(1.0, 1.0);
    auto p4 = p1;
    p4.V *= 4.0;
    const OperatorMatrix c1 = build_hamiltonian(p1, t) - h;
    const OperatorMatrix c4 = build_hamiltonian(p4, t) - h;
    CHECK((c1 - 2.0 * c4).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("number conservation") {
    FockTruncation t;
    oracle::Draw draw(51);
    for (int i = 0; i < 20; ++i)
        CHECK(check_number_conservation(undriven(draw.uniform(0.1, 5.0), draw.uniform(0.0, 5.0)), t) <= 1e-12);
    auto lambda_only = undriven(1e-9, 2.0);
    CHECK(check_number_conservation(lambda_only, t) <= 1e-12);
    auto driven = undriven(1.0, 1.0);
    driven.eta_a = 0.1;
    CHECK(check_number_conservation(driven, t) > 1e-3);
}

TEST_CASE("Dicke equivalence") {
    FockTruncation t{4, 4, 4};
    CHECK(check_dicke_equivalence(undriven(1.0, 1.0), t) <= 1e-12);
    CHECK(check_dicke_equivalence(undriven(1.0, 0.0), t) <= 1e-12);
    oracle::Draw draw(53);
    FockTruncation t6;
    for (int i = 0; i < 20; ++i) {
        auto p = undriven(draw.uniform(0.1, 5.0), draw.uniform(0.0, 5.0));
        p.V = draw.uniform(1.0, 500.0);
        CHECK(check_dicke_equivalence(p, t6) <= 1e-12);
    }
    auto driven = undriven(1.0, 1.0);
    driven.eta_a = 0.1;
    CHECK_THROWS_AS(check_dicke_equivalence(driven, t), ValidationError);
}

TEST_CASE("parity symmetry") {
    FockTruncation t;
    const auto u = parity_operator(t, -1);
    const auto id = OperatorMatrix::Identity(static_cast<long>(t.dimension()), static_cast<long>(t.dimension()));
    CHECK((u * u - id).cwiseAbs().maxCoeff() == 0.0);
    CHECK((parity_operator(t, 1) * parity_operator(t, 1) - id).cwiseAbs().maxCoeff() == 0.0);

    // (-1)^{n_c} maps x -> -x and p -> -p.
    const auto l = ladder_operators(t);
    const OperatorMatrix x = (l.c + l.c.adjoint()) / std::sqrt(2.0);
    const OperatorMatrix pm = (l.c - l.c.adjoint()) / std::sqrt(2.0);
    OperatorMatrix pc = OperatorMatrix::Zero(static_cast<long>(t.dimension()), static_cast<long>(t.dimension()));
    for (std::size_t i = 0; i < t.dimension(); ++i)
        pc(static_cast<long>(i), static_cast<long>(i)) = occupations(t, i).nc % 2 ? -1.0 : 1.0;
    CHECK((pc * x * pc + x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((pc * pm * pc + pm).cwiseAbs().maxCoeff() == 0.0);

    oracle::Draw draw(57);
    for (int i = 0; i < 20; ++i) {
        auto p = draw.balanced();
        CHECK(check_parity(p, t, -1) <= 1e-12);
        p.eta_b = p.eta_a;
        CHECK(check_parity(p, t, 1) <= 1e-12);
    }
    DimensionlessParams broken;
    broken.eta_b = -0.5;
    CHECK(check_parity(broken, t, -1) > 1e-3);
    CHECK(check_parity(broken, t, 1) > 1e-3);
}

TEST_CASE("Schwinger algebra") {
    FockTruncation t;
    const auto r = check_schwinger(t);
    CHECK(r.commutator <= 1e-12);
    CHECK(r.sz_number <= 1e-12);
    CHECK(r.casimir <= 1e-12);

    const auto s = schwinger_operators(t);
    const std::vector<std::size_t> one{t.index(1, 0, 0), t.index(0, 1, 0)};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block(s.sx, one));
    CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-15));
    // Casimir on N = 1 and N = 2 by hand: N(N + 2) = 3 and 8.
    const OperatorMatrix cas = s.sx * s.sx + s.sy * s.sy + 4.0 * s.sz * s.sz;
    for (auto i : one) CHECK(std::abs(cas(static_cast<long>(i), static_cast<long>(i)) - 3.0) < 1e-14);
    for (auto i : {t.index(2, 0, 0), t.index(1, 1, 0), t.index(0, 2, 0)})
        CHECK(std::abs(cas(static_cast<long>(i), static_cast<long>(i)) - 8.0) < 1e-14);
    // [S_x, S_y] = -4 i S_z on the one-photon pair, element by element.
    const OperatorMatrix com = s.sx * s.sy - s.sy * s.sx;
    const auto i10 = static_cast<long>(t.index(1, 0, 0));
    CHECK(std::abs(com(i10, i10) - oracle::cplx(0.0, -2.0)) < 1e-14);
}

TEST_CASE("operator csv lists nonzero entries") {
    FockTruncation t{2, 2, 2};
    const auto n = total_photon_number(t);
    const auto csv = operator_csv(n);
    CHECK(csv.rfind("row,col,re,im\n", 0) == 0);
    long nonzero = 0;
    for (long i = 0; i < n.rows(); ++i) nonzero += n(i, i) != 0.0;
    CHECK(std::count(csv.begin(), csv.end(), '\n') == nonzero + 1);
}

}
