#pragma once

// Small dense real eigenproblems: balancing, Hessenberg reduction and the
// Francis double-shift QR iteration, plus null vectors of (A - lambda I)
// for the eigenvectors.

#include <complex>
#include <cstddef>
#include <vector>

namespace optodicke::linalg {

using cplx = std::complex<double>;

struct RealMatrix {
    std::size_t n = 0;
    std::vector<double> a; // row-major

    RealMatrix() = default;
    explicit RealMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// Max absolute row sum.
double inf_norm(const RealMatrix& m);

// Eigenvalues in the order the QR iteration deflates them. Throws
// NumericalError after max_iterations on a single eigenvalue.
std::vector<cplx> eigenvalues(RealMatrix m, int max_iterations = 100);

// Replaces each group of eigenvalues closer than tol to each other by the
// group mean. Defective eigenvalues come out of QR split by O(sqrt eps);
// their mean is accurate to O(eps).
void merge_clusters(std::vector<cplx>& values, double tol);

// Unit-norm eigenvector for an (approximate) eigenvalue: the right singular
// vector of the smallest singular value of (m - lambda I).
std::vector<cplx> eigenvector(const RealMatrix& m, cplx lambda);

// ||m v - lambda v||.
double residual(const RealMatrix& m, cplx lambda, const std::vector<cplx>& v);

} // namespace optodicke::linalg
