#include "optodicke/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "optodicke/error.hpp"

namespace optodicke::linalg {

namespace {

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

void balance(RealMatrix& m) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    const std::size_t n = m.n;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(m(j, i));
                r += std::abs(m(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                for (std::size_t j = 0; j < n; ++j) m(i, j) /= f;
                for (std::size_t j = 0; j < n; ++j) m(j, i) *= f;
            }
        }
    }
}

// Similarity reduction to upper Hessenberg form by stabilized elimination.
void hessenberg(RealMatrix& m) {
    const std::size_t n = m.n;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        double x = 0.0;
        std::size_t piv = k;
        for (std::size_t j = k; j < n; ++j)
            if (std::abs(m(j, k - 1)) > std::abs(x)) {
                x = m(j, k - 1);
                piv = j;
            }
        if (piv != k) {
            for (std::size_t j = k - 1; j < n; ++j) std::swap(m(piv, j), m(k, j));
            for (std::size_t j = 0; j < n; ++j) std::swap(m(j, piv), m(j, k));
        }
        if (x == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) {
            double y = m(i, k - 1);
            if (y == 0.0) continue;
            y /= x;
            m(i, k - 1) = 0.0;
            for (std::size_t j = k; j < n; ++j) m(i, j) -= y * m(k, j);
            for (std::size_t j = 0; j < n; ++j) m(j, k) += y * m(j, i);
        }
    }
    for (std::size_t i = 2; i < n; ++i)
        for (std::size_t j = 0; j + 1 < i; ++j) m(i, j) = 0.0;
}

// Francis double-shift QR on an upper Hessenberg matrix.
std::vector<cplx> hessenberg_qr(RealMatrix& a, int max_iterations) {
    const int n = static_cast<int>(a.n);
    std::vector<double> wr(a.n, 0.0), wi(a.n, 0.0);
    auto A = [&](int i, int j) -> double& { return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(A(i, j));

    int nn = n - 1;
    double t = 0.0;
    double p = 0.0, q = 0.0, r = 0.0, s = 0.0, w = 0.0, x = 0.0, y = 0.0, z = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l >= 1; --l) {
                s = std::abs(A(l - 1, l - 1)) + std::abs(A(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(A(l, l - 1)) + s == s) {
                    A(l, l - 1) = 0.0;
                    break;
                }
            }
            x = A(nn, nn);
            if (l == nn) {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                --nn;
            } else {
                y = A(nn - 1, nn - 1);
                w = A(nn, nn - 1) * A(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        wr[nn - 1] = wr[nn] = x + z;
                        if (z != 0.0) wr[nn] = x - w / z;
                        wi[nn - 1] = wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if (its == max_iterations)
                        throw NumericalError("QR iteration did not converge",
                                             {{"iterations", static_cast<double>(its)},
                                              {"active_size", static_cast<double>(nn + 1)}});
                    if (its > 0 && its % 10 == 0) {
                        // exceptional shift
                        t += x;
                        for (int i = 0; i <= nn; ++i) A(i, i) -= x;
                        s = std::abs(A(nn, nn - 1)) + std::abs(A(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    for (; m >= l; --m) {
                        z = A(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / A(m + 1, m) + A(m, m + 1);
                        q = A(m + 1, m + 1) - z - r - s;
                        r = A(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(A(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v = std::abs(p) * (std::abs(A(m - 1, m - 1)) + std::abs(z) + std::abs(A(m + 1, m + 1)));
                        if (u + v == v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        A(i, i - 2) = 0.0;
                        if (i != m + 2) A(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = A(k, k - 1);
                            q = A(k + 1, k - 1);
                            r = 0.0;
                            if (k != nn - 1) r = A(k + 2, k - 1);
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) A(k, k - 1) = -A(k, k - 1);
                        } else {
                            A(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            p = A(k, j) + q * A(k + 1, j);
                            if (k != nn - 1) {
                                p += r * A(k + 2, j);
                                A(k + 2, j) -= p * z;
                            }
                            A(k + 1, j) -= p * y;
                            A(k, j) -= p * x;
                        }
                        const int mmin = nn < k + 3 ? nn : k + 3;
                        for (int i = l; i <= mmin; ++i) {
                            p = x * A(i, k) + y * A(i, k + 1);
                            if (k != nn - 1) {
                                p += z * A(i, k + 2);
                                A(i, k + 2) -= p * r;
                            }
                            A(i, k + 1) -= p * q;
                            A(i, k) -= p;
                        }
                    }
                }
            }
        } while (nn >= 0 && l < nn - 1);
    }
    std::vector<cplx> out(a.n);
    for (std::size_t i = 0; i < a.n; ++i) out[i] = {wr[i], wi[i]};
    return out;
}

} // namespace

double inf_norm(const RealMatrix& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) row += std::abs(m(i, j));
        best = std::max(best, row);
    }
    return best;
}

std::vector<cplx> eigenvalues(RealMatrix m, int max_iterations) {
    require(m.a.size() == m.n * m.n, "matrix storage does not match its size");
    for (double v : m.a) require(std::isfinite(v), "matrix has non-finite entries");
    if (m.n == 0) return {};
    balance(m);
    hessenberg(m);
    return hessenberg_qr(m, max_iterations);
}

void merge_clusters(std::vector<cplx>& values, double tol) {
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(values[i] - values[j]) < tol) parent[find(j)] = find(i);
    std::vector<cplx> sum(n, 0.0);
    std::vector<int> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sum[find(i)] += values[i];
        ++count[find(i)];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (count[root] > 1) values[i] = sum[root] / static_cast<double>(count[root]);
    }
}

std::vector<cplx> eigenvector(const RealMatrix& m, cplx lambda) {
    // Right singular vector of the smallest singular value of (m - lambda I):
    // its residual is that singular value, which stays at roundoff level
    // even for defective eigenvalues where inverse iteration stalls.
    const auto n = static_cast<Eigen::Index>(m.n);
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - (i == j ? lambda : cplx(0.0));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXcd col = svd.matrixV().col(n - 1);
    std::vector<cplx> v(m.n);
    for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = col(i);
    return v;
}

double residual(const RealMatrix& m, cplx lambda, const std::vector<cplx>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
        cplx r = -lambda * v[i];
        for (std::size_t j = 0; j < m.n; ++j) r += m(i, j) * v[j];
        acc += std::norm(r);
    }
    return std::sqrt(acc);
}

} // namespace optodicke::linalg
