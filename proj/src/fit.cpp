#include "optodicke/fit.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "optodicke/error.hpp"

namespace optodicke::fit {

Line least_squares(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "least squares needs matching inputs with >= 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, "least squares needs distinct abscissae");
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

double log_log_slope(std::span<const double> t, std::span<const double> y) {
    require(t.size() == y.size(), "log-log fit needs matching inputs");
    std::vector<double> lt(t.size()), ly(y.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        require(t[i] > 0.0 && y[i] > 0.0, "log-log fit needs positive data");
        lt[i] = std::log(t[i]);
        ly[i] = std::log(y[i]);
    }
    return least_squares(lt, ly).slope;
}

double log_log_slope_corrected(std::span<const double> t, std::span<const double> y) {
    require(t.size() == y.size() && t.size() >= 4, "corrected fit needs >= 4 matching points");
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        require(t[k] > 0.0 && y[k] > 0.0, "log-log fit needs positive data");
        A(i, 0) = 1.0;
        A(i, 1) = std::log(t[k]);
        A(i, 2) = t[k];
        b(i) = std::log(y[k]);
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    return c(1);
}

} // namespace optodicke::fit
