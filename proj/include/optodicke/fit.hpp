#pragma once

#include <span>

namespace optodicke::fit {

struct Line {
    double intercept = 0.0;
    double slope = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
Line least_squares(std::span<const double> x, std::span<const double> y);

// Slope of log y against log t.
double log_log_slope(std::span<const double> t, std::span<const double> y);

// Leading exponent s of y ~ t^s with one analytic correction:
// log y = c + s log t + b t. Returns s.
double log_log_slope_corrected(std::span<const double> t, std::span<const double> y);

} // namespace optodicke::fit
