#pragma once

// Semi-classical equations of motion for the membrane quadratures and the
// two optical fields, integrated with fixed-step RK4.

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "optodicke/meanfield.hpp"
#include "optodicke/model.hpp"

namespace optodicke::dynamics {

struct StateVector {
    double x = 0.0;
    double p = 0.0;
    double re_a = 0.0;
    double im_a = 0.0;
    double re_b = 0.0;
    double im_b = 0.0;

    std::array<double, 6> as_array() const { return {x, p, re_a, im_a, re_b, im_b}; }
    static StateVector from_array(const std::array<double, 6>& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }
};

struct IntegratorConfig {
    double dt = 1e-3;
    double t_max = 2000.0;
    double residual_tol = 1e-9;
    std::size_t stride = 100; // trajectory decimation

    void validate() const;
};

// Step actually used: min(dt, 0.01 / max(g, kappa, 1)).
double effective_dt(const DimensionlessParams& p, const IntegratorConfig& cfg);

StateVector eom_rhs(const DimensionlessParams& p, const StateVector& s);

StateVector rk4_step(const DimensionlessParams& p, const StateVector& s, double dt);

double norm(const StateVector& s);

// State sitting on a mean-field steady state with p = 0.
StateVector state_from_steady(const meanfield::SteadyState& ss);

struct TrajectoryPoint {
    double t = 0.0;
    StateVector s;
};

// Integrates from init to t_end with the effective step; keeps every
// stride-th point plus the first and last.
std::vector<TrajectoryPoint> integrate(const DimensionlessParams& p, const StateVector& init, double t_end,
                                       const IntegratorConfig& cfg);

struct RelaxResult {
    meanfield::SteadyState steady;
    StateVector final_state;
    double t = 0.0;
    double mean_residual = 0.0;
};

// Integrates from init (x displaced by +1e-3) until the residual norm
// averaged over one membrane period drops below residual_tol. Throws
// NumericalError on divergence or when t_max is reached.
RelaxResult relax_to_steady(const DimensionlessParams& p, const StateVector& init, const IntegratorConfig& cfg);

// Bisection in lambda on whether a kicked start at the origin ends up
// displaced (|x| beyond the kick, or a growing envelope when t_max runs
// out). Range is absolute lambda; stops when the bracket is below
// 1e-4 of its midpoint and returns the midpoint.
double locate_bifurcation(const DimensionlessParams& p, std::pair<double, double> lambda_range,
                          const IntegratorConfig& cfg);

inline constexpr const char* trajectory_csv_header = "t,x,p,re_a,im_a,re_b,im_b";
std::string trajectory_csv(const std::vector<TrajectoryPoint>& traj);

} // namespace optodicke::dynamics
