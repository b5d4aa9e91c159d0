#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftq/bounds.hpp"
#include "ftq/channel.hpp"
#include "ftq/coherent_info.hpp"

namespace ftq {

inline constexpr double kDefaultTolZero = 1e-4;
inline constexpr double kDefaultTolParam = 1e-3;
inline constexpr int kCoarseScanPoints = 17;

struct SweepPoint {
    double param = 0.0;
    double ic = 0.0;
    // prop1_bound(d, g, ic); absent when d < 2g.
    std::optional<BoundValue> prop1;
    bool converged = true;
};

struct SweepResult {
    NoiseFamily family;
    int g = 1;
    int d = 0;
    std::vector<SweepPoint> points;  // ascending in param
    std::optional<double> threshold;
    std::optional<std::pair<double, double>> bracket;
};

// Maximizes Ic(N(p)^⊗g) at each grid point. The threshold estimate is the
// midpoint of the first adjacent pair where Ic drops from above tol_zero to
// at or below it.
SweepResult sweep_family(const NoiseFamily& family, int g, std::vector<double> grid, int d,
                         const OptimizerOptions& opts = {}, double tol_zero = kDefaultTolZero);

struct ThresholdPoint {
    double param = 0.0;
    double ic = 0.0;
};

struct ThresholdResult {
    double threshold = 0.0;
    std::pair<double, double> bracket;
    double ic_lo = 0.0;  // value at bracket.first, > tol_zero
    double ic_hi = 0.0;  // value at bracket.second, ≤ tol_zero
    // Every evaluation, sorted by parameter.
    std::vector<ThresholdPoint> path;
    bool heuristic = false;
};

// Coarse scan over the family range, then bisection until the bracket is no
// wider than tol_param. Throws ValidationError when the endpoints do not
// straddle tol_zero and NumericalError when Ic increases with p by more than
// tol_zero along the evaluated points.
ThresholdResult find_threshold(const NoiseFamily& family, int g, double tol_zero = kDefaultTolZero,
                               double tol_param = kDefaultTolParam, const OptimizerOptions& opts = {});

// Same search on the Rényi coherent information at order alpha.
ThresholdResult find_renyi_threshold(const NoiseFamily& family, int g, double alpha,
                                     double tol_zero = kDefaultTolZero, double tol_param = kDefaultTolParam,
                                     const OptimizerOptions& opts = {});

namespace detail {

// The search behind find_threshold for an arbitrary nonincreasing function.
ThresholdResult bisect_threshold(double range_lo, double range_hi, const std::function<double(double)>& ic_at,
                                 double tol_zero, double tol_param);

}  // namespace detail

// lo:hi:steps with steps ≥ 1 points, inclusive of both ends.
std::vector<double> parse_grid(const std::string& text);

}  // namespace ftq
