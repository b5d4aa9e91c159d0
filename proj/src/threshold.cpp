#include "ftq/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "ftq/renyi.hpp"

namespace ftq {

namespace {

std::string num(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

void check_gate_size(int g) {
    if (g < 1) throw ValidationError("gate size g must be at least 1, got " + std::to_string(g));
}

void check_tolerances(double tol_zero, double tol_param) {
    if (!(tol_zero > 0.0)) throw ValidationError("tol_zero must be positive, got " + num(tol_zero));
    if (!(tol_param > 0.0)) throw ValidationError("tol_param must be positive, got " + num(tol_param));
}

}  // namespace

namespace detail {

ThresholdResult bisect_threshold(double range_lo, double range_hi, const std::function<double(double)>& ic_at,
                                 double tol_zero, double tol_param) {
    check_tolerances(tol_zero, tol_param);
    if (!(range_lo < range_hi)) throw ValidationError("threshold search range must satisfy lo < hi");
    std::vector<ThresholdPoint> path;
    auto record = [&](double p) {
        const double ic = ic_at(p);
        auto pos = std::lower_bound(path.begin(), path.end(), p,
                                    [](const ThresholdPoint& a, double b) { return a.param < b; });
        pos = path.insert(pos, {p, ic});
        const std::size_t k = static_cast<std::size_t>(pos - path.begin());
        const std::size_t first = k == 0 ? 0 : k - 1;
        const std::size_t last = std::min(k + 1, path.size() - 1);
        for (std::size_t j = first; j < last; ++j) {
            if (path[j + 1].ic > path[j].ic + tol_zero) {
                const std::size_t a = j == 0 ? 0 : j - 1;
                const std::size_t b = std::min(a + 2, path.size() - 1);
                std::string triple;
                for (std::size_t t = a; t <= b; ++t) {
                    triple += (t == a ? "(" : ", (") + num(path[t].param) + ", " + num(path[t].ic) + ")";
                }
                throw NumericalError("coherent information increases with the noise parameter at (p, Ic) = " +
                                     triple);
            }
        }
        return ic;
    };

    const double ic_lo = record(range_lo);
    const double ic_hi = record(range_hi);
    if (!(ic_lo > tol_zero)) {
        throw ValidationError("no sign change: Ic at range low end p = " + num(range_lo) + " is " + num(ic_lo) +
                              ", not above tol_zero = " + num(tol_zero));
    }
    if (ic_hi > tol_zero) {
        throw ValidationError("no sign change: Ic at range high end p = " + num(range_hi) + " is " + num(ic_hi) +
                              ", above tol_zero = " + num(tol_zero));
    }

    double lo = range_lo;
    double hi = range_hi;
    double value_lo = ic_lo;
    double value_hi = ic_hi;
    // The whole scan runs so that monotonicity is checked across the range.
    bool crossed = false;
    for (int k = 1; k + 1 < kCoarseScanPoints; ++k) {
        const double p = range_lo + (range_hi - range_lo) * k / (kCoarseScanPoints - 1);
        const double ic = record(p);
        if (crossed) continue;
        if (ic > tol_zero) {
            lo = p;
            value_lo = ic;
        } else {
            hi = p;
            value_hi = ic;
            crossed = true;
        }
    }
    while (hi - lo > tol_param) {
        const double mid = 0.5 * (lo + hi);
        const double ic = record(mid);
        if (ic > tol_zero) {
            lo = mid;
            value_lo = ic;
        } else {
            hi = mid;
            value_hi = ic;
        }
    }

    ThresholdResult result;
    result.bracket = {lo, hi};
    result.threshold = 0.5 * (lo + hi);
    result.ic_lo = value_lo;
    result.ic_hi = value_hi;
    result.path = std::move(path);
    return result;
}

}  // namespace detail

std::vector<double> parse_grid(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
    if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
        throw ValidationError("--grid expects lo:hi:steps, got '" + text + "'");
    }
    double lo = 0.0;
    double hi = 0.0;
    long steps = 0;
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, first);
        const std::string b = text.substr(first + 1, second - first - 1);
        const std::string c = text.substr(second + 1);
        lo = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        hi = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        steps = std::stol(c, &used);
        if (used != c.size()) throw std::invalid_argument(c);
    } catch (const std::logic_error&) {
        throw ValidationError("--grid expects lo:hi:steps with numeric fields, got '" + text + "'");
    }
    if (steps < 1 || steps > 100000) throw ValidationError("--grid steps must lie in [1, 100000]");
    if (steps == 1) {
        if (lo != hi) throw ValidationError("--grid with one step needs lo == hi");
        return {lo};
    }
    if (!(hi > lo)) throw ValidationError("--grid needs hi > lo");
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (long k = 0; k < steps; ++k) grid[k] = lo + (hi - lo) * static_cast<double>(k) / (steps - 1);
    grid.back() = hi;
    return grid;
}

SweepResult sweep_family(const NoiseFamily& family, int g, std::vector<double> grid, int d,
                         const OptimizerOptions& opts, double tol_zero) {
    check_gate_size(g);
    opts.validate();
    if (grid.empty()) throw ValidationError("sweep grid is empty");
    for (double p : grid) {
        if (!family.contains(p)) {
            throw ValidationError("grid point " + num(p) + " outside " + family.name() + " range [" +
                                  num(family.lo) + ", " + num(family.hi) + "]");
        }
    }
    std::sort(grid.begin(), grid.end());

    SweepResult result{family, g, d, {}, std::nullopt, std::nullopt};
    for (double p : grid) {
        const OptimizationReport report = maximize_coherent_information(tensor_power(family.instantiate(p), g), opts);
        SweepPoint point;
        point.param = p;
        point.ic = report.value;
        point.converged = std::all_of(report.converged.begin(), report.converged.end(), [](bool c) { return c; });
        if (d >= 2 * g) point.prop1 = prop1_bound(d, g, std::max(report.value, 0.0));
        result.points.push_back(std::move(point));
    }
    for (std::size_t k = 0; k + 1 < result.points.size(); ++k) {
        if (result.points[k].ic > tol_zero && result.points[k + 1].ic <= tol_zero) {
            result.bracket = std::make_pair(result.points[k].param, result.points[k + 1].param);
            result.threshold = 0.5 * (result.points[k].param + result.points[k + 1].param);
            break;
        }
    }
    return result;
}

ThresholdResult find_threshold(const NoiseFamily& family, int g, double tol_zero, double tol_param,
                               const OptimizerOptions& opts) {
    check_gate_size(g);
    check_tolerances(tol_zero, tol_param);
    opts.validate();
    return detail::bisect_threshold(
        family.lo, family.hi,
        [&](double p) { return maximize_coherent_information(tensor_power(family.instantiate(p), g), opts).value; },
        tol_zero, tol_param);
}

ThresholdResult find_renyi_threshold(const NoiseFamily& family, int g, double alpha, double tol_zero,
                                     double tol_param, const OptimizerOptions& opts) {
    check_gate_size(g);
    check_tolerances(tol_zero, tol_param);
    opts.validate();
    if (!(alpha > 1.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be a finite real > 1");
    ThresholdResult result = detail::bisect_threshold(
        family.lo, family.hi,
        [&](double p) {
            return maximize_renyi_coherent_information(tensor_power(family.instantiate(p), g), alpha, opts).value;
        },
        tol_zero, tol_param);
    result.heuristic = true;
    return result;
}

}  // namespace ftq
