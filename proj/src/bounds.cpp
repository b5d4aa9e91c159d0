#include "ftq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace ftq {

namespace {

const double kLn2 = std::log(2.0);
// Slack on the ε·L ≤ 1 − e^{−1/8} boundary for rounding in the product.
constexpr double kBoundaryRelTol = 1e-12;

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

void require_gates(int gates, int minimum, const char* op) {
    if (gates < minimum) {
        throw ValidationError(std::string(op) + ": gate count G must be at least " + std::to_string(minimum) +
                              ", got " + std::to_string(gates));
    }
}

void require_nonnegative_ic(double ic, const char* op) {
    if (!(ic >= 0.0) || !std::isfinite(ic)) {
        throw ValidationError(std::string(op) + ": coherent information must be finite and nonnegative, got " +
                              num(ic));
    }
}

}  // namespace

double max_accuracy_lipschitz_product() { return 1.0 - std::exp(-0.125); }

double log_slack(double eps, double lipschitz) {
    if (!(eps > 0.0 && eps < 0.11)) throw ValidationError("accuracy eps must lie in (0, 0.11), got " + num(eps));
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
        throw ValidationError("Lipschitz constant L must be positive, got " + num(lipschitz));
    }
    const double product = eps * lipschitz;
    const double limit = max_accuracy_lipschitz_product();
    if (product > limit * (1.0 + kBoundaryRelTol)) {
        throw ValidationError("eps*L = " + num(product) + " exceeds 1 - exp(-1/8) = " + num(limit) +
                              " (condition L <= (1 - e^{-1/8})/eps)");
    }
    return std::min(-std::log1p(-product), 0.125);
}

void BoundParams::validate() const {
    if (d < 1) throw ValidationError("d must be a positive integer, got " + std::to_string(d));
    if (g < 1) throw ValidationError("g must be a positive integer, got " + std::to_string(g));
    log_slack(eps, lipschitz);
    if (gates && *gates < 1) throw ValidationError("G must be a positive integer, got " + std::to_string(*gates));
    if (alpha && !(*alpha > 1.0)) throw ValidationError("alpha must exceed 1, got " + num(*alpha));
}

double oneshot_converse(double eps_i, double ic) {
    if (!(eps_i >= 0.0 && eps_i < 0.5)) {
        throw ValidationError("oneshot_converse: eps_i must lie in [0, 0.5), got " + num(eps_i) +
                              " (bound is vacuous at 0.5)");
    }
    require_nonnegative_ic(ic, "oneshot_converse");
    return (ic + binary_entropy(eps_i)) / (1.0 - 2.0 * eps_i);
}

bool allocation_feasible(const EpsilonAllocation& alloc, double eps, double lipschitz,
                         FidelityConstraint constraint) {
    log_slack(eps, lipschitz);
    const double divisor = constraint == FidelityConstraint::kClassicalAssisted ? 2.0 : 1.0;
    double product = 1.0;
    for (double e : alloc.eps_i) {
        if (!(e >= 0.0 && e < 0.5)) return false;
        product *= 1.0 - e / divisor;
    }
    return product >= 1.0 - eps * lipschitz;
}

bool allocation_relaxed_feasible(const EpsilonAllocation& alloc, double eps, double lipschitz) {
    const double budget = 2.0 * log_slack(eps, lipschitz);
    double sum = 0.0;
    for (double e : alloc.eps_i) {
        if (!(e >= 0.0 && e < 0.5)) return false;
        sum += e;
    }
    return sum <= budget * (1.0 + kBoundaryRelTol);
}

double lemma1_objective(const EpsilonAllocation& alloc, double ic_g) {
    double total = 0.0;
    for (double e : alloc.eps_i) total += oneshot_converse(e, ic_g);
    return total;
}

double lemma1_rhs(const EpsilonAllocation& alloc, double eps, double lipschitz, double ic_g,
                  FidelityConstraint constraint) {
    if (alloc.eps_i.empty()) throw ValidationError("lemma1_rhs: allocation is empty");
    if (!allocation_feasible(alloc, eps, lipschitz, constraint)) {
        const bool assisted = constraint == FidelityConstraint::kClassicalAssisted;
        throw ValidationError(std::string("lemma1_rhs: infeasible allocation, violates ") +
                              (assisted ? "prod(1 - eps_i/2)" : "prod(1 - eps_i)") + " >= 1 - eps*L = " +
                              num(1.0 - eps * lipschitz));
    }
    return lemma1_objective(alloc, ic_g);
}

double p1_optimum(int gates, double eps, double lipschitz, double ic_g) {
    require_gates(gates, 1, "p1_optimum");
    require_nonnegative_ic(ic_g, "p1_optimum");
    const double c = log_slack(eps, lipschitz);
    return ic_g * ((gates - 1) + 1.0 / (1.0 - 4.0 * c));
}

double p3_optimum(int gates, double eps, double lipschitz) {
    require_gates(gates, 1, "p3_optimum");
    const double c = log_slack(eps, lipschitz);
    return gates / (1.0 - 4.0 * c) * binary_entropy(2.0 * c / gates);
}

BoundValue thm1_bound(const BoundParams& params, double ic_g) {
    params.validate();
    require_nonnegative_ic(ic_g, "thm1_bound");
    if (!params.gates) throw ValidationError("thm1_bound: gate count G is required");
    require_gates(*params.gates, 2, "thm1_bound");
    const double d = params.d;
    const double g = params.g;
    const double big_g = *params.gates;
    const double c = log_slack(params.eps, params.lipschitz);
    const double k = 1.0 / (1.0 - 4.0 * c);
    const double h_arg = 2.0 * g / d * c;
    if (h_arg > 0.5) {
        throw ValidationError("thm1_bound: (2g/d) ln(1/(1-eps L)) = " + num(h_arg) + " exceeds 1/2");
    }
    const double denom = ic_g / g + big_g / (g * (big_g - 1.0)) * binary_entropy(h_arg) * k;
    if (!(denom > 0.0)) throw NumericalError("thm1_bound: degenerate denominator (Ic = 0 and h2 term = 0)");
    BoundValue out;
    out.value = (d - k * ic_g) / denom;
    out.vacuous = out.value < d;
    out.formula =
        "(d - Ic/(1-4ln(1/(1-eps L)))) / (Ic/g + G/(g(G-1)) * h2((2g/d) ln(1/(1-eps L))) / (1-4ln(1/(1-eps L))))";
    return out;
}

BoundValue prop1_bound(int d, int g, double ic_g) {
    if (g < 1) throw ValidationError("prop1_bound: g must be positive, got " + std::to_string(g));
    if (d < 2 * g) {
        throw ValidationError("prop1_bound: requires d >= 2g, got d = " + std::to_string(d) +
                              ", g = " + std::to_string(g));
    }
    require_nonnegative_ic(ic_g, "prop1_bound");
    const double dd = d;
    const double gg = g;
    const double log_term = (std::log(4.0 * dd / gg) + 8.0 / 7.0) / (2.0 * (dd - gg) * kLn2);
    BoundValue out;
    out.value = dd / (ic_g / gg + log_term) - 2.0 * gg;
    out.vacuous = out.value < dd;
    out.formula = "d / (Ic/g + (ln(4d/g) + 8/7) / (2(d-g) ln2)) - 2g";
    return out;
}

BoundValue corollary1_overhead(int g, double ic_g) {
    if (g < 1) throw ValidationError("corollary1_overhead: g must be positive");
    if (!(ic_g > 0.0)) {
        throw ValidationError("corollary1_overhead: Ic(N^g) = " + num(ic_g) +
                              " is not positive; the noise is past threshold (use the threshold command)");
    }
    BoundValue out;
    out.value = g / ic_g;
    out.vacuous = out.value < 1.0;
    out.formula = "g / Ic";
    return out;
}

BoundValue prop2_bound(int d, int g) {
    if (d < 1 || g < 1) throw ValidationError("prop2_bound: d and g must be positive");
    BoundValue out;
    out.value = g / 4.0 * std::exp(2.0 * kLn2 * d - 4.0 / 3.0) - 1.0;
    out.vacuous = out.value < d;
    out.formula = "(g/4) exp(2 ln2 d - 4/3) - 1";
    return out;
}

BoundValue appendixD_bound(int gates, double eps, double lipschitz, double alpha, double ic_alpha) {
    require_gates(gates, 1, "appendixD_bound");
    if (!(alpha > 1.0)) throw ValidationError("appendixD_bound: alpha must exceed 1, got " + num(alpha));
    require_nonnegative_ic(ic_alpha, "appendixD_bound");
    const double c = log_slack(eps, lipschitz);
    BoundValue out;
    out.value = gates * ic_alpha + alpha / (kLn2 * (alpha - 1.0)) * (2.0 * c / (1.0 - 2.0 * c));
    out.vacuous = false;
    out.formula = "G Ic_alpha + (alpha/(ln2 (alpha-1))) * (2ln(1/(1-eps L))) / (1 - 2ln(1/(1-eps L)))";
    return out;
}

BoundValue appendixD_dmax(double alpha) {
    if (!(alpha > 1.0)) throw ValidationError("appendixD_dmax: alpha must exceed 1, got " + num(alpha));
    BoundValue out;
    out.value = std::isinf(alpha) ? 1.0 / (3.0 * kLn2) : alpha / (3.0 * kLn2 * (alpha - 1.0));
    out.vacuous = out.value < 1.0;
    out.formula = "alpha / (3 ln2 (alpha-1))";
    return out;
}

CapacityComparison capacity_comparison(const QuantumChannel& channel, int k_max, const OptimizerOptions& opts) {
    if (k_max < 1) throw ValidationError("capacity_comparison: k_max must be at least 1");
    CapacityComparison out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        CapacityRow row;
        row.k = k;
        row.report = maximize_coherent_information(tensor_power(channel, k), opts);
        row.ic = row.report.value;
        row.ratio = row.ic > 0.0 ? k / row.ic : std::numeric_limits<double>::infinity();
        if (row.ratio < out.min_ratio) {
            out.min_ratio = row.ratio;
            out.argmin_k = k;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

SeparableObjective p1_term(double ic_g) {
    return {[ic_g](double x) { return ic_g / (1.0 - 2.0 * x); },
            [ic_g](double x) { return 2.0 * ic_g / ((1.0 - 2.0 * x) * (1.0 - 2.0 * x)); }};
}

namespace {
double h2_derivative(double x) {
    // Diverges at 0; a large finite slope keeps projected steps well defined.
    if (x <= 1e-300) return 1e3;
    return std::log2((1.0 - x) / x);
}
}  // namespace

SeparableObjective p2_term() {
    return {[](double x) { return binary_entropy(x) / (1.0 - 2.0 * x); },
            [](double x) {
                const double s = 1.0 - 2.0 * x;
                return h2_derivative(x) / s + 2.0 * binary_entropy(x) / (s * s);
            }};
}

SeparableObjective p3_term(double eps, double lipschitz) {
    const double k = 1.0 / (1.0 - 4.0 * log_slack(eps, lipschitz));
    return {[k](double x) { return k * binary_entropy(x); }, [k](double x) { return k * h2_derivative(x); }};
}

std::vector<double> project_capped_simplex(std::vector<double> x, double budget) {
    for (double& v : x) v = std::max(v, 0.0);
    if (std::accumulate(x.begin(), x.end(), 0.0) <= budget) return x;
    // Projection onto {x ≥ 0, Σx = budget}.
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        cumulative += sorted[j];
        const double t = (cumulative - budget) / static_cast<double>(j + 1);
        if (sorted[j] - t > 0.0) theta = t;
    }
    for (double& v : x) v = std::max(v - theta, 0.0);
    return x;
}

AllocationOptimum maximize_separable_allocation(const SeparableObjective& term, int gates, double budget,
                                                int grid_points) {
    if (gates < 1) throw ValidationError("maximize_separable_allocation: need at least one gate");
    if (!(budget > 0.0 && budget < 0.5)) {
        throw ValidationError("maximize_separable_allocation: budget must lie in (0, 0.5)");
    }
    auto total = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += term.value(v);
        return s;
    };

    AllocationOptimum best;
    best.value = -std::numeric_limits<double>::infinity();
    auto consider = [&](const std::vector<double>& x) {
        const double v = total(x);
        if (v > best.value) {
            best.value = v;
            best.eps_i = x;
        }
    };

    if (gates <= 3 && grid_points > 0) {
        std::vector<double> table(grid_points + 1);
        for (int n = 0; n <= grid_points; ++n) table[n] = term.value(budget * n / grid_points);
        std::vector<int> idx(gates, 0);
        // Enumerate compositions with Σ idx ≤ grid_points.
        std::function<void(int, int, double)> walk = [&](int pos, int remaining, double acc) {
            if (pos == gates) {
                if (acc > best.value) {
                    best.value = acc;
                    best.eps_i.assign(gates, 0.0);
                    for (int j = 0; j < gates; ++j) best.eps_i[j] = budget * idx[j] / grid_points;
                }
                return;
            }
            for (int n = 0; n <= remaining; ++n) {
                idx[pos] = n;
                walk(pos + 1, remaining - n, acc + table[n]);
            }
        };
        walk(0, grid_points, 0.0);
    }

    std::vector<std::vector<double>> starts;
    if (!best.eps_i.empty()) starts.push_back(best.eps_i);
    starts.emplace_back(gates, budget / gates);
    starts.emplace_back(gates, 0.0);
    for (int j = 0; j < gates; ++j) {
        std::vector<double> vertex(gates, 0.0);
        vertex[j] = budget;
        starts.push_back(std::move(vertex));
    }
    std::mt19937_64 rng(derive_seed(0x5eed, static_cast<std::uint64_t>(gates)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int r = 0; r < 8; ++r) {
        std::vector<double> x(gates);
        for (double& v : x) v = unit(rng) * budget;
        starts.push_back(project_capped_simplex(std::move(x), budget));
    }

    for (auto x : starts) {
        double f = total(x);
        double step = 1e-2 * budget;
        for (int it = 0; it < 5000 && step > 1e-18; ++it) {
            std::vector<double> trial(gates);
            for (int j = 0; j < gates; ++j) trial[j] = x[j] + step * term.derivative(x[j]);
            trial = project_capped_simplex(std::move(trial), budget);
            const double f_trial = total(trial);
            if (f_trial > f) {
                x = std::move(trial);
                f = f_trial;
                step *= 1.5;
            } else {
                step *= 0.5;
            }
        }
        consider(x);
    }
    return best;
}

}  // namespace ftq
