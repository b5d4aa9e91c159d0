#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ftq/channel.hpp"
#include "ftq/coherent_info.hpp"

namespace ftq {

// 1 − e^{−1/8}: largest admissible ε·L.
double max_accuracy_lipschitz_product();

// Inputs shared by the space-overhead formulas.
struct BoundParams {
    int d = 0;               // logical qubits
    int g = 1;               // gate size
    double eps = 0.0;        // accuracy, in (0, 0.11)
    double lipschitz = 1.0;  // L
    std::optional<int> gates;  // G
    std::optional<double> alpha;

    // ε ∈ (0, 0.11), L > 0, ε·L ≤ 1 − e^{−1/8}, d ≥ 1, g ≥ 1, G ≥ 1, α > 1.
    void validate() const;
};

// ln(1/(1 − εL)); validates ε ∈ (0, 0.11), L > 0 and ε·L ≤ 1 − e^{−1/8}.
double log_slack(double eps, double lipschitz);

struct BoundValue {
    double value = 0.0;
    // Nonpositive, or weaker than the trivial bound for that quantity.
    bool vacuous = false;
    std::string formula;
};

// Which per-gate fidelity product constrains the allocation.
enum class FidelityConstraint {
    kClassicalAssisted,  // Π(1 − ε_i/2) ≥ 1 − εL
    kUnassisted,         // Π(1 − ε_i) ≥ 1 − εL
};

struct EpsilonAllocation {
    std::vector<double> eps_i;
};

// (Ic + h2(ε_i)) / (1 − 2ε_i) for ε_i ∈ [0, 0.5).
double oneshot_converse(double eps_i, double ic);

bool allocation_feasible(const EpsilonAllocation& alloc, double eps, double lipschitz,
                         FidelityConstraint constraint = FidelityConstraint::kClassicalAssisted);
// Σ ε_i ≤ 2 ln(1/(1−εL)), the linear relaxation of the product constraint.
bool allocation_relaxed_feasible(const EpsilonAllocation& alloc, double eps, double lipschitz);

// Σ_i oneshot_converse(ε_i, Ic_g) without a feasibility check.
double lemma1_objective(const EpsilonAllocation& alloc, double ic_g);

// Upper bound on d for a feasible allocation; throws ValidationError naming
// the violated product constraint otherwise.
double lemma1_rhs(const EpsilonAllocation& alloc, double eps, double lipschitz, double ic_g,
                  FidelityConstraint constraint = FidelityConstraint::kClassicalAssisted);

// max Σ Ic/(1−2ε_i) s.t. Σ ε_i ≤ 2 ln(1/(1−εL)): Ic·[(G−1) + 1/(1 − 4 ln(1/(1−εL)))].
double p1_optimum(int gates, double eps, double lipschitz, double ic_g);
// max (1/(1 − 4c)) Σ h2(ε_i) s.t. Σ ε_i ≤ 2c, c = ln(1/(1−εL)):
// G/(1 − 4c) · h2(2c/G).
double p3_optimum(int gates, double eps, double lipschitz);

// N ≥ (d − k·Ic) / (Ic/g + G/(g(G−1)) · k · h2((2g/d)c)), k = 1/(1 − 4c).
BoundValue thm1_bound(const BoundParams& params, double ic_g);
// N ≥ d / (Ic/g + (ln(4d/g) + 8/7) / (2(d−g) ln 2)) − 2g, for d ≥ 2g.
BoundValue prop1_bound(int d, int g, double ic_g);
// lim N/d ≥ g / Ic_g.
BoundValue corollary1_overhead(int g, double ic_g);
// N ≥ (g/4) exp(2 ln2 d − 4/3) − 1, when Ic(N^⊗g) = 0.
BoundValue prop2_bound(int d, int g);
// d ≤ G·Ic_α + (α/(ln2 (α−1))) · 2c/(1 − 2c).
BoundValue appendixD_bound(int gates, double eps, double lipschitz, double alpha, double ic_alpha);
// d_max = α / (3 ln2 (α−1)).
BoundValue appendixD_dmax(double alpha);

struct CapacityRow {
    int k = 0;
    double ic = 0.0;
    double ratio = 0.0;  // k / Ic_k, +inf when Ic_k = 0
    OptimizationReport report;
};

struct CapacityComparison {
    std::vector<CapacityRow> rows;
    double min_ratio = 0.0;
    int argmin_k = 0;
    // Finite k only ever gives an upper estimate of inf_k k/Ic(N^⊗k).
    bool upper_estimate = true;
};

CapacityComparison capacity_comparison(const QuantumChannel& channel, int k_max, const OptimizerOptions& opts = {});

// Numeric cross-check for the allocation problems: maximizes Σ f(ε_i) over
// ε ∈ [0, cap)^G with Σ ε_i ≤ budget. Multi-start projected gradient ascent,
// plus an exhaustive grid when G ≤ 3.
struct SeparableObjective {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

struct AllocationOptimum {
    double value = 0.0;
    std::vector<double> eps_i;
};

AllocationOptimum maximize_separable_allocation(const SeparableObjective& term, int gates, double budget,
                                                int grid_points = 240);

// The three allocation problems as separable terms.
SeparableObjective p1_term(double ic_g);
SeparableObjective p2_term();
SeparableObjective p3_term(double eps, double lipschitz);

// Euclidean projection onto {x ≥ 0, Σ x ≤ budget}.
std::vector<double> project_capped_simplex(std::vector<double> x, double budget);

}  // namespace ftq
