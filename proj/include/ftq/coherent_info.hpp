#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ftq/channel.hpp"
#include "ftq/linalg.hpp"

namespace ftq {

// Settings for the multi-restart ascent over ρ = AA†/Tr(AA†).
struct OptimizerOptions {
    int restarts = 16;
    int max_iters = 2000;
    double initial_step = 0.1;
    // Backtracking factor; an accepted step grows the trial step by its inverse.
    double step_decay = 0.5;
    double grad_tol = 1e-7;
    std::uint64_t seed = 0;
    // Ranks used for random restarts, cycled. Empty means full rank.
    std::vector<int> rank_schedule;
    // Central finite differences instead of the analytic gradient.
    bool finite_differences = false;
    // Worker threads for restarts; 0 reads FTQ_THREADS, else hardware concurrency.
    int threads = 0;
    // Random restarts of the inner Rényi minimization over σ_B.
    int inner_restarts = 4;

    // Throws ValidationError naming the offending field.
    void validate() const;
};

struct OptimizationReport {
    double value = 0.0;  // bits
    DensityMatrix argmax = DensityMatrix::maximally_mixed(1);
    std::vector<double> restart_values;
    std::vector<int> iterations;
    std::vector<bool> converged;
    // What each restart started from: "maximally_mixed", "product_seed", "pure", "random_rank<k>".
    std::vector<std::string> restart_kinds;
    // Set for values with no optimality guarantee beyond the restart policy
    // (Rényi quantities).
    bool heuristic = false;
};

// S(N(ρ)) − S(N^c(ρ)) in bits.
double coherent_information_at(const QuantumChannel& channel, const DensityMatrix& rho);

// Best local maximum of the coherent information over multiple restarts.
// Restarts always include the maximally mixed state, a pure state, and, for
// channels built by tensor_power, the tensor power of the base channel's
// maximizer, so the reported value is superadditive across powers.
OptimizationReport maximize_coherent_information(const QuantumChannel& channel,
                                                 const OptimizerOptions& opts = {});

int resolve_thread_count(int requested);

namespace detail {

double coherent_information(const QuantumChannel& channel, const CMatrix& rho);

// Value of A ↦ Ic(AA†/Tr AA†) and, if `grad` is non-null, its gradient with
// respect to the real and imaginary parts of A (packed as a complex matrix).
double coherent_information_objective(const QuantumChannel& channel, const CMatrix& a, CMatrix* grad);

// AA†/Tr(AA†), exactly Hermitian.
CMatrix normalized_gram(const CMatrix& a);

// Objective over A with optional gradient output.
using AscentObjective = std::function<double(const CMatrix& a, CMatrix* grad)>;

CMatrix finite_difference_gradient(const AscentObjective& f, const CMatrix& a, double h = 1e-6);

struct Seed {
    CMatrix a;
    std::string kind;
};

// Shared multi-restart driver: runs backtracking gradient ascent from each
// fixed seed, then from random Ginibre starts until opts.restarts is reached.
OptimizationReport multi_restart_ascent(int dim, const AscentObjective& objective,
                                        std::vector<Seed> fixed_seeds, const OptimizerOptions& opts);

}  // namespace detail

}  // namespace ftq
