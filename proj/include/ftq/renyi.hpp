#pragma once

#include "ftq/channel.hpp"
#include "ftq/coherent_info.hpp"
#include "ftq/linalg.hpp"

namespace ftq {

// Eigenvalues of σ below this are lifted to it before fractional powers.
inline constexpr double kRenyiEigenFloor = 1e-12;
// ⟨v|ρ|v⟩ allowed on a null direction v of σ.
inline constexpr double kSupportTol = 1e-8;

// Sandwiched Rényi divergence in bits,
//   (1/(α−1)) log2 Tr[(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α],  α > 1.
// Throws ValidationError if supp(ρ) ⊄ supp(σ).
double sandwiched_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha);

// −H̃_α(R|B) of (id_R ⊗ N)(φ_ρ) for a purification φ_ρ of ρ, i.e.
// min over σ_B of D̃_α(ω_RB ‖ I_R ⊗ σ_B). The inner minimization is a
// fixed-point iteration from the B marginal plus opts.inner_restarts random
// starts. Heuristic: no optimality certificate.
double renyi_coherent_information_at(const QuantumChannel& channel, const DensityMatrix& rho, double alpha,
                                     const OptimizerOptions& opts = {});

// Outer maximization over ρ with the same restart policy as
// maximize_coherent_information. The report is flagged heuristic.
OptimizationReport maximize_renyi_coherent_information(const QuantumChannel& channel, double alpha,
                                                       const OptimizerOptions& opts = {});

namespace detail {

// ω_RB = (id_R ⊗ N)(|φ⟩⟨φ|) with |φ⟩ = (I ⊗ A)Σ|kk⟩ / ‖A‖. R has dimension
// A.cols() and is the slow index.
CMatrix reference_output_state(const QuantumChannel& channel, const CMatrix& a);

struct ConditionalRenyiMinimum {
    double value = 0.0;  // min_σ D̃_α(ω ‖ I_R ⊗ σ) in bits
    CMatrix sigma;       // minimizing σ_B
    int iterations = 0;
};

// Minimizes D̃_α(ω ‖ I_R ⊗ σ) over states σ on B.
ConditionalRenyiMinimum minimize_conditional_renyi(const CMatrix& omega, int dim_r, int dim_b, double alpha,
                                                   int random_restarts, std::uint64_t seed);

// Q(σ) = Tr[(Γ^γ ω Γ^γ)^α], Γ = I_R ⊗ σ, γ = (1−α)/2α.
double conditional_renyi_trace(const CMatrix& omega, const CMatrix& sigma, int dim_r, double alpha);

// Value and Danskin gradient of A ↦ I_c(N; α) at ρ = AA†/Tr AA†.
double renyi_objective(const QuantumChannel& channel, const CMatrix& a, double alpha, int inner_restarts,
                       std::uint64_t seed, CMatrix* grad);

}  // namespace detail

}  // namespace ftq
