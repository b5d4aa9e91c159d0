#include "ftq/renyi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ftq {

namespace {

constexpr int kInnerMaxIters = 300;
constexpr int kInnerBacktracks = 12;

void check_alpha(double alpha, const char* op) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) {
        std::ostringstream why;
        why << op << ": alpha must be a finite real > 1, got " << alpha;
        throw ValidationError(why.str());
    }
}

CMatrix floored_power(const HermitianSpectrum& spec, double p) {
    return spec.apply([p](double l) { return std::pow(std::max(l, kRenyiEigenFloor), p); });
}

double trace_power(const RVector& eigenvalues, double alpha) {
    double s = 0.0;
    for (double l : eigenvalues) {
        if (l > 0.0) s += std::pow(l, alpha);
    }
    return s;
}

CMatrix normalize_state(CMatrix m) {
    m = 0.5 * (m + m.adjoint()).eval();
    m /= m.trace().real();
    return m;
}

// X = Γ^γ ω Γ^γ with Γ = I_R ⊗ σ.
CMatrix sandwich(const CMatrix& omega, const CMatrix& sigma, int dim_r, double alpha, CMatrix* gamma_power) {
    const double gamma = (1.0 - alpha) / (2.0 * alpha);
    const CMatrix s_gamma = floored_power(eigh(sigma), gamma);
    CMatrix g = tensor_product(CMatrix::Identity(dim_r, dim_r), s_gamma);
    CMatrix x = g * omega * g;
    x = 0.5 * (x + x.adjoint()).eval();
    if (gamma_power != nullptr) *gamma_power = std::move(g);
    return x;
}

}  // namespace

double sandwiched_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha) {
    check_alpha(alpha, "sandwiched_relative_entropy");
    if (rho.dim() != sigma.dim()) throw ValidationError("sandwiched_relative_entropy: dimension mismatch");
    const HermitianSpectrum sig = eigh(sigma.matrix());
    for (Eigen::Index k = 0; k < sig.eigenvalues.size(); ++k) {
        if (sig.eigenvalues[k] < kZeroEigen) {
            const CVector v = sig.eigenvectors.col(k);
            const double overlap = (v.adjoint() * rho.matrix() * v)(0, 0).real();
            if (overlap > kSupportTol) {
                std::ostringstream why;
                why << "sandwiched_relative_entropy: support of rho not contained in support of sigma "
                    << "(overlap " << overlap << " on a null direction)";
                throw ValidationError(why.str());
            }
        }
    }
    const double gamma = (1.0 - alpha) / (2.0 * alpha);
    const CMatrix s_gamma = floored_power(sig, gamma);
    const CMatrix x = s_gamma * rho.matrix() * s_gamma;
    const double q = trace_power(eigh(0.5 * (x + x.adjoint())).eigenvalues, alpha);
    return std::log2(q) / (alpha - 1.0);
}

namespace detail {

CMatrix reference_output_state(const QuantumChannel& channel, const CMatrix& a) {
    const int out = channel.out_dim();
    const int env = channel.env_dim();
    const auto rank = a.cols();
    // Column i of W is vec(K_i A) (column-major), indexed (r, b) -> r*out + b.
    const CMatrix ka = channel.stacked() * a;
    CMatrix w(rank * out, env);
    for (int i = 0; i < env; ++i) {
        const CMatrix block = ka.block(static_cast<Eigen::Index>(i) * out, 0, out, rank);
        w.col(i) = Eigen::Map<const CVector>(block.data(), block.size());
    }
    CMatrix omega = w * w.adjoint();
    omega /= a.squaredNorm();
    return 0.5 * (omega + omega.adjoint());
}

double conditional_renyi_trace(const CMatrix& omega, const CMatrix& sigma, int dim_r, double alpha) {
    return trace_power(eigh(sandwich(omega, sigma, dim_r, alpha, nullptr)).eigenvalues, alpha);
}

ConditionalRenyiMinimum minimize_conditional_renyi(const CMatrix& omega, int dim_r, int dim_b, double alpha,
                                                   int random_restarts, std::uint64_t seed) {
    check_alpha(alpha, "minimize_conditional_renyi");
    const std::vector<int> dims = {dim_r, dim_b};
    const std::vector<int> keep_b = {1};

    // σ ← (σ^{(α−1)/2} F(σ) σ^{(α−1)/2})^{1/α} with F(σ) = Tr_R[(Γ^γ ω Γ^γ)^α],
    // normalized; its fixed points satisfy σ ∝ F(σ).
    auto fixed_point_step = [&](const CMatrix& sigma) {
        const CMatrix x = sandwich(omega, sigma, dim_r, alpha, nullptr);
        const CMatrix x_alpha = eigh(x).apply([alpha](double l) { return l > 0.0 ? std::pow(l, alpha) : 0.0; });
        const CMatrix f = partial_trace(x_alpha, dims, keep_b);
        const CMatrix half = floored_power(eigh(sigma), 0.5 * (alpha - 1.0));
        const CMatrix inner = half * f * half;
        return normalize_state(eigh(0.5 * (inner + inner.adjoint())).apply([alpha](double l) {
            return l > 0.0 ? std::pow(l, 1.0 / alpha) : 0.0;
        }));
    };

    auto run = [&](CMatrix sigma) {
        double q = conditional_renyi_trace(omega, sigma, dim_r, alpha);
        int it = 0;
        for (; it < kInnerMaxIters; ++it) {
            const CMatrix proposal = fixed_point_step(sigma);
            double t = 1.0;
            bool improved = false;
            CMatrix candidate;
            double q_candidate = q;
            for (int b = 0; b < kInnerBacktracks; ++b, t *= 0.5) {
                candidate = t == 1.0 ? proposal : normalize_state((1.0 - t) * sigma + t * proposal);
                q_candidate = conditional_renyi_trace(omega, candidate, dim_r, alpha);
                if (q_candidate < q) {
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
            const double gain = q - q_candidate;
            sigma = std::move(candidate);
            q = q_candidate;
            if (gain <= 1e-15 * q) break;
        }
        return std::tuple<CMatrix, double, int>(std::move(sigma), q, it);
    };

    ConditionalRenyiMinimum best;
    double best_q = std::numeric_limits<double>::infinity();
    auto consider = [&](CMatrix start) {
        auto [sigma, q, it] = run(std::move(start));
        best.iterations += it;
        if (q < best_q) {
            best_q = q;
            best.sigma = std::move(sigma);
        }
    };
    consider(normalize_state(partial_trace(omega, dims, keep_b)));
    for (int k = 0; k < random_restarts; ++k) {
        consider(random_density_matrix(dim_b, dim_b, derive_seed(seed, 1000 + k)).matrix());
    }
    best.value = std::log2(best_q) / (alpha - 1.0);
    return best;
}

double renyi_objective(const QuantumChannel& channel, const CMatrix& a, double alpha, int inner_restarts,
                       std::uint64_t seed, CMatrix* grad) {
    const int dim_r = static_cast<int>(a.cols());
    const int dim_b = channel.out_dim();
    const CMatrix omega = reference_output_state(channel, a);
    const ConditionalRenyiMinimum inner =
        minimize_conditional_renyi(omega, dim_r, dim_b, alpha, inner_restarts, seed);
    if (grad != nullptr) {
        // Danskin: differentiate Q at the fixed minimizer σ*.
        CMatrix g_pow;
        const CMatrix x = sandwich(omega, inner.sigma, dim_r, alpha, &g_pow);
        const HermitianSpectrum xs = eigh(x);
        const double q = trace_power(xs.eigenvalues, alpha);
        const CMatrix x_pow = xs.apply([alpha](double l) { return l > 0.0 ? std::pow(l, alpha - 1.0) : 0.0; });
        const CMatrix h = alpha * g_pow * x_pow * g_pow;

        const int out = channel.out_dim();
        const int env = channel.env_dim();
        const double t = a.squaredNorm();
        const CMatrix ka = channel.stacked() * a;
        CMatrix hk(ka.rows(), ka.cols());
        for (int i = 0; i < env; ++i) {
            const CMatrix block = ka.block(static_cast<Eigen::Index>(i) * out, 0, out, dim_r);
            const CVector hc = h * Eigen::Map<const CVector>(block.data(), block.size());
            hk.block(static_cast<Eigen::Index>(i) * out, 0, out, dim_r) =
                Eigen::Map<const CMatrix>(hc.data(), out, dim_r);
        }
        const double h_omega = (h * omega).trace().real();
        const double scale = 2.0 / (t * q * (alpha - 1.0) * std::log(2.0));
        *grad = scale * (channel.stacked().adjoint() * hk - h_omega * a);
    }
    return inner.value;
}

}  // namespace detail

double renyi_coherent_information_at(const QuantumChannel& channel, const DensityMatrix& rho, double alpha,
                                     const OptimizerOptions& opts) {
    check_alpha(alpha, "renyi_coherent_information_at");
    if (rho.dim() != channel.in_dim()) {
        throw ValidationError("renyi_coherent_information_at: state dimension does not match channel input");
    }
    const CMatrix a = psd_sqrt(rho.matrix());
    return detail::renyi_objective(channel, a, alpha, opts.inner_restarts, opts.seed, nullptr);
}

OptimizationReport maximize_renyi_coherent_information(const QuantumChannel& channel, double alpha,
                                                       const OptimizerOptions& opts) {
    check_alpha(alpha, "maximize_renyi_coherent_information");
    opts.validate();
    const int dim = channel.in_dim();
    std::vector<detail::Seed> seeds;
    seeds.push_back({CMatrix::Identity(dim, dim), "maximally_mixed"});
    if (const QuantumChannel* base = channel.power_base(); base != nullptr && channel.power() > 1) {
        const OptimizationReport single = maximize_renyi_coherent_information(*base, alpha, opts);
        const CMatrix root = psd_sqrt(single.argmax.matrix());
        CMatrix seed = root;
        for (int k = 1; k < channel.power(); ++k) seed = tensor_product(seed, root);
        seeds.push_back({std::move(seed), "product_seed"});
    }
    CMatrix pure = CMatrix::Zero(dim, 1);
    pure(0, 0) = 1.0;
    seeds.push_back({std::move(pure), "pure"});

    auto objective = [&](const CMatrix& a, CMatrix* grad) {
        return detail::renyi_objective(channel, a, alpha, opts.inner_restarts, opts.seed, grad);
    };
    OptimizationReport report = detail::multi_restart_ascent(dim, objective, std::move(seeds), opts);
    report.heuristic = true;
    return report;
}

}  // namespace ftq
