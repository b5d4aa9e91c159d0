#include "ftq/coherent_info.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace ftq {

namespace {

// Eigenvalues are floored here before taking logs in gradients.
constexpr double kLogFloor = 1e-15;
constexpr double kMaxStep = 10.0;
constexpr double kMinStep = 1e-14;
// Consecutive accepted steps with negligible gain that count as stationary.
constexpr int kStallWindow = 20;

CMatrix log2_psd(const HermitianSpectrum& spec) {
    return spec.apply([](double l) { return std::log2(std::max(l, kLogFloor)); });
}

struct AscentResult {
    CMatrix a;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

AscentResult ascend(const detail::AscentObjective& objective, CMatrix a, const OptimizerOptions& opts) {
    auto gradient = [&](const CMatrix& x, double* value) {
        CMatrix g;
        if (opts.finite_differences) {
            *value = objective(x, nullptr);
            g = detail::finite_difference_gradient(objective, x);
        } else {
            *value = objective(x, &g);
        }
        return g;
    };

    a /= a.norm();
    AscentResult r;
    double f = 0.0;
    CMatrix g = gradient(a, &f);
    double step = opts.initial_step;
    int flat_steps = 0;
    int it = 0;
    for (; it < opts.max_iters; ++it) {
        const double gnorm = g.norm();
        if (!(gnorm > opts.grad_tol)) {
            r.converged = true;
            break;
        }
        bool accepted = false;
        CMatrix trial;
        double f_trial = f;
        while (step >= kMinStep) {
            trial = a + step * g;
            trial /= trial.norm();
            f_trial = objective(trial, nullptr);
            if (f_trial > f) {
                accepted = true;
                break;
            }
            step *= opts.step_decay;
        }
        if (!accepted) {
            // No ascent left at machine precision.
            r.converged = true;
            break;
        }
        const double gain = f_trial - f;
        a = std::move(trial);
        g = gradient(a, &f);
        step = std::min(step / opts.step_decay, kMaxStep);
        flat_steps = gain <= 1e-14 * std::max(1.0, std::abs(f)) ? flat_steps + 1 : 0;
        if (flat_steps >= kStallWindow) {
            r.converged = true;
            ++it;
            break;
        }
    }
    r.a = std::move(a);
    r.value = f;
    r.iterations = it;
    return r;
}

}  // namespace

void OptimizerOptions::validate() const {
    auto bad = [](const std::string& field, const std::string& why) {
        throw ValidationError("optimizer option '" + field + "' " + why);
    };
    if (restarts < 1) bad("restarts", "must be at least 1");
    if (max_iters < 1) bad("max_iters", "must be at least 1");
    if (!(initial_step > 0.0)) bad("initial_step", "must be positive");
    if (!(step_decay > 0.0 && step_decay < 1.0)) bad("step_decay", "must lie in (0, 1)");
    if (!(grad_tol > 0.0)) bad("grad_tol", "must be positive");
    if (threads < 0) bad("threads", "must be nonnegative");
    if (inner_restarts < 0) bad("inner_restarts", "must be nonnegative");
    for (int r : rank_schedule) {
        if (r < 1) bad("rank_schedule", "entries must be positive");
    }
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FTQ_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

CMatrix normalized_gram(const CMatrix& a) {
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

double coherent_information(const QuantumChannel& channel, const CMatrix& rho) {
    const CMatrix out = detail::apply(channel, rho);
    const CMatrix env = detail::complementary_apply(channel, rho);
    return hermitian_entropy(out) - hermitian_entropy(env);
}

double coherent_information_objective(const QuantumChannel& channel, const CMatrix& a, CMatrix* grad) {
    const double t = a.squaredNorm();
    const CMatrix rho = normalized_gram(a);
    const CMatrix out = detail::apply(channel, rho);
    const CMatrix env = detail::complementary_apply(channel, rho);
    const HermitianSpectrum out_spec = eigh(out);
    const HermitianSpectrum env_spec = eigh(env);
    const double value = entropy_of_spectrum(out_spec.eigenvalues) - entropy_of_spectrum(env_spec.eigenvalues);
    if (grad != nullptr) {
        // dIc = Tr[G dρ] with G = −N†(log2 N(ρ)) + N^c†(log2 N^c(ρ)); identity
        // terms of dS vanish because Tr dρ = 0.
        CMatrix g = detail::complementary_adjoint_apply(channel, log2_psd(env_spec)) -
                    detail::adjoint_apply(channel, log2_psd(out_spec));
        g = 0.5 * (g + g.adjoint()).eval();
        const Complex shift = (g * rho).trace();
        g.diagonal().array() -= shift.real();
        *grad = (2.0 / t) * g * a;
    }
    return value;
}

CMatrix finite_difference_gradient(const AscentObjective& f, const CMatrix& a, double h) {
    CMatrix grad(a.rows(), a.cols());
    CMatrix x = a;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const Complex orig = x(i, j);
            x(i, j) = orig + h;
            const double fr_plus = f(x, nullptr);
            x(i, j) = orig - h;
            const double fr_minus = f(x, nullptr);
            x(i, j) = orig + Complex(0, h);
            const double fi_plus = f(x, nullptr);
            x(i, j) = orig - Complex(0, h);
            const double fi_minus = f(x, nullptr);
            x(i, j) = orig;
            grad(i, j) = Complex((fr_plus - fr_minus) / (2 * h), (fi_plus - fi_minus) / (2 * h));
        }
    }
    return grad;
}

OptimizationReport multi_restart_ascent(int dim, const AscentObjective& objective,
                                        std::vector<Seed> fixed_seeds, const OptimizerOptions& opts) {
    opts.validate();
    std::vector<Seed> seeds = std::move(fixed_seeds);
    const int total = std::max<int>(opts.restarts, static_cast<int>(seeds.size()));
    const std::vector<int> ranks = opts.rank_schedule.empty() ? std::vector<int>{dim} : opts.rank_schedule;
    for (int k = static_cast<int>(seeds.size()), r = 0; k < total; ++k, ++r) {
        const int rank = std::min(ranks[r % ranks.size()], dim);
        std::mt19937_64 rng(derive_seed(opts.seed, static_cast<std::uint64_t>(k)));
        seeds.push_back({random_ginibre(dim, rank, rng), "random_rank" + std::to_string(rank)});
    }

    std::vector<AscentResult> results(seeds.size());
    const int workers = std::min<int>(resolve_thread_count(opts.threads), static_cast<int>(seeds.size()));
    if (workers <= 1) {
        for (std::size_t k = 0; k < seeds.size(); ++k) results[k] = ascend(objective, seeds[k].a, opts);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = w; k < seeds.size(); k += workers) {
                        results[k] = ascend(objective, seeds[k].a, opts);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    OptimizationReport report;
    std::size_t best = 0;
    for (std::size_t k = 0; k < results.size(); ++k) {
        report.restart_values.push_back(results[k].value);
        report.iterations.push_back(results[k].iterations);
        report.converged.push_back(results[k].converged);
        report.restart_kinds.push_back(seeds[k].kind);
        if (results[k].value > results[best].value) best = k;
    }
    report.value = results[best].value;
    report.argmax = DensityMatrix(normalized_gram(results[best].a));
    return report;
}

}  // namespace detail

double coherent_information_at(const QuantumChannel& channel, const DensityMatrix& rho) {
    if (rho.dim() != channel.in_dim()) {
        throw ValidationError("coherent_information_at: state dimension " + std::to_string(rho.dim()) +
                              " does not match channel input dimension " + std::to_string(channel.in_dim()));
    }
    return detail::coherent_information(channel, rho.matrix());
}

OptimizationReport maximize_coherent_information(const QuantumChannel& channel, const OptimizerOptions& opts) {
    opts.validate();
    const int dim = channel.in_dim();
    std::vector<detail::Seed> seeds;
    seeds.push_back({CMatrix::Identity(dim, dim), "maximally_mixed"});
    if (const QuantumChannel* base = channel.power_base(); base != nullptr && channel.power() > 1) {
        const OptimizationReport single = maximize_coherent_information(*base, opts);
        const CMatrix root = psd_sqrt(single.argmax.matrix());
        CMatrix seed = root;
        for (int k = 1; k < channel.power(); ++k) seed = tensor_product(seed, root);
        seeds.push_back({std::move(seed), "product_seed"});
    }
    CMatrix pure = CMatrix::Zero(dim, 1);
    pure(0, 0) = 1.0;
    seeds.push_back({std::move(pure), "pure"});

    auto objective = [&channel](const CMatrix& a, CMatrix* grad) {
        return detail::coherent_information_objective(channel, a, grad);
    };
    return detail::multi_restart_ascent(dim, objective, std::move(seeds), opts);
}

}  // namespace ftq
