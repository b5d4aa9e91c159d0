#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftq/errors.hpp"
#include "ftq/linalg.hpp"

namespace ftq {

inline constexpr double kCompletenessTol = 1e-10;
inline constexpr double kFileCompletenessTol = 1e-8;
// Cap on env_dim * out_dim * in_dim for Kraus sets built by tensor_power.
inline constexpr long kMaxKrausEntries = 1L << 24;

// Errors raised while reading a channel file. All are validation
// failures; the subclasses let callers tell the failure kinds apart.
class ChannelFileError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};
class ChannelParseError : public ChannelFileError {
  public:
    using ChannelFileError::ChannelFileError;
};
class ChannelDimensionError : public ChannelFileError {
  public:
    using ChannelFileError::ChannelFileError;
};
class ChannelCompletenessError : public ChannelFileError {
  public:
    using ChannelFileError::ChannelFileError;
};

// CPTP map in Kraus form, ρ ↦ Σ K_i ρ K_i†. Immutable.
class QuantumChannel {
  public:
    // Throws ValidationError unless all operators share a shape and
    // ‖Σ K_i† K_i − I‖_max ≤ kCompletenessTol.
    QuantumChannel(std::vector<CMatrix> kraus, std::string label);

    int in_dim() const { return in_dim_; }
    int out_dim() const { return out_dim_; }
    int env_dim() const { return static_cast<int>(kraus_.size()); }
    const std::vector<CMatrix>& kraus_ops() const { return kraus_; }
    const std::string& label() const { return label_; }

    // Rows [i*out_dim, (i+1)*out_dim) hold K_i: the Stinespring isometry
    // with the environment index as the slow coordinate.
    const CMatrix& stacked() const { return stacked_; }

    // Set when the channel was produced by tensor_power(base, g) with g > 1.
    const QuantumChannel* power_base() const { return base_.get(); }
    int power() const { return power_; }

    // ‖Σ K_i† K_i − I‖_max.
    double completeness_error() const;

  private:
    friend QuantumChannel tensor_power(const QuantumChannel& channel, int g);

    std::vector<CMatrix> kraus_;
    std::string label_;
    int in_dim_ = 0;
    int out_dim_ = 0;
    CMatrix stacked_;
    std::shared_ptr<const QuantumChannel> base_;
    int power_ = 1;
};

DensityMatrix apply(const QuantumChannel& channel, const DensityMatrix& rho);

// Environment output of the Stinespring dilation: M[i][j] = Tr(K_i ρ K_j†).
DensityMatrix complementary_apply(const QuantumChannel& channel, const DensityMatrix& rho);

QuantumChannel tensor_power(const QuantumChannel& channel, int g);

// N2 ∘ N1 with Kraus set {K2_j K1_i}.
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);

QuantumChannel identity_channel(int dim);

// ρ ↦ (1−p)ρ + p·I/2.
QuantumChannel depolarizing(double p);
// Off-diagonals scaled by (1−2p).
QuantumChannel dephasing(double p);
QuantumChannel amplitude_damping(double gamma);

// Channel file JSON (see README). Operators are renormalized by
// (Σ K†K)^{-1/2} after the completeness check so the loaded channel meets
// kCompletenessTol exactly.
QuantumChannel parse_channel_json(std::string_view text);
QuantumChannel load_channel(const std::string& path);
std::string channel_to_json(const QuantumChannel& channel);

// Unvalidated kernels on raw matrices, for hot loops.
namespace detail {
CMatrix apply(const QuantumChannel& channel, const CMatrix& rho);
CMatrix complementary_apply(const QuantumChannel& channel, const CMatrix& rho);
// Adjoint maps: Tr[X N(ρ)] = Tr[N†(X) ρ].
CMatrix adjoint_apply(const QuantumChannel& channel, const CMatrix& x);
CMatrix complementary_adjoint_apply(const QuantumChannel& channel, const CMatrix& y);
}  // namespace detail

enum class FamilyId { kDepolarizing, kDephasing, kAmplitudeDamping, kCustomFile };

// Single-parameter noise family over [lo, hi] ⊆ [0, 1]. A custom family
// mixes the identity with a loaded channel: N(p) = (1−p)·id + p·N_file.
struct NoiseFamily {
    FamilyId id = FamilyId::kDepolarizing;
    std::string parameter_name = "p";
    double lo = 0.0;
    double hi = 1.0;
    std::shared_ptr<const QuantumChannel> custom;
    std::string source;

    static NoiseFamily depolarizing();
    static NoiseFamily dephasing();
    static NoiseFamily amplitude_damping();
    static NoiseFamily custom_file(const std::string& path);
    static NoiseFamily custom_channel(QuantumChannel channel, std::string source = "inline");
    // "depolarizing" | "dephasing" | "amplitude_damping" | "custom_file".
    static NoiseFamily from_name(std::string_view name, const std::string& path = {});

    NoiseFamily with_range(double new_lo, double new_hi) const;
    std::string name() const;
    bool contains(double p) const { return p >= lo && p <= hi; }
    QuantumChannel instantiate(double p) const;
};

}  // namespace ftq
