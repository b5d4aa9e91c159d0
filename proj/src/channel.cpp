#include "ftq/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ftq {

namespace {

std::string fmt_param(double p) {
    std::ostringstream os;
    os.precision(12);
    os << p;
    return os.str();
}

void check_unit_interval(const char* what, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(std::string(what) + ": parameter " + fmt_param(p) + " outside [0, 1]");
    }
}

CMatrix pauli(char which) {
    CMatrix m(2, 2);
    switch (which) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: m = CMatrix::Identity(2, 2);
    }
    return m;
}

CMatrix completeness_residual(const std::vector<CMatrix>& kraus) {
    const auto in = kraus.front().cols();
    CMatrix sum = CMatrix::Zero(in, in);
    for (const auto& k : kraus) sum.noalias() += k.adjoint() * k;
    return sum - CMatrix::Identity(in, in);
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<CMatrix> kraus, std::string label)
    : kraus_(std::move(kraus)), label_(std::move(label)) {
    if (kraus_.empty()) throw ValidationError("channel '" + label_ + "': no Kraus operators");
    in_dim_ = static_cast<int>(kraus_.front().cols());
    out_dim_ = static_cast<int>(kraus_.front().rows());
    if (in_dim_ < 1 || out_dim_ < 1) throw ValidationError("channel '" + label_ + "': empty Kraus operator");
    for (const auto& k : kraus_) {
        if (k.rows() != out_dim_ || k.cols() != in_dim_) {
            throw ValidationError("channel '" + label_ + "': Kraus operators differ in shape");
        }
    }
    if (in_dim_ > kMaxDim || out_dim_ > kMaxDim) {
        throw ValidationError("channel '" + label_ + "': dimension exceeds " + std::to_string(kMaxDim));
    }
    const double err = completeness_error();
    if (!(err <= kCompletenessTol)) {
        throw ValidationError("channel '" + label_ + "': completeness violated, max |ΣK†K − I| = " +
                              fmt_param(err));
    }
    stacked_.resize(static_cast<Eigen::Index>(kraus_.size()) * out_dim_, in_dim_);
    for (std::size_t i = 0; i < kraus_.size(); ++i) {
        stacked_.block(static_cast<Eigen::Index>(i) * out_dim_, 0, out_dim_, in_dim_) = kraus_[i];
    }
}

double QuantumChannel::completeness_error() const {
    return completeness_residual(kraus_).cwiseAbs().maxCoeff();
}

namespace detail {

CMatrix apply(const QuantumChannel& channel, const CMatrix& rho) {
    const int out = channel.out_dim();
    CMatrix result = CMatrix::Zero(out, out);
    for (const auto& k : channel.kraus_ops()) result.noalias() += k * rho * k.adjoint();
    return result;
}

CMatrix complementary_apply(const QuantumChannel& channel, const CMatrix& rho) {
    // M = Σ_b T_b S_b† over output rows b, with T = S ρ and S the stacked isometry.
    const int env = channel.env_dim();
    const int out = channel.out_dim();
    const CMatrix& s = channel.stacked();
    const CMatrix t = s * rho;
    CMatrix m = CMatrix::Zero(env, env);
    using Strided = Eigen::Map<const CMatrix, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
    for (int b = 0; b < out; ++b) {
        // Rows i*out + b for i = 0..env-1.
        const Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic> stride(t.rows(), out);
        Strided tb(t.data() + b, env, t.cols(), stride);
        Strided sb(s.data() + b, env, s.cols(), stride);
        m.noalias() += tb * sb.adjoint();
    }
    return m;
}

CMatrix adjoint_apply(const QuantumChannel& channel, const CMatrix& x) {
    const int in = channel.in_dim();
    CMatrix result = CMatrix::Zero(in, in);
    for (const auto& k : channel.kraus_ops()) result.noalias() += k.adjoint() * x * k;
    return result;
}

CMatrix complementary_adjoint_apply(const QuantumChannel& channel, const CMatrix& y) {
    // Σ_ij Y_ji K_j† K_i = Σ_j K_j† Z_j with Z_j = Σ_i Y_ji K_i.
    const auto& kraus = channel.kraus_ops();
    const int env = channel.env_dim();
    const int in = channel.in_dim();
    CMatrix result = CMatrix::Zero(in, in);
    CMatrix z(channel.out_dim(), in);
    for (int j = 0; j < env; ++j) {
        z.setZero();
        for (int i = 0; i < env; ++i) z += y(j, i) * kraus[i];
        result.noalias() += kraus[j].adjoint() * z;
    }
    return result;
}

}  // namespace detail

namespace {

void require_input_dim(const QuantumChannel& channel, const DensityMatrix& rho, const char* op) {
    if (rho.dim() != channel.in_dim()) {
        throw ValidationError(std::string(op) + ": state dimension " + std::to_string(rho.dim()) +
                              " does not match channel input dimension " +
                              std::to_string(channel.in_dim()));
    }
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

DensityMatrix apply(const QuantumChannel& channel, const DensityMatrix& rho) {
    require_input_dim(channel, rho, "apply");
    return DensityMatrix(hermitize(detail::apply(channel, rho.matrix())));
}

DensityMatrix complementary_apply(const QuantumChannel& channel, const DensityMatrix& rho) {
    require_input_dim(channel, rho, "complementary_apply");
    return DensityMatrix(hermitize(detail::complementary_apply(channel, rho.matrix())));
}

QuantumChannel tensor_power(const QuantumChannel& channel, int g) {
    if (g < 1) throw ValidationError("tensor_power: power must be at least 1, got " + std::to_string(g));
    if (g == 1) return channel;
    long env = 1, out = 1, in = 1;
    for (int k = 0; k < g; ++k) {
        env *= channel.env_dim();
        out *= channel.out_dim();
        in *= channel.in_dim();
        if (in > kMaxDim || out > kMaxDim || env * out * in > kMaxKrausEntries) {
            throw ValidationError("tensor_power: " + channel.label() + "^" + std::to_string(g) +
                                  " exceeds the memory budget");
        }
    }
    std::vector<CMatrix> ops = channel.kraus_ops();
    for (int k = 1; k < g; ++k) {
        std::vector<CMatrix> next;
        next.reserve(ops.size() * channel.kraus_ops().size());
        for (const auto& a : ops) {
            for (const auto& b : channel.kraus_ops()) next.push_back(tensor_product(a, b));
        }
        ops = std::move(next);
    }
    QuantumChannel result(std::move(ops), channel.label() + "^" + std::to_string(g));
    result.base_ = std::make_shared<const QuantumChannel>(channel);
    result.power_ = g;
    return result;
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
    if (first.out_dim() != second.in_dim()) {
        throw ValidationError("compose: output dimension " + std::to_string(first.out_dim()) +
                              " of '" + first.label() + "' does not match input dimension " +
                              std::to_string(second.in_dim()) + " of '" + second.label() + "'");
    }
    std::vector<CMatrix> ops;
    ops.reserve(first.kraus_ops().size() * second.kraus_ops().size());
    for (const auto& k2 : second.kraus_ops()) {
        for (const auto& k1 : first.kraus_ops()) ops.push_back(k2 * k1);
    }
    return QuantumChannel(std::move(ops), second.label() + "∘" + first.label());
}

QuantumChannel identity_channel(int dim) {
    if (dim < 1) throw ValidationError("identity_channel: dimension must be positive");
    return QuantumChannel({CMatrix::Identity(dim, dim)}, "identity");
}

QuantumChannel depolarizing(double p) {
    check_unit_interval("depolarizing", p);
    return QuantumChannel({std::sqrt(1.0 - 0.75 * p) * pauli('I'), std::sqrt(p / 4) * pauli('X'),
                           std::sqrt(p / 4) * pauli('Y'), std::sqrt(p / 4) * pauli('Z')},
                          "depolarizing(" + fmt_param(p) + ")");
}

QuantumChannel dephasing(double p) {
    check_unit_interval("dephasing", p);
    return QuantumChannel({std::sqrt(1.0 - p) * pauli('I'), std::sqrt(p) * pauli('Z')},
                          "dephasing(" + fmt_param(p) + ")");
}

QuantumChannel amplitude_damping(double gamma) {
    check_unit_interval("amplitude_damping", gamma);
    CMatrix k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
    k1 << 0, std::sqrt(gamma), 0, 0;
    return QuantumChannel({k0, k1}, "amplitude_damping(" + fmt_param(gamma) + ")");
}

QuantumChannel parse_channel_json(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ChannelParseError(std::string("channel file: malformed JSON: ") + e.what());
    }
    auto fail = [](const std::string& why) -> void { throw ChannelParseError("channel file: " + why); };
    if (!doc.is_object()) fail("top level must be an object");
    for (const char* key : {"in_dim", "out_dim", "kraus"}) {
        if (!doc.contains(key)) fail(std::string("missing field '") + key + "'");
    }
    if (!doc["in_dim"].is_number_integer() || !doc["out_dim"].is_number_integer()) {
        fail("'in_dim' and 'out_dim' must be integers");
    }
    const long in = doc["in_dim"].get<long>();
    const long out = doc["out_dim"].get<long>();
    if (in < 1 || out < 1 || in > kMaxDim || out > kMaxDim) {
        throw ChannelDimensionError("channel file: dimensions must lie in [1, " + std::to_string(kMaxDim) + "]");
    }
    std::string label = "file";
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) fail("'label' must be a string");
        label = doc["label"].get<std::string>();
    }
    const json& kraus = doc["kraus"];
    if (!kraus.is_array() || kraus.empty()) fail("'kraus' must be a nonempty array");

    std::vector<CMatrix> ops;
    for (std::size_t k = 0; k < kraus.size(); ++k) {
        const json& op = kraus[k];
        const std::string where = "kraus[" + std::to_string(k) + "]";
        if (!op.is_array()) fail(where + " must be an array of rows");
        if (static_cast<long>(op.size()) != out) {
            throw ChannelDimensionError("channel file: " + where + " has " + std::to_string(op.size()) +
                                        " rows, expected out_dim = " + std::to_string(out));
        }
        CMatrix m(out, in);
        for (long r = 0; r < out; ++r) {
            const json& row = op[r];
            if (!row.is_array()) fail(where + " row " + std::to_string(r) + " must be an array");
            if (static_cast<long>(row.size()) != in) {
                throw ChannelDimensionError("channel file: " + where + " row " + std::to_string(r) + " has " +
                                            std::to_string(row.size()) + " entries, expected in_dim = " +
                                            std::to_string(in));
            }
            for (long c = 0; c < in; ++c) {
                const json& z = row[c];
                if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                    fail(where + " entry (" + std::to_string(r) + "," + std::to_string(c) +
                         ") must be [re, im]");
                }
                m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
            }
        }
        if (!m.allFinite()) fail(where + " has non-finite entries");
        ops.push_back(std::move(m));
    }

    const CMatrix residual = completeness_residual(ops);
    const double err = residual.cwiseAbs().maxCoeff();
    if (!(err <= kFileCompletenessTol)) {
        throw ChannelCompletenessError("channel file: completeness violated, max |ΣK†K − I| = " +
                                       fmt_param(err) + " exceeds " + fmt_param(kFileCompletenessTol));
    }
    // K_i ← K_i S^{-1/2}, S = Σ K†K.
    const CMatrix s = residual + CMatrix::Identity(in, in);
    const CMatrix inv_root = eigh(s).apply([](double l) { return 1.0 / std::sqrt(l); });
    for (auto& op : ops) op = (op * inv_root).eval();
    return QuantumChannel(std::move(ops), std::move(label));
}

QuantumChannel load_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ChannelFileError("channel file: cannot read '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_channel_json(buffer.str());
}

std::string channel_to_json(const QuantumChannel& channel) {
    using nlohmann::json;
    json kraus = json::array();
    for (const auto& k : channel.kraus_ops()) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < k.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < k.cols(); ++c) row.push_back({k(r, c).real(), k(r, c).imag()});
            rows.push_back(std::move(row));
        }
        kraus.push_back(std::move(rows));
    }
    json doc = {{"label", channel.label()},
                {"in_dim", channel.in_dim()},
                {"out_dim", channel.out_dim()},
                {"kraus", std::move(kraus)}};
    return doc.dump(2);
}

NoiseFamily NoiseFamily::depolarizing() { return NoiseFamily{FamilyId::kDepolarizing, "p", 0.0, 1.0, {}, {}}; }
// Dephasing at p and 1 − p differ by a unitary, so the family stops at 1/2.
NoiseFamily NoiseFamily::dephasing() { return NoiseFamily{FamilyId::kDephasing, "p", 0.0, 0.5, {}, {}}; }
NoiseFamily NoiseFamily::amplitude_damping() {
    return NoiseFamily{FamilyId::kAmplitudeDamping, "gamma", 0.0, 1.0, {}, {}};
}

NoiseFamily NoiseFamily::custom_channel(QuantumChannel channel, std::string source) {
    if (channel.in_dim() != channel.out_dim()) {
        throw ValidationError("custom_file family: channel must have in_dim == out_dim to mix with identity");
    }
    return NoiseFamily{FamilyId::kCustomFile, "p", 0.0, 1.0,
                       std::make_shared<const QuantumChannel>(std::move(channel)), std::move(source)};
}

NoiseFamily NoiseFamily::custom_file(const std::string& path) { return custom_channel(load_channel(path), path); }

NoiseFamily NoiseFamily::from_name(std::string_view name, const std::string& path) {
    if (name == "depolarizing") return depolarizing();
    if (name == "dephasing") return dephasing();
    if (name == "amplitude_damping" || name == "amplitude-damping") return amplitude_damping();
    if (name == "custom_file" || name == "custom-file") {
        if (path.empty()) throw ValidationError("custom_file family requires a channel file");
        return custom_file(path);
    }
    throw ValidationError("unknown noise family '" + std::string(name) + "'");
}

NoiseFamily NoiseFamily::with_range(double new_lo, double new_hi) const {
    if (!(new_lo >= 0.0 && new_hi <= 1.0 && new_lo < new_hi)) {
        throw ValidationError("noise family range [" + fmt_param(new_lo) + ", " + fmt_param(new_hi) +
                              "] must satisfy 0 <= lo < hi <= 1");
    }
    NoiseFamily copy = *this;
    copy.lo = new_lo;
    copy.hi = new_hi;
    return copy;
}

std::string NoiseFamily::name() const {
    switch (id) {
        case FamilyId::kDepolarizing: return "depolarizing";
        case FamilyId::kDephasing: return "dephasing";
        case FamilyId::kAmplitudeDamping: return "amplitude_damping";
        case FamilyId::kCustomFile: return "custom_file";
    }
    return "unknown";
}

QuantumChannel NoiseFamily::instantiate(double p) const {
    if (!contains(p)) {
        throw ValidationError(name() + ": parameter " + fmt_param(p) + " outside family range [" +
                              fmt_param(lo) + ", " + fmt_param(hi) + "]");
    }
    switch (id) {
        case FamilyId::kDepolarizing: return ftq::depolarizing(p);
        case FamilyId::kDephasing: return ftq::dephasing(p);
        case FamilyId::kAmplitudeDamping: return ftq::amplitude_damping(p);
        case FamilyId::kCustomFile: {
            if (!custom) throw ValidationError("custom_file family has no channel loaded");
            std::vector<CMatrix> ops;
            ops.push_back(std::sqrt(1.0 - p) * CMatrix::Identity(custom->in_dim(), custom->in_dim()));
            for (const auto& k : custom->kraus_ops()) ops.push_back(std::sqrt(p) * k);
            return QuantumChannel(std::move(ops), "mix(" + custom->label() + "," + fmt_param(p) + ")");
        }
    }
    throw ValidationError("unknown noise family");
}

}  // namespace ftq
