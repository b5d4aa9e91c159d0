#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ftq/channel.hpp"
#include "oracles.hpp"

using namespace ftq;

namespace {

DensityMatrix plus_state() {
    CVector v(2);
    v << 1.0, 1.0;
    return DensityMatrix::pure(v);
}

std::vector<QuantumChannel> sample_channels() {
    return {identity_channel(2), depolarizing(0.3),   dephasing(0.2),
            amplitude_damping(0.35), compose(amplitude_damping(0.2), depolarizing(0.1)),
            tensor_power(dephasing(0.1), 2)};
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

}  // namespace

TEST(Apply, IdentityIsIdentity) {
    const DensityMatrix rho = random_density_matrix(3, 3, 1);
    EXPECT_LT((apply(identity_channel(3), rho).matrix() - rho.matrix()).norm(), 1e-12);
}

TEST(Apply, FullDephasingKillsCoherence) {
    EXPECT_LT((apply(dephasing(0.5), plus_state()).matrix() - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(Apply, DepolarizingMatchesFormula) {
    for (double p : {0.0, 0.1, 0.37, 1.0}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const DensityMatrix rho = random_density_matrix(2, 2, seed);
            const CMatrix expected = (1 - p) * rho.matrix() + p * 0.5 * CMatrix::Identity(2, 2);
            EXPECT_LT((apply(depolarizing(p), rho).matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Apply, NamedChannelExamples) {
    const CMatrix a = apply(depolarizing(0.1), DensityMatrix::basis(2, 0)).matrix();
    EXPECT_NEAR(a(0, 0).real(), 0.95, 1e-12);
    EXPECT_NEAR(a(1, 1).real(), 0.05, 1e-12);
    EXPECT_NEAR(apply(dephasing(0.1), plus_state())(0, 1).real(), 0.4, 1e-12);
    const CMatrix ad = apply(amplitude_damping(0.2), DensityMatrix::basis(2, 1)).matrix();
    EXPECT_NEAR(ad(0, 0).real(), 0.2, 1e-12);
    EXPECT_NEAR(ad(1, 1).real(), 0.8, 1e-12);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix rho = random_density_matrix(2, 2, seed);
        EXPECT_LT((apply(depolarizing(1.0), rho).matrix() - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-12);
        EXPECT_LT((apply(amplitude_damping(1.0), rho).matrix() - DensityMatrix::basis(2, 0).matrix()).norm(), 1e-12);
        EXPECT_LT((apply(amplitude_damping(0.0), rho).matrix() - rho.matrix()).norm(), 1e-12);
        EXPECT_LT((apply(dephasing(0.0), rho).matrix() - rho.matrix()).norm(), 1e-12);
        EXPECT_LT((apply(depolarizing(0.0), rho).matrix() - rho.matrix()).norm(), 1e-12);
    }
}

TEST(Apply, ParameterRangeChecked) {
    EXPECT_THROW(depolarizing(-0.1), ValidationError);
    EXPECT_THROW(depolarizing(1.5), ValidationError);
    EXPECT_THROW(dephasing(1.1), ValidationError);
    EXPECT_THROW(amplitude_damping(-1e-3), ValidationError);
    EXPECT_THROW(apply(depolarizing(0.1), DensityMatrix::maximally_mixed(3)), ValidationError);
}

TEST(Apply, PreservesTraceAndPositivity) {
    for (const QuantumChannel& ch : sample_channels()) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const DensityMatrix rho = random_density_matrix(ch.in_dim(), ch.in_dim(), seed);
            const CMatrix out = detail::apply(ch, rho.matrix());
            EXPECT_NEAR(out.trace().real(), 1.0, 1e-10);
            EXPECT_GE(eigh(0.5 * (out + out.adjoint())).eigenvalues.minCoeff(), -1e-9);
        }
    }
}

TEST(Complementary, IdentityHasTrivialEnvironment) {
    const DensityMatrix env = complementary_apply(identity_channel(2), random_density_matrix(2, 2, 3));
    ASSERT_EQ(env.dim(), 1);
    EXPECT_NEAR(env(0, 0).real(), 1.0, 1e-12);
}

TEST(Complementary, DephasingOnZero) {
    const double p = 0.3;
    const CMatrix env = complementary_apply(dephasing(p), DensityMatrix::basis(2, 0)).matrix();
    EXPECT_NEAR(env(0, 0).real(), 1 - p, 1e-12);
    EXPECT_NEAR(env(1, 1).real(), p, 1e-12);
}

TEST(Complementary, MatchesKrausFormula) {
    for (const QuantumChannel& ch : sample_channels()) {
        const DensityMatrix rho = random_density_matrix(ch.in_dim(), ch.in_dim(), 21);
        const auto& k = ch.kraus_ops();
        CMatrix expected(ch.env_dim(), ch.env_dim());
        for (int i = 0; i < ch.env_dim(); ++i)
            for (int j = 0; j < ch.env_dim(); ++j) expected(i, j) = (k[i] * rho.matrix() * k[j].adjoint()).trace();
        const DensityMatrix env = complementary_apply(ch, rho);
        EXPECT_LT((env.matrix() - expected).norm(), 1e-10);
        EXPECT_NEAR(env.matrix().trace().real(), 1.0, 1e-10);
    }
}

TEST(Complementary, PureInputsHaveEqualEntropies) {
    for (const QuantumChannel& ch : sample_channels()) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const DensityMatrix psi = random_density_matrix(ch.in_dim(), 1, seed);
            EXPECT_NEAR(von_neumann_entropy(apply(ch, psi)), von_neumann_entropy(complementary_apply(ch, psi)), 1e-8);
        }
    }
}

TEST(Adjoints, SatisfyTraceDuality) {
    for (const QuantumChannel& ch : sample_channels()) {
        const DensityMatrix rho = random_density_matrix(ch.in_dim(), ch.in_dim(), 4);
        const CMatrix x = random_density_matrix(ch.out_dim(), ch.out_dim(), 5).matrix();
        const CMatrix y = random_density_matrix(ch.env_dim(), ch.env_dim(), 6).matrix();
        EXPECT_NEAR((detail::apply(ch, rho.matrix()) * x).trace().real(),
                    (rho.matrix() * detail::adjoint_apply(ch, x)).trace().real(), 1e-12);
        EXPECT_NEAR((detail::complementary_apply(ch, rho.matrix()) * y).trace().real(),
                    (rho.matrix() * detail::complementary_adjoint_apply(ch, y)).trace().real(), 1e-12);
    }
}

TEST(TensorPower, OneIsSameChannel) {
    const QuantumChannel ch = depolarizing(0.2);
    const QuantumChannel p = tensor_power(ch, 1);
    const DensityMatrix rho = random_density_matrix(2, 2, 9);
    EXPECT_LT((apply(p, rho).matrix() - apply(ch, rho).matrix()).norm(), 1e-14);
}

TEST(TensorPower, FactorizesOnProductStates) {
    for (const QuantumChannel& ch : {dephasing(0.15), amplitude_damping(0.3), depolarizing(0.4)}) {
        const QuantumChannel two = tensor_power(ch, 2);
        EXPECT_LE(two.completeness_error(), 1e-10);
        const DensityMatrix a = random_density_matrix(2, 2, 1);
        const DensityMatrix b = random_density_matrix(2, 2, 2);
        const CMatrix got = apply(two, tensor_product(a, b)).matrix();
        const CMatrix expected = oracle::kron(apply(ch, a).matrix(), apply(ch, b).matrix());
        EXPECT_LT((got - expected).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(TensorPower, BellStateMatchesSequentialApplication) {
    CVector bell = CVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const CMatrix rho = bell * bell.adjoint();
    const QuantumChannel ch = depolarizing(0.1);
    const CMatrix got = detail::apply(tensor_power(ch, 2), rho);
    CMatrix expected = CMatrix::Zero(4, 4);
    for (const CMatrix& k : ch.kraus_ops()) {
        const CMatrix first = oracle::kron(k, CMatrix::Identity(2, 2));
        expected += first * rho * first.adjoint();
    }
    CMatrix second = CMatrix::Zero(4, 4);
    for (const CMatrix& k : ch.kraus_ops()) {
        const CMatrix op = oracle::kron(CMatrix::Identity(2, 2), k);
        second += op * expected * op.adjoint();
    }
    EXPECT_LT((got - second).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TensorPower, BudgetEnforced) {
    EXPECT_THROW(tensor_power(depolarizing(0.1), 7), ValidationError);
    EXPECT_THROW(tensor_power(depolarizing(0.1), 0), ValidationError);
    EXPECT_EQ(tensor_power(dephasing(0.1), 3).in_dim(), 8);
}

TEST(Compose, IdentityIsNeutral) {
    const QuantumChannel ch = amplitude_damping(0.3);
    const QuantumChannel c = compose(identity_channel(2), ch);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix rho = random_density_matrix(2, 2, seed);
        EXPECT_LT((apply(c, rho).matrix() - apply(ch, rho).matrix()).norm(), 1e-12);
    }
}

TEST(Compose, DephasingComposesInClosedForm) {
    const double p = 0.1, q = 0.3;
    const QuantumChannel c = compose(dephasing(p), dephasing(q));
    const QuantumChannel expected = dephasing(p + q - 2 * p * q);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix rho = random_density_matrix(2, 2, seed);
        EXPECT_LT((apply(c, rho).matrix() - apply(expected, rho).matrix()).norm(), 1e-12);
    }
}

TEST(Compose, DepolarizingMatchesSequentialApply) {
    const QuantumChannel a = depolarizing(0.2);
    const QuantumChannel b = depolarizing(0.35);
    const QuantumChannel c = compose(b, a);
    EXPECT_LE(c.completeness_error(), 1e-10);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix rho = random_density_matrix(2, 2, seed);
        EXPECT_LT((apply(c, rho).matrix() - apply(b, apply(a, rho)).matrix()).norm(), 1e-12);
    }
    EXPECT_THROW(compose(depolarizing(0.1), identity_channel(3)), ValidationError);
}

TEST(QuantumChannel, RejectsIncompleteKraus) {
    std::vector<CMatrix> ops = {0.9 * CMatrix::Identity(2, 2)};
    EXPECT_THROW(QuantumChannel(ops, "bad"), ValidationError);
    std::vector<CMatrix> mixed = {CMatrix::Identity(2, 2), CMatrix::Zero(3, 2)};
    EXPECT_THROW(QuantumChannel(mixed, "bad"), ValidationError);
    EXPECT_THROW(QuantumChannel({}, "empty"), ValidationError);
}

TEST(ChannelFile, IdentityFile) {
    const QuantumChannel ch = parse_channel_json(R"({"in_dim":2,"out_dim":2,"kraus":[[[[1,0],[0,0]],[[0,0],[1,0]]]]})");
    const DensityMatrix rho = random_density_matrix(2, 2, 3);
    EXPECT_LT((apply(ch, rho).matrix() - rho.matrix()).norm(), 1e-12);
}

TEST(ChannelFile, RoundTripMatchesConstructor) {
    const QuantumChannel ref = dephasing(0.3);
    const std::string path = write_temp("ftq_dephasing_0.3.json", channel_to_json(ref));
    const QuantumChannel loaded = load_channel(path);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix rho = random_density_matrix(2, 2, seed);
        EXPECT_LT((apply(loaded, rho).matrix() - apply(ref, rho).matrix()).norm(), 1e-12);
    }
}

TEST(ChannelFile, DistinctErrorKinds) {
    EXPECT_THROW(parse_channel_json("{not json"), ChannelParseError);
    EXPECT_THROW(parse_channel_json(R"({"in_dim":2,"out_dim":2})"), ChannelParseError);
    EXPECT_THROW(parse_channel_json(R"({"in_dim":2,"out_dim":2,"kraus":[[[[1,0],[0,0]]]]})"),
                 ChannelDimensionError);
    EXPECT_THROW(parse_channel_json(R"({"in_dim":2,"out_dim":2,"kraus":[[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]]})"),
                 ChannelCompletenessError);
    EXPECT_THROW(load_channel("/nonexistent/channel.json"), ChannelFileError);
}

TEST(ChannelFile, SmallCompletenessDriftIsRenormalized) {
    const double s = 1.0 + 1e-9;
    const std::string text = R"({"in_dim":2,"out_dim":2,"kraus":[[[[)" + std::to_string(s) +
                             R"(,0],[0,0]],[[0,0],[)" + std::to_string(s) + R"(,0]]]]})";
    const QuantumChannel ch = parse_channel_json(text);
    EXPECT_LE(ch.completeness_error(), 1e-12);
}

TEST(NoiseFamily, InstantiateWithinRange) {
    for (const NoiseFamily& f : {NoiseFamily::depolarizing(), NoiseFamily::dephasing(),
                                 NoiseFamily::amplitude_damping()}) {
        for (int k = 0; k <= 10; ++k) {
            const double p = f.lo + (f.hi - f.lo) * k / 10.0;
            EXPECT_LE(f.instantiate(p).completeness_error(), 1e-10);
        }
        EXPECT_THROW(f.instantiate(f.hi + 0.01), ValidationError);
    }
    EXPECT_THROW(NoiseFamily::from_name("bitflip"), ValidationError);
    EXPECT_THROW(NoiseFamily::from_name("custom_file"), ValidationError);
}

TEST(NoiseFamily, CustomFileMixesWithIdentity) {
    const NoiseFamily f = NoiseFamily::custom_channel(amplitude_damping(1.0));
    const DensityMatrix rho = random_density_matrix(2, 2, 2);
    EXPECT_LT((apply(f.instantiate(0.0), rho).matrix() - rho.matrix()).norm(), 1e-12);
    const CMatrix expected = 0.6 * rho.matrix() + 0.4 * apply(amplitude_damping(1.0), rho).matrix();
    EXPECT_LT((apply(f.instantiate(0.4), rho).matrix() - expected).norm(), 1e-12);
}
