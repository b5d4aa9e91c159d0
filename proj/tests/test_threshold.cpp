#include <gtest/gtest.h>

#include "ftq/threshold.hpp"
#include "oracles.hpp"

using namespace ftq;

namespace {

// Root of 1 − h2(3p/4) − (3p/4) log2 3, computed independently.
constexpr double kHashingRoot = 0.252386166553642;

OptimizerOptions fast_options(std::uint64_t seed = 0) {
    OptimizerOptions o;
    o.restarts = 6;
    o.seed = seed;
    return o;
}

void expect_valid_bracket(const ThresholdResult& t, double tol_zero, double tol_param) {
    EXPECT_GT(t.ic_lo, tol_zero);
    EXPECT_LE(t.ic_hi, tol_zero);
    EXPECT_LE(t.bracket.second - t.bracket.first, tol_param);
    EXPECT_GE(t.threshold, t.bracket.first);
    EXPECT_LE(t.threshold, t.bracket.second);
}

}  // namespace

TEST(ParseGrid, Syntax) {
    const auto g = parse_grid("0:0.5:3");
    ASSERT_EQ(g.size(), 3u);
    EXPECT_DOUBLE_EQ(g[1], 0.25);
    EXPECT_DOUBLE_EQ(g[2], 0.5);
    EXPECT_EQ(parse_grid("0.1:0.1:1").size(), 1u);
    EXPECT_THROW(parse_grid("0:1"), ValidationError);
    EXPECT_THROW(parse_grid("0:1:x"), ValidationError);
    EXPECT_THROW(parse_grid("1:0:3"), ValidationError);
    EXPECT_THROW(parse_grid("0:1:0"), ValidationError);
}

TEST(Sweep, DephasingClosedForm) {
    const SweepResult s = sweep_family(NoiseFamily::dephasing(), 1, {0.5, 0.0, 0.25}, 100, fast_options());
    ASSERT_EQ(s.points.size(), 3u);
    EXPECT_DOUBLE_EQ(s.points[0].param, 0.0);
    EXPECT_NEAR(s.points[0].ic, 1.0, 1e-3);
    EXPECT_NEAR(s.points[1].ic, 1.0 - oracle::h2(0.25), 1e-3);
    EXPECT_NEAR(s.points[2].ic, 0.0, 1e-3);
    ASSERT_TRUE(s.points[1].prop1.has_value());
    ASSERT_TRUE(s.threshold.has_value());
    EXPECT_GE(*s.threshold, s.bracket->first);
    EXPECT_LE(*s.threshold, s.bracket->second);
}

TEST(Sweep, IdentityPointGivesG) {
    const SweepResult s = sweep_family(NoiseFamily::depolarizing(), 2, {0.0}, 10, fast_options());
    EXPECT_NEAR(s.points[0].ic, 2.0, 1e-5);
    EXPECT_FALSE(s.threshold.has_value());
}

TEST(Sweep, DepolarizingSignChange) {
    const SweepResult s = sweep_family(NoiseFamily::depolarizing(), 1, parse_grid("0.2:0.3:6"), 100, fast_options());
    ASSERT_TRUE(s.bracket.has_value());
    EXPECT_LT(s.bracket->first, kHashingRoot);
    EXPECT_GT(s.bracket->second, kHashingRoot);
}

TEST(Sweep, RejectsOutOfRangePoint) {
    try {
        sweep_family(NoiseFamily::dephasing(), 1, {0.1, 0.7}, 100, fast_options());
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("0.7"), std::string::npos);
    }
}

TEST(FindThreshold, Depolarizing) {
    const ThresholdResult t = find_threshold(NoiseFamily::depolarizing(), 1, 1e-4, 1e-3, fast_options());
    EXPECT_NEAR(t.threshold, kHashingRoot, 5e-3);
    expect_valid_bracket(t, 1e-4, 1e-3);
}

TEST(FindThreshold, Dephasing) {
    // 1 − h2(p) approaches zero quadratically, so the {Ic > tol_zero} boundary
    // sits about sqrt(tol_zero · ln2 / 2) below 1/2.
    const ThresholdResult t = find_threshold(NoiseFamily::dephasing(), 1, 1e-5, 1e-3, fast_options());
    EXPECT_NEAR(t.threshold, 0.5, 5e-3);
    expect_valid_bracket(t, 1e-5, 1e-3);
    const ThresholdResult coarse = find_threshold(NoiseFamily::dephasing(), 1, 1e-4, 1e-3, fast_options());
    EXPECT_NEAR(coarse.threshold, 0.5 - std::sqrt(1e-4 * std::log(2.0) / 2.0), 1e-3);
}

TEST(FindThreshold, AmplitudeDamping) {
    const ThresholdResult t = find_threshold(NoiseFamily::amplitude_damping(), 1, 1e-4, 1e-3, fast_options());
    EXPECT_NEAR(t.threshold, 0.5, 1e-2);
    expect_valid_bracket(t, 1e-4, 1e-3);
}

TEST(FindThreshold, ReproducibleAcrossSeeds) {
    for (const NoiseFamily& f : {NoiseFamily::depolarizing(), NoiseFamily::dephasing(),
                                 NoiseFamily::amplitude_damping()}) {
        const double t0 = find_threshold(f, 1, 1e-4, 1e-3, fast_options(0)).threshold;
        for (std::uint64_t seed : {1u, 2u}) {
            EXPECT_NEAR(find_threshold(f, 1, 1e-4, 1e-3, fast_options(seed)).threshold, t0, 2e-3) << f.name();
        }
    }
}

TEST(FindThreshold, DephasingSameZeroForTwoGates) {
    const double one = find_threshold(NoiseFamily::dephasing(), 1, 1e-6, 1e-3, fast_options()).threshold;
    const double two = find_threshold(NoiseFamily::dephasing(), 2, 1e-6, 1e-3, fast_options()).threshold;
    EXPECT_NEAR(two, one, 2e-3);
}

TEST(FindThreshold, NoSignChangeIsAnError) {
    const NoiseFamily identity_family = NoiseFamily::custom_channel(identity_channel(2), "identity");
    EXPECT_THROW(find_threshold(identity_family, 1, 1e-4, 1e-3, fast_options()), ValidationError);
    EXPECT_THROW(find_threshold(NoiseFamily::depolarizing().with_range(0.3, 0.9), 1, 1e-4, 1e-3, fast_options()),
                 ValidationError);
}

TEST(FindThreshold, MonotonicityViolationReportsTriple) {
    auto bumpy = [](double p) { return p < 0.3 ? 1.0 - p : (p < 0.6 ? 0.0 : (p < 0.7 ? 0.5 : 0.0)); };
    try {
        detail::bisect_threshold(0.0, 1.0, bumpy, 1e-4, 1e-3);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("(0.625, 0.5)"), std::string::npos) << what;
    }
}

TEST(FindThreshold, SyntheticLinear) {
    const ThresholdResult t = detail::bisect_threshold(0.0, 1.0, [](double p) { return 0.37 - p; }, 1e-9, 1e-6);
    EXPECT_NEAR(t.threshold, 0.37, 1e-6);
    expect_valid_bracket(t, 1e-9, 1e-6);
}

TEST(FindRenyiThreshold, DephasingNearOneMatches) {
    OptimizerOptions o = fast_options();
    o.restarts = 3;
    o.inner_restarts = 0;
    const ThresholdResult plain = find_threshold(NoiseFamily::dephasing(), 1, 1e-4, 1e-3, o);
    const ThresholdResult renyi = find_renyi_threshold(NoiseFamily::dephasing(), 1, 1.001, 1e-4, 1e-3, o);
    EXPECT_TRUE(renyi.heuristic);
    EXPECT_NEAR(renyi.threshold, plain.threshold, 2e-2);
}

TEST(FindRenyiThreshold, LargerAlphaLargerRegion) {
    OptimizerOptions o = fast_options();
    o.restarts = 3;
    o.inner_restarts = 0;
    const ThresholdResult near_one = find_renyi_threshold(NoiseFamily::depolarizing(), 1, 1.001, 1e-4, 1e-3, o);
    const ThresholdResult two = find_renyi_threshold(NoiseFamily::depolarizing(), 1, 2.0, 1e-4, 1e-3, o);
    EXPECT_LE(near_one.threshold, two.threshold + 2e-2);
}

TEST(FindRenyiThreshold, IdentityFamilyHasNoSignChange) {
    const NoiseFamily identity_family = NoiseFamily::custom_channel(identity_channel(2), "identity");
    EXPECT_THROW(find_renyi_threshold(identity_family, 1, 2.0, 1e-4, 1e-3, fast_options()), ValidationError);
}
