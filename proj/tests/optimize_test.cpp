#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "qbias/optimize.hpp"

using namespace qbias;

namespace {

double quartic_bowl(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - 0.3 * static_cast<double>(i + 1);
        s += d * d + 0.1 * d * d * d * d;
    }
    return s;
}

// Two separated peaks of different heights; the global one sits at x = 2.
double two_peaks(std::span<const double> x) {
    const double a = std::exp(-8.0 * (x[0] - 2.0) * (x[0] - 2.0));
    const double b = 0.6 * std::exp(-8.0 * (x[0] - 5.0) * (x[0] - 5.0));
    return a + b;
}

} // namespace

TEST(NelderMead, MinimizesSmoothBowl) {
    const std::vector<double> start = {2.0, -1.0, 0.5, 1.5};
    const std::vector<double> step(4, 0.5);
    const NelderMeadResult res =
        nelder_mead_minimize(quartic_bowl, start, step, 2000, 1e-12, 1e-10);
    EXPECT_TRUE(res.converged);
    EXPECT_LE(res.value, 1e-9);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_NEAR(res.x[i], 0.3 * static_cast<double>(i + 1), 1e-4);
    EXPECT_GT(res.evaluations, 5);
}

TEST(NelderMead, HonorsIterationBudget) {
    const std::vector<double> start = {50.0};
    const std::vector<double> step = {0.1};
    const NelderMeadResult res = nelder_mead_minimize(quartic_bowl, start, step, 3, 1e-15, 1e-15);
    EXPECT_FALSE(res.converged);
}

TEST(NelderMead, RejectsBadArguments) {
    const std::vector<double> start = {1.0, 2.0};
    const std::vector<double> step = {0.1};
    EXPECT_THROW(nelder_mead_minimize(quartic_bowl, start, step, 100, 1e-9, 1e-8),
                 std::invalid_argument);
    EXPECT_THROW(nelder_mead_minimize(quartic_bowl, std::vector<double>{},
                                      std::vector<double>{}, 100, 1e-9, 1e-8),
                 std::invalid_argument);
}

TEST(MultiStart, FindsGlobalPeakAmongLocalOnes) {
    const std::vector<Interval> bounds = {{0.0, 7.0, false}};
    OptimizerConfig cfg;
    cfg.restarts = 20;
    cfg.seed = 7;
    const MultiStartResult res = multi_start_maximize(two_peaks, bounds, cfg);
    EXPECT_NEAR(res.best_value, 1.0, 1e-7);
    ASSERT_FALSE(res.optima.empty());
    EXPECT_NEAR(res.optima[0].params[0], 2.0, 1e-4);
    EXPECT_EQ(res.restarts_used, 20);
}

TEST(MultiStart, InformedStartsRescueNarrowPeaks) {
    // A peak far narrower than the search box: random starts die on the
    // plain, an informed start at the peak cannot miss.
    const Objective needle = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += (v - 2.0) * (v - 2.0);
        return std::exp(-400.0 * s);
    };
    const std::vector<Interval> bounds = {{0.0, 100.0, false}, {0.0, 100.0, false}};
    OptimizerConfig cfg;
    cfg.restarts = 3;
    cfg.seed = 1;
    const MultiStartResult blind = multi_start_maximize(needle, bounds, cfg);
    EXPECT_LE(blind.best_value, 1e-6);

    const std::vector<std::vector<double>> informed = {{2.1, 1.9}};
    const MultiStartResult guided = multi_start_maximize(needle, bounds, cfg, informed);
    EXPECT_NEAR(guided.best_value, 1.0, 1e-7);
    EXPECT_EQ(guided.optima[0].restart_index, 0);  // the informed start won
    EXPECT_EQ(guided.restarts_used, 1 + 3);
}

TEST(MultiStart, InformedStartsDoNotPerturbRandomRestarts) {
    // Random restart r keeps substream (seed, r) whether or not informed
    // starts precede it, so adding a useless informed start cannot change
    // what the random exploration finds.
    const std::vector<Interval> bounds = {{0.0, 7.0, false}};
    OptimizerConfig cfg;
    cfg.restarts = 20;
    cfg.seed = 7;
    const MultiStartResult plain = multi_start_maximize(two_peaks, bounds, cfg);
    const MultiStartResult seeded =
        multi_start_maximize(two_peaks, bounds, cfg, {{6.9}});
    EXPECT_EQ(plain.best_value, seeded.best_value);
    EXPECT_EQ(plain.optima[0].params, seeded.optima[0].params);
}

TEST(MultiStart, RejectsInformedStartArityMismatch) {
    const std::vector<Interval> bounds = {{0.0, 1.0, false}, {0.0, 1.0, false}};
    OptimizerConfig cfg;
    cfg.restarts = 2;
    EXPECT_THROW(multi_start_maximize(quartic_bowl, bounds, cfg, {{0.5}}),
                 std::invalid_argument);
}

TEST(MultiStart, TopKOptimaAreDistinct) {
    const std::vector<Interval> bounds = {{0.0, 7.0, false}};
    OptimizerConfig cfg;
    cfg.restarts = 30;
    cfg.top_k = 2;
    cfg.seed = 11;
    const MultiStartResult res = multi_start_maximize(two_peaks, bounds, cfg);
    ASSERT_EQ(res.optima.size(), 2u);
    EXPECT_NEAR(res.optima[0].params[0], 2.0, 1e-4);
    EXPECT_NEAR(res.optima[1].params[0], 5.0, 1e-4);
    EXPECT_GT(res.optima[0].value, res.optima[1].value);
}

TEST(MultiStart, DeterministicForFixedSeed) {
    const std::vector<Interval> bounds = {{0.0, 2.0 * std::numbers::pi, true},
                                          {-1.0, 1.0, false}};
    const Objective f = [](std::span<const double> x) {
        return std::sin(3.0 * x[0]) * std::cos(2.0 * x[1]) + 0.3 * std::sin(x[0] + x[1]);
    };
    OptimizerConfig cfg;
    cfg.restarts = 12;
    cfg.seed = 99;
    const MultiStartResult a = multi_start_maximize(f, bounds, cfg);
    const MultiStartResult b = multi_start_maximize(f, bounds, cfg);
    EXPECT_EQ(a.best_value, b.best_value);
    ASSERT_EQ(a.optima.size(), b.optima.size());
    for (std::size_t i = 0; i < a.optima.size(); ++i) {
        EXPECT_EQ(a.optima[i].value, b.optima[i].value);
        EXPECT_EQ(a.optima[i].params, b.optima[i].params);
        EXPECT_EQ(a.optima[i].restart_index, b.optima[i].restart_index);
    }

    cfg.seed = 100;
    const MultiStartResult c = multi_start_maximize(f, bounds, cfg);
    EXPECT_NE(c.optima[0].params, a.optima[0].params);  // starts actually differ
}

TEST(MultiStart, BeatsGridOracleOnWavyLandscape) {
    const std::vector<Interval> bounds = {{0.0, std::numbers::pi, false},
                                          {0.0, std::numbers::pi, false}};
    const Objective f = [](std::span<const double> x) {
        return std::sin(x[0]) * std::sin(x[1]) + 0.2 * std::cos(5.0 * x[0]);
    };
    OptimizerConfig cfg;
    cfg.restarts = 16;
    cfg.seed = 4;
    const MultiStartResult ms = multi_start_maximize(f, bounds, cfg);
    const GridResult grid = grid_oracle(f, bounds, 101);
    EXPECT_GE(ms.best_value, grid.value - 1e-6);
}

TEST(MultiStart, TieBreaksToLowestRestartIndex) {
    const std::vector<Interval> bounds = {{0.0, 1.0, false}};
    const Objective flat = [](std::span<const double>) { return 1.5; };
    OptimizerConfig cfg;
    cfg.restarts = 5;
    cfg.seed = 3;
    const MultiStartResult res = multi_start_maximize(flat, bounds, cfg);
    EXPECT_EQ(res.best_value, 1.5);
    ASSERT_FALSE(res.optima.empty());
    EXPECT_EQ(res.optima[0].restart_index, 0);
}

TEST(MultiStart, ValidatesConfigAndArity) {
    const std::vector<Interval> bounds = {{0.0, 1.0, false}};
    const Objective f = [](std::span<const double> x) { return -x[0] * x[0]; };
    OptimizerConfig bad;
    bad.restarts = 0;
    EXPECT_THROW(multi_start_maximize(f, bounds, bad), std::invalid_argument);
    bad = OptimizerConfig{};
    bad.f_tolerance = 0.0;
    EXPECT_THROW(multi_start_maximize(f, bounds, bad), std::invalid_argument);

    const std::vector<Interval> wide(11, Interval{0.0, 1.0, false});
    EXPECT_THROW(multi_start_maximize(f, wide, OptimizerConfig{}), std::invalid_argument);
    EXPECT_THROW(multi_start_maximize(f, {}, OptimizerConfig{}), std::invalid_argument);
}

TEST(GridOracle, HitsExactLatticePoints) {
    const std::vector<Interval> bounds = {{0.0, 1.0, false}};
    const Objective f = [](std::span<const double> x) {
        return -(x[0] - 0.3) * (x[0] - 0.3);
    };
    // Resolution 11 puts a lattice point exactly on 0.3.
    const GridResult res = grid_oracle(f, bounds, 11);
    EXPECT_DOUBLE_EQ(res.x[0], 0.3);
    EXPECT_DOUBLE_EQ(res.value, 0.0);
}

TEST(GridOracle, IncludesBothEndpoints) {
    const std::vector<Interval> bounds = {{-2.0, 3.0, false}};
    const Objective rising = [](std::span<const double> x) { return x[0]; };
    EXPECT_DOUBLE_EQ(grid_oracle(rising, bounds, 6).x[0], 3.0);
    const Objective falling = [](std::span<const double> x) { return -x[0]; };
    EXPECT_DOUBLE_EQ(grid_oracle(falling, bounds, 6).x[0], -2.0);
}

TEST(GridOracle, GuardsAgainstHugeGrids) {
    const std::vector<Interval> bounds(5, Interval{0.0, 1.0, false});
    const Objective f = [](std::span<const double>) { return 0.0; };
    EXPECT_THROW(grid_oracle(f, bounds, 100), std::invalid_argument);
    EXPECT_THROW(grid_oracle(f, bounds, 1), std::invalid_argument);
}

TEST(GoldenSection, LocatesQuadraticMinimum) {
    const auto f = [](double x) { return (x - 0.7) * (x - 0.7); };
    const ScalarOptimum res = golden_section_minimize(f, 0.0, 1.0, 1e-10);
    EXPECT_NEAR(res.x, 0.7, 1e-8);
    EXPECT_LE(res.value, 1e-15);
}

TEST(GoldenSection, MonotoneFunctionsPushToTheBoundary) {
    const auto dec = [](double x) { return -x; };
    EXPECT_NEAR(golden_section_minimize(dec, 0.0, 1.0).x, 1.0, 1e-6);
    const auto inc = [](double x) { return x; };
    EXPECT_NEAR(golden_section_minimize(inc, 0.0, 1.0).x, 0.0, 1e-6);
}

TEST(GoldenSection, RejectsInvertedInterval) {
    EXPECT_THROW(golden_section_minimize([](double x) { return x; }, 1.0, 0.0),
                 std::invalid_argument);
}

TEST(Rng, MixSeedSeparatesStreams) {
    EXPECT_NE(mix_seed(42, 1), mix_seed(42, 2));
    EXPECT_NE(mix_seed(42, 1), mix_seed(43, 1));
    EXPECT_EQ(mix_seed(42, {1, 2}), mix_seed(mix_seed(42, 1), 2));
    EXPECT_NE(hash_label("dc"), hash_label("ad"));
    EXPECT_EQ(hash_label("dc"), hash_label("dc"));
}

TEST(Rng, UniformStaysInRangeAndNormalHasMoments) {
    RandomStream rs(5);
    double sum = 0.0, sum2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = rs.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        const double g = rs.normal();
        sum += g;
        sum2 += g * g;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.03);
    EXPECT_NEAR(sum2 / n, 1.0, 0.05);
}
