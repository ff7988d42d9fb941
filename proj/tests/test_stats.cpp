#include "collapse/stats.hpp"

#include <cmath>
#include <vector>
#include <gtest/gtest.h>

#include "collapse/rng.hpp"

using namespace collapse;

TEST(RunningStatsTest, KnownSequence) {
    RunningStats s;
    for (double x : {1.0, 2.0, 3.0, 4.0}) s.add(x);
    EXPECT_EQ(s.n, 4u);
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_NEAR(s.variance(), 5.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.stderr_mean(), std::sqrt(5.0 / 12.0), 1e-15);
}

TEST(RunningStatsTest, DegenerateCases) {
    RunningStats s;
    EXPECT_EQ(s.stderr_mean(), 0.0);
    s.add(7.0);
    EXPECT_DOUBLE_EQ(s.mean, 7.0);
    EXPECT_EQ(s.variance(), 0.0);
}

TEST(NormalCdfTest, ReferenceValues) {
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.96), 0.97500210485177952, 1e-15);
    EXPECT_NEAR(normal_cdf(1.96) + normal_cdf(-1.96), 1.0, 1e-15);
    EXPECT_NEAR(normal_cdf(3.0, 1.0, 2.0), normal_cdf(1.0), 1e-15);
}

TEST(GammaQTest, ReducesToKnownFunctions) {
    // Q(1/2, x) = erfc(sqrt(x)); Q(1, x) = exp(-x).
    EXPECT_NEAR(regularized_gamma_q(0.5, 1.0), 0.15729920705028513, 1e-13);
    EXPECT_NEAR(regularized_gamma_q(1.0, 2.0), 0.1353352832366127, 1e-13);
    EXPECT_DOUBLE_EQ(regularized_gamma_q(2.5, 0.0), 1.0);
    EXPECT_THROW(regularized_gamma_q(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(regularized_gamma_q(1.0, -1.0), std::invalid_argument);
}

TEST(ChiSquarePvalueTest, TwoDofIsExponential) {
    EXPECT_NEAR(chi_square_pvalue(4.0, 2), 0.1353352832366127, 1e-13);
    EXPECT_NEAR(chi_square_pvalue(0.0, 5), 1.0, 1e-15);
    EXPECT_THROW(chi_square_pvalue(1.0, 0), std::invalid_argument);
}

TEST(EqualProbabilityEdgesTest, UniformQuartiles) {
    const auto edges =
        equal_probability_edges([](double x) { return x; }, 4, 0.0, 1.0);
    ASSERT_EQ(edges.size(), 3u);
    EXPECT_NEAR(edges[0], 0.25, 1e-9);
    EXPECT_NEAR(edges[1], 0.5, 1e-9);
    EXPECT_NEAR(edges[2], 0.75, 1e-9);
}

TEST(ChiSquareGofTest, AcceptsTrueDistributionRejectsWrongOne) {
    RngStream rng(314, 0);
    std::vector<double> samples(10000);
    for (double& x : samples) x = rng.gaussian(0.0, 1.0);
    const auto cdf_true = [](double x) { return normal_cdf(x); };
    const auto cdf_shift = [](double x) { return normal_cdf(x, 0.5, 1.0); };
    EXPECT_GT(chi_square_gof_pvalue(samples, cdf_true, 20, -10.0, 10.0), 0.001);
    EXPECT_LT(chi_square_gof_pvalue(samples, cdf_shift, 20, -10.0, 10.0), 1e-6);
}

TEST(KsTwoSampleTest, HandComputedStatistic) {
    EXPECT_NEAR(ks_two_sample_statistic({1.0, 2.0, 3.0}, {1.5, 2.5, 3.5}), 1.0 / 3.0,
                1e-15);
    EXPECT_EQ(ks_two_sample_statistic({1.0, 2.0}, {1.0, 2.0}), 0.0);
    EXPECT_NEAR(ks_two_sample_statistic({1.0}, {2.0}), 1.0, 1e-15);
}

TEST(KsOneSampleTest, HandComputedStatistic) {
    const auto uniform = [](double x) { return x; };
    EXPECT_NEAR(ks_one_sample_statistic({0.5}, uniform), 0.5, 1e-15);
    // Perfectly spaced sample: D = 1/(2n).
    EXPECT_NEAR(ks_one_sample_statistic({0.25, 0.75}, uniform), 0.25, 1e-15);
}

TEST(KsWeightedTest, UniformWeightsReduceToTwoSample) {
    RngStream rng(11, 0);
    std::vector<double> x(200), y(150);
    for (double& v : x) v = rng.gaussian(0, 1);
    for (double& v : y) v = rng.gaussian(0.2, 1.1);
    const std::vector<double> w(x.size(), 3.7);  // unnormalized on purpose
    EXPECT_NEAR(ks_weighted_statistic(x, w, y), ks_two_sample_statistic(x, y), 1e-12);
}

TEST(KsWeightedTest, WeightsReshapeTheEcdf) {
    // Two atoms at 0 and 1 with weights 3:1 vs a sample sitting at the atoms.
    const std::vector<double> values{0.0, 1.0};
    const std::vector<double> weights{3.0, 1.0};
    const std::vector<double> sample{0.0, 0.0, 1.0, 1.0};
    // After 0: weighted 0.75 vs 0.5 -> D = 0.25.
    EXPECT_NEAR(ks_weighted_statistic(values, weights, sample), 0.25, 1e-15);
}

TEST(EffectiveSampleSizeTest, KnownValues) {
    EXPECT_DOUBLE_EQ(effective_sample_size({1.0, 1.0, 1.0, 1.0}), 4.0);
    EXPECT_DOUBLE_EQ(effective_sample_size({2.0, 0.0}), 1.0);
    EXPECT_EQ(effective_sample_size({}), 0.0);
}

TEST(KsCriticalValueTest, MatchesLargeSampleFormula) {
    EXPECT_NEAR(ks_critical_value(10000.0, 10000.0), 0.023018074130013652, 1e-15);
    EXPECT_NEAR(ks_critical_value(100.0, 100.0), 0.23018074130013649, 1e-15);
    // Looser alpha gives a smaller critical value.
    EXPECT_LT(ks_critical_value(100.0, 100.0, 0.05), ks_critical_value(100.0, 100.0));
    EXPECT_THROW(ks_critical_value(0.0, 10.0), std::invalid_argument);
}

TEST(SimpsonTest, ExactForCubicsAndConvergesForSine) {
    EXPECT_NEAR(simpson([](double x) { return x * x; }, 0.0, 1.0, 2), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(simpson([](double x) { return std::sin(x); }, 0.0, std::acos(-1.0), 1000),
                2.0, 1e-10);
    EXPECT_THROW(simpson([](double) { return 1.0; }, 0.0, 1.0, 3), std::invalid_argument);
}

TEST(LeastSquaresSlopeTest, ExactLine) {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> y{1.0, 4.0, 7.0, 10.0};
    EXPECT_NEAR(least_squares_slope(x, y), 3.0, 1e-12);
    EXPECT_THROW(least_squares_slope({1.0}, {1.0}), std::invalid_argument);
}
