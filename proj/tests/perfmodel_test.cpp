#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "sizer/perfmodel.hpp"

namespace sizer {
namespace {

using testing::reference_profile;
using testing::service;
using testing::tier;

TEST(TierScaleFactor, ExactRatiosAgainstPerflab) {
  const auto& ref = tier("perflab");
  EXPECT_EQ(tier_scale_factor(tier("medium"), ref), 3.0);
  EXPECT_EQ(tier_scale_factor(tier("large"), ref), 1.5);
  EXPECT_EQ(tier_scale_factor(ref, ref), 1.0);
}

TEST(TierScaleFactor, FrequencyAndSocketCount) {
  const HardwareTier slow{"slow", 1, 12, 1.535, 64};
  EXPECT_NEAR(tier_scale_factor(slow, tier("perflab")), 4.0, 1e-12);
}

TEST(DemandModel, ReferenceServiceOnPerflab) {
  const DemandModel m(ModelCoefficients::defaults(), standard_tiers());
  const auto d = m.estimate(service("a"), reference_profile(), tier("perflab"));
  EXPECT_NEAR(d.cpu_pct, 6.5, 1e-12);
  EXPECT_NEAR(d.memory_mb, 322.0, 1e-12);
  EXPECT_EQ(d.tier, "perflab");
}

TEST(DemandModel, ReferenceServiceOnSmallerTiers) {
  const DemandModel m(ModelCoefficients::defaults(), standard_tiers());
  EXPECT_NEAR(m.estimate(service("a"), reference_profile(), tier("large")).cpu_pct, 9.75, 1e-12);
  EXPECT_NEAR(m.estimate(service("a"), reference_profile(), tier("medium")).cpu_pct, 19.5, 1e-12);
  EXPECT_NEAR(m.estimate(service("a"), reference_profile(), tier("medium")).memory_mb, 322.0, 1e-12);
}

TEST(DemandModel, WorkloadTypeHasNoEffect) {
  const DemandModel m(ModelCoefficients::defaults(), standard_tiers());
  auto burst = reference_profile();
  burst.workload_type = WorkloadType::burst;
  EXPECT_EQ(m.estimate(service("a"), burst, tier("large")),
            m.estimate(service("a"), reference_profile(), tier("large")));
}

TEST(DemandModel, DeploymentFootprint) {
  const DemandModel m(ModelCoefficients::defaults(), standard_tiers());
  const auto d = m.deployment(service("a"));
  EXPECT_EQ(d.cpu_pct, 0.0);
  EXPECT_EQ(d.memory_mb, 192.0);
}

TEST(DemandModel, UnknownReferenceTier) {
  auto c = ModelCoefficients::defaults();
  c.reference_tier = "mainframe";
  try {
    DemandModel m(c, standard_tiers());
    FAIL();
  } catch (const SizingError& e) {
    EXPECT_EQ(e.code(), "unknown_reference_tier");
  }
}

TEST(DemandModel, UnknownPair) {
  const DemandModel m(ModelCoefficients::defaults(), standard_tiers());
  auto s = service("a");
  s.implementation_type = "cobol";
  EXPECT_THROW(m.estimate(s, reference_profile(), tier("large")), SizingError);
}

// Brute-force oracle: the largest n whose n * c stays strictly under W.
int threshold_oracle(double c, double w, int max_n) {
  int best = 0;
  for (int n = 1; n <= max_n; ++n)
    if (n * c < w) best = n;
  return best;
}

TEST(PerformanceCurve, DegradationThresholdsPerTier) {
  const DemandModel m(ModelCoefficients::defaults(), standard_tiers());
  const PackerConfig cfg;
  EXPECT_EQ(performance_curve(reference_profile(), service("t"), m, tier("perflab"), cfg, 20).degradation_threshold, 12);
  EXPECT_EQ(performance_curve(reference_profile(), service("t"), m, tier("large"), cfg, 20).degradation_threshold, 8);
  EXPECT_EQ(performance_curve(reference_profile(), service("t"), m, tier("medium"), cfg, 20).degradation_threshold, 4);
}

TEST(PerformanceCurve, PointsAreLinearInCount) {
  const auto c = curve_for_demand("perflab", 6.5, 80.0, 20);
  ASSERT_EQ(c.points.size(), 20u);
  for (int n = 1; n <= 20; ++n) {
    EXPECT_EQ(c.points[static_cast<std::size_t>(n - 1)].service_count, n);
    EXPECT_NEAR(c.points[static_cast<std::size_t>(n - 1)].predicted_cpu_pct, 6.5 * n, 1e-9);
  }
  EXPECT_EQ(c.points[11].predicted_cpu_pct < 80.0, true);
  EXPECT_EQ(c.points[12].predicted_cpu_pct < 80.0, false);
}

TEST(PerformanceCurve, ThresholdZeroWhenOneServiceSaturates) {
  EXPECT_EQ(curve_for_demand("medium", 80.0, 80.0, 5).degradation_threshold, 0);
  EXPECT_EQ(curve_for_demand("medium", 95.0, 80.0, 5).degradation_threshold, 0);
}

TEST(PerformanceCurve, ThresholdMatchesBruteForceProperty) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> cpu(0.01, 90.0);
  std::uniform_real_distribution<double> cap(10.0, 100.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double c = cpu(rng);
    const double w = cap(rng);
    const int max_n = 1 + static_cast<int>(rng() % 60);
    ASSERT_EQ(curve_for_demand("x", c, w, max_n).degradation_threshold, threshold_oracle(c, w, max_n))
        << c << " " << w << " " << max_n;
  }
  // Exact multiples sit on the boundary: 10 x 8.0 == 80 is already degraded.
  EXPECT_EQ(curve_for_demand("x", 8.0, 80.0, 20).degradation_threshold, 9);
}

// Property: CPU and memory are non-decreasing in each of U, T and P for any
// non-negative coefficient set.
TEST(DemandModel, MonotoneInLoad) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> v(0.0, 500.0);
  std::uniform_real_distribution<double> step(0.0, 50.0);
  std::uniform_real_distribution<double> coef(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    ModelCoefficients c;
    c.reference_tier = "perflab";
    c.pairs = {{"java", "soap_http", coef(rng), coef(rng), coef(rng), coef(rng) / 100, 100 * coef(rng), coef(rng),
                coef(rng), 50.0}};
    const DemandModel m(c, standard_tiers());
    RuntimeProfile p;
    p.concurrency = v(rng);
    p.throughput = v(rng);
    p.payload_request_kb = v(rng);
    auto more = p;
    more.concurrency += step(rng);
    more.throughput += step(rng);
    more.payload_response_kb += step(rng);
    const auto lo = m.estimate(service("a"), p, tier("large"));
    const auto hi = m.estimate(service("a"), more, tier("large"));
    ASSERT_GE(hi.cpu_pct, lo.cpu_pct) << "trial " << trial;
    ASSERT_GE(hi.memory_mb, lo.memory_mb) << "trial " << trial;
  }
}

// Property: the absolute work (CPU% x tier capacity) is the same on every tier.
TEST(DemandModel, TierWorkInvariance) {
  const DemandModel m(ModelCoefficients::defaults(), standard_tiers());
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> v(0.0, 300.0);
  std::uniform_int_distribution<int> cores(1, 32);
  std::uniform_real_distribution<double> ghz(1.0, 4.0);
  for (int trial = 0; trial < 500; ++trial) {
    RuntimeProfile p;
    p.concurrency = v(rng);
    p.throughput = v(rng);
    p.payload_request_kb = v(rng);
    const HardwareTier a{"a", cores(rng) % 4 + 1, cores(rng), ghz(rng), 64};
    const HardwareTier b{"b", cores(rng) % 4 + 1, cores(rng), ghz(rng), 64};
    const double wa = m.estimate(service("s"), p, a).cpu_pct * a.capacity_units();
    const double wb = m.estimate(service("s"), p, b).cpu_pct * b.capacity_units();
    ASSERT_LE(testing::rel_err(wa, wb), 1e-12);
  }
}

}  // namespace
}  // namespace sizer
