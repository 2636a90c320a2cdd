#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "jdr/capacity.hpp"
#include "jdr/testing/oracles.hpp"

using namespace jdr;

namespace {

TernaryLaw random_row(std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  TernaryLaw r{e(rng), e(rng), e(rng)};
  const double s = r[0] + r[1] + r[2];
  for (auto& v : r) v /= s;
  return r;
}

PortLawEstimate random_law(std::mt19937_64& rng) {
  PortLawEstimate law;
  law.on = {random_row(rng), random_row(rng)};
  law.off = {random_row(rng), random_row(rng)};
  return law;
}

PortLawEstimate symmetric_law(const TernaryLaw& on, const TernaryLaw& off) {
  PortLawEstimate law;
  law.on = {on, mirrored(on)};
  law.off = {off, mirrored(off)};
  return law;
}

}  // namespace

TEST(PortLaws, NoiselessLawsAreClosedForm) {
  const double alpha = 1.1, eps = 0.8;
  Rng rng(3);
  const auto law = estimate_port_laws(4, alpha, WrappedNormal{0.0}, eps, 10, rng);
  const auto on = detection_probs(2.0 * alpha, eps);
  const auto off = detection_probs(0.0, eps);
  for (int y = 0; y < 3; ++y) {
    EXPECT_NEAR(law.on[0][y], on[y], 1e-14);
    EXPECT_NEAR(law.off[0][y], off[y], 1e-14);
    EXPECT_NEAR(law.on[1][y], on[2 - y], 1e-14);
  }
  validate(law);
}

TEST(PortLaws, UniformPhasesMakeSignalPortLookIdle) {
  Rng rng(4);
  const auto law = estimate_port_laws(8, 1.0, VonMises{0.0}, 0.5, 20000, rng);
  for (int y = 0; y < 3; ++y) EXPECT_NEAR(law.on[0][y], law.off[0][y], 0.01);
}

TEST(PortLaws, MatchesDirectAmplitudeOracle) {
  const std::size_t n = 4;
  const auto order = HadamardOrder::from_size(n);
  const PhaseNoiseModel model = VonMises{3.0};
  const double alpha = 0.9, eps = 0.6;
  const std::size_t samples = 500;
  Rng a(55), b(55);
  const auto law = estimate_port_laws(n, alpha, model, eps, samples, a);
  TernaryLaw on{}, off{};
  for (std::size_t s = 0; s < samples; ++s) {
    const auto phases = sample_phases(model, n, b);
    const auto amps = received_amplitudes(0, alpha, phases, order);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = amps[j].real();
      // Direct erfc form of the ternary probabilities.
      const double plus = 0.5 * std::erfc(std::numbers::sqrt2 * (eps - x));
      const double minus = 0.5 * std::erfc(std::numbers::sqrt2 * (eps + x));
      const TernaryLaw p{plus, 1.0 - plus - minus, minus};
      for (int y = 0; y < 3; ++y) (j == 0 ? on : off)[y] += p[y] / (j == 0 ? samples : samples * (n - 1.0));
    }
  }
  for (int y = 0; y < 3; ++y) {
    EXPECT_NEAR(law.on[0][y], on[y], 1e-10);
    EXPECT_NEAR(law.off[0][y], off[y], 1e-10);
  }
}

TEST(PortLaws, RejectsBadArguments) {
  Rng rng(1);
  EXPECT_THROW(estimate_port_laws(6, 1.0, VonMises{1.0}, 0.5, 10, rng), std::invalid_argument);
  EXPECT_THROW(estimate_port_laws(4, 1.0, VonMises{1.0}, -0.5, 10, rng), std::invalid_argument);
  EXPECT_THROW(estimate_port_laws(4, 1.0, VonMises{1.0}, 0.5, 0, rng), std::invalid_argument);
}

TEST(ProductChannelMI, PerfectAndUselessLaws) {
  Rng rng(10);
  for (std::size_t n : {2u, 4u, 16u}) {
    const auto perfect = symmetric_law({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0});
    const auto mi = mi_product_channel(perfect, n, 2000, rng);
    EXPECT_NEAR(mi.bits, std::log2(2.0 * n), 1e-12);
    const TernaryLaw same{0.3, 0.4, 0.3};
    const auto none = mi_product_channel(symmetric_law(same, same), n, 2000, rng);
    EXPECT_NEAR(none.bits, 0.0, 1e-12);
  }
}

TEST(ProductChannelMI, AgreesWithExhaustiveEnumeration) {
  std::mt19937_64 gen(2718);
  Rng rng(31);
  int outside = 0;
  for (std::size_t n : {2u, 4u})
    for (int trial = 0; trial < 50; ++trial) {
      const auto law = random_law(gen);
      const double exact = jdr::testing::exact_product_channel_mi(law, n);
      const auto est = mi_product_channel(law, n, 20000, rng);
      outside += std::abs(est.bits - exact) > 3.0 * est.std_error;
      EXPECT_LT(std::abs(est.bits - exact), 5.0 * est.std_error) << "n=" << n << " trial=" << trial;
    }
  // 100 comparisons at 3 sigma: expect ~0.3 exceedances.
  EXPECT_LE(outside, 3);
}

TEST(ProductChannelMI, CoarseningOutcomesCannotIncreaseInformation) {
  std::mt19937_64 gen(99);
  for (std::size_t n : {2u, 4u})
    for (int trial = 0; trial < 20; ++trial) {
      const auto law = random_law(gen);
      auto coarse = law;
      for (auto* rows : {&coarse.on, &coarse.off})
        for (auto& r : *rows) r = {r[0], r[1] + r[2], 0.0};
      EXPECT_LE(jdr::testing::exact_product_channel_mi(coarse, n), jdr::testing::exact_product_channel_mi(law, n) + 1e-12);
    }
}

TEST(ProductChannelMI, IsDeterministicForASeed) {
  std::mt19937_64 gen(1);
  const auto law = random_law(gen);
  Rng a(8), b(8);
  EXPECT_EQ(mi_product_channel(law, 8, 5000, a).bits, mi_product_channel(law, 8, 5000, b).bits);
}

TEST(HadamardCapacity, Examples) {
  const auto c = hadamard_capacity(1e11, {3.0, 0.01, 100}, 4);
  EXPECT_DOUBLE_EQ(c.capacity_bits_per_s, 7.5e10);
  EXPECT_DOUBLE_EQ(c.capacity_std_error, 2.5e8);
  EXPECT_DOUBLE_EQ(hadamard_capacity(2e10, {1.0, 0.0, 1}, 2).capacity_bits_per_s, 1e10);
  EXPECT_THROW(hadamard_capacity(0.0, {1.0, 0.0, 1}, 2), std::invalid_argument);
  EXPECT_THROW(hadamard_capacity(1.0, {1.0, 0.0, 1}, 3), std::invalid_argument);
}

TEST(ClassicalBpsk, Limits) {
  const std::vector<double> ones{1.0};
  EXPECT_EQ(classical_bpsk_mi(0.0, ones), 0.0);
  EXPECT_NEAR(classical_bpsk_mi(10.0, ones), 1.0, 1e-6);
  EXPECT_EQ(classical_bpsk_mi(2.0, ones, 0.0), 0.0);
  // single phase node against a plain trapezoid rule
  const double a = 0.7;
  double ref = 0.0;
  const int steps = 200000;
  const double lo = -a - 8.0, h = 2.0 * (a + 8.0) / steps;
  for (int i = 0; i <= steps; ++i) {
    const double y = lo + i * h;
    const double pp = homodyne_density(y, a), pm = homodyne_density(y, -a);
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    ref += w * h * 0.5 * (pp * std::log2(2 * pp / (pp + pm)) + pm * std::log2(2 * pm / (pp + pm)));
  }
  EXPECT_NEAR(classical_bpsk_mi(a, ones), ref, 1e-9);
}

TEST(ClassicalBpsk, MatchesMonteCarloOracle) {
  Rng rng(12);
  const double alpha = 1.2;
  auto nodes = sample_phases(VonMises{2.0}, 200, rng);
  for (auto& p : nodes) p = std::cos(p);
  const double quad = classical_bpsk_mi(alpha, nodes);

  auto density = [&](double y, double a) {
    double acc = 0.0;
    for (double c : nodes) acc += homodyne_density(y, a * c);
    return acc / nodes.size();
  };
  std::mt19937_64 gen(77);
  std::normal_distribution<double> g(0.0, 0.5);
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  const int draws = 40000;
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double a = (gen() & 1) ? alpha : -alpha;
    const double y = a * nodes[pick(gen)] + g(gen);
    const double p = density(y, a);
    const double x = std::log2(p / (0.5 * p + 0.5 * density(y, -a)));
    const double d = x - mean;
    mean += d / (i + 1);
    m2 += d * (x - mean);
  }
  const double se = std::sqrt(m2 / (draws - 1) / draws);
  EXPECT_LT(std::abs(quad - mean), 3.0 * se);
}

TEST(ClassicalBpsk, UniformPriorMaximizesInformation) {
  Rng rng(2);
  auto nodes = sample_phases(VonMises{5.0}, 300, rng);
  for (auto& p : nodes) p = std::cos(p);
  double best = -1.0, best_prior = -1.0;
  for (int i = 0; i <= 20; ++i) {
    const double prior = i / 20.0;
    const double v = classical_bpsk_mi(0.8, nodes, prior);
    if (v > best) {
      best = v;
      best_prior = prior;
    }
  }
  EXPECT_DOUBLE_EQ(best_prior, 0.5);
}

TEST(ClassicalBpsk, CapacityScalesWithBaudRate) {
  Rng a(5), b(5);
  const auto c1 = classical_bpsk_capacity(1e10, 1.0, VonMises{100.0}, a, 500);
  const auto c2 = classical_bpsk_capacity(3e10, 1.0, VonMises{100.0}, b, 500);
  EXPECT_DOUBLE_EQ(c2.capacity_bits_per_s, 3.0 * c1.capacity_bits_per_s);
  EXPECT_GT(c1.mi_bits_per_use, 0.0);
  EXPECT_LE(c1.mi_bits_per_use, 1.0);
}

TEST(BinaryEntropy, Examples) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_NEAR(binary_entropy(0.25), 0.8112781244591328, 1e-15);
  EXPECT_THROW(binary_entropy(1.5), std::invalid_argument);
}

TEST(Bounds, PerfectLawHasTightSandwich) {
  const auto law = symmetric_law({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0});
  const auto bounds = theorem2_bounds(1e11, 8, law);
  EXPECT_DOUBLE_EQ(bounds.upper, 1e11 * 4.0 / 8.0);
  EXPECT_DOUBLE_EQ(bounds.upper_log_n, 1e11 * 3.0 / 8.0);
  EXPECT_EQ(bounds.delta, 0.0);
  ASSERT_TRUE(bounds.lower.has_value());
  EXPECT_DOUBLE_EQ(*bounds.lower, bounds.upper_log_n);
}

TEST(Bounds, LowerBoundNeedsSmallDeltaAndSymmetricIdlePort) {
  const auto noisy = symmetric_law({0.7, 0.2, 0.1}, {0.1, 0.8, 0.1});
  EXPECT_FALSE(theorem2_bounds(1e11, 4, noisy).lower.has_value());
  auto skewed = symmetric_law({0.99, 0.01, 0.0}, {0.0, 0.98, 0.02});
  EXPECT_FALSE(theorem2_bounds(1e11, 4, skewed).lower.has_value());
  const auto good = symmetric_law({0.99, 0.01, 0.0}, {0.005, 0.99, 0.005});
  const auto b = theorem2_bounds(1e11, 4, good);
  ASSERT_TRUE(b.lower.has_value());
  EXPECT_NEAR(b.delta, 0.01, 1e-15);
  EXPECT_NEAR(*b.lower, 1e11 * (0.99 * 2.0 - 5.0 * binary_entropy(0.01)) / 4.0, 1.0);
}

TEST(Bounds, EstimatedMutualInformationStaysBelowUpperBound) {
  std::mt19937_64 gen(17);
  Rng rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = std::size_t{2} << (trial % 4);
    const auto law = symmetric_law(random_row(gen), random_row(gen));
    const auto mi = mi_product_channel(law, n, 3000, rng);
    const auto cap = hadamard_capacity(1e11, mi, n);
    EXPECT_LE(cap.capacity_bits_per_s, theorem2_bounds(1e11, n, law).upper + 1e-6);
  }
}

TEST(LinkBudget, Examples) {
  LinkParams p;
  p.baud_rate = 1.3e11;
  const auto lb = link_budget(p);
  EXPECT_NEAR(lb.photons_per_pulse_rx, std::exp(-11.5) * 1e16 / 1.3e11, 1e-12);
  EXPECT_NEAR(lb.photons_per_pulse_rx, 0.7792, 0.0001);
  EXPECT_DOUBLE_EQ(lb.alpha_rx * lb.alpha_rx, lb.photons_per_pulse_rx);
  EXPECT_NEAR(lb.alpha_tx * lb.alpha_tx, 1e16 / 1.3e11, 1e-9);
}
