#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "jdr/core_model.hpp"
#include "jdr/noise.hpp"
#include "jdr/testing/oracles.hpp"

using namespace jdr;

namespace {

std::vector<ComplexAmplitude> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<ComplexAmplitude> x(n);
  for (auto& v : x) v = {g(rng), g(rng)};
  return x;
}

double energy(const std::vector<ComplexAmplitude>& x) {
  double e = 0.0;
  for (auto v : x) e += std::norm(v);
  return e;
}

}  // namespace

TEST(HadamardOrder, RejectsNonPowersOfTwo) {
  EXPECT_THROW(HadamardOrder::from_size(0), std::invalid_argument);
  EXPECT_THROW(HadamardOrder::from_size(1), std::invalid_argument);
  EXPECT_THROW(HadamardOrder::from_size(6), std::invalid_argument);
  EXPECT_EQ(HadamardOrder::from_size(32).exponent(), 5u);
  EXPECT_EQ(HadamardOrder::from_exponent(3).size(), 8u);
}

TEST(HadamardEntry, Examples) {
  EXPECT_EQ(hadamard_entry(0, 5, HadamardOrder::from_size(8)), 1);
  EXPECT_EQ(hadamard_entry(1, 1, HadamardOrder::from_size(2)), -1);
  EXPECT_EQ(hadamard_entry(3, 3, HadamardOrder::from_size(4)), 1);
  EXPECT_THROW(hadamard_entry(4, 0, HadamardOrder::from_size(4)), std::invalid_argument);
}

TEST(HadamardEntry, SymmetricWithUnitFirstRowAndOrthogonalRows) {
  for (std::size_t n = 2; n <= 64; n *= 2) {
    const auto order = HadamardOrder::from_size(n);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_EQ(hadamard_entry(0, j, order), 1);
      EXPECT_EQ(hadamard_entry(j, 0, order), 1);
      for (std::size_t k = 0; k < n; ++k) {
        ASSERT_EQ(hadamard_entry(j, k, order), hadamard_entry(k, j, order));
        int dot = 0;
        for (std::size_t m = 0; m < n; ++m) dot += hadamard_entry(j, m, order) * hadamard_entry(k, m, order);
        ASSERT_EQ(dot, j == k ? static_cast<int>(n) : 0) << "n=" << n << " j=" << j << " k=" << k;
      }
    }
  }
}

TEST(Signature, OffDiagonalSignaturesAreBalanced) {
  for (std::size_t n = 2; n <= 64; n *= 2) {
    const auto order = HadamardOrder::from_size(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        int sum = 0;
        for (int v : signature(i, k, order)) sum += v;
        ASSERT_EQ(sum, i == k ? static_cast<int>(n) : 0);
      }
  }
}

TEST(EncodeCodeword, Examples) {
  const ComplexAmplitude a{0.7, -0.2};
  const auto w0 = encode_codeword(0, a, HadamardOrder::from_size(4));
  for (auto v : w0) EXPECT_EQ(v, a);
  const auto w1 = encode_codeword(1, a, HadamardOrder::from_size(2));
  EXPECT_EQ(w1[0], a);
  EXPECT_EQ(w1[1], -a);
  const auto w3 = encode_codeword(3, 1.0, HadamardOrder::from_size(4));
  const std::vector<ComplexAmplitude> want{1.0, -1.0, -1.0, 1.0};
  EXPECT_EQ(w3, want);
  EXPECT_THROW(encode_codeword(4, a, HadamardOrder::from_size(4)), std::invalid_argument);
}

TEST(Beamsplitter, Examples) {
  const ComplexAmplitude a{0.3, 0.4};
  auto [s, d] = beamsplitter(a, a);
  EXPECT_NEAR(std::abs(s - std::sqrt(2.0) * a), 0.0, 1e-15);
  EXPECT_EQ(d, ComplexAmplitude(0.0));
  auto [s2, d2] = beamsplitter(1.0, -1.0);
  EXPECT_EQ(s2, ComplexAmplitude(0.0));
  EXPECT_NEAR(d2.real(), std::sqrt(2.0), 1e-15);
  auto [s3, d3] = beamsplitter(0.0, 0.0);
  EXPECT_EQ(s3, ComplexAmplitude(0.0));
  EXPECT_EQ(d3, ComplexAmplitude(0.0));
}

TEST(Beamsplitter, PreservesEnergy) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    auto x = random_vector(2, rng);
    auto [s, d] = beamsplitter(x[0], x[1]);
    EXPECT_NEAR(std::norm(s) + std::norm(d), energy(x), 1e-12 * energy(x));
  }
}

TEST(ReceiverTransform, MatchesDenseMatrixAndConservesEnergy) {
  std::mt19937_64 rng(11);
  for (std::size_t n = 2; n <= 64; n *= 2) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = random_vector(n, rng);
      const auto fast = hadamard_receiver_transform(x);
      const auto slow = jdr::testing::dense_hadamard_product(x);
      for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(fast[i] - slow[i]));
      EXPECT_NEAR(energy(fast), energy(x), 1e-10 * energy(x));
    }
    EXPECT_LT(worst, 1e-12) << "n=" << n;
  }
}

TEST(ReceiverTransform, ConcentratesNoiselessCodewordsOnOnePort) {
  const ComplexAmplitude alpha{1.3, 0.0};
  for (std::size_t n = 2; n <= 64; n *= 2) {
    const auto order = HadamardOrder::from_size(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto out = hadamard_receiver_transform(encode_codeword(k, alpha, order));
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) EXPECT_NEAR(std::abs(out[j] - std::sqrt(double(n)) * alpha), 0.0, 1e-12);
        else EXPECT_LT(std::abs(out[j]), 1e-12);
      }
    }
  }
}

TEST(ReceiverTransform, ZeroInputAndBadLength) {
  std::vector<ComplexAmplitude> zero(8);
  for (auto v : hadamard_receiver_transform(zero)) EXPECT_EQ(v, ComplexAmplitude(0.0));
  std::vector<ComplexAmplitude> bad(6);
  EXPECT_THROW(hadamard_receiver_transform(bad), std::invalid_argument);
  std::vector<ComplexAmplitude> one(1);
  EXPECT_THROW(hadamard_receiver_transform(one), std::invalid_argument);
}

TEST(ReceivedAmplitudes, NoiselessAndTwoPortExamples) {
  const double alpha = 0.9;
  const auto order4 = HadamardOrder::from_size(4);
  std::vector<double> zeros(4, 0.0);
  const auto out = received_amplitudes(2, alpha, zeros, order4);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(out[j] - (j == 2 ? 2.0 * alpha : 0.0)), 0.0, 1e-14);

  // n=2, k=0, phases (0, pi): (alpha (1 + e^{i pi}), alpha (1 - e^{i pi})) / sqrt 2.
  std::vector<double> phases{0.0, std::numbers::pi};
  const auto two = received_amplitudes(0, alpha, phases, HadamardOrder::from_size(2));
  EXPECT_NEAR(std::abs(two[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(two[1] - std::sqrt(2.0) * alpha), 0.0, 1e-15);

  std::vector<double> short_phases(3);
  EXPECT_THROW(received_amplitudes(0, alpha, short_phases, order4), std::invalid_argument);
}

TEST(ReceivedAmplitudes, MatchesSignatureSumFormula) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ph(-3.0, 3.0);
  const auto order = HadamardOrder::from_size(16);
  const ComplexAmplitude alpha{0.6, 0.0};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> phases(16);
    for (auto& p : phases) p = ph(rng);
    const std::size_t k = trial % 16;
    const auto out = received_amplitudes(k, alpha, phases, order);
    for (std::size_t kp = 0; kp < 16; ++kp) {
      ComplexAmplitude acc = 0.0;
      const auto t = signature(k, kp, order);
      for (std::size_t m = 0; m < 16; ++m) acc += double(t[m]) * std::polar(1.0, phases[m]);
      EXPECT_NEAR(std::abs(out[kp] - alpha * acc / 4.0), 0.0, 1e-13);
    }
  }
}

TEST(ReceivedAmplitudes, OffPortLawDoesNotDependOnPortPair) {
  // Balanced signatures make every (k, k') off-port law identical under
  // i.i.d. phases; compare quantiles of Re(Lambda) for two different pairs.
  const auto order = HadamardOrder::from_size(8);
  const PhaseNoiseModel model = VonMises{2.0};
  Rng rng(99);
  std::vector<double> a, b;
  for (int i = 0; i < 40000; ++i) {
    auto phases = sample_phases(model, 8, rng);
    a.push_back(received_amplitudes(0, 1.0, phases, order)[1].real());
    phases = sample_phases(model, 8, rng);
    b.push_back(received_amplitudes(5, 1.0, phases, order)[3].real());
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double ks = 0.0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] <= b[j]) ++i;
    else ++j;
    ks = std::max(ks, std::abs(double(i) - double(j)) / a.size());
  }
  // Two-sample KS critical value at the 0.1% level: 1.95 sqrt(2/N).
  EXPECT_LT(ks, 1.95 * std::sqrt(2.0 / 40000.0));
}

TEST(LinkParams, TransmittivityFollowsAttenuation) {
  LinkParams p;
  p.attenuation_per_km = 0.046;
  p.fiber_length_km = 250.0;
  EXPECT_NEAR(p.transmittivity(), std::exp(-11.5), 1e-12 * std::exp(-11.5));
  EXPECT_NEAR(p.transmittivity(), 1.01301e-5, 1e-10);
  p.baud_rate = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}
