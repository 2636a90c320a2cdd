#ifndef JDR_SELFTEST_HPP
#define JDR_SELFTEST_HPP

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jdr/capacity.hpp"
#include "jdr/core_model.hpp"
#include "jdr/detection.hpp"
#include "jdr/special.hpp"
#include "jdr/testing/oracles.hpp"

namespace jdr {

struct SelftestOptions {
  /// Replaces detection_probs with the sign-flipped PLUS probability
  /// 1/2 (1 - erf(sqrt2 (beta - eps))), which must make the run fail.
  bool inject_detection_sign_flip = false;
  std::uint64_t seed = 20240611;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct SelftestReport {
  std::vector<SuiteResult> suites;

  bool passed() const {
    for (const auto& s : suites)
      if (!s.passed) return false;
    return !suites.empty();
  }
};

namespace detail {

inline SuiteResult timed_suite(const std::string& name, const std::function<bool(std::ostringstream&)>& body) {
  SuiteResult r;
  r.name = name;
  std::ostringstream detail;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.passed = body(detail);
  } catch (const std::exception& e) {
    r.passed = false;
    detail << "exception: " << e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.detail = detail.str();
  return r;
}

}  // namespace detail

/// Fast invariant suite: detection normalization, butterfly against the
/// dense matrix, noiseless receiver identity, product-channel MI against
/// exhaustive enumeration at n = 2, Bessel-ratio oracles.
inline SelftestReport run_selftest(const SelftestOptions& opts = {}) {
  SelftestReport report;
  Rng rng = make_rng(opts.seed);

  std::function<TernaryLaw(double, double)> probs = detection_probs;
  if (opts.inject_detection_sign_flip) {
    probs = [](double beta, double eps) {
      auto p = detection_probs(beta, eps);
      p[0] = 0.5 * (1.0 - erf(std::numbers::sqrt2 * (beta - eps)));
      return p;
    };
  }

  report.suites.push_back(detail::timed_suite("detection-normalization", [&](std::ostringstream& out) {
    std::uniform_real_distribution<double> beta(-6.0, 6.0), eps(0.0, 6.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const auto p = probs(beta(rng), eps(rng));
      worst = std::max(worst, std::abs(p[0] + p[1] + p[2] - 1.0));
    }
    out << "max |sum - 1| = " << worst;
    return worst <= 1e-12;
  }));

  report.suites.push_back(detail::timed_suite("butterfly-vs-matrix", [&](std::ostringstream& out) {
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (std::size_t n = 2; n <= 64; n *= 2)
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<ComplexAmplitude> x(n);
        for (auto& v : x) v = {g(rng), g(rng)};
        const auto fast = hadamard_receiver_transform(x);
        const auto slow = testing::dense_hadamard_product(x);
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(fast[i] - slow[i]));
      }
    out << "max |delta| = " << worst;
    return worst < 1e-12;
  }));

  report.suites.push_back(detail::timed_suite("noiseless-receiver-identity", [&](std::ostringstream& out) {
    const ComplexAmplitude alpha{0.8, 0.0};
    double worst = 0.0;
    for (std::size_t n = 2; n <= 64; n *= 2) {
      const auto order = HadamardOrder::from_size(n);
      for (std::size_t k = 0; k < n; ++k) {
        const auto w = hadamard_receiver_transform(encode_codeword(k, alpha, order));
        for (std::size_t j = 0; j < n; ++j) {
          const ComplexAmplitude want = j == k ? std::sqrt(static_cast<double>(n)) * alpha : 0.0;
          worst = std::max(worst, std::abs(w[j] - want));
        }
      }
    }
    out << "max |delta| = " << worst;
    return worst < 1e-12;
  }));

  report.suites.push_back(detail::timed_suite("mi-oracle-n2", [&](std::ostringstream& out) {
    bool ok = true;
    double worst_z = 0.0;
    auto random_row = [&]() {
      std::exponential_distribution<double> e(1.0);
      TernaryLaw r{e(rng), e(rng), e(rng)};
      const double s = r[0] + r[1] + r[2];
      for (auto& v : r) v /= s;
      return r;
    };
    for (int i = 0; i < 10; ++i) {
      PortLawEstimate law;
      law.on = {random_row(), random_row()};
      law.off = {random_row(), random_row()};
      const double exact = testing::exact_product_channel_mi(law, 2);
      const auto est = mi_product_channel(law, 2, 100000, rng);
      const double z = std::abs(est.bits - exact) / est.std_error;
      worst_z = std::max(worst_z, z);
      ok = ok && z <= 3.0;
    }
    out << "worst |MC - exact| / se = " << worst_z;
    return ok;
  }));

  report.suites.push_back(detail::timed_suite("bessel-ratio-oracles", [&](std::ostringstream& out) {
    double small = 0.0, large = 0.0;
    for (double k = 0.05; k <= 10.0; k += 0.05)
      small = std::max(small, std::abs(bessel_ratio(1, k) - testing::bessel_ratio_series(1, k)));
    for (double k = 1e6; k <= 1e9; k *= 1.7)
      large = std::max(large, std::abs(bessel_ratio(1, k) - testing::bessel_ratio1_large_kappa(k)));
    out << "small-kappa max err = " << small << ", large-kappa max err = " << large;
    return small < 1e-10 && large < 1e-12;
  }));

  return report;
}

}  // namespace jdr

#endif  // JDR_SELFTEST_HPP
