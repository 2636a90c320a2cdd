#ifndef JDR_DETECTION_HPP
#define JDR_DETECTION_HPP

#include <array>
#include <cmath>
#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "jdr/core_model.hpp"
#include "jdr/noise.hpp"
#include "jdr/optimize.hpp"
#include "jdr/rng.hpp"
#include "jdr/special.hpp"

namespace jdr {

/// Standard deviation of a homodyne outcome on a coherent state.
inline constexpr double kQuadratureStd = 0.5;

enum class TernaryOutcome { Plus = 0, Zero = 1, Minus = 2 };

/// Ternary threshold detector: PLUS if x > epsilon, MINUS if x < -epsilon.
struct DetectorConfig {
  double epsilon = 0.0;
  static constexpr double quadrature_std = kQuadratureStd;

  void validate() const {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("DetectorConfig: epsilon must be >= 0");
  }
};

/// Outcome probabilities indexed by TernaryOutcome.
using TernaryLaw = std::array<double, 3>;

inline double& at(TernaryLaw& law, TernaryOutcome y) { return law[static_cast<std::size_t>(y)]; }
inline double at(const TernaryLaw& law, TernaryOutcome y) { return law[static_cast<std::size_t>(y)]; }

/// p(x | beta) = sqrt(2/pi) exp(-2 (x - beta)^2).
inline double homodyne_density(double x, double beta_real) {
  const double d = x - beta_real;
  return std::sqrt(2.0 / std::numbers::pi) * std::exp(-2.0 * d * d);
}

inline TernaryLaw detection_probs(double beta_real, double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("detection_probs: epsilon must be >= 0");
  const double s = std::numbers::sqrt2;
  const double lo = s * (epsilon - beta_real);
  const double hi = s * (epsilon + beta_real);
  return {0.5 * erfc(lo), 0.5 * (erf(lo) + erf(hi)), 0.5 * erfc(hi)};
}

inline TernaryOutcome classify(double x, double epsilon) {
  if (x > epsilon) return TernaryOutcome::Plus;
  if (x < -epsilon) return TernaryOutcome::Minus;
  return TernaryOutcome::Zero;
}

/// Homodyne-measures the real quadrature of beta and applies the threshold.
inline TernaryOutcome sample_and_classify(ComplexAmplitude beta, const DetectorConfig& cfg, Rng& rng) {
  cfg.validate();
  std::normal_distribution<double> noise(beta.real(), DetectorConfig::quadrature_std);
  return classify(noise(rng), cfg.epsilon);
}

// ---------------------------------------------------------------------------
// Gaussian (CLT) approximation of the receiver output and threshold choice.

struct GaussianApprox {
  enum class DensityForm {
    CltConsistent,  // normal density, sd = sqrt(t) |alpha| sigma scale
    AsPrinted,      // (1/(t s sqrt(2 pi))) exp(-((beta - mean)/(2 t s))^2), s = sigma scale
  };
  enum class VarianceSource {
    ExactCosVariance,  // sigma^2 = Var(cos Phi)
    RawMomentMagnitude,    // sigma^2 = |m2 - m1^2|
  };

  DensityForm form = DensityForm::CltConsistent;
  VarianceSource variance = VarianceSource::ExactCosVariance;
  double scale = 1.0;
};

/// Integral of the weighted detection probability, split into the accepted
/// mass `value` and its complement `miss` so that log(value) stays accurate
/// when value is close to `total`.
struct ApproxProbability {
  double value = 0.0;
  double miss = 0.0;
  double total = 1.0;  // integral of the weight itself

  double log_value() const {
    if (miss < 0.5 * total) return std::log(total) + std::log1p(-miss / total);
    return std::log(value);
  }
};

namespace detail {

struct WeightShape {
  double mean;
  double sd;
  double total;  // weight = total * N(b; mean, sd^2)
};

inline WeightShape weight_shape(int t, double mean, double alpha, const CircularMoments& moments,
                                const GaussianApprox& cfg) {
  const double sigma2 = cfg.variance == GaussianApprox::VarianceSource::ExactCosVariance
                            ? moments.var_cos
                            : std::abs(moments.var_cos_paper);
  const double sigma = std::sqrt(std::max(0.0, sigma2)) * cfg.scale;
  if (cfg.form == GaussianApprox::DensityForm::CltConsistent) {
    return {mean, std::sqrt(static_cast<double>(t)) * std::abs(alpha) * sigma, 1.0};
  }
  // (1/(t s sqrt(2 pi))) exp(-((b - mean)/(2 t s))^2): sd sqrt(2) t s, mass sqrt(2).
  return {mean, std::numbers::sqrt2 * t * sigma, std::numbers::sqrt2};
}

/// `edges` are the detector thresholds in beta; the z range is split there.
template <class Accept, class Reject>
ApproxProbability integrate_weighted(const WeightShape& w, Accept&& accept, Reject&& reject,
                                     std::initializer_list<double> edges) {
  ApproxProbability out;
  out.total = w.total;
  if (w.sd == 0.0) {
    out.value = w.total * accept(w.mean);
    out.miss = w.total * reject(w.mean);
    return out;
  }
  // Both density forms are total * N(mean, sd^2); integrate over the
  // standardized z so narrow weights far from the origin stay well conditioned.
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto phi = [&](double z) { return w.total * inv_sqrt_2pi * std::exp(-0.5 * z * z); };
  std::vector<double> cuts{-10.0};
  for (double e : edges) {
    const double z = (e - w.mean) / w.sd;
    if (z > -10.0 && z < 10.0) cuts.push_back(z);
  }
  cuts.push_back(10.0);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b <= a) continue;
    out.value += integrate([&](double z) { return phi(z) * accept(w.mean + w.sd * z); }, a, b, 1e-11, 1e-10).value;
    out.miss += integrate([&](double z) { return phi(z) * reject(w.mean + w.sd * z); }, a, b, 1e-300, 1e-8).value;
  }
  return out;
}

}  // namespace detail

/// Probability that the signal port reports PLUS, averaging the detector over
/// the approximate distribution of the on-port quadrature (mean sqrt(n) m1 alpha).
inline ApproxProbability pC_gaussian_approx_detail(double epsilon, std::size_t n, double alpha,
                                                   const CircularMoments& moments,
                                                   const GaussianApprox& cfg = {}) {
  (void)HadamardOrder::from_size(n);
  if (!(alpha > 0.0)) throw std::invalid_argument("pC_gaussian_approx: alpha must be > 0");
  const double mean = std::sqrt(static_cast<double>(n)) * moments.m1 * alpha;
  const auto w = detail::weight_shape(1, mean, alpha, moments, cfg);
  const double s = std::numbers::sqrt2;
  return detail::integrate_weighted(
      w, [&](double b) { return 0.5 * erfc(s * (epsilon - b)); },
      [&](double b) { return 0.5 * erfc(s * (b - epsilon)); }, {epsilon});
}

inline double pC_gaussian_approx(double epsilon, std::size_t n, double alpha, const CircularMoments& moments,
                                 const GaussianApprox& cfg = {}) {
  return pC_gaussian_approx_detail(epsilon, n, alpha, moments, cfg).value;
}

/// Probability that an idle port reports ZERO under the doubled-variance,
/// zero-mean approximation.
inline ApproxProbability d0_gaussian_approx_detail(double epsilon, std::size_t n, double alpha,
                                                   const CircularMoments& moments,
                                                   const GaussianApprox& cfg = {}) {
  (void)HadamardOrder::from_size(n);
  if (!(alpha > 0.0)) throw std::invalid_argument("d0_gaussian_approx: alpha must be > 0");
  const auto w = detail::weight_shape(2, 0.0, alpha, moments, cfg);
  const double s = std::numbers::sqrt2;
  return detail::integrate_weighted(
      w, [&](double b) { return 0.5 * (erf(s * (epsilon - b)) + erf(s * (epsilon + b))); },
      [&](double b) { return 0.5 * (erfc(s * (epsilon - b)) + erfc(s * (epsilon + b))); }, {-epsilon, epsilon});
}

inline double d0_gaussian_approx(double epsilon, std::size_t n, double alpha, const CircularMoments& moments,
                                 const GaussianApprox& cfg = {}) {
  return d0_gaussian_approx_detail(epsilon, n, alpha, moments, cfg).value;
}

struct ThresholdObjective {
  double p_correct;
  double d_zero;
  double log_objective;  // log(p_correct) + (n - 1) log(d_zero)

  double objective() const { return std::exp(log_objective); }
};

inline ThresholdObjective threshold_objective(double epsilon, std::size_t n, double alpha,
                                              const CircularMoments& moments, const GaussianApprox& cfg = {}) {
  const auto pc = pC_gaussian_approx_detail(epsilon, n, alpha, moments, cfg);
  const auto d0 = d0_gaussian_approx_detail(epsilon, n, alpha, moments, cfg);
  const double log_obj = pc.log_value() + static_cast<double>(n - 1) * d0.log_value();
  return {pc.value, d0.value, log_obj};
}

struct ThresholdResult {
  double epsilon = 0.0;
  double objective = 0.0;
  double log_objective = 0.0;
};

inline constexpr std::size_t kThresholdSeedGrid = 64;

/// Maximizes p_C(eps) d(0)^{n-1} over [0, sqrt(n) m1 alpha]: a 64-point
/// scan locates the peak, golden-section search refines it inside the
/// neighbouring grid cells.
inline ThresholdResult optimize_threshold(std::size_t n, double alpha, const CircularMoments& moments,
                                          const GaussianApprox& cfg = {}) {
  (void)HadamardOrder::from_size(n);
  if (!(alpha > 0.0)) throw std::invalid_argument("optimize_threshold: alpha must be > 0");
  const double hi = std::sqrt(static_cast<double>(n)) * moments.m1 * alpha;
  auto f = [&](double eps) { return threshold_objective(eps, n, alpha, moments, cfg).log_objective; };
  if (!(hi > 0.0)) {
    const double v = f(0.0);
    return {0.0, std::exp(v), v};
  }
  std::size_t idx = 0;
  const auto coarse = grid_maximize(f, 0.0, hi, kThresholdSeedGrid, &idx);
  const double step = hi / static_cast<double>(kThresholdSeedGrid - 1);
  const double lo_b = idx == 0 ? 0.0 : step * static_cast<double>(idx - 1);
  const double hi_b = idx + 1 >= kThresholdSeedGrid ? hi : std::min(hi, step * static_cast<double>(idx + 1));
  auto fine = golden_section_maximize(f, lo_b, hi_b, 1e-10 * hi);
  if (coarse.value > fine.value) fine = coarse;
  return {fine.x, std::exp(fine.value), fine.value};
}

/// The asymptotic choice eps_n = sqrt(n) m1 alpha / 2.
inline double half_mean_threshold(std::size_t n, double alpha, const CircularMoments& moments) {
  return 0.5 * std::sqrt(static_cast<double>(n)) * moments.m1 * alpha;
}

}  // namespace jdr

#endif  // JDR_DETECTION_HPP
