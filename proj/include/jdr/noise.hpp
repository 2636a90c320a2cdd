#ifndef JDR_NOISE_HPP
#define JDR_NOISE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jdr/rng.hpp"
#include "jdr/special.hpp"

namespace jdr {

struct WrappedNormal {
  double sigma2 = 0.0;  // rad^2
};

struct VonMises {
  double kappa = 0.0;
};

/// Zero-mean circular phase-noise law. Samples are reported in (-pi, pi].
using PhaseNoiseModel = std::variant<WrappedNormal, VonMises>;

enum class NoiseKind { WrappedNormal, VonMises };

inline NoiseKind kind_of(const PhaseNoiseModel& m) {
  return std::holds_alternative<WrappedNormal>(m) ? NoiseKind::WrappedNormal : NoiseKind::VonMises;
}

inline std::string_view to_string(NoiseKind k) {
  return k == NoiseKind::WrappedNormal ? "wrapped-normal" : "von-mises";
}

inline NoiseKind parse_noise_kind(std::string_view s) {
  if (s == "wrapped-normal") return NoiseKind::WrappedNormal;
  if (s == "von-mises") return NoiseKind::VonMises;
  throw std::invalid_argument("unknown noise model kind '" + std::string(s) + "'");
}

/// sigma^2 for the wrapped normal, kappa for von Mises.
inline double noise_parameter(const PhaseNoiseModel& m) {
  return std::visit([](auto v) {
    if constexpr (std::is_same_v<decltype(v), WrappedNormal>) return v.sigma2;
    else return v.kappa;
  }, m);
}

inline void validate(const PhaseNoiseModel& m) {
  if (!(noise_parameter(m) >= 0.0))
    throw std::invalid_argument("PhaseNoiseModel: parameter must be >= 0");
}

// Calibrated Kerr phase-noise endpoints at N = 1e16 photons/s over 250 km.
inline constexpr double kSigma2PerBaud = 6e-19;
inline constexpr double kKappaTimesBaud = 1e19 / 6.0;

inline double sigma2_from_baudrate(double b) {
  if (!(b >= 0.0)) throw std::invalid_argument("sigma2_from_baudrate: baud rate must be >= 0");
  return kSigma2PerBaud * b;
}

inline double kappa_from_baudrate(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("kappa_from_baudrate: baud rate must be > 0");
  return kKappaTimesBaud / b;
}

/// sigma^2 = 4 xi^2 N / b * (2 - tau - tau (1 - ln tau)^2). xi is supplied by
/// the caller; the calibrated endpoints above are what the experiments use.
inline double sigma2_full_chain(double xi, double photon_flux, double b, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("sigma2_full_chain: tau must lie in (0,1)");
  if (!(b > 0.0)) throw std::invalid_argument("sigma2_full_chain: baud rate must be > 0");
  if (!(photon_flux >= 0.0) || !(xi >= 0.0))
    throw std::invalid_argument("sigma2_full_chain: xi and N must be >= 0");
  const double l = 1.0 - std::log(tau);
  return 4.0 * xi * xi * photon_flux / b * (2.0 - tau - tau * l * l);
}

inline PhaseNoiseModel model_for_baudrate(NoiseKind kind, double b) {
  if (kind == NoiseKind::WrappedNormal) return WrappedNormal{sigma2_from_baudrate(b)};
  return VonMises{kappa_from_baudrate(b)};
}

inline double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

/// Above this concentration the von Mises sampler switches to a wrapped
/// normal(0, 1/kappa); the two laws agree to O(1/kappa^2) in every moment.
inline constexpr double kVonMisesNormalCutoff = 1e8;

namespace detail {

// Best-Fisher rejection sampler, rearranged so that r - 1, 1 - f and
// kappa (r - f) are formed without cancellation at large kappa.
class BestFisher {
 public:
  explicit BestFisher(double kappa) : kappa_(kappa) {
    const double root = std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double tau = 1.0 + root;
    const double one_minus_rho = (std::sqrt(2.0 * tau) - 1.0 - 1.0 / (root + 2.0 * kappa)) / (2.0 * kappa);
    const double rho = 1.0 - one_minus_rho;
    rm1_ = one_minus_rho * one_minus_rho / (2.0 * rho);
  }

  double operator()(Rng& rng) const {
    constexpr double pi = std::numbers::pi;
    for (;;) {
      const double u1 = uniform01(rng);
      const double u2 = uniform01(rng);
      const double u3 = uniform01(rng);
      const double half = 0.5 * pi * u1;
      const double one_plus_z = 2.0 * std::cos(half) * std::cos(half);
      const double one_minus_z = 2.0 * std::sin(half) * std::sin(half);
      const double r_plus_z = rm1_ + one_plus_z;
      const double one_minus_f = rm1_ * one_minus_z / r_plus_z;
      const double c = kappa_ * rm1_ * (rm1_ + 2.0) / r_plus_z;
      if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
        const double theta = 2.0 * std::asin(std::sqrt(std::min(1.0, 0.5 * one_minus_f)));
        return u3 < 0.5 ? -theta : theta;
      }
    }
  }

 private:
  double kappa_;
  double rm1_;
};

}  // namespace detail

/// Fills `out` with i.i.d. phase samples in (-pi, pi].
inline void sample_phases(const PhaseNoiseModel& model, Rng& rng, std::span<double> out) {
  validate(model);
  if (const auto* wn = std::get_if<WrappedNormal>(&model)) {
    if (wn->sigma2 == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    std::normal_distribution<double> normal(0.0, std::sqrt(wn->sigma2));
    for (auto& x : out) x = wrap_angle(normal(rng));
    return;
  }
  const double kappa = std::get<VonMises>(model).kappa;
  if (kappa == 0.0) {
    std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
    for (auto& x : out) x = wrap_angle(uniform(rng));
    return;
  }
  if (kappa > kVonMisesNormalCutoff) {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(kappa));
    for (auto& x : out) x = wrap_angle(normal(rng));
    return;
  }
  const detail::BestFisher sampler(kappa);
  for (auto& x : out) x = sampler(rng);
}

inline std::vector<double> sample_phases(const PhaseNoiseModel& model, std::size_t count, Rng& rng) {
  std::vector<double> out(count);
  sample_phases(model, rng, out);
  return out;
}

/// First two trigonometric moments of a zero-mean phase law and the
/// variance of cos(Phi) derived from them.
struct CircularMoments {
  double m1 = 1.0;  // E[cos Phi] = E[e^{i Phi}]
  double m2 = 1.0;  // E[cos 2 Phi]
  double var_cos = 0.0;        // Var(cos Phi) = (1 + m2)/2 - m1^2
  double var_cos_paper = 0.0;  // m2 - m1^2, reported for comparison; negative for kappa > 0
};

namespace detail {

inline constexpr int kAsymptoticTerms = 30;

// Coefficients c_k of e^{-x} sqrt(2 pi x) I_nu(x) = sum_k c_k x^{-k}.
inline std::array<double, kAsymptoticTerms> bessel_i_asymptotic_coefficients(int nu) {
  std::array<double, kAsymptoticTerms> c{};
  const double mu = 4.0 * nu * nu;
  c[0] = 1.0;
  for (int k = 1; k < kAsymptoticTerms; ++k) {
    const double odd = 2.0 * k - 1.0;
    c[k] = -c[k - 1] * (mu - odd * odd) / (8.0 * k);
  }
  return c;
}

// sum_k x^{-k} sum_{i+j=k} (w_aa a_i a_j + w_ac a_i c_j + w_bb b_i b_j)
inline double asymptotic_quadratic_form(double x, double w_aa, double w_ac, double w_bb) {
  const auto a = bessel_i_asymptotic_coefficients(0);
  const auto b = bessel_i_asymptotic_coefficients(1);
  const auto c = bessel_i_asymptotic_coefficients(2);
  double sum = 0.0;
  double power = 1.0;
  for (int k = 0; k < kAsymptoticTerms; ++k) {
    double coef = 0.0;
    for (int i = 0; i <= k; ++i) coef += w_aa * a[i] * a[k - i] + w_ac * a[i] * c[k - i] + w_bb * b[i] * b[k - i];
    sum += coef * power;
    power /= x;
  }
  return sum;
}

}  // namespace detail

inline CircularMoments circular_moments(const PhaseNoiseModel& model) {
  validate(model);
  CircularMoments out;
  if (const auto* wn = std::get_if<WrappedNormal>(&model)) {
    const double s = wn->sigma2;
    out.m1 = std::exp(-0.5 * s);
    out.m2 = std::exp(-2.0 * s);
    const double em1 = std::expm1(-s);
    out.var_cos = 0.5 * em1 * em1;
    out.var_cos_paper = std::exp(-s) * em1;
    return out;
  }
  const double kappa = std::get<VonMises>(model).kappa;
  out.m1 = bessel_ratio(1, kappa);
  out.m2 = bessel_ratio(2, kappa);
  if (kappa < 50.0) {
    out.var_cos = 0.5 * (1.0 + out.m2) - out.m1 * out.m1;
    out.var_cos_paper = out.m2 - out.m1 * out.m1;
  } else if (std::isinf(kappa)) {
    out.var_cos = 0.0;
    out.var_cos_paper = 0.0;
  } else {
    // Leading orders cancel exactly at the coefficient level.
    const double s0 = detail::bessel_i_asymptotic_scaled(0, kappa);
    out.var_cos = detail::asymptotic_quadratic_form(kappa, 1.0, 1.0, -2.0) / (2.0 * s0 * s0);
    out.var_cos_paper = detail::asymptotic_quadratic_form(kappa, 0.0, 1.0, -1.0) / (s0 * s0);
  }
  return out;
}

}  // namespace jdr

#endif  // JDR_NOISE_HPP
