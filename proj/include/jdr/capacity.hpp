#ifndef JDR_CAPACITY_HPP
#define JDR_CAPACITY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "jdr/core_model.hpp"
#include "jdr/detection.hpp"
#include "jdr/noise.hpp"
#include "jdr/rng.hpp"

namespace jdr {

/// Row index of a port law: transmitted sign of alpha.
enum class InputSign { Plus = 0, Minus = 1 };

/// Phase-averaged ternary outcome laws of the signal port (`on`) and of an
/// idle port (`off`), one row per input sign.
struct PortLawEstimate {
  std::array<TernaryLaw, 2> on{};
  std::array<TernaryLaw, 2> off{};
  std::size_t phase_samples = 0;
  std::size_t homodyne_samples_per_phase = 0;  // 0: closed-form detection probabilities per phase

  const TernaryLaw& on_row(InputSign a) const { return on[static_cast<std::size_t>(a)]; }
  const TernaryLaw& off_row(InputSign a) const { return off[static_cast<std::size_t>(a)]; }
};

inline TernaryLaw mirrored(const TernaryLaw& law) { return {law[2], law[1], law[0]}; }

/// Throws unless every row is a probability vector within `tol`.
inline void validate(const PortLawEstimate& law, double tol = 1e-9) {
  for (const auto* rows : {&law.on, &law.off}) {
    for (const auto& row : *rows) {
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("PortLawEstimate: negative or non-finite entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("PortLawEstimate: row does not sum to 1");
    }
  }
}

/// Estimates p_C and p_I by averaging the closed-form detection
/// probabilities over `phase_samples` phase-noise realizations. Codeword 0
/// is transmitted; every idle port contributes its own signature sum, and
/// the law for -alpha follows by mirroring.
inline PortLawEstimate estimate_port_laws(std::size_t n, double alpha_rx, const PhaseNoiseModel& model,
                                          double epsilon, std::size_t phase_samples, Rng& rng) {
  const auto order = HadamardOrder::from_size(n);
  if (!(alpha_rx >= 0.0)) throw std::invalid_argument("estimate_port_laws: alpha_rx must be >= 0");
  if (phase_samples < 1) throw std::invalid_argument("estimate_port_laws: need at least one phase sample");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("estimate_port_laws: epsilon must be >= 0");

  PortLawEstimate law;
  law.phase_samples = phase_samples;
  TernaryLaw on{}, off{};
  std::vector<double> phases(n);
  std::vector<ComplexAmplitude> amps(n);
  const double off_weight = 1.0 / static_cast<double>(n - 1);
  for (std::size_t s = 0; s < phase_samples; ++s) {
    sample_phases(model, rng, phases);
    for (std::size_t m = 0; m < n; ++m) amps[m] = std::polar(alpha_rx, phases[m]);  // H_{m,0} = +1
    apply_hadamard_receiver(amps);
    const auto p_on = detection_probs(amps[0].real(), epsilon);
    for (int y = 0; y < 3; ++y) on[y] += p_on[y];
    for (std::size_t k = 1; k < n; ++k) {
      const auto p_off = detection_probs(amps[k].real(), epsilon);
      for (int y = 0; y < 3; ++y) off[y] += off_weight * p_off[y];
    }
  }
  const double inv = 1.0 / static_cast<double>(phase_samples);
  for (int y = 0; y < 3; ++y) {
    on[y] *= inv;
    off[y] *= inv;
  }
  law.on = {on, mirrored(on)};
  law.off = {off, mirrored(off)};
  (void)order;
  return law;
}

struct MutualInformationEstimate {
  double bits = 0.0;       // per channel use (per codeword for the receiver)
  double std_error = 0.0;
  std::size_t samples = 0;
};

struct CapacityEstimate {
  double mi_bits_per_use = 0.0;
  double std_error = 0.0;              // of mi_bits_per_use
  double capacity_bits_per_s = 0.0;
  double capacity_std_error = 0.0;
  std::size_t samples = 0;
};

namespace detail {

inline std::size_t draw_outcome(const TernaryLaw& law, double u) {
  if (u < law[0]) return 0;
  if (u < law[0] + law[1]) return 1;
  return 2;
}

inline double safe_log(double p) { return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity(); }

}  // namespace detail

/// Monte-Carlo estimate of I(Y^n; A, N) in bits for the product channel
/// q(y^n | a, k) = p_on(y_k | a) prod_{k' != k} p_off(y_k' | a) with uniform
/// (a, k). Each sample costs O(n): the off-port log-product is formed once
/// per sign and corrected at each candidate port.
inline MutualInformationEstimate mi_product_channel(const PortLawEstimate& law, std::size_t n,
                                                    std::size_t mc_samples, Rng& rng) {
  (void)HadamardOrder::from_size(n);
  validate(law);
  if (mc_samples < 2) throw std::invalid_argument("mi_product_channel: need at least two samples");

  std::array<std::array<double, 3>, 2> log_on{}, log_off{};
  for (int a = 0; a < 2; ++a)
    for (int y = 0; y < 3; ++y) {
      log_on[a][y] = detail::safe_log(law.on[a][y]);
      log_off[a][y] = detail::safe_log(law.off[a][y]);
    }

  const double log_2n = std::log(2.0 * static_cast<double>(n));
  std::vector<std::size_t> y(n);
  std::vector<double> terms(2 * n);
  std::uniform_int_distribution<std::size_t> pick_port(0, n - 1);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < mc_samples; ++s) {
    const std::size_t a = uniform01(rng) < 0.5 ? 0 : 1;
    const std::size_t k = pick_port(rng);
    for (std::size_t j = 0; j < n; ++j)
      y[j] = detail::draw_outcome(j == k ? law.on[a] : law.off[a], uniform01(rng));

    double log_true = 0.0;
    double log_max = -std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < 2; ++b) {
      double finite_sum = 0.0;
      std::size_t zeros = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const double l = log_off[b][y[j]];
        if (std::isinf(l)) ++zeros;
        else finite_sum += l;
      }
      for (std::size_t kk = 0; kk < n; ++kk) {
        const double l_off = log_off[b][y[kk]];
        const std::size_t other_zeros = zeros - (std::isinf(l_off) ? 1 : 0);
        double v = -std::numeric_limits<double>::infinity();
        if (other_zeros == 0) v = finite_sum - (std::isinf(l_off) ? 0.0 : l_off) + log_on[b][y[kk]];
        terms[b * n + kk] = v;
        log_max = std::max(log_max, v);
        if (b == a && kk == k) log_true = v;
      }
    }
    double acc = 0.0;
    for (double v : terms) acc += std::exp(v - log_max);
    const double log_q = log_max + std::log(acc) - log_2n;
    const double x = (log_true - log_q) / std::numbers::ln2;

    const double delta = x - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(mc_samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(mc_samples)), mc_samples};
}

/// C(b, E, n) = b I(Y^n; A N) / n.
inline CapacityEstimate hadamard_capacity(double b, const MutualInformationEstimate& mi, std::size_t n) {
  if (!(b > 0.0)) throw std::invalid_argument("hadamard_capacity: baud rate must be > 0");
  (void)HadamardOrder::from_size(n);
  const double scale = b / static_cast<double>(n);
  return {mi.bits, mi.std_error, scale * mi.bits, scale * mi.std_error, mi.samples};
}

/// I(Y; A) in bits for A in {+alpha, -alpha} with P(A = +alpha) = prior and
/// Y the homodyne outcome, p(y | a) = mean_j N(y; a cos(phi_j), 1/4) over
/// the supplied phase nodes. Integrated with Simpson's rule.
inline double classical_bpsk_mi(double alpha_rx, std::span<const double> cos_phases, double prior = 0.5,
                                std::size_t intervals = 4000) {
  if (!(alpha_rx >= 0.0)) throw std::invalid_argument("classical_bpsk_mi: alpha_rx must be >= 0");
  if (!(prior >= 0.0 && prior <= 1.0)) throw std::invalid_argument("classical_bpsk_mi: prior outside [0,1]");
  if (cos_phases.empty()) throw std::invalid_argument("classical_bpsk_mi: need at least one phase node");
  if (alpha_rx == 0.0 || prior == 0.0 || prior == 1.0) return 0.0;
  intervals += intervals % 2;

  const double half_width = alpha_rx + 12.0 * kQuadratureStd;
  const double h = 2.0 * half_width / static_cast<double>(intervals);
  const double inv_node = 1.0 / static_cast<double>(cos_phases.size());
  std::vector<double> dens_plus(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double yv = -half_width + h * static_cast<double>(i);
    double acc = 0.0;
    for (double c : cos_phases) acc += homodyne_density(yv, alpha_rx * c);
    dens_plus[i] = acc * inv_node;
  }
  // p(y | -alpha) is the mirror image of p(y | +alpha) on the symmetric grid.
  double total = 0.0;
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double pp = dens_plus[i];
    const double pm = dens_plus[intervals - i];
    const double mix = prior * pp + (1.0 - prior) * pm;
    double f = 0.0;
    if (pp > 0.0) f += prior * pp * std::log2(pp / mix);
    if (pm > 0.0) f += (1.0 - prior) * pm * std::log2(pm / mix);
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    total += w * f;
  }
  return std::max(0.0, total * h / 3.0);
}

/// Classical BPSK homodyne capacity b I(Y; A) with the uniform prior, the
/// phase expectation taken over `phase_samples` draws from the noise model.
inline CapacityEstimate classical_bpsk_capacity(double b, double alpha_rx, const PhaseNoiseModel& model,
                                                Rng& rng, std::size_t phase_samples = 1000) {
  if (!(b > 0.0)) throw std::invalid_argument("classical_bpsk_capacity: baud rate must be > 0");
  if (phase_samples < 1) throw std::invalid_argument("classical_bpsk_capacity: need phase samples");
  auto phases = sample_phases(model, phase_samples, rng);
  for (auto& p : phases) p = std::cos(p);
  const double mi = classical_bpsk_mi(alpha_rx, phases);
  return {mi, 0.0, b * mi, 0.0, phase_samples};
}

inline double binary_entropy(double d) {
  if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("binary_entropy: argument outside [0,1]");
  if (d == 0.0 || d == 1.0) return 0.0;
  return -d * std::log2(d) - (1.0 - d) * std::log2(1.0 - d);
}

struct CapacityBounds {
  double upper = 0.0;        // b log2(2n) / n, asserted
  double upper_log_n = 0.0;  // b log2(n) / n, reported
  std::optional<double> lower;
  double delta = 0.0;
};

inline constexpr double kOffPortSymmetryTolerance = 0.01;

/// Capacity sandwich for a port law. The lower bound exists only when
/// delta < 1/n and the idle-port law does not depend on the input sign.
inline CapacityBounds theorem2_bounds(double b, std::size_t n, const PortLawEstimate& law) {
  const auto order = HadamardOrder::from_size(n);
  const double nd = static_cast<double>(n);
  const double log_n = static_cast<double>(order.exponent());
  CapacityBounds out;
  out.upper = b * (log_n + 1.0) / nd;
  out.upper_log_n = b * log_n / nd;
  const auto plus = static_cast<std::size_t>(InputSign::Plus);
  const auto zero = static_cast<std::size_t>(TernaryOutcome::Zero);
  out.delta = std::clamp(std::max(1.0 - law.on[plus][0], 1.0 - law.off[plus][zero]), 0.0, 1.0);
  bool symmetric = true;
  for (int y = 0; y < 3; ++y)
    symmetric = symmetric && std::abs(law.off[0][y] - law.off[1][y]) <= kOffPortSymmetryTolerance;
  if (out.delta < 1.0 / nd && symmetric)
    out.lower = b * ((1.0 - out.delta) * log_n - 5.0 * binary_entropy(out.delta)) / nd;
  return out;
}

struct LinkBudget {
  double alpha_tx = 0.0;
  double alpha_rx = 0.0;
  double photons_per_pulse_rx = 0.0;
};

inline LinkBudget link_budget(const LinkParams& p) {
  p.validate();
  const double tx = p.photon_flux / p.baud_rate;
  const double rx = p.transmittivity() * tx;
  return {std::sqrt(tx), std::sqrt(rx), rx};
}

}  // namespace jdr

#endif  // JDR_CAPACITY_HPP
