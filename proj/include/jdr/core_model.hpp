#ifndef JDR_CORE_MODEL_HPP
#define JDR_CORE_MODEL_HPP

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jdr {

/// Coherent-state amplitude in photon-number units: |alpha|^2 is the mean
/// photon count per pulse, so the pulse energy is E = hbar*omega0*|alpha|^2.
using ComplexAmplitude = std::complex<double>;

inline double photon_number(ComplexAmplitude a) { return std::norm(a); }

/// Order n = 2^K of a Hadamard code / receiver.
class HadamardOrder {
 public:
  static HadamardOrder from_exponent(unsigned K) {
    if (K > 30) throw std::invalid_argument("HadamardOrder: exponent too large");
    return HadamardOrder(K);
  }

  /// Receiver-usable order; n must be a power of two and at least 2.
  static HadamardOrder from_size(std::size_t n) {
    if (n < 2 || !std::has_single_bit(n))
      throw std::invalid_argument("HadamardOrder: n must be a power of two >= 2, got " +
                                  std::to_string(n));
    return HadamardOrder(static_cast<unsigned>(std::countr_zero(n)));
  }

  unsigned exponent() const { return K_; }
  std::size_t size() const { return std::size_t{1} << K_; }

  friend bool operator==(HadamardOrder, HadamardOrder) = default;

 private:
  explicit HadamardOrder(unsigned K) : K_(K) {}
  unsigned K_;
};

/// Single-span fiber link. Transmittivity follows from attenuation and length.
struct LinkParams {
  double attenuation_per_km = 0.046;
  double fiber_length_km = 250.0;
  double baud_rate = 1e11;        // symbols/s
  double photon_flux = 1e16;      // photons/s at the transmitter

  double transmittivity() const { return std::exp(-attenuation_per_km * fiber_length_km); }

  void validate() const {
    if (!(baud_rate > 0.0)) throw std::invalid_argument("LinkParams: baud rate must be > 0");
    if (!(photon_flux >= 0.0)) throw std::invalid_argument("LinkParams: photon flux must be >= 0");
    if (!(attenuation_per_km >= 0.0) || !(fiber_length_km >= 0.0))
      throw std::invalid_argument("LinkParams: attenuation and length must be >= 0");
  }
};

/// (H_n)_{j,k} = (-1)^{popcount(j & k)}.
inline int hadamard_entry(std::size_t j, std::size_t k, HadamardOrder order) {
  const std::size_t n = order.size();
  if (j >= n || k >= n) throw std::invalid_argument("hadamard_entry: index out of range");
  return (std::popcount(j & k) & 1) ? -1 : 1;
}

/// Signature vector t(i,k)_m = H_{i,m} H_{k,m}.
inline std::vector<int> signature(std::size_t i, std::size_t k, HadamardOrder order) {
  const std::size_t n = order.size();
  if (i >= n || k >= n) throw std::invalid_argument("signature: index out of range");
  std::vector<int> t(n);
  for (std::size_t m = 0; m < n; ++m) t[m] = hadamard_entry(i, m, order) * hadamard_entry(k, m, order);
  return t;
}

/// Codeword |v_k(alpha)>: element j is H_{j,k} * alpha.
inline std::vector<ComplexAmplitude> encode_codeword(std::size_t k, ComplexAmplitude alpha,
                                                     HadamardOrder order) {
  const std::size_t n = order.size();
  if (k >= n) throw std::invalid_argument("encode_codeword: index out of range");
  std::vector<ComplexAmplitude> word(n);
  for (std::size_t j = 0; j < n; ++j) word[j] = static_cast<double>(hadamard_entry(j, k, order)) * alpha;
  return word;
}

/// 50:50 beamsplitter acting on a pair of coherent amplitudes.
inline std::pair<ComplexAmplitude, ComplexAmplitude> beamsplitter(ComplexAmplitude a,
                                                                  ComplexAmplitude b) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  return {(a + b) * inv_sqrt2, (a - b) * inv_sqrt2};
}

/// In-place receiver transform: K butterfly stages of beamsplitters, equal to
/// (1/sqrt(n)) H_n applied to the input.
inline void apply_hadamard_receiver(std::span<ComplexAmplitude> amps) {
  const std::size_t n = amps.size();
  if (n < 2 || !std::has_single_bit(n))
    throw std::invalid_argument("hadamard_receiver_transform: length must be a power of two >= 2");
  for (std::size_t h = 1; h < n; h *= 2) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        auto [sum, diff] = beamsplitter(amps[j], amps[j + h]);
        amps[j] = sum;
        amps[j + h] = diff;
      }
    }
  }
}

inline std::vector<ComplexAmplitude> hadamard_receiver_transform(std::span<const ComplexAmplitude> amps) {
  std::vector<ComplexAmplitude> out(amps.begin(), amps.end());
  apply_hadamard_receiver(out);
  return out;
}

/// Receiver output Lambda^n_{k,k'}(alpha) for every port k' given per-pulse
/// phase rotations e^{+i phi_m} applied to codeword k.
inline std::vector<ComplexAmplitude> received_amplitudes(std::size_t k, ComplexAmplitude alpha,
                                                         std::span<const double> phases,
                                                         HadamardOrder order) {
  const std::size_t n = order.size();
  if (phases.size() != n) throw std::invalid_argument("received_amplitudes: phase count != n");
  auto word = encode_codeword(k, alpha, order);
  for (std::size_t m = 0; m < n; ++m) word[m] *= std::polar(1.0, phases[m]);
  apply_hadamard_receiver(word);
  return word;
}

}  // namespace jdr

#endif  // JDR_CORE_MODEL_HPP
