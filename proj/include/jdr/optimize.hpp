#ifndef JDR_OPTIMIZE_HPP
#define JDR_OPTIMIZE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace jdr {

struct ScalarMaximum {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <class F>
ScalarMaximum golden_section_maximize(F&& f, double lo, double hi, double x_tol, int max_iter = 200) {
  if (!(hi >= lo)) throw std::invalid_argument("golden_section_maximize: empty interval");
  constexpr double inv_phi = 0.61803398874989484820;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? ScalarMaximum{c, fc} : ScalarMaximum{d, fd};
}

/// Uniform grid scan on [lo, hi] with `points` >= 2 nodes; returns the first
/// node attaining the maximum together with its index.
template <class F>
ScalarMaximum grid_maximize(F&& f, double lo, double hi, std::size_t points, std::size_t* index = nullptr) {
  if (points < 2) throw std::invalid_argument("grid_maximize: need at least two points");
  ScalarMaximum best{lo, f(lo)};
  std::size_t best_i = 0;
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 1; i < points; ++i) {
    const double x = i + 1 == points ? hi : lo + step * static_cast<double>(i);
    const double v = f(x);
    if (v > best.value) {
      best = {x, v};
      best_i = i;
    }
  }
  if (index) *index = best_i;
  return best;
}

}  // namespace jdr

#endif  // JDR_OPTIMIZE_HPP
