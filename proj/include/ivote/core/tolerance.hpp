#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ivote {

// Absolute guard for grid-boundary comparisons. Values this close to a cell
// boundary are treated as lying on it, which keeps cell indexing and
// rounding deterministic under floating-point noise.
inline constexpr double kGridBoundaryTol = 1e-12;

// Rounds v to the nearest multiple of step; exact half-way values round
// toward +infinity. round_to_step(0.35, 0.1) == 0.4.
inline double round_to_step(double v, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("round_to_step: step must be positive");
  return std::floor(v / step + 0.5 + kGridBoundaryTol) * step;
}

// Same rounding, returning the lattice index instead of the value.
inline long long round_index(double v, double step) {
  return static_cast<long long>(std::floor(v / step + 0.5 + kGridBoundaryTol));
}

// Per-coordinate voting tolerance.
//
// eps[j] is the cell width requested along axis j of the normalized search
// space. eps_prime_scale is the constant c in eps' = eps/(c*log2(1/eps)),
// the per-level rounding budget of canonization; 0 means "use the surface
// model's registered default" (the constant is tuned per application).
struct Tolerance {
  std::vector<double> eps;
  double eps_prime_scale = 0.0;

  Tolerance() = default;
  explicit Tolerance(std::vector<double> e, double scale = 0.0)
      : eps(std::move(e)), eps_prime_scale(scale) {
    validate();
  }

  static Tolerance uniform(int dim, double e, double scale = 0.0) {
    return Tolerance(std::vector<double>(dim, e), scale);
  }

  void validate() const {
    if (eps.empty()) throw std::invalid_argument("Tolerance: empty eps");
    for (double e : eps)
      if (!(e > 0.0) || e > 1.0) throw std::invalid_argument("Tolerance: eps entries must be in (0, 1]");
    if (eps_prime_scale < 0.0) throw std::invalid_argument("Tolerance: negative eps_prime_scale");
  }

  int dim() const { return static_cast<int>(eps.size()); }
};

// eps' for a single coordinate: eps/(c*log2(1/eps)), clamped so eps' <= eps.
inline double eps_prime(double eps, double scale) {
  const double denom = scale * std::log2(1.0 / eps);
  return denom > 1.0 ? eps / denom : eps;
}

}  // namespace ivote
