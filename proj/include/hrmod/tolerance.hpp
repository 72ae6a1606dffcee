#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace hrmod {

inline constexpr double kDefaultTol = 1e-9;

/// Relative zero test shared by every criterion: a quantity counts as zero
/// when |x| <= tol * scale. Callers compute the scale from the magnitudes of
/// the matrices that produced x.
struct Tolerance {
  double rel = kDefaultTol;

  bool is_zero(double x, double scale) const { return std::abs(x) <= rel * scale; }

  // Width of the band above the zero threshold in which verdicts are withheld.
  static constexpr double kIndeterminateFactor = 10.0;
};

/// max(1, |a|, |b|, ...)
inline double floor_scale(std::initializer_list<double> values) {
  double s = 1.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

/// Three-way outcome for any tolerance-based decision.
enum class Verdict { Holds, Fails, Indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

/// Classifies a nonnegative normalized residual against the zero band
/// [0, tol*scale] and the indeterminate band (tol*scale, 10*tol*scale).
inline Verdict classify_residual(double residual, double scale, const Tolerance& tol) {
  const double r = std::abs(residual);
  if (r <= tol.rel * scale) return Verdict::Holds;
  if (r < Tolerance::kIndeterminateFactor * tol.rel * scale) return Verdict::Indeterminate;
  return Verdict::Fails;
}

}  // namespace hrmod
