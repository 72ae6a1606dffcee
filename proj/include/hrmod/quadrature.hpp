#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hrmod/hr_model.hpp"

namespace hrmod {

/// One axis of a tensor-product rule: [lo, hi] split into `panels` equal
/// panels, each integrated with an 8-point Gauss–Legendre rule.
struct QuadratureAxis {
  double lo = 0.0;
  double hi = 0.0;
  int panels = 1;
};

/// Composite Gauss–Legendre cubature of f over the box spanned by `axes`.
double integrate_box(const std::function<double(std::span<const double>)>& f,
                     const std::vector<QuadratureAxis>& axes);

/// Mass of the exponent measure density on the box [0,40] x [-40,40]^{d-1}
/// in the canonical halfspace {y_k > 0}. Test utility for d <= 3; the exact
/// value is 1.
double halfspace_mass(const Variogram& gamma, int k, int panels_per_unit = 8);

/// Integral of exp(-1/2 (y,1) CM(Gamma)^{-1} (y,1)^T) over {y_k > 0}, d <= 3.
/// Sheared coordinates (y_k, y_i - y_k) put the Gaussian ridge on the axes.
double halfspace_kernel_integral(const Variogram& gamma, int k);

/// Mass of the exponent measure density on {y : y^T p > 0}, d <= 3.
double circumcenter_halfspace_mass(const Variogram& gamma);

}  // namespace hrmod
