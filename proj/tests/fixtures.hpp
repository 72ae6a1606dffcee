#pragma once

#include <doctest.h>

#include "hrmod/generators.hpp"
#include "hrmod/hr_model.hpp"

namespace fixtures {

using hrmod::Matrix;
using hrmod::Variogram;

inline Variogram variogram3(double g12, double g13, double g23) {
  Matrix m(3, 3);
  m << 0, g12, g13, g12, 0, g23, g13, g23, 0;
  return Variogram::from_matrix(m);
}

/// Gamma_adj = 3/4, Gamma_opp = 1: the variogram whose precision matrix is the
/// unit-weight Laplacian of the cycle 1-2-3-4.
inline Variogram four_cycle() {
  Matrix m(4, 4);
  m << 0, .75, 1, .75,  //
      .75, 0, .75, 1,   //
      1, .75, 0, .75,   //
      .75, 1, .75, 0;
  return Variogram::from_matrix(m);
}

inline Matrix four_cycle_laplacian() {
  Matrix m(4, 4);
  m << 2, -1, 0, -1,  //
      -1, 2, -1, 0,   //
      0, -1, 2, -1,   //
      -1, 0, -1, 2;
  return m;
}

inline Variogram equilateral() { return variogram3(1, 1, 1); }

/// Tree-additive path 1-2-3.
inline Variogram path3() { return variogram3(1, 2, 1); }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace fixtures
