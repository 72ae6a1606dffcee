#pragma once

#include <random>

#include "hrmod/graph.hpp"
#include "hrmod/hr_model.hpp"

namespace hrmod {

using Rng = std::mt19937_64;

/// Squared Euclidean distances of d points with i.i.d. standard normal
/// coordinates in R^{d-1}. Generic point sets are affinely independent, so
/// the result is strictly conditionally negative definite.
Variogram random_point_variogram(int d, Rng& rng);

/// Uniformly random labelled spanning tree (random attachment order) plus
/// each remaining pair with probability `extra_edge_prob`.
MarkovGraph random_connected_graph(int d, Rng& rng, double extra_edge_prob = 0.3);

/// Copy of g with i.i.d. uniform weights in [lo, hi].
MarkovGraph with_random_weights(const MarkovGraph& g, Rng& rng, double lo = 0.2, double hi = 2.0);

/// Variogram whose precision matrix is the weighted Laplacian of g (EMTP2 with
/// structural zeros at the non-edges). g must be connected.
Variogram laplacian_variogram(const MarkovGraph& g);

}  // namespace hrmod
