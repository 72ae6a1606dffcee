#include "hrmod/generators.hpp"

#include <algorithm>
#include <numeric>

namespace hrmod {

Variogram random_point_variogram(int d, Rng& rng) {
  if (d < 2) throw Error(ErrorCode::UnsupportedSize, "variogram needs d >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix points(d, d - 1);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d - 1; ++k) points(i, k) = normal(rng);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = (points.row(i) - points.row(j)).squaredNorm();
  return Variogram::from_matrix(g);
}

MarkovGraph random_connected_graph(int d, Rng& rng, double extra_edge_prob) {
  if (d < 2) throw Error(ErrorCode::BadGraph, "graph needs d >= 2");
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  MarkovGraph g(d);
  for (int k = 1; k < d; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    g.add_edge(order[k], order[pick(rng)]);
  }
  std::bernoulli_distribution extra(extra_edge_prob);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (!g.has_edge(i, j) && extra(rng)) g.add_edge(i, j);
  return g;
}

MarkovGraph with_random_weights(const MarkovGraph& g, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> weight(lo, hi);
  MarkovGraph out(g.num_vertices());
  for (const auto& e : g.edges()) out.add_edge(e.u, e.v, weight(rng));
  return out;
}

Variogram laplacian_variogram(const MarkovGraph& g) {
  if (!g.connected()) throw Error(ErrorCode::BadGraph, "graph must be connected");
  return variogram_from_precision(g.laplacian());
}

}  // namespace hrmod
