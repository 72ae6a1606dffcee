#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrmod/index_set.hpp"
#include "hrmod/matrix.hpp"

namespace hrmod {

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  double weight = 1.0;

  bool operator==(const Edge& o) const { return u == o.u && v == o.v; }
};

/// Simple undirected graph on vertices 0..n-1 with optional edge weights.
/// Edges are kept sorted by (u, v).
class MarkovGraph {
 public:
  MarkovGraph() = default;
  explicit MarkovGraph(int n) : n_(n) {}
  MarkovGraph(int n, const std::vector<Edge>& edges);

  static MarkovGraph complete(int n);
  static MarkovGraph cycle(int n);
  static MarkovGraph path(int n);
  static MarkovGraph star(int n);
  /// Named graphs ("cycle4", "path5", "complete3", "star6") or a 1-based edge
  /// list such as "1-2,2-3,3-4". `n` is required for edge lists and
  /// cross-checked for named graphs when positive.
  static MarkovGraph parse(std::string_view spec, int n = 0);

  int num_vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  void add_edge(int u, int v, double weight = 1.0);
  bool has_edge(int u, int v) const;
  std::optional<double> weight(int u, int v) const;
  MarkovGraph without_edge(int u, int v) const;

  bool connected() const;
  /// True when no vertex of A reaches a vertex of B after deleting C.
  bool separates(IndexSet C, IndexSet A, IndexSet B) const;

  /// Weighted Laplacian; unit weights when `unit` is set.
  SymMatrix laplacian(bool unit = false) const;

  /// "1-2,2-3" (1-based).
  std::string to_string() const;

  bool operator==(const MarkovGraph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

using SpanningTree = std::vector<Edge>;

/// Calls `visit` for every spanning tree of G (backtracking over the edge
/// list with a union-find). Requires |V| <= 8. Throws Disconnected.
void for_each_spanning_tree(const MarkovGraph& g, const std::function<void(const SpanningTree&)>& visit);

/// Exhaustive list of spanning trees. The count is cross-checked against the
/// matrix-tree value pseudo_det(L) / |V| of the unit-weight Laplacian.
std::vector<SpanningTree> spanning_trees(const MarkovGraph& g);

}  // namespace hrmod
