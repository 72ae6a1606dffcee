#include "hrmod/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <queue>

#include "hrmod/error.hpp"

namespace hrmod {

namespace {

constexpr int kMaxTreeVertices = 8;

int parse_int(std::string_view tok, std::string_view context) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw Error(ErrorCode::BadGraph, "cannot parse '" + std::string(tok) + "' in '" + std::string(context) + "'");
  return value;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) const {
    while (parent[x] != x) x = parent[x];
    return x;
  }
};

}  // namespace

MarkovGraph::MarkovGraph(int n, const std::vector<Edge>& edges) : n_(n) {
  for (const auto& e : edges) add_edge(e.u, e.v, e.weight);
}

MarkovGraph MarkovGraph::complete(int n) {
  MarkovGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

MarkovGraph MarkovGraph::cycle(int n) {
  if (n < 3) throw Error(ErrorCode::BadGraph, "a cycle needs at least 3 vertices");
  MarkovGraph g = path(n);
  g.add_edge(0, n - 1);
  return g;
}

MarkovGraph MarkovGraph::path(int n) {
  MarkovGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

MarkovGraph MarkovGraph::star(int n) {
  MarkovGraph g(n);
  for (int i = 1; i < n; ++i) g.add_edge(0, i);
  return g;
}

MarkovGraph MarkovGraph::parse(std::string_view spec, int n) {
  struct Named {
    std::string_view prefix;
    MarkovGraph (*make)(int);
  };
  static constexpr Named kNamed[] = {
      {"cycle", &MarkovGraph::cycle},
      {"path", &MarkovGraph::path},
      {"complete", &MarkovGraph::complete},
      {"star", &MarkovGraph::star},
  };
  for (const auto& named : kNamed) {
    if (spec.starts_with(named.prefix)) {
      const int size = parse_int(spec.substr(named.prefix.size()), spec);
      if (size < 2) throw Error(ErrorCode::BadGraph, "graph needs at least 2 vertices");
      if (n > 0 && n != size)
        throw Error(ErrorCode::BadGraph, std::string(spec) + " does not have " + std::to_string(n) + " vertices");
      return named.make(size);
    }
  }
  if (n <= 0) throw Error(ErrorCode::BadGraph, "edge list needs the number of vertices");
  MarkovGraph g(n);
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t next = spec.find(',', pos);
    if (next == std::string_view::npos) next = spec.size();
    const std::string_view tok = spec.substr(pos, next - pos);
    const std::size_t dash = tok.find('-');
    if (dash == std::string_view::npos) throw Error(ErrorCode::BadGraph, "edge '" + std::string(tok) + "' lacks '-'");
    const int u = parse_int(tok.substr(0, dash), spec) - 1;
    const int v = parse_int(tok.substr(dash + 1), spec) - 1;
    g.add_edge(u, v);
    pos = next + 1;
  }
  return g;
}

void MarkovGraph::add_edge(int u, int v, double weight) {
  if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_)
    throw Error(ErrorCode::BadGraph, "invalid edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
  if (u > v) std::swap(u, v);
  Edge e{u, v, weight};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e,
                             [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  if (it != edges_.end() && *it == e)
    throw Error(ErrorCode::BadGraph, "duplicate edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
  edges_.insert(it, e);
}

bool MarkovGraph::has_edge(int u, int v) const { return weight(u, v).has_value(); }

std::optional<double> MarkovGraph::weight(int u, int v) const {
  if (u > v) std::swap(u, v);
  for (const auto& e : edges_)
    if (e.u == u && e.v == v) return e.weight;
  return std::nullopt;
}

MarkovGraph MarkovGraph::without_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  MarkovGraph g(n_);
  for (const auto& e : edges_)
    if (!(e.u == u && e.v == v)) g.edges_.push_back(e);
  return g;
}

bool MarkovGraph::connected() const {
  if (n_ <= 1) return true;
  const IndexSet rest = IndexSet::full(n_).without(0);
  for (int v : rest.elements())
    if (separates(IndexSet{}, IndexSet{0}, IndexSet{v})) return false;
  return true;
}

bool MarkovGraph::separates(IndexSet C, IndexSet A, IndexSet B) const {
  std::vector<std::vector<int>> adj(n_);
  for (const auto& e : edges_) {
    if (C.contains(e.u) || C.contains(e.v)) continue;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n_, false);
  std::queue<int> q;
  for (int a : A.elements()) {
    if (C.contains(a)) continue;
    seen[a] = true;
    q.push(a);
  }
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    if (B.contains(x)) return false;
    for (int y : adj[x])
      if (!seen[y]) {
        seen[y] = true;
        q.push(y);
      }
  }
  return true;
}

SymMatrix MarkovGraph::laplacian(bool unit) const {
  Matrix l = Matrix::Zero(n_, n_);
  for (const auto& e : edges_) {
    const double w = unit ? 1.0 : e.weight;
    l(e.u, e.v) -= w;
    l(e.v, e.u) -= w;
    l(e.u, e.u) += w;
    l(e.v, e.v) += w;
  }
  return SymMatrix(l);
}

std::string MarkovGraph::to_string() const {
  std::string out;
  for (const auto& e : edges_) {
    if (!out.empty()) out += ',';
    out += std::to_string(e.u + 1) + "-" + std::to_string(e.v + 1);
  }
  return out;
}

void for_each_spanning_tree(const MarkovGraph& g, const std::function<void(const SpanningTree&)>& visit) {
  const int n = g.num_vertices();
  if (n > kMaxTreeVertices) throw Error(ErrorCode::UnsupportedSize, "spanning tree enumeration limited to 8 vertices");
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "graph is not connected");
  if (n <= 1) {
    visit({});
    return;
  }
  const auto& edges = g.edges();
  const int m = static_cast<int>(edges.size());
  SpanningTree current;
  current.reserve(n - 1);
  UnionFind uf(n);

  // Include/exclude recursion; union-find without path compression so that
  // undoing a union is a single parent reset.
  std::function<void(int)> recurse = [&](int idx) {
    if (static_cast<int>(current.size()) == n - 1) {
      visit(current);
      return;
    }
    if (m - idx < (n - 1) - static_cast<int>(current.size())) return;
    const Edge& e = edges[idx];
    const int ru = uf.find(e.u);
    const int rv = uf.find(e.v);
    if (ru != rv) {
      uf.parent[ru] = rv;
      current.push_back(e);
      recurse(idx + 1);
      current.pop_back();
      uf.parent[ru] = ru;
    }
    recurse(idx + 1);
  };
  recurse(0);
}

std::vector<SpanningTree> spanning_trees(const MarkovGraph& g) {
  std::vector<SpanningTree> out;
  for_each_spanning_tree(g, [&](const SpanningTree& t) { out.push_back(t); });
  const int n = g.num_vertices();
  if (n >= 2) {
    const double expected = pseudo_det(g.laplacian(true), 1e-9) / n;
    if (std::abs(expected - static_cast<double>(out.size())) > 1e-6 * std::max(1.0, expected))
      throw Error(ErrorCode::ConvergenceFailure, "spanning tree count " + std::to_string(out.size()) +
                                                      " disagrees with the matrix-tree value " +
                                                      std::to_string(expected));
  }
  return out;
}

}  // namespace hrmod
