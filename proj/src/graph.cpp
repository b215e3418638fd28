#include "reform/graph.hpp"

#include <algorithm>
#include <limits>

#include "reform/error.hpp"
#include "reform/random.hpp"

namespace reform {

bool UndirectedGraph::add_edge(int a, int b) {
  if (a == b) return false;
  if (a < 0 || b < 0 || a >= n_ || b >= n_) throw StructuralError("add_edge: node out of range");
  auto& ab = adj_[index(a, b)];
  if (ab) return false;
  ab = 1;
  adj_[index(b, a)] = 1;
  return true;
}

std::vector<int> UndirectedGraph::neighbors(int v) const {
  std::vector<int> out;
  for (int u = 0; u < n_; ++u) {
    if (adj_[index(v, u)]) out.push_back(u);
  }
  return out;
}

int UndirectedGraph::degree(int v) const {
  int d = 0;
  for (int u = 0; u < n_; ++u) d += adj_[index(v, u)];
  return d;
}

std::size_t UndirectedGraph::edge_count() const {
  std::size_t e = 0;
  for (auto x : adj_) e += x;
  return e / 2;
}

std::vector<std::pair<int, int>> UndirectedGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n_; ++a) {
    for (int b = a + 1; b < n_; ++b) {
      if (adj_[index(a, b)]) out.emplace_back(a, b);
    }
  }
  return out;
}

bool UndirectedGraph::is_complete(std::span<const int> nodes) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (!has_edge(nodes[i], nodes[j])) return false;
    }
  }
  return true;
}

bool UndirectedGraph::connected() const {
  if (n_ == 0) return true;
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < n_; ++u) {
      if (adj_[index(v, u)] && !seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = true;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n_;
}

UndirectedGraph moralize(const BeliefNetwork& net) {
  UndirectedGraph g(net.size());
  for (int v = 0; v < net.size(); ++v) {
    const auto& ps = net.parents[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < ps.size(); ++i) {
      g.add_edge(ps[i], v);
      for (std::size_t j = i + 1; j < ps.size(); ++j) g.add_edge(ps[i], ps[j]);
    }
  }
  return g;
}

std::vector<int> EliminationOrdering::position() const {
  std::vector<int> pos(order.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) pos.at(static_cast<std::size_t>(order[k])) = static_cast<int>(k);
  return pos;
}

bool EliminationOrdering::is_permutation(int n) const {
  if (order.size() != static_cast<std::size_t>(n)) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : order) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

EliminationOrdering mcs_order(const UndirectedGraph& g, int start) {
  const int n = g.size();
  if (start < 0 || start >= n) throw StructuralError("mcs_order: start node out of range");
  std::vector<int> weight(static_cast<std::size_t>(n), 0);
  std::vector<bool> numbered(static_cast<std::size_t>(n), false);
  EliminationOrdering ord;
  ord.order.reserve(static_cast<std::size_t>(n));
  int next = start;
  for (int k = 0; k < n; ++k) {
    if (k > 0) {
      next = -1;
      for (int v = 0; v < n; ++v) {
        if (!numbered[static_cast<std::size_t>(v)] && (next < 0 || weight[static_cast<std::size_t>(v)] > weight[static_cast<std::size_t>(next)])) {
          next = v;
        }
      }
    }
    numbered[static_cast<std::size_t>(next)] = true;
    ord.order.push_back(next);
    for (int u = 0; u < n; ++u) {
      if (g.has_edge(next, u)) ++weight[static_cast<std::size_t>(u)];
    }
  }
  return ord;
}

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
  return r;
}

}  // namespace

EliminationOrdering k_search_order(const UndirectedGraph& g, std::span<const int> cardinalities, std::uint64_t seed) {
  const int n = g.size();
  if (cardinalities.size() != static_cast<std::size_t>(n)) throw StructuralError("k_search_order: cardinality count mismatch");
  Rng rng(seed);
  UndirectedGraph work = g;
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  std::vector<int> eliminated;
  eliminated.reserve(static_cast<std::size_t>(n));

  auto live_neighbors = [&](int v) {
    std::vector<int> out;
    for (int u = 0; u < n; ++u) {
      if (alive[static_cast<std::size_t>(u)] && work.has_edge(v, u)) out.push_back(u);
    }
    return out;
  };

  std::vector<int> simplicial;
  std::vector<int> cheapest;
  for (int step = 0; step < n; ++step) {
    simplicial.clear();
    cheapest.clear();
    std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();
    for (int v = 0; v < n; ++v) {
      if (!alive[static_cast<std::size_t>(v)]) continue;
      auto nb = live_neighbors(v);
      if (work.is_complete(nb)) {
        simplicial.push_back(v);
        continue;
      }
      if (!simplicial.empty()) continue;
      std::uint64_t cost = static_cast<std::uint64_t>(cardinalities[static_cast<std::size_t>(v)]);
      for (int u : nb) cost = saturating_mul(cost, static_cast<std::uint64_t>(cardinalities[static_cast<std::size_t>(u)]));
      if (cost < best_cost) {
        best_cost = cost;
        cheapest.assign(1, v);
      } else if (cost == best_cost) {
        cheapest.push_back(v);
      }
    }
    const auto& pool = simplicial.empty() ? cheapest : simplicial;
    int v = pool[rng.below(pool.size())];
    auto nb = live_neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) work.add_edge(nb[i], nb[j]);
    }
    alive[static_cast<std::size_t>(v)] = false;
    eliminated.push_back(v);
  }
  std::reverse(eliminated.begin(), eliminated.end());
  return {std::move(eliminated)};
}

FillResult fill_in(const UndirectedGraph& g, const EliminationOrdering& ord) {
  const int n = g.size();
  if (!ord.is_permutation(n)) throw StructuralError("fill_in: ordering is not a permutation of the graph's nodes");
  auto pos = ord.position();
  FillResult out{g, 0};
  for (int k = n - 1; k >= 0; --k) {
    int v = ord.order[static_cast<std::size_t>(k)];
    std::vector<int> earlier;
    for (int u = 0; u < n; ++u) {
      if (pos[static_cast<std::size_t>(u)] < k && out.graph.has_edge(v, u)) earlier.push_back(u);
    }
    for (std::size_t i = 0; i < earlier.size(); ++i) {
      for (std::size_t j = i + 1; j < earlier.size(); ++j) {
        if (out.graph.add_edge(earlier[i], earlier[j])) ++out.fill_edges;
      }
    }
  }
  return out;
}

bool is_perfect_elimination_ordering(const UndirectedGraph& g, const EliminationOrdering& ord) {
  return fill_in(g, ord).fill_edges == 0;
}

}  // namespace reform
