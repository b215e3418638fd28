#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "reform/network.hpp"

namespace reform {

/// Simple undirected graph on nodes 0..n-1 backed by a dense adjacency matrix.
/// Networks handled here are small (tens to a few hundred nodes), and the
/// elimination routines query adjacency far more often than they iterate.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}

  int size() const noexcept { return n_; }

  bool has_edge(int a, int b) const { return adj_[index(a, b)] != 0; }

  /// Returns true when the edge was newly added. Self-loops are ignored.
  bool add_edge(int a, int b);

  std::vector<int> neighbors(int v) const;
  int degree(int v) const;
  std::size_t edge_count() const;
  /// Sorted (a < b) edge list.
  std::vector<std::pair<int, int>> edges() const;
  bool is_complete(std::span<const int> nodes) const;
  bool connected() const;

  bool operator==(const UndirectedGraph&) const = default;

 private:
  std::size_t index(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b);
  }

  int n_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// Markov network: arcs undirected plus all co-parents married.
UndirectedGraph moralize(const BeliefNetwork& net);

/// `order[k]` is the node numbered k. Fill-in eliminates nodes from the back
/// of the sequence first, so `order` reversed is the elimination sequence.
struct EliminationOrdering {
  std::vector<int> order;

  /// position()[v] = k such that order[k] == v.
  std::vector<int> position() const;
  bool is_permutation(int n) const;
  bool operator==(const EliminationOrdering&) const = default;
};

/// Maximum cardinality search: each next node has the most already-numbered
/// neighbors; ties go to the lowest id.
EliminationOrdering mcs_order(const UndirectedGraph& g, int start);

/// Greedy simplicial-first / minimum clique-weight ordering. Ties broken
/// uniformly at random from `seed`.
EliminationOrdering k_search_order(const UndirectedGraph& g, std::span<const int> cardinalities, std::uint64_t seed);

struct FillResult {
  UndirectedGraph graph;
  std::size_t fill_edges = 0;
};

FillResult fill_in(const UndirectedGraph& g, const EliminationOrdering& ord);

/// True iff eliminating in reverse `ord` adds no edges.
bool is_perfect_elimination_ordering(const UndirectedGraph& g, const EliminationOrdering& ord);

}  // namespace reform
