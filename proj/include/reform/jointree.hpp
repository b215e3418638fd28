#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reform/graph.hpp"

namespace reform {

/// Total clique state space of a join tree, in joint-state cells.
struct RuntimeEstimate {
  std::uint64_t cells = 0;

  double value() const noexcept { return static_cast<double>(cells); }
  auto operator<=>(const RuntimeEstimate&) const = default;
};

struct JoinTreeEdge {
  int a = 0;
  int b = 0;
  std::vector<int> separator;  // sorted

  bool operator==(const JoinTreeEdge&) const = default;
};

struct JoinTree {
  std::vector<std::vector<int>> cliques;  // each sorted ascending
  std::vector<JoinTreeEdge> edges;
  RuntimeEstimate estimate;

  bool operator==(const JoinTree&) const = default;
};

/// Maximal cliques of a graph filled along `ord`. Throws StructuralError if a
/// candidate clique is not complete (graph not chordal with respect to `ord`).
std::vector<std::vector<int>> identify_cliques(const UndirectedGraph& filled, const EliminationOrdering& ord);

/// Maximum-weight spanning tree over the clique intersection graph. Weight is
/// separator size, ties go to the larger separator state space and then to
/// lower clique indices. Components are joined by empty separators unless
/// `graph` is given and connected, in which case a disconnected clique graph
/// is a StructuralError.
JoinTree build_join_tree(std::vector<std::vector<int>> cliques, std::span<const int> cardinalities,
                         const UndirectedGraph* graph = nullptr);

/// Exact sum of per-clique state-space products; throws OverflowError past 2^63.
RuntimeEstimate estimate_runtime(const JoinTree& tree, std::span<const int> cardinalities);

/// Explicit check of the running intersection property over every clique pair.
bool satisfies_running_intersection(const JoinTree& tree);

/// Runs fill-in, clique identification and tree construction for one ordering.
JoinTree join_tree_from_ordering(const UndirectedGraph& moral, const EliminationOrdering& ord,
                                 std::span<const int> cardinalities);

std::string write_join_tree(const JoinTree& tree);
JoinTree read_join_tree(std::string_view text);

}  // namespace reform
