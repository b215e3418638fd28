#include "reform/jointree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "reform/error.hpp"

namespace reform {

namespace {

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::uint64_t state_space(std::span<const int> nodes, std::span<const int> cards) {
  std::uint64_t p = 1;
  for (int v : nodes) {
    if (__builtin_mul_overflow(p, static_cast<std::uint64_t>(cards[static_cast<std::size_t>(v)]), &p)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return p;
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

std::vector<std::vector<int>> identify_cliques(const UndirectedGraph& filled, const EliminationOrdering& ord) {
  const int n = filled.size();
  if (!ord.is_permutation(n)) throw StructuralError("identify_cliques: ordering is not a permutation");
  auto pos = ord.position();
  std::vector<std::vector<int>> candidates;
  candidates.reserve(static_cast<std::size_t>(n));
  for (int v : ord.order) {
    std::vector<int> c{v};
    for (int u = 0; u < n; ++u) {
      if (pos[static_cast<std::size_t>(u)] < pos[static_cast<std::size_t>(v)] && filled.has_edge(u, v)) c.push_back(u);
    }
    std::sort(c.begin(), c.end());
    if (!filled.is_complete(c)) {
      throw StructuralError("identify_cliques: candidate clique of node " + std::to_string(v) + " is not complete");
    }
    candidates.push_back(std::move(c));
  }
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < candidates.size() && !dominated; ++j) {
      if (i == j || candidates[j].size() < candidates[i].size()) continue;
      if (candidates[j].size() == candidates[i].size() && j > i) continue;
      dominated = std::includes(candidates[j].begin(), candidates[j].end(), candidates[i].begin(), candidates[i].end());
    }
    if (!dominated) out.push_back(candidates[i]);
  }
  return out;
}

JoinTree build_join_tree(std::vector<std::vector<int>> cliques, std::span<const int> cardinalities,
                         const UndirectedGraph* graph) {
  JoinTree tree;
  for (auto& c : cliques) std::sort(c.begin(), c.end());
  tree.cliques = std::move(cliques);
  const std::size_t m = tree.cliques.size();

  struct Candidate {
    std::size_t weight;
    std::uint64_t space;
    std::size_t i, j;
    std::vector<int> separator;
  };
  std::vector<Candidate> cands;
  cands.reserve(m * (m - (m ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      auto sep = intersect(tree.cliques[i], tree.cliques[j]);
      auto space = sep.empty() ? 0 : state_space(sep, cardinalities);
      cands.push_back({sep.size(), space, i, j, std::move(sep)});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    if (x.space != y.space) return x.space > y.space;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  const bool must_connect = graph != nullptr && graph->connected();
  DisjointSets sets(m);
  for (auto& c : cands) {
    if (tree.edges.size() + 1 == m) break;
    if (!sets.unite(c.i, c.j)) continue;
    if (c.weight == 0 && must_connect) {
      throw StructuralError("build_join_tree: clique graph is disconnected for a connected network");
    }
    tree.edges.push_back({static_cast<int>(c.i), static_cast<int>(c.j), std::move(c.separator)});
  }
  tree.estimate = estimate_runtime(tree, cardinalities);
  return tree;
}

RuntimeEstimate estimate_runtime(const JoinTree& tree, std::span<const int> cardinalities) {
  constexpr std::uint64_t limit = std::uint64_t{1} << 63;
  std::uint64_t total = 0;
  for (const auto& c : tree.cliques) {
    std::uint64_t p = 1;
    for (int v : c) {
      if (v < 0 || static_cast<std::size_t>(v) >= cardinalities.size()) {
        throw StructuralError("estimate_runtime: clique member without cardinality");
      }
      if (__builtin_mul_overflow(p, static_cast<std::uint64_t>(cardinalities[static_cast<std::size_t>(v)]), &p) || p >= limit) {
        throw OverflowError("estimate_runtime: clique state space reaches 2^63");
      }
    }
    if (__builtin_add_overflow(total, p, &total) || total >= limit) {
      throw OverflowError("estimate_runtime: total state space reaches 2^63");
    }
  }
  return {total};
}

bool satisfies_running_intersection(const JoinTree& tree) {
  const std::size_t m = tree.cliques.size();
  if (m == 0) return tree.edges.empty();
  if (tree.edges.size() != m - 1) return false;
  std::vector<std::vector<std::size_t>> adj(m);
  for (const auto& e : tree.edges) {
    if (e.a < 0 || e.b < 0 || static_cast<std::size_t>(e.a) >= m || static_cast<std::size_t>(e.b) >= m) return false;
    auto a = static_cast<std::size_t>(e.a), b = static_cast<std::size_t>(e.b);
    if (e.separator != intersect(tree.cliques[a], tree.cliques[b])) return false;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && std::includes(tree.cliques[j].begin(), tree.cliques[j].end(), tree.cliques[i].begin(), tree.cliques[i].end())) {
        return false;
      }
    }
  }
  for (std::size_t src = 0; src < m; ++src) {
    // Parent pointers from src reach every clique iff the tree is connected.
    std::vector<std::size_t> parent(m, m);
    parent[src] = src;
    std::vector<std::size_t> stack{src};
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto u : adj[v]) {
        if (parent[u] == m) {
          parent[u] = v;
          stack.push_back(u);
        }
      }
    }
    for (std::size_t dst = src + 1; dst < m; ++dst) {
      if (parent[dst] == m) return false;
      auto common = intersect(tree.cliques[src], tree.cliques[dst]);
      for (auto v = dst; v != src; v = parent[v]) {
        const auto& c = tree.cliques[v];
        if (!std::includes(c.begin(), c.end(), common.begin(), common.end())) return false;
      }
    }
  }
  return true;
}

JoinTree join_tree_from_ordering(const UndirectedGraph& moral, const EliminationOrdering& ord,
                                 std::span<const int> cardinalities) {
  auto filled = fill_in(moral, ord);
  auto cliques = identify_cliques(filled.graph, ord);
  return build_join_tree(std::move(cliques), cardinalities, &moral);
}

std::string write_join_tree(const JoinTree& tree) {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["cliques"] = tree.cliques;
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : tree.edges) doc["edges"].push_back({{"a", e.a}, {"b", e.b}, {"separator", e.separator}});
  doc["estimate"] = tree.estimate.cells;
  return doc.dump(1) + "\n";
}

JoinTree read_join_tree(std::string_view text) {
  try {
    auto doc = nlohmann::json::parse(text);
    JoinTree tree;
    tree.cliques = doc.at("cliques").get<std::vector<std::vector<int>>>();
    for (auto& c : tree.cliques) std::sort(c.begin(), c.end());
    for (const auto& e : doc.at("edges")) {
      auto sep = e.at("separator").get<std::vector<int>>();
      std::sort(sep.begin(), sep.end());
      tree.edges.push_back({e.at("a").get<int>(), e.at("b").get<int>(), std::move(sep)});
    }
    tree.estimate.cells = doc.at("estimate").get<std::uint64_t>();
    if (!satisfies_running_intersection(tree)) throw StructuralError("join tree document is not a valid join tree");
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("join tree document: ") + e.what());
  }
}

}  // namespace reform
