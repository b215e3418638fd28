#include "reform/inference.hpp"

#include <algorithm>
#include <cmath>

#include "reform/csv.hpp"
#include "reform/error.hpp"

namespace reform {

namespace {

/// Calls fn(i, j) for every index i of `big` where j is the matching index in
/// a table over `small_scope` (with cards `small_cards`).
template <class Fn>
void for_each_aligned(const Potential& big, std::span<const int> small_scope, std::span<const int> small_cards, Fn&& fn) {
  const std::size_t k = big.scope.size();
  // Stride of each small variable inside the small table.
  std::vector<std::size_t> small_stride(small_scope.size());
  std::size_t s = 1;
  for (std::size_t t = small_scope.size(); t-- > 0;) {
    small_stride[t] = s;
    s *= static_cast<std::size_t>(small_cards[t]);
  }
  std::vector<std::size_t> stride(k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t t = 0; t < small_scope.size(); ++t) {
      if (small_scope[t] == big.scope[a]) stride[a] = small_stride[t];
    }
  }
  std::vector<int> state(k, 0);
  std::size_t j = 0;
  const std::size_t n = big.table.size();
  for (std::size_t i = 0; i < n; ++i) {
    fn(i, j);
    for (std::size_t a = k; a-- > 0;) {
      if (++state[a] < big.cards[a]) {
        j += stride[a];
        break;
      }
      j -= stride[a] * static_cast<std::size_t>(big.cards[a] - 1);
      state[a] = 0;
    }
  }
}

}  // namespace

Potential Potential::ones(std::vector<int> scope, std::span<const int> all_cardinalities) {
  Potential p;
  std::sort(scope.begin(), scope.end());
  std::size_t size = 1;
  for (int v : scope) {
    p.cards.push_back(all_cardinalities[static_cast<std::size_t>(v)]);
    size *= static_cast<std::size_t>(p.cards.back());
  }
  p.scope = std::move(scope);
  p.table.assign(size, 1.0);
  return p;
}

double Potential::sum() const {
  double s = 0.0;
  for (double x : table) s += x;
  return s;
}

bool Potential::contains(int var) const { return std::find(scope.begin(), scope.end(), var) != scope.end(); }

void Potential::multiply(const Potential& factor) {
  for (int v : factor.scope) {
    if (!contains(v)) throw StructuralError("Potential::multiply: factor scope is not a subset");
  }
  for_each_aligned(*this, factor.scope, factor.cards, [&](std::size_t i, std::size_t j) { table[i] *= factor.table[j]; });
}

Potential Potential::marginalize(std::span<const int> keep) const {
  Potential out;
  std::size_t size = 1;
  for (int v : keep) {
    auto it = std::find(scope.begin(), scope.end(), v);
    if (it == scope.end()) throw StructuralError("Potential::marginalize: variable not in scope");
    out.scope.push_back(v);
    out.cards.push_back(cards[static_cast<std::size_t>(it - scope.begin())]);
    size *= static_cast<std::size_t>(out.cards.back());
  }
  out.table.assign(size, 0.0);
  for_each_aligned(*this, out.scope, out.cards, [&](std::size_t i, std::size_t j) { out.table[j] += table[i]; });
  return out;
}

void Potential::restrict(int var, int state) {
  const int keep[] = {var};
  const int card[] = {cards[static_cast<std::size_t>(std::find(scope.begin(), scope.end(), var) - scope.begin())]};
  for_each_aligned(*this, keep, card, [&](std::size_t i, std::size_t j) {
    if (static_cast<int>(j) != state) table[i] = 0.0;
  });
}

CliquePotentials assign_potentials(const BeliefNetwork& net, const JoinTree& tree, std::uint64_t cap) {
  if (tree.estimate.cells > cap) {
    throw JointTooLarge("assign_potentials: tree state space " + std::to_string(tree.estimate.cells) +
                        " exceeds cap " + std::to_string(cap));
  }
  const auto cards = net.cardinalities();
  CliquePotentials out;
  for (const auto& c : tree.cliques) out.cliques.push_back(Potential::ones(c, cards));
  out.cpt_home.assign(static_cast<std::size_t>(net.size()), -1);
  for (int v = 0; v < net.size(); ++v) {
    const auto& ps = net.parents[static_cast<std::size_t>(v)];
    Potential cpt;
    cpt.scope = ps;
    cpt.scope.push_back(v);
    for (int u : cpt.scope) cpt.cards.push_back(cards[static_cast<std::size_t>(u)]);
    cpt.table = net.cpts[static_cast<std::size_t>(v)];
    int home = -1;
    for (std::size_t c = 0; c < tree.cliques.size() && home < 0; ++c) {
      const auto& clique = tree.cliques[c];
      bool covers = std::all_of(cpt.scope.begin(), cpt.scope.end(),
                                [&](int u) { return std::binary_search(clique.begin(), clique.end(), u); });
      if (covers) home = static_cast<int>(c);
    }
    if (home < 0) throw StructuralError("assign_potentials: family of variable " + std::to_string(v) + " not covered by any clique");
    out.cliques[static_cast<std::size_t>(home)].multiply(cpt);
    out.cpt_home[static_cast<std::size_t>(v)] = home;
  }
  return out;
}

namespace {

void pass_message(std::vector<Potential>& cliques, std::vector<Potential>& seps, const JoinTree& tree,
                  std::size_t edge, std::size_t from, std::size_t to) {
  Potential fresh = cliques[from].marginalize(tree.edges[edge].separator);
  Potential ratio = fresh;
  const auto& old = seps[edge].table;
  for (std::size_t i = 0; i < ratio.table.size(); ++i) {
    ratio.table[i] = old[i] == 0.0 ? 0.0 : fresh.table[i] / old[i];
  }
  cliques[to].multiply(ratio);
  seps[edge] = std::move(fresh);
}

}  // namespace

PropagationResult propagate(const CliquePotentials& potentials, const JoinTree& tree, const Evidence& ev,
                            Clock& clock) {
  const std::size_t m = tree.cliques.size();
  if (potentials.cliques.size() != m) throw StructuralError("propagate: potentials do not match the tree");
  PropagationResult result;
  auto& cal = result.calibrated;
  auto work = [&] {
    cal.tree = tree;
    cal.cliques = potentials.cliques;
    for (auto [v, s] : ev.assignments) {
      bool found = false;
      for (auto& c : cal.cliques) {
        if (c.contains(v)) {
          const auto idx = static_cast<std::size_t>(std::find(c.scope.begin(), c.scope.end(), v) - c.scope.begin());
          if (s < 0 || s >= c.cards[idx]) throw ValidationError("propagate: evidence state out of range", {});
          c.restrict(v, s);
          found = true;
        }
      }
      if (!found) throw ValidationError("propagate: evidence on unknown variable " + std::to_string(v), {});
    }
    cal.separators.clear();
    for (const auto& e : tree.edges) {
      Potential sep;
      sep.scope = e.separator;
      for (int v : e.separator) {
        const auto& c = cal.cliques[static_cast<std::size_t>(e.a)];
        sep.cards.push_back(c.cards[static_cast<std::size_t>(std::find(c.scope.begin(), c.scope.end(), v) - c.scope.begin())]);
      }
      std::size_t size = 1;
      for (int k : sep.cards) size *= static_cast<std::size_t>(k);
      sep.table.assign(size, 1.0);
      cal.separators.push_back(std::move(sep));
    }
    if (m == 0) return;

    // Rooted traversal from clique 0: order[] lists cliques parents-first.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(m);  // (neighbor, edge)
    for (std::size_t e = 0; e < tree.edges.size(); ++e) {
      auto a = static_cast<std::size_t>(tree.edges[e].a), b = static_cast<std::size_t>(tree.edges[e].b);
      adj[a].emplace_back(b, e);
      adj[b].emplace_back(a, e);
    }
    std::vector<std::size_t> order{0};
    std::vector<std::size_t> parent(m, m), parent_edge(m, 0);
    parent[0] = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      auto v = order[k];
      for (auto [u, e] : adj[v]) {
        if (parent[u] == m) {
          parent[u] = v;
          parent_edge[u] = e;
          order.push_back(u);
        }
      }
    }
    if (order.size() != m) throw StructuralError("propagate: join tree is not connected");

    for (std::size_t k = m; k-- > 1;) {
      auto v = order[k];
      pass_message(cal.cliques, cal.separators, tree, parent_edge[v], v, parent[v]);
    }
    const double z = cal.cliques[0].sum();
    if (!(z > 0.0)) throw InconsistentEvidence("evidence has zero probability");
    for (std::size_t k = 1; k < m; ++k) {
      auto v = order[k];
      pass_message(cal.cliques, cal.separators, tree, parent_edge[v], parent[v], v);
    }
    for (auto& c : cal.cliques) {
      for (auto& x : c.table) x /= z;
    }
    for (auto& s : cal.separators) {
      for (auto& x : s.table) x /= z;
    }
    cal.evidence_probability = z;
  };
  result.t_e = clock.time_execution(tree.estimate, work);
  return result;
}

Posterior all_marginals(const CalibratedTree& cal) {
  int n = 0;
  for (const auto& c : cal.tree.cliques) {
    if (!c.empty()) n = std::max(n, c.back() + 1);
  }
  Posterior out;
  out.evidence_probability = cal.evidence_probability;
  out.marginals.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const Potential* best = nullptr;
    for (const auto& c : cal.cliques) {
      if (c.contains(v) && (best == nullptr || c.size() < best->size())) best = &c;
    }
    if (best == nullptr) throw StructuralError("all_marginals: variable " + std::to_string(v) + " is in no clique");
    const int keep[] = {v};
    auto marg = best->marginalize(keep);
    const double s = marg.sum();
    for (auto& x : marg.table) x /= s;
    out.marginals[static_cast<std::size_t>(v)] = std::move(marg.table);
  }
  return out;
}

double calibration_residual(const CalibratedTree& cal) {
  double worst = 0.0;
  for (const auto& e : cal.tree.edges) {
    auto a = cal.cliques[static_cast<std::size_t>(e.a)].marginalize(e.separator);
    auto b = cal.cliques[static_cast<std::size_t>(e.b)].marginalize(e.separator);
    for (std::size_t i = 0; i < a.table.size(); ++i) worst = std::max(worst, std::abs(a.table[i] - b.table[i]));
  }
  return worst;
}

Posterior infer(const BeliefNetwork& net, const JoinTree& tree, const Evidence& ev) {
  SimClock clock;
  auto pots = assign_potentials(net, tree);
  return all_marginals(propagate(pots, tree, ev, clock).calibrated);
}

std::string write_marginals_csv(const Posterior& posterior) {
  CsvTable t;
  t.header = {"variable", "state", "probability"};
  for (std::size_t v = 0; v < posterior.marginals.size(); ++v) {
    for (std::size_t s = 0; s < posterior.marginals[v].size(); ++s) {
      t.rows.push_back({std::to_string(v), std::to_string(s), format_double(posterior.marginals[v][s])});
    }
  }
  return write_csv(t);
}

std::vector<std::vector<double>> read_marginals_csv(std::string_view text) {
  auto t = read_csv(text);
  std::vector<std::vector<double>> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    auto v = static_cast<std::size_t>(parse_int(t.text(r, "variable")));
    auto s = static_cast<std::size_t>(parse_int(t.text(r, "state")));
    if (out.size() <= v) out.resize(v + 1);
    if (out[v].size() <= s) out[v].resize(s + 1, 0.0);
    out[v][s] = t.number(r, "probability");
  }
  return out;
}

}  // namespace reform
