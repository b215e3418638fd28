#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reform/clock.hpp"
#include "reform/jointree.hpp"
#include "reform/network.hpp"

namespace reform {

/// Table over a set of variables, indexed mixed-radix with the last scope
/// variable varying fastest.
struct Potential {
  std::vector<int> scope;
  std::vector<int> cards;
  std::vector<double> table;

  static Potential ones(std::vector<int> scope, std::span<const int> all_cardinalities);

  std::size_t size() const noexcept { return table.size(); }
  double sum() const;
  bool contains(int var) const;

  /// Multiplies by `factor`, whose scope (any order) must be a subset of this scope.
  void multiply(const Potential& factor);
  /// Sums out everything except `keep` (sorted subset of this scope).
  Potential marginalize(std::span<const int> keep) const;
  /// Zeroes entries where `var` != `state`.
  void restrict(int var, int state);
};

struct CliquePotentials {
  std::vector<Potential> cliques;
  /// cpt_home[v] = index of the clique that received variable v's CPT.
  std::vector<int> cpt_home;
};

inline constexpr std::uint64_t kDefaultPotentialCap = std::uint64_t{1} << 25;

/// Multiplies every CPT into the lowest-index clique containing its family.
/// Throws StructuralError when a family is uncovered and JointTooLarge when
/// the tree's total state space exceeds `cap`.
CliquePotentials assign_potentials(const BeliefNetwork& net, const JoinTree& tree,
                                   std::uint64_t cap = kDefaultPotentialCap);

struct CalibratedTree {
  JoinTree tree;
  std::vector<Potential> cliques;     // normalized clique marginals
  std::vector<Potential> separators;  // parallel to tree.edges
  double evidence_probability = 1.0;
};

struct PropagationResult {
  CalibratedTree calibrated;
  double t_e = 0.0;
};

/// Hugin two-pass propagation (collect to clique 0, then distribute). The
/// clock bills the execution time: measured in wall mode, tau * E in
/// simulated mode. Throws InconsistentEvidence when the evidence has zero mass.
PropagationResult propagate(const CliquePotentials& potentials, const JoinTree& tree, const Evidence& ev,
                            Clock& clock);

/// Posterior of each variable from its smallest containing clique.
Posterior all_marginals(const CalibratedTree& cal);

/// Largest absolute disagreement between adjacent clique marginals on their separator.
double calibration_residual(const CalibratedTree& cal);

/// assign_potentials + propagate + all_marginals with a throwaway clock.
Posterior infer(const BeliefNetwork& net, const JoinTree& tree, const Evidence& ev);

/// CSV with columns variable,state,probability.
std::string write_marginals_csv(const Posterior& posterior);
std::vector<std::vector<double>> read_marginals_csv(std::string_view text);

}  // namespace reform
