#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace reform {

struct Variable {
  int id = 0;
  std::string name;
  int cardinality = 2;

  bool operator==(const Variable&) const = default;
};

/// Discrete belief network.
///
/// CPT layout for variable v: row-major over parent configurations, each row
/// holding `cardinality(v)` probabilities. The parent configuration index is
/// mixed-radix over `parents[v]` in declaration order with the last parent
/// varying fastest.
struct BeliefNetwork {
  std::vector<Variable> variables;
  std::vector<std::vector<int>> parents;
  std::vector<std::vector<double>> cpts;

  int size() const noexcept { return static_cast<int>(variables.size()); }
  int cardinality(int v) const { return variables.at(static_cast<std::size_t>(v)).cardinality; }
  std::vector<int> cardinalities() const;
  /// Number of parent configurations of v.
  std::size_t parent_configurations(int v) const;

  bool operator==(const BeliefNetwork&) const = default;
};

/// Observed states, keyed by variable id.
struct Evidence {
  std::map<int, int> assignments;

  bool empty() const noexcept { return assignments.empty(); }
  bool operator==(const Evidence&) const = default;
};

struct Violation {
  int variable = -1;  // -1 when the violation is network-wide
  std::string kind;   // "cardinality", "id", "parent", "acyclicity", "dimension", "negative", "row_sum"
  std::string message;
};

constexpr double kValidationTolerance = 1e-9;

/// Empty result iff every network invariant holds.
std::vector<Violation> validate(const BeliefNetwork& net);

/// Returns violations of the evidence against `net` (unknown ids, out-of-range states).
std::vector<Violation> validate(const BeliefNetwork& net, const Evidence& ev);

struct GeneratorParams {
  int n_nodes = 30;
  int max_parents = 4;
  int max_cardinality = 4;
  double edge_density = 0.3;

  bool operator==(const GeneratorParams&) const = default;
};

/// Random DAG with parents drawn only from lower ids; CPT rows are uniform
/// on the probability simplex. Bit-identical for identical (params, seed).
BeliefNetwork generate_random(const GeneratorParams& params, std::uint64_t seed);

/// Per-variable posteriors plus the probability of the evidence.
struct Posterior {
  std::vector<std::vector<double>> marginals;
  double evidence_probability = 1.0;
};

constexpr std::uint64_t kDefaultJointCap = std::uint64_t{1} << 24;

/// Exact posteriors by enumerating the full joint. Refuses joints larger than `cap` cells.
Posterior oracle_marginals(const BeliefNetwork& net, const Evidence& ev,
                           std::uint64_t cap = kDefaultJointCap);

// Network document (JSON): {"version": 1, "variables": [...], "parents": [...], "cpts": [...]}.
std::string write_network(const BeliefNetwork& net);
/// Parses and validates. Throws ParseError or ValidationError.
BeliefNetwork read_network(std::string_view text);

BeliefNetwork load_network(const std::filesystem::path& path);
void save_network(const BeliefNetwork& net, const std::filesystem::path& path);

/// "3=1,5=0" style assignment lists.
Evidence parse_evidence(std::string_view spec);
std::string format_evidence(const Evidence& ev);

/// Each variable observed independently with probability `fraction`, state
/// drawn uniformly.
Evidence random_evidence(const BeliefNetwork& net, double fraction, std::uint64_t seed);

}  // namespace reform
