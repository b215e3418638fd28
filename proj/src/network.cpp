#include "reform/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

#include <json.hpp>

#include "reform/csv.hpp"
#include "reform/error.hpp"
#include "reform/random.hpp"

namespace reform {

using json = nlohmann::json;

std::vector<int> BeliefNetwork::cardinalities() const {
  std::vector<int> out;
  out.reserve(variables.size());
  for (const auto& v : variables) out.push_back(v.cardinality);
  return out;
}

std::size_t BeliefNetwork::parent_configurations(int v) const {
  std::size_t rows = 1;
  for (int p : parents.at(static_cast<std::size_t>(v))) rows *= static_cast<std::size_t>(cardinality(p));
  return rows;
}

namespace {

void add(std::vector<Violation>& out, int v, std::string kind, std::string msg) {
  out.push_back({v, std::move(kind), std::move(msg)});
}

bool has_cycle(const BeliefNetwork& net) {
  const auto n = static_cast<std::size_t>(net.size());
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (int p : net.parents[v]) {
      children[static_cast<std::size_t>(p)].push_back(static_cast<int>(v));
      ++indegree[v];
    }
  }
  std::vector<int> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(static_cast<int>(v));
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (int c : children[static_cast<std::size_t>(v)]) {
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    }
  }
  return seen != n;
}

}  // namespace

std::vector<Violation> validate(const BeliefNetwork& net) {
  std::vector<Violation> out;
  const int n = net.size();
  bool cards_ok = true;
  for (int i = 0; i < n; ++i) {
    const auto& var = net.variables[static_cast<std::size_t>(i)];
    if (var.id != i) add(out, i, "id", "variable at position " + std::to_string(i) + " has id " + std::to_string(var.id));
    if (var.cardinality < 2) {
      add(out, i, "cardinality", "cardinality " + std::to_string(var.cardinality) + " < 2");
      cards_ok = false;
    }
  }
  if (net.parents.size() != static_cast<std::size_t>(n)) {
    add(out, -1, "dimension", "parents has " + std::to_string(net.parents.size()) + " entries for " + std::to_string(n) + " variables");
    return out;
  }
  bool parents_ok = true;
  for (int v = 0; v < n; ++v) {
    std::set<int> seen;
    for (int p : net.parents[static_cast<std::size_t>(v)]) {
      if (p < 0 || p >= n) {
        add(out, v, "parent", "parent id " + std::to_string(p) + " out of range");
        parents_ok = false;
      } else if (p == v) {
        add(out, v, "acyclicity", "variable is its own parent");
        parents_ok = false;
      } else if (!seen.insert(p).second) {
        add(out, v, "parent", "duplicate parent " + std::to_string(p));
        parents_ok = false;
      }
    }
  }
  if (parents_ok && has_cycle(net)) add(out, -1, "acyclicity", "parent relation contains a cycle");

  if (net.cpts.size() != static_cast<std::size_t>(n)) {
    add(out, -1, "dimension", "cpts has " + std::to_string(net.cpts.size()) + " entries for " + std::to_string(n) + " variables");
    return out;
  }
  if (!parents_ok || !cards_ok) return out;
  for (int v = 0; v < n; ++v) {
    const auto& cpt = net.cpts[static_cast<std::size_t>(v)];
    const auto card = static_cast<std::size_t>(net.cardinality(v));
    const auto rows = net.parent_configurations(v);
    if (cpt.size() != rows * card) {
      add(out, v, "dimension", "cpt has " + std::to_string(cpt.size()) + " entries, expected " + std::to_string(rows * card));
      continue;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      bool bad = false;
      for (std::size_t s = 0; s < card; ++s) {
        double p = cpt[r * card + s];
        if (!(p >= 0.0) || !std::isfinite(p)) bad = true;
        sum += p;
      }
      if (bad) {
        add(out, v, "negative", "row " + std::to_string(r) + " has a negative or non-finite entry");
      } else if (std::abs(sum - 1.0) > kValidationTolerance) {
        add(out, v, "row_sum", "row " + std::to_string(r) + " sum " + format_double(sum) + " != 1");
      }
    }
  }
  return out;
}

std::vector<Violation> validate(const BeliefNetwork& net, const Evidence& ev) {
  std::vector<Violation> out;
  for (auto [v, s] : ev.assignments) {
    if (v < 0 || v >= net.size()) {
      add(out, v, "evidence", "unknown variable " + std::to_string(v));
    } else if (s < 0 || s >= net.cardinality(v)) {
      add(out, v, "evidence", "state " + std::to_string(s) + " out of range");
    }
  }
  return out;
}

BeliefNetwork generate_random(const GeneratorParams& params, std::uint64_t seed) {
  if (params.n_nodes < 1) throw ConfigError("generate_random: n_nodes must be >= 1");
  if (params.max_parents < 0) throw ConfigError("generate_random: max_parents must be >= 0");
  if (params.max_cardinality < 2) throw ConfigError("generate_random: max_cardinality must be >= 2");
  if (!(params.edge_density >= 0.0 && params.edge_density <= 1.0)) {
    throw ConfigError("generate_random: edge_density must lie in [0, 1]");
  }
  Rng rng(seed);
  BeliefNetwork net;
  const int n = params.n_nodes;
  net.variables.resize(static_cast<std::size_t>(n));
  net.parents.resize(static_cast<std::size_t>(n));
  net.cpts.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    net.variables[static_cast<std::size_t>(i)] = {i, "X" + std::to_string(i), rng.between(2, params.max_cardinality)};
  }
  for (int i = 0; i < n; ++i) {
    std::vector<int> candidates(static_cast<std::size_t>(i));
    std::iota(candidates.begin(), candidates.end(), 0);
    rng.shuffle(std::span<int>(candidates));
    auto& ps = net.parents[static_cast<std::size_t>(i)];
    for (int c : candidates) {
      if (static_cast<int>(ps.size()) >= params.max_parents) break;
      if (rng.bernoulli(params.edge_density)) ps.push_back(c);
    }
    std::sort(ps.begin(), ps.end());
  }
  for (int i = 0; i < n; ++i) {
    const auto card = static_cast<std::size_t>(net.cardinality(i));
    const auto rows = net.parent_configurations(i);
    auto& cpt = net.cpts[static_cast<std::size_t>(i)];
    cpt.resize(rows * card);
    for (std::size_t r = 0; r < rows; ++r) {
      // Normalized exponentials are uniform on the simplex.
      double sum = 0.0;
      for (std::size_t s = 0; s < card; ++s) {
        double e = -std::log(rng.uniform_open0());
        cpt[r * card + s] = e;
        sum += e;
      }
      if (sum <= 0.0) {
        for (std::size_t s = 0; s < card; ++s) cpt[r * card + s] = 1.0 / static_cast<double>(card);
      } else {
        for (std::size_t s = 0; s < card; ++s) cpt[r * card + s] /= sum;
      }
    }
  }
  return net;
}

Posterior oracle_marginals(const BeliefNetwork& net, const Evidence& ev, std::uint64_t cap) {
  const int n = net.size();
  if (auto bad = validate(net, ev); !bad.empty()) throw ValidationError("invalid evidence", {bad.front().message});
  std::uint64_t cells = 1;
  for (int v = 0; v < n; ++v) {
    cells *= static_cast<std::uint64_t>(net.cardinality(v));
    if (cells > cap) throw JointTooLarge("joint distribution exceeds " + std::to_string(cap) + " cells");
  }
  std::vector<int> state(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<double>> acc(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) acc[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(net.cardinality(v)), 0.0);

  // Clamp observed variables so only consistent configurations are enumerated.
  std::vector<bool> observed(static_cast<std::size_t>(n), false);
  for (auto [v, s] : ev.assignments) {
    state[static_cast<std::size_t>(v)] = s;
    observed[static_cast<std::size_t>(v)] = true;
  }

  double total = 0.0;
  while (true) {
    double p = 1.0;
    for (int v = 0; v < n && p != 0.0; ++v) {
      std::size_t row = 0;
      for (int par : net.parents[static_cast<std::size_t>(v)]) {
        row = row * static_cast<std::size_t>(net.cardinality(par)) + static_cast<std::size_t>(state[static_cast<std::size_t>(par)]);
      }
      p *= net.cpts[static_cast<std::size_t>(v)][row * static_cast<std::size_t>(net.cardinality(v)) +
                                                 static_cast<std::size_t>(state[static_cast<std::size_t>(v)])];
    }
    total += p;
    for (int v = 0; v < n; ++v) acc[static_cast<std::size_t>(v)][static_cast<std::size_t>(state[static_cast<std::size_t>(v)])] += p;

    int v = n - 1;
    for (; v >= 0; --v) {
      auto i = static_cast<std::size_t>(v);
      if (observed[i]) continue;
      if (++state[i] < net.cardinality(v)) break;
      state[i] = 0;
    }
    if (v < 0) break;
  }
  if (!(total > 0.0)) throw InconsistentEvidence("evidence has zero probability");
  for (auto& dist : acc) {
    for (auto& p : dist) p /= total;
  }
  return {std::move(acc), total};
}

std::string write_network(const BeliefNetwork& net) {
  json doc;
  doc["version"] = 1;
  doc["variables"] = json::array();
  for (const auto& v : net.variables) {
    doc["variables"].push_back({{"id", v.id}, {"name", v.name}, {"cardinality", v.cardinality}});
  }
  doc["parents"] = net.parents;
  doc["cpts"] = net.cpts;
  return doc.dump(1) + "\n";
}

namespace {

template <class T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + "." + key + ": " + e.what());
  }
}

}  // namespace

BeliefNetwork read_network(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("network document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("network document: top level must be an object");
  if (field<int>(doc, "version", "network") != 1) throw ParseError("network.version: unsupported version");
  BeliefNetwork net;
  if (!doc.contains("variables") || !doc["variables"].is_array()) throw ParseError("network: missing array 'variables'");
  std::size_t i = 0;
  for (const auto& v : doc["variables"]) {
    std::string where = "network.variables[" + std::to_string(i++) + "]";
    net.variables.push_back({field<int>(v, "id", where), field<std::string>(v, "name", where),
                             field<int>(v, "cardinality", where)});
  }
  net.parents = field<std::vector<std::vector<int>>>(doc, "parents", "network");
  net.cpts = field<std::vector<std::vector<double>>>(doc, "cpts", "network");
  if (auto bad = validate(net); !bad.empty()) {
    std::vector<std::string> msgs;
    for (const auto& b : bad) msgs.push_back("variable " + std::to_string(b.variable) + ": " + b.kind + ": " + b.message);
    std::string message = "network failed validation: " + msgs.front();
    throw ValidationError(message, std::move(msgs));
  }
  return net;
}

BeliefNetwork load_network(const std::filesystem::path& path) { return read_network(read_text_file(path)); }

void save_network(const BeliefNetwork& net, const std::filesystem::path& path) {
  write_text_file(path, write_network(net));
}

Evidence parse_evidence(std::string_view spec) {
  Evidence ev;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    auto comma = spec.find(',', pos);
    auto item = spec.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    pos = comma == std::string_view::npos ? spec.size() : comma + 1;
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("evidence item '" + std::string(item) + "' lacks '='");
    ev.assignments[static_cast<int>(parse_int(item.substr(0, eq)))] = static_cast<int>(parse_int(item.substr(eq + 1)));
  }
  return ev;
}

std::string format_evidence(const Evidence& ev) {
  std::string out;
  for (auto [v, s] : ev.assignments) {
    if (!out.empty()) out += ',';
    out += std::to_string(v) + "=" + std::to_string(s);
  }
  return out;
}

Evidence random_evidence(const BeliefNetwork& net, double fraction, std::uint64_t seed) {
  Rng rng(seed);
  Evidence ev;
  for (int v = 0; v < net.size(); ++v) {
    if (rng.bernoulli(fraction)) ev.assignments[v] = static_cast<int>(rng.below(static_cast<std::uint64_t>(net.cardinality(v))));
  }
  return ev;
}

}  // namespace reform
