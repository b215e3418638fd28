#include "reform/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "parallel.hpp"
#include "reform/anytime.hpp"
#include "reform/csv.hpp"
#include "reform/error.hpp"
#include "reform/inference.hpp"

namespace reform {

using json = nlohmann::json;

BeliefNetwork Corpus::network(std::size_t index) const { return generate_random(params, network_seed(index)); }

std::uint64_t Corpus::network_seed(std::size_t index) const { return derive_seed({seed, index}); }

std::string write_corpus_manifest(const Corpus& corpus) {
  json doc;
  doc["version"] = 1;
  doc["generator"] = {{"n_nodes", corpus.params.n_nodes},
                      {"max_parents", corpus.params.max_parents},
                      {"max_cardinality", corpus.params.max_cardinality},
                      {"edge_density", corpus.params.edge_density}};
  doc["seed"] = corpus.seed;
  doc["count"] = corpus.count;
  return doc.dump(1) + "\n";
}

Corpus read_corpus_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("corpus manifest: ") + e.what());
  }
  Corpus c;
  try {
    const auto& g = doc.at("generator");
    c.params.n_nodes = g.value("n_nodes", c.params.n_nodes);
    c.params.max_parents = g.value("max_parents", c.params.max_parents);
    c.params.max_cardinality = g.value("max_cardinality", c.params.max_cardinality);
    c.params.edge_density = g.value("edge_density", c.params.edge_density);
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.count = doc.value("count", c.count);
  } catch (const json::exception& e) {
    throw ParseError(std::string("corpus manifest: ") + e.what());
  }
  if (c.params.n_nodes < 1 || c.params.max_parents < 0 || c.params.max_cardinality < 2 ||
      !(c.params.edge_density >= 0.0 && c.params.edge_density <= 1.0)) {
    throw ConfigError("corpus manifest: generator parameters out of range");
  }
  return c;
}

double TauSpec::draw(std::uint64_t seed) const {
  if (!(median > 0.0) || !(log_sigma >= 0.0)) throw ConfigError("tau spec: need median > 0 and log_sigma >= 0");
  if (log_sigma == 0.0) return median;
  Rng rng(seed);
  const double u1 = rng.uniform_open0();
  const double u2 = rng.uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return median * std::exp(log_sigma * z);
}

double network_tau(const Corpus& corpus, const TauSpec& spec, std::size_t index) {
  return spec.draw(derive_seed({corpus.network_seed(index), hash_string("tau")}));
}

std::unique_ptr<Clock> make_clock(const ProfileClock& clock, const Corpus& corpus, std::size_t index) {
  if (clock.mode == ClockMode::Wall) return std::make_unique<WallClock>();
  return std::make_unique<SimClock>(clock.candidate_cost, network_tau(corpus, clock.tau, index));
}

std::vector<double> Trajectory::normalized() const {
  std::vector<double> out;
  if (samples.empty()) return out;
  for (const auto& s : samples) out.push_back(s.estimate / samples.front().estimate);
  return out;
}

namespace {

unsigned worker_count(const ProfileClock& clock) { return clock.mode == ClockMode::Wall ? 1u : clock.threads; }

}  // namespace

std::vector<Trajectory> collect_trajectories(const Corpus& corpus, double horizon, double sample_step,
                                             const ProfileClock& clock, std::uint64_t seed) {
  if (!(sample_step > 0.0) || !(horizon > sample_step)) {
    throw ConfigError("collect_trajectories: need horizon > sample_step > 0");
  }
  const auto n_samples = static_cast<std::int64_t>(std::floor(horizon / sample_step + 1e-9));
  std::vector<Trajectory> out(corpus.count);
  detail::parallel_for(corpus.count, worker_count(clock), [&](std::size_t i) {
    const auto net = corpus.network(i);
    auto clk = make_clock(clock, corpus, i);
    AnytimeReformulator search(net, derive_seed({seed, corpus.network_seed(i), hash_string("trajectory")}), *clk);
    Trajectory t;
    t.network_id = i;
    for (std::int64_t k = 1; k <= n_samples; ++k) {
      const double at = scheduled_time(k, sample_step);
      search.run_until(at);
      t.samples.push_back({at, search.state().best_estimate.value()});
    }
    out[i] = std::move(t);
  });
  return out;
}

namespace {

double sample_step_of(const std::vector<Trajectory>& trajectories) {
  for (const auto& t : trajectories) {
    if (!t.samples.empty()) return t.samples.front().t_r;
  }
  throw ConfigError("no trajectory samples");
}

Histogram rho_histogram(const std::vector<double>& rhos, std::size_t nbins) {
  std::size_t ones = 0;
  std::vector<std::pair<double, double>> rest;
  for (double r : rhos) {
    if (r == 1.0) {
      ++ones;
    } else {
      rest.emplace_back(r, 1.0);
    }
  }
  const double p_one = static_cast<double>(ones) / static_cast<double>(rhos.size());
  std::vector<Bin> bins;
  if (!rest.empty()) {
    bins = Histogram::from_weighted(std::move(rest), nbins, std::pair{0.0, 1.0}).bins();
    for (auto& b : bins) b.mass *= 1.0 - p_one;
  }
  if (ones > 0) bins.push_back({1.0, 1.0, 1.0, p_one});
  return Histogram(std::move(bins));
}

}  // namespace

std::vector<double> transition_bin_edges(double horizon, double width, double delta) {
  if (!(width > 0.0) || !(delta > 0.0)) throw ConfigError("transition bins: width and delta must be positive");
  std::vector<double> edges;
  for (std::int64_t k = 1; scheduled_time(k, width) + delta <= horizon + 1e-9; ++k) edges.push_back(scheduled_time(k, width));
  if (edges.empty()) throw ConfigError("transition bins: horizon too short for one transition");
  return edges;
}

TransitionModel fit_transition_model(const std::vector<Trajectory>& trajectories, double delta,
                                     std::vector<double> t_r_bin_edges, std::size_t nbins) {
  if (t_r_bin_edges.empty()) throw ConfigError("fit_transition_model: no t_r bins");
  const double step = sample_step_of(trajectories);
  const double ratio = delta / step;
  const auto lag = static_cast<std::size_t>(std::llround(ratio));
  if (!(delta > 0.0) || lag == 0 || std::abs(ratio - static_cast<double>(lag)) > 1e-9 * ratio) {
    throw ConfigError("fit_transition_model: delta must be a positive multiple of the sample step");
  }

  TransitionModel tm;
  tm.delta = delta;
  tm.t_r_bin_edges = std::move(t_r_bin_edges);
  for (std::size_t i = 1; i < tm.t_r_bin_edges.size(); ++i) {
    if (!(tm.t_r_bin_edges[i - 1] < tm.t_r_bin_edges[i])) throw ConfigError("fit_transition_model: bin edges not increasing");
  }
  std::vector<std::vector<double>> per_bin(tm.t_r_bin_edges.size());
  for (const auto& t : trajectories) {
    for (std::size_t j = 0; j + lag < t.samples.size(); ++j) {
      const double rho = t.samples[j + lag].estimate / t.samples[j].estimate;
      if (rho > 1.0) throw std::logic_error("fit_transition_model: best estimate increased along a trajectory");
      per_bin[tm.bin_for(t.samples[j].t_r)].push_back(rho);
    }
  }

  const std::size_t n = per_bin.size();
  std::vector<std::optional<Histogram>> fitted(n);
  for (std::size_t b = 0; b < n; ++b) {
    if (!per_bin[b].empty()) fitted[b] = rho_histogram(per_bin[b], nbins);
  }
  if (std::none_of(fitted.begin(), fitted.end(), [](const auto& h) { return h.has_value(); })) {
    throw ConfigError("fit_transition_model: no transitions observed (horizon shorter than delta?)");
  }
  tm.inherited.assign(n, false);
  for (std::size_t b = 0; b < n; ++b) {
    if (fitted[b]) {
      tm.rho.push_back(*fitted[b]);
      continue;
    }
    for (std::size_t d = 1;; ++d) {
      if (b >= d && fitted[b - d]) {
        tm.rho.push_back(*fitted[b - d]);
        break;
      }
      if (b + d < n && fitted[b + d]) {
        tm.rho.push_back(*fitted[b + d]);
        break;
      }
    }
    tm.inherited[b] = true;
  }
  tm.check();
  return tm;
}

ExecPerUnitModel collect_exec_per_unit(const Corpus& corpus, const ProfileClock& clock, std::uint64_t seed,
                                       double evidence_fraction, std::size_t nbins) {
  std::vector<double> taus(corpus.count, 0.0);
  detail::parallel_for(corpus.count, worker_count(clock), [&](std::size_t i) {
    const auto net = corpus.network(i);
    const auto tree = first_tree(net);
    const auto ev = random_evidence(net, evidence_fraction, derive_seed({seed, corpus.network_seed(i), hash_string("evidence")}));
    auto clk = make_clock(clock, corpus, i);
    const bool materialize = clock.mode == ClockMode::Wall || tree.estimate.cells <= clock.materialize_cap;
    SimClock inner;
    std::function<void()> work;
    if (materialize) {
      work = [&] {
        try {
          propagate(assign_potentials(net, tree), tree, ev, inner);
        } catch (const InconsistentEvidence&) {
        }
      };
    }
    try {
      taus[i] = clk->time_execution(tree.estimate, work) / tree.estimate.value();
    } catch (const JointTooLarge&) {
      taus[i] = 0.0;
    }
  });
  std::vector<double> kept;
  for (double t : taus) {
    if (t > 0.0) kept.push_back(t);
  }
  if (kept.empty()) throw ConfigError("collect_exec_per_unit: no network produced a timing");
  ExecPerUnitModel pu{Histogram::from_samples(kept, nbins),
                      "clock=" + to_string(clock.mode) + ";n=" + std::to_string(kept.size())};
  pu.check();
  return pu;
}

ExecTimeFamily derive_exec_family(const std::vector<Trajectory>& trajectories, const ExecPerUnitModel& pu,
                                  const std::vector<double>& grid, std::size_t nbins) {
  if (trajectories.empty()) throw ConfigError("derive_exec_family: no trajectories");
  pu.check();
  ExecTimeFamily fam;
  fam.grid = grid;
  fam.context = pu.context;
  const double w = 1.0 / static_cast<double>(trajectories.size());
  for (double g : grid) {
    std::vector<std::pair<double, double>> points;
    for (const auto& t : trajectories) {
      auto it = std::find_if(t.samples.begin(), t.samples.end(), [&](const TrajectorySample& s) {
        return std::abs(s.t_r - g) <= 1e-12 * std::max(1.0, std::abs(g));
      });
      if (it == t.samples.end()) throw ConfigError("derive_exec_family: grid point " + format_double(g) + " was not sampled");
      for (const auto& b : pu.tau.bins()) points.emplace_back(b.value * it->estimate, b.mass * w);
    }
    fam.dists.push_back({Histogram::from_weighted(std::move(points), nbins), fam.context});
  }
  fam.check();
  return fam;
}

void write_trajectory_archive(const std::vector<Trajectory>& trajectories, const std::filesystem::path& dir) {
  CsvTable index;
  index.header = {"network_id", "file", "samples"};
  for (const auto& t : trajectories) {
    const std::string name = "trajectory_" + std::to_string(t.network_id) + ".csv";
    CsvTable table;
    table.header = {"t_r_seconds", "best_estimate", "normalized"};
    const auto norm = t.normalized();
    for (std::size_t j = 0; j < t.samples.size(); ++j) {
      table.rows.push_back({format_double(t.samples[j].t_r), format_double(t.samples[j].estimate), format_double(norm[j])});
    }
    write_text_file(dir / name, write_csv(table));
    index.rows.push_back({std::to_string(t.network_id), name, std::to_string(t.samples.size())});
  }
  write_text_file(dir / "index.csv", write_csv(index));
}

std::vector<Trajectory> read_trajectory_archive(const std::filesystem::path& dir) {
  const auto index = read_csv(read_text_file(dir / "index.csv"));
  std::vector<Trajectory> out;
  for (std::size_t r = 0; r < index.rows.size(); ++r) {
    Trajectory t;
    t.network_id = static_cast<std::size_t>(parse_int(index.text(r, "network_id")));
    const auto table = read_csv(read_text_file(dir / index.text(r, "file")));
    for (std::size_t j = 0; j < table.rows.size(); ++j) {
      t.samples.push_back({table.number(j, "t_r_seconds"), table.number(j, "best_estimate")});
    }
    if (t.samples.size() != static_cast<std::size_t>(parse_int(index.text(r, "samples")))) {
      throw ParseError("trajectory archive: sample count mismatch for network " + std::to_string(t.network_id));
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace reform
