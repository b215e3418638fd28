#include <json.hpp>

#include "reform/error.hpp"
#include "reform/metareason.hpp"

namespace reform {

using json = nlohmann::json;

namespace {

json parse_doc(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

void expect_kind(const json& doc, const char* kind) {
  if (!doc.is_object() || doc.value("kind", std::string{}) != kind) {
    throw ParseError(std::string("expected a model document of kind '") + kind + "'");
  }
}

}  // namespace

std::string write_transition_model(const TransitionModel& tm) {
  json doc;
  doc["kind"] = "transition";
  doc["version"] = 1;
  doc["delta_seconds"] = tm.delta;
  doc["t_r_bin_edges"] = tm.t_r_bin_edges;
  doc["rho"] = json::array();
  for (const auto& h : tm.rho) doc["rho"].push_back(to_json(h));
  std::vector<int> inherited;
  for (bool b : tm.inherited) inherited.push_back(b ? 1 : 0);
  doc["inherited"] = inherited;
  return doc.dump(1) + "\n";
}

TransitionModel read_transition_model(std::string_view text) {
  auto doc = parse_doc(text, "transition model");
  expect_kind(doc, "transition");
  try {
    TransitionModel tm;
    tm.delta = doc.at("delta_seconds").get<double>();
    tm.t_r_bin_edges = doc.at("t_r_bin_edges").get<std::vector<double>>();
    for (const auto& h : doc.at("rho")) tm.rho.push_back(histogram_from_json(h));
    if (doc.contains("inherited")) {
      for (int b : doc["inherited"].get<std::vector<int>>()) tm.inherited.push_back(b != 0);
    }
    tm.check();
    return tm;
  } catch (const json::exception& e) {
    throw ParseError(std::string("transition model: ") + e.what());
  }
}

std::string write_exec_per_unit(const ExecPerUnitModel& pu) {
  json doc;
  doc["kind"] = "exec_per_unit";
  doc["version"] = 1;
  doc["context"] = pu.context;
  doc["tau"] = to_json(pu.tau);
  return doc.dump(1) + "\n";
}

ExecPerUnitModel read_exec_per_unit(std::string_view text) {
  auto doc = parse_doc(text, "per-unit model");
  expect_kind(doc, "exec_per_unit");
  try {
    ExecPerUnitModel pu{histogram_from_json(doc.at("tau")), doc.value("context", std::string{})};
    pu.check();
    return pu;
  } catch (const json::exception& e) {
    throw ParseError(std::string("per-unit model: ") + e.what());
  }
}

std::string write_exec_family(const ExecTimeFamily& fam) {
  json doc;
  doc["kind"] = "exec_family";
  doc["version"] = 1;
  doc["context"] = fam.context;
  doc["t_r_grid"] = fam.grid;
  doc["distributions"] = json::array();
  for (const auto& d : fam.dists) doc["distributions"].push_back(to_json(d.hist));
  return doc.dump(1) + "\n";
}

ExecTimeFamily read_exec_family(std::string_view text) {
  auto doc = parse_doc(text, "exec-time family");
  expect_kind(doc, "exec_family");
  try {
    ExecTimeFamily fam;
    fam.context = doc.value("context", std::string{});
    fam.grid = doc.at("t_r_grid").get<std::vector<double>>();
    for (const auto& h : doc.at("distributions")) fam.dists.push_back({histogram_from_json(h), fam.context});
    fam.check();
    return fam;
  } catch (const json::exception& e) {
    throw ParseError(std::string("exec-time family: ") + e.what());
  }
}

}  // namespace reform
