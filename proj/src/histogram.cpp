#include "reform/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reform/csv.hpp"
#include "reform/error.hpp"

namespace reform {

Histogram::Histogram(std::vector<Bin> bins) : bins_(std::move(bins)) {
  std::vector<std::string> problems;
  double total = 0.0;
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const auto& b = bins_[i];
    const std::string where = "bin " + std::to_string(i) + ": ";
    if (!(b.mass >= 0.0) || !std::isfinite(b.mass)) problems.push_back(where + "negative or non-finite mass");
    if (!(b.lo <= b.hi)) problems.push_back(where + "lo > hi");
    if (!(b.value >= b.lo && b.value <= b.hi)) problems.push_back(where + "value outside [lo, hi]");
    if (i > 0) {
      const auto& prev = bins_[i - 1];
      if (!(prev.hi <= b.lo) || !(prev.value < b.value)) problems.push_back(where + "bins overlap or are not ascending");
    }
    total += b.mass;
  }
  if (bins_.empty()) problems.emplace_back("histogram has no bins");
  if (std::abs(total - 1.0) > kMassTolerance) problems.push_back("masses sum to " + format_double(total));
  if (!problems.empty()) {
    std::string message = "invalid histogram: " + problems.front();
    throw ValidationError(message, std::move(problems));
  }
}

Histogram Histogram::atoms(std::span<const double> values, std::span<const double> masses) {
  if (values.size() != masses.size()) throw ValidationError("atoms: size mismatch", {});
  std::vector<Bin> bins;
  for (std::size_t i = 0; i < values.size(); ++i) bins.push_back({values[i], values[i], values[i], masses[i]});
  return Histogram(std::move(bins));
}

Histogram Histogram::centred(std::span<const double> midpoints, std::span<const double> masses, double width) {
  if (midpoints.size() != masses.size()) throw ValidationError("centred: size mismatch", {});
  if (!(width >= 0.0)) throw ValidationError("centred: negative width", {});
  std::vector<Bin> bins;
  for (std::size_t i = 0; i < midpoints.size(); ++i) {
    bins.push_back({midpoints[i] - width / 2, midpoints[i] + width / 2, midpoints[i], masses[i]});
  }
  return Histogram(std::move(bins));
}

Histogram Histogram::from_weighted(std::vector<std::pair<double, double>> points, std::size_t nbins,
                                   std::optional<std::pair<double, double>> range) {
  if (points.empty()) throw ValidationError("from_weighted: no samples", {});
  if (nbins == 0) throw ValidationError("from_weighted: zero bins", {});
  double total = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (auto [x, w] : points) {
    if (!std::isfinite(x) || !(w >= 0.0)) throw ValidationError("from_weighted: bad sample", {});
    total += w;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!(total > 0.0)) throw ValidationError("from_weighted: zero total weight", {});
  if (lo == hi) return Histogram({{lo, lo, lo, 1.0}});
  if (range) {
    if (lo < range->first || hi > range->second) throw ValidationError("from_weighted: sample outside range", {});
    lo = range->first;
    hi = range->second;
  }
  const double width = (hi - lo) / static_cast<double>(nbins);
  struct Acc {
    double weight = 0.0, weighted = 0.0;
    double min = std::numeric_limits<double>::infinity(), max = -std::numeric_limits<double>::infinity();
  };
  std::vector<Acc> acc(nbins);
  for (auto [x, w] : points) {
    auto k = static_cast<std::size_t>(std::floor((x - lo) / width));
    k = std::min(k, nbins - 1);
    auto& a = acc[k];
    a.weight += w;
    a.weighted += w * x;
    a.min = std::min(a.min, x);
    a.max = std::max(a.max, x);
  }
  std::vector<Bin> bins;
  for (std::size_t k = 0; k < nbins; ++k) {
    const auto& a = acc[k];
    if (a.weight <= 0.0) continue;
    const double b_lo = lo + width * static_cast<double>(k);
    const double b_hi = k + 1 == nbins ? hi : lo + width * static_cast<double>(k + 1);
    double value = a.min == a.max ? a.min : a.weighted / a.weight;
    value = std::clamp(value, std::min(b_lo, a.min), std::max(b_hi, a.max));
    bins.push_back({std::min(b_lo, a.min), std::max(b_hi, a.max), value, a.weight / total});
  }
  // Rounding at bin edges can leave a sliver of overlap; snap to the previous hi.
  for (std::size_t i = 1; i < bins.size(); ++i) bins[i].lo = std::max(bins[i].lo, bins[i - 1].hi);
  for (auto& b : bins) b.value = std::clamp(b.value, b.lo, b.hi);
  return Histogram(std::move(bins));
}

Histogram Histogram::from_samples(std::span<const double> samples, std::size_t nbins) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(samples.size());
  for (double x : samples) pts.emplace_back(x, 1.0);
  return from_weighted(std::move(pts), nbins);
}

double Histogram::moment(int k) const {
  double m = 0.0;
  for (const auto& b : bins_) m += b.mass * std::pow(b.value, k);
  return m;
}

std::optional<double> Histogram::density_at(double x) const {
  for (const auto& b : bins_) {
    if (b.atom()) {
      if (x == b.lo) return b.mass > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    } else if (b.lo <= x && x < b.hi) {
      return b.mass / (b.hi - b.lo);
    }
  }
  return std::nullopt;
}

Histogram Histogram::scaled(double c) const {
  if (!(c > 0.0)) throw ValidationError("scaled: factor must be positive", {});
  auto bins = bins_;
  for (auto& b : bins) {
    b.lo *= c;
    b.hi *= c;
    b.value *= c;
    b.value = std::clamp(b.value, b.lo, b.hi);
  }
  return Histogram(std::move(bins));
}

nlohmann::json to_json(const Histogram& h) {
  nlohmann::json edges = nlohmann::json::array(), values = nlohmann::json::array(), masses = nlohmann::json::array();
  for (const auto& b : h.bins()) {
    edges.push_back({b.lo, b.hi});
    values.push_back(b.value);
    masses.push_back(b.mass);
  }
  return {{"edges", edges}, {"values", values}, {"masses", masses}};
}

Histogram histogram_from_json(const nlohmann::json& j) {
  try {
    auto edges = j.at("edges").get<std::vector<std::pair<double, double>>>();
    auto values = j.at("values").get<std::vector<double>>();
    auto masses = j.at("masses").get<std::vector<double>>();
    if (edges.size() != values.size() || values.size() != masses.size()) {
      throw ParseError("histogram: edges, values and masses differ in length");
    }
    std::vector<Bin> bins;
    for (std::size_t i = 0; i < edges.size(); ++i) bins.push_back({edges[i].first, edges[i].second, values[i], masses[i]});
    return Histogram(std::move(bins));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("histogram: ") + e.what());
  }
}

}  // namespace reform
