#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

namespace reform {

/// One histogram cell. `value` is the conditional mean of the mass inside
/// [lo, hi) and is what expectations use; lo == hi marks a point mass.
struct Bin {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double mass = 0.0;

  bool atom() const noexcept { return lo == hi; }
  bool operator==(const Bin&) const = default;
};

inline constexpr double kMassTolerance = 1e-9;
inline constexpr std::size_t kDefaultBinCount = 64;

/// Discrete distribution over non-overlapping, ascending bins.
class Histogram {
 public:
  Histogram() = default;
  /// Throws ValidationError unless masses are non-negative and sum to 1
  /// within 1e-9, bins are ascending and non-overlapping, and each value
  /// lies inside its bin.
  explicit Histogram(std::vector<Bin> bins);

  /// Point masses at strictly increasing `values`.
  static Histogram atoms(std::span<const double> values, std::span<const double> masses);
  /// Bins of a common `width` centred on strictly increasing midpoints.
  static Histogram centred(std::span<const double> midpoints, std::span<const double> masses, double width);
  /// Weighted samples pooled into `nbins` equal-width bins over `range` (or
  /// the sample range). Identical samples collapse to a single atom; a bin
  /// whose samples all coincide keeps that exact value.
  static Histogram from_weighted(std::vector<std::pair<double, double>> points, std::size_t nbins,
                                 std::optional<std::pair<double, double>> range = std::nullopt);
  static Histogram from_samples(std::span<const double> samples, std::size_t nbins = kDefaultBinCount);

  const std::vector<Bin>& bins() const noexcept { return bins_; }
  std::size_t size() const noexcept { return bins_.size(); }
  bool empty() const noexcept { return bins_.empty(); }

  /// Sum of mass * value^k.
  double moment(int k) const;
  double mean() const { return moment(1); }
  /// Mass per unit length of the bin containing x (lo <= x < hi), +inf on an
  /// atom at x, nullopt when x lies outside every bin.
  std::optional<double> density_at(double x) const;
  /// Every bin stretched by factor c > 0.
  Histogram scaled(double c) const;

  bool operator==(const Histogram&) const = default;

 private:
  std::vector<Bin> bins_;
};

nlohmann::json to_json(const Histogram& h);
Histogram histogram_from_json(const nlohmann::json& j);

}  // namespace reform
