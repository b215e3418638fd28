#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace reform {

/// k until the deadline a (inclusive), 0 afterwards.
struct Deadline {
  double k = 1.0;
  double a = 0.0;
  bool operator==(const Deadline&) const = default;
};

/// constant + sum_i coeffs[i-1] * t^i.
struct Polynomial {
  double constant = 0.0;
  std::vector<double> coeffs;
  bool operator==(const Polynomial&) const = default;
};

/// k * exp(-lambda * t).
struct Exponential {
  double k = 1.0;
  double lambda = 0.0;
  bool operator==(const Exponential&) const = default;
};

/// Box of area k standing in for k * delta(t - a): k / width on (a - width/2, a + width/2].
struct Target {
  double a = 0.0;
  double width = 1.0;
  double k = 1.0;
  bool operator==(const Target&) const = default;
};

using ValueFunction = std::variant<Deadline, Polynomial, Exponential, Target>;

/// Throws ConfigError on parameters outside their domain.
void check(const ValueFunction& vf);

double eval_value(const ValueFunction& vf, double t);

/// c * V(t). Requires c > 0 for the result to keep the same argmax.
ValueFunction scaled(const ValueFunction& vf, double c);

/// True if V is non-increasing in t on [0, inf).
bool non_increasing(const ValueFunction& vf);

/// Compact text form: "deadline:k=1,a=5", "poly:a0=0,a1=-1,a2=-0.5",
/// "exp:k=1,lambda=0.1", "target:a=10,w=1,k=1".
ValueFunction parse_value_function(std::string_view spec);
std::string to_string(const ValueFunction& vf);

nlohmann::json to_json(const ValueFunction& vf);
ValueFunction value_function_from_json(const nlohmann::json& j);

}  // namespace reform
