#include "reform/value.hpp"

#include <cmath>
#include <map>

#include "reform/csv.hpp"
#include "reform/error.hpp"

namespace reform {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void check(const ValueFunction& vf) {
  std::visit(overloaded{
                 [](const Deadline& d) {
                   if (!(d.k > 0.0) || !(d.a > 0.0)) throw ConfigError("deadline value function needs k > 0 and a > 0");
                 },
                 [](const Polynomial& p) {
                   if (p.coeffs.empty()) throw ConfigError("polynomial value function needs degree >= 1");
                 },
                 [](const Exponential& e) {
                   if (!(e.k > 0.0) || !(e.lambda >= 0.0)) throw ConfigError("exponential value function needs k > 0 and lambda >= 0");
                 },
                 [](const Target& t) {
                   if (!(t.width > 0.0)) throw ConfigError("target value function needs width > 0");
                 },
             },
             vf);
}

double eval_value(const ValueFunction& vf, double t) {
  return std::visit(overloaded{
                        [t](const Deadline& d) { return t <= d.a ? d.k : 0.0; },
                        [t](const Polynomial& p) {
                          // Horner over a_n .. a_1, then the constant.
                          double acc = 0.0;
                          for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = (acc + *it) * t;
                          return p.constant + acc;
                        },
                        [t](const Exponential& e) { return e.k * std::exp(-e.lambda * t); },
                        [t](const Target& g) {
                          return (t > g.a - g.width / 2 && t <= g.a + g.width / 2) ? g.k / g.width : 0.0;
                        },
                    },
                    vf);
}

ValueFunction scaled(const ValueFunction& vf, double c) {
  return std::visit(overloaded{
                        [c](Deadline d) -> ValueFunction {
                          d.k *= c;
                          return d;
                        },
                        [c](Polynomial p) -> ValueFunction {
                          p.constant *= c;
                          for (auto& x : p.coeffs) x *= c;
                          return p;
                        },
                        [c](Exponential e) -> ValueFunction {
                          e.k *= c;
                          return e;
                        },
                        [c](Target g) -> ValueFunction {
                          g.k *= c;
                          return g;
                        },
                    },
                    vf);
}

bool non_increasing(const ValueFunction& vf) {
  return std::visit(overloaded{
                        [](const Deadline&) { return true; },
                        [](const Polynomial& p) {
                          // Sufficient condition: no positive coefficient.
                          for (double x : p.coeffs) {
                            if (x > 0.0) return false;
                          }
                          return true;
                        },
                        [](const Exponential&) { return true; },
                        [](const Target&) { return false; },
                    },
                    vf);
}

namespace {

std::map<std::string, double, std::less<>> parse_params(std::string_view body) {
  std::map<std::string, double, std::less<>> out;
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto comma = body.find(',', pos);
    auto item = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    pos = comma == std::string_view::npos ? body.size() : comma + 1;
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("value function parameter '" + std::string(item) + "' lacks '='");
    out[std::string(item.substr(0, eq))] = parse_double(item.substr(eq + 1));
  }
  return out;
}

double take(std::map<std::string, double, std::less<>>& params, const char* key, std::string_view kind) {
  auto it = params.find(key);
  if (it == params.end()) throw ParseError(std::string(kind) + " value function requires '" + key + "'");
  double v = it->second;
  params.erase(it);
  return v;
}

double take_or(std::map<std::string, double, std::less<>>& params, const char* key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  double v = it->second;
  params.erase(it);
  return v;
}

}  // namespace

ValueFunction parse_value_function(std::string_view spec) {
  auto colon = spec.find(':');
  auto kind = spec.substr(0, colon);
  auto params = parse_params(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1));
  ValueFunction vf;
  if (kind == "deadline") {
    vf = Deadline{take_or(params, "k", 1.0), take(params, "a", kind)};
  } else if (kind == "poly") {
    Polynomial p;
    p.constant = take_or(params, "a0", 0.0);
    int degree = 0;
    for (const auto& [name, v] : params) {
      if (name.size() < 2 || name[0] != 'a') throw ParseError("poly value function: unknown parameter '" + name + "'");
      degree = std::max(degree, static_cast<int>(parse_int(std::string_view(name).substr(1))));
    }
    p.coeffs.assign(static_cast<std::size_t>(degree), 0.0);
    for (const auto& [name, v] : params) p.coeffs[static_cast<std::size_t>(parse_int(std::string_view(name).substr(1)) - 1)] = v;
    params.clear();
    vf = p;
  } else if (kind == "exp") {
    vf = Exponential{take_or(params, "k", 1.0), take(params, "lambda", kind)};
  } else if (kind == "target") {
    double a = take(params, "a", kind);
    double w = take(params, "w", kind);
    vf = Target{a, w, take_or(params, "k", 1.0)};
  } else {
    throw ParseError("unknown value function kind '" + std::string(kind) + "'");
  }
  if (!params.empty()) throw ParseError("unknown value function parameter '" + params.begin()->first + "'");
  check(vf);
  return vf;
}

std::string to_string(const ValueFunction& vf) {
  return std::visit(overloaded{
                        [](const Deadline& d) { return "deadline:k=" + format_double(d.k) + ",a=" + format_double(d.a); },
                        [](const Polynomial& p) {
                          std::string s = "poly:a0=" + format_double(p.constant);
                          for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
                            s += ",a" + std::to_string(i + 1) + "=" + format_double(p.coeffs[i]);
                          }
                          return s;
                        },
                        [](const Exponential& e) { return "exp:k=" + format_double(e.k) + ",lambda=" + format_double(e.lambda); },
                        [](const Target& g) {
                          return "target:a=" + format_double(g.a) + ",w=" + format_double(g.width) + ",k=" + format_double(g.k);
                        },
                    },
                    vf);
}

nlohmann::json to_json(const ValueFunction& vf) { return to_string(vf); }

ValueFunction value_function_from_json(const nlohmann::json& j) {
  if (!j.is_string()) throw ParseError("value function must be a string such as \"deadline:k=1,a=5\"");
  return parse_value_function(j.get<std::string>());
}

}  // namespace reform
