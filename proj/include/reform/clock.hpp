#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "reform/jointree.hpp"

namespace reform {

/// Time source injected into reformulation and propagation.
///
/// Wall mode measures real elapsed time. Simulated mode charges a fixed cost
/// per reformulation candidate and `tau * E` seconds per propagation, so every
/// run is a pure function of its seeds.
class Clock {
 public:
  virtual ~Clock() = default;

  /// Seconds since the clock was created (or last reset).
  virtual double now() const = 0;
  /// Called once per evaluated reformulation candidate.
  virtual void charge_candidate() = 0;
  /// Runs `work` and returns the execution time it is billed.
  virtual double time_execution(RuntimeEstimate estimate, const std::function<void()>& work) = 0;
  virtual bool simulated() const noexcept = 0;
  virtual void reset() = 0;
};

class WallClock final : public Clock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}

  double now() const override {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  void charge_candidate() override {}
  double time_execution(RuntimeEstimate, const std::function<void()>& work) override {
    auto t0 = std::chrono::steady_clock::now();
    if (work) work();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  bool simulated() const noexcept override { return false; }
  void reset() override { start_ = std::chrono::steady_clock::now(); }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Integer nanosecond ticks keep increments of delta exact under repeated
/// charging; now() is the correctly rounded tick count in seconds.
class SimClock final : public Clock {
 public:
  static constexpr double kDefaultCandidateCost = 0.05;
  static constexpr double kDefaultTau = 1e-6;

  explicit SimClock(double candidate_cost_seconds = kDefaultCandidateCost, double tau_seconds_per_cell = kDefaultTau)
      : candidate_cost_ns_(to_ns(candidate_cost_seconds)), tau_(tau_seconds_per_cell) {}

  double now() const override { return static_cast<double>(ticks_) / 1e9; }
  void charge_candidate() override { ticks_ += candidate_cost_ns_; }
  double time_execution(RuntimeEstimate estimate, const std::function<void()>& work) override {
    if (work) work();
    double t_e = tau_ * estimate.value();
    ticks_ += to_ns(t_e);
    return t_e;
  }
  bool simulated() const noexcept override { return true; }
  void reset() override { ticks_ = 0; }

  void advance(double seconds) { ticks_ += to_ns(seconds); }
  double candidate_cost() const noexcept { return static_cast<double>(candidate_cost_ns_) / 1e9; }
  double tau() const noexcept { return tau_; }
  void set_tau(double tau) noexcept { tau_ = tau; }

 private:
  static std::int64_t to_ns(double s) { return static_cast<std::int64_t>(s * 1e9 + 0.5); }

  std::int64_t ticks_ = 0;
  std::int64_t candidate_cost_ns_;
  double tau_;
};

/// k * step on the simulated clock's nanosecond grid, so scheduled sample
/// times compare exactly against SimClock::now().
inline double scheduled_time(std::int64_t k, double step) {
  return static_cast<double>(k * static_cast<std::int64_t>(step * 1e9 + 0.5)) / 1e9;
}

enum class ClockMode { Wall, Sim };

ClockMode parse_clock_mode(const std::string& s);
std::string to_string(ClockMode m);

}  // namespace reform
