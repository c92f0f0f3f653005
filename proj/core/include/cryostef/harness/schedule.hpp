#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace cryostef::harness {

/// Piecewise-linear function of time through (t, value) breakpoints with
/// constant extrapolation beyond both ends.
class PiecewiseLinearSchedule {
 public:
  /// Throws ConfigError unless breakpoints is non-empty with strictly increasing t.
  explicit PiecewiseLinearSchedule(std::vector<std::pair<double, double>> breakpoints);
  static PiecewiseLinearSchedule constant(double value);
  /// Accepts "(t0,v0),(t1,v1),..." or a bare number for a constant schedule.
  static PiecewiseLinearSchedule parse(std::string_view text);

  double operator()(double t) const;
  const std::vector<std::pair<double, double>>& breakpoints() const noexcept {
    return breakpoints_;
  }

 private:
  std::vector<std::pair<double, double>> breakpoints_;
};

}  // namespace cryostef::harness
