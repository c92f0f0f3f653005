#include "cryostef/harness/schedule.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "cryostef/errors.hpp"

namespace cryostef::harness {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_number(std::string_view s, std::string_view context) {
  s = trim(s);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw ConfigError("schedule '" + std::string(context) + "': bad number '" + std::string(s) +
                      "'");
  }
  return v;
}

}  // namespace

PiecewiseLinearSchedule::PiecewiseLinearSchedule(
    std::vector<std::pair<double, double>> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) throw ConfigError("schedule needs at least one breakpoint");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i].first > breakpoints_[i - 1].first)) {
      throw ConfigError("schedule breakpoints must have strictly increasing times");
    }
  }
}

PiecewiseLinearSchedule PiecewiseLinearSchedule::constant(double value) {
  return PiecewiseLinearSchedule({{0.0, value}});
}

PiecewiseLinearSchedule PiecewiseLinearSchedule::parse(std::string_view text) {
  const std::string_view body = trim(text);
  if (body.empty()) throw ConfigError("empty schedule");
  if (body.front() != '(') return constant(to_number(body, text));

  std::vector<std::pair<double, double>> points;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto open = body.find('(', pos);
    if (open == std::string_view::npos) {
      if (!trim(body.substr(pos)).empty()) {
        throw ConfigError("schedule '" + std::string(text) + "': trailing characters");
      }
      break;
    }
    const auto sep = trim(body.substr(pos, open - pos));
    if (points.empty() ? !sep.empty() : sep != ",") {
      throw ConfigError("schedule '" + std::string(text) + "': expected ',' between pairs");
    }
    const auto close = body.find(')', open);
    const auto comma = body.find(',', open);
    if (close == std::string_view::npos || comma == std::string_view::npos || comma > close) {
      throw ConfigError("schedule '" + std::string(text) + "': malformed pair");
    }
    points.emplace_back(to_number(body.substr(open + 1, comma - open - 1), text),
                        to_number(body.substr(comma + 1, close - comma - 1), text));
    pos = close + 1;
  }
  return PiecewiseLinearSchedule(std::move(points));
}

double PiecewiseLinearSchedule::operator()(double t) const {
  if (t <= breakpoints_.front().first) return breakpoints_.front().second;
  if (t >= breakpoints_.back().first) return breakpoints_.back().second;
  const auto hi = std::upper_bound(
      breakpoints_.begin(), breakpoints_.end(), t,
      [](double value, const std::pair<double, double>& p) { return value < p.first; });
  const auto lo = hi - 1;
  const double w = (t - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

}  // namespace cryostef::harness
