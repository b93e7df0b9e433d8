#include "lindred/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lindred/error.hpp"

namespace lindred {

namespace {

// Simple y = a + b x least squares on preselected points.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  const double b = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  const double a = (sy - b * sx) / n;
  return {a, b};
}

} // namespace

std::vector<int> select_decay_window(const std::vector<double>& err, double floor,
                                     double plateau_factor) {
  if (err.empty()) return {};

  // Longest initial non-increasing run (5% slack for noise). A truncated
  // reduction tracks the exact dynamics only down to its own order; past the
  // minimum the recorded error is the series remainder, not the decay.
  size_t run_end = 1;
  while (run_end < err.size() && err[run_end] < err[run_end - 1] * 1.05) ++run_end;

  double run_min = err[0];
  for (size_t i = 0; i < run_end; ++i) run_min = std::min(run_min, err[i]);
  const double cutoff = std::max(floor, plateau_factor * std::max(run_min, 0.0));

  std::vector<int> used;
  for (size_t i = 0; i < run_end; ++i)
    if (err[i] > cutoff) used.push_back(static_cast<int>(i));

  // Keep the point where the curve enters the plateau: the drop onto the
  // floor still carries decay information, and since the plateau sits above
  // the true decay curve it can only bias the fitted rate downward.
  if (!used.empty()) {
    const size_t next = static_cast<size_t>(used.back()) + 1;
    if (next < run_end && err[next] > floor) used.push_back(static_cast<int>(next));
  }
  return used;
}

RateFit fit_exponential_rate(const std::vector<double>& t, const std::vector<double>& err,
                             double floor, double plateau_factor) {
  if (t.size() != err.size())
    fail(ErrorKind::InvalidArgument, "fit_exponential_rate: grid size mismatch");

  const std::vector<int> used = select_decay_window(err, floor, plateau_factor);
  std::vector<double> ts, logs;
  for (int i : used) {
    ts.push_back(t[i]);
    logs.push_back(std::log(err[i]));
  }

  RateFit fit;
  fit.points_used = static_cast<int>(ts.size());
  if (ts.size() < 2) {
    // Unfittable. Report "at floor" only when the data really is at floor,
    // not when the curve fails to decay.
    fit.at_floor = true;
    for (double e : err) fit.at_floor = fit.at_floor && e <= floor;
    return fit;
  }
  const auto [a, b] = linear_fit(ts, logs);
  fit.rate = -b;
  fit.log_amplitude = a;
  return fit;
}

SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                          double floor) {
  if (x.size() != y.size())
    fail(ErrorKind::InvalidArgument, "fit_loglog_slope: grid size mismatch");

  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] > floor && x[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }

  SlopeFit fit;
  fit.points_used = static_cast<int>(lx.size());
  if (lx.size() < 2) {
    fit.at_floor = true;
    return fit;
  }
  fit.slope = linear_fit(lx, ly).second;
  return fit;
}

} // namespace lindred
