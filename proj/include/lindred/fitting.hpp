#pragma once

#include <vector>

#include "lindred/types.hpp"

namespace lindred {

/// Indices of the points that belong to the decaying regime of an error
/// curve: the longest initial non-increasing run, minus points at or below
/// max(floor, plateau_factor * run minimum). The tail of such curves sits at
/// the truncation error of the series (and can grow back secularly); fitting
/// it would measure the floor, not the rate.
std::vector<int> select_decay_window(const std::vector<double>& err, double floor = 1e-12,
                                     double plateau_factor = 3.0);

/// Least-squares slope of log(err) against t over the decay window.
struct RateFit {
  double rate = 0.0;          // err ~ exp(-rate * t)
  double log_amplitude = 0.0; // intercept at t = 0
  int points_used = 0;
  bool at_floor = false; // fewer than two usable points
};

RateFit fit_exponential_rate(const std::vector<double>& t, const std::vector<double>& err,
                             double floor = 1e-12, double plateau_factor = 3.0);

/// Least-squares slope of log(y) against log(x) over points with y > floor.
struct SlopeFit {
  double slope = 0.0;
  int points_used = 0;
  bool at_floor = false;
};

SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                          double floor = 1e-12);

} // namespace lindred
