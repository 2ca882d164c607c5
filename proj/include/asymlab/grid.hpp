#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymlab/log_scalar.hpp"

namespace asymlab {

//! Uniform grid in a coordinate x, with optional local refinement.
//!
//! level 1: the sample argument is e^x (x is a plain log scale).
//! level 2: the sample argument is e^{e^x} (doubly exponential scale).
//!
//! Refinement points ask for extra resolution near chosen x values.  On a
//! level-1 grid the step is halved on [r - 1/2, r + 1/2].  On a level-2 grid
//! extra x-density around r cannot resolve structure that lives at unit
//! scale in u = ln(argument) = e^x, so refinement inserts a uniform u-grid
//! with spacing 1/points_per_unit on the window [e^r - 6, e^r + 50].  The
//! wide right side matters: the integrand features here decay like e^{-(u -
//! e^r)} over dozens of u-units, and a trapezoid stride that jumps the whole
//! valley between two refinement windows would badly overestimate averages.
struct GridSpec {
  int level = 1;
  double x_min = 0.0;
  double x_max = 1.0;
  int points_per_unit = 16;
  std::vector<double> refinement_points;
};

struct GridPoint {
  double x = 0.0;        // grid coordinate
  double u = 0.0;        // ln(argument): x at level 1, e^x at level 2
  LogScalar argument;    // e^u
};

inline void validate(const GridSpec& g) {
  if (g.level != 1 && g.level != 2)
    throw std::invalid_argument("GridSpec: level must be 1 or 2");
  if (!(g.x_min < g.x_max))
    throw std::invalid_argument("GridSpec: need x_min < x_max");
  if (!std::isfinite(g.x_min) || !std::isfinite(g.x_max))
    throw std::invalid_argument("GridSpec: bounds must be finite");
  if (g.points_per_unit < 1 || g.points_per_unit > 100000)
    throw std::invalid_argument("GridSpec: points_per_unit out of range");
  if (g.level == 2 && g.x_max > 700.0)
    throw std::invalid_argument("GridSpec: level-2 x_max too large for e^x");
  for (double r : g.refinement_points)
    if (!std::isfinite(r))
      throw std::invalid_argument("GridSpec: refinement point not finite");
}

inline std::vector<GridPoint> make_grid(const GridSpec& g) {
  validate(g);
  const double ppu = static_cast<double>(g.points_per_unit);
  std::vector<double> xs;

  const auto base_count =
      static_cast<std::size_t>(std::llround((g.x_max - g.x_min) * ppu));
  if (base_count > 8'000'000)
    throw std::invalid_argument("make_grid: grid would exceed 8e6 base points");
  xs.reserve(base_count + 2);
  for (std::size_t k = 0; k <= base_count; ++k)
    xs.push_back(g.x_min + static_cast<double>(k) / ppu);
  if (xs.back() < g.x_max) xs.push_back(g.x_max);
  xs.back() = std::min(xs.back(), g.x_max);

  for (double r : g.refinement_points) {
    if (g.level == 1) {
      const double lo = std::max(r - 0.5, g.x_min);
      const double hi = std::min(r + 0.5, g.x_max);
      if (!(lo < hi)) continue;
      const auto n = static_cast<std::size_t>(std::floor((hi - lo) * 2.0 * ppu));
      for (std::size_t j = 0; j <= n; ++j) {
        const double x = lo + static_cast<double>(j) / (2.0 * ppu);
        if (x <= hi) xs.push_back(x);
      }
    } else {
      const double ur = std::exp(r);
      const double u_min = std::exp(g.x_min);
      const double u_max = std::exp(g.x_max);
      const double lo = std::max(ur - 6.0, u_min);
      const double hi = std::min(ur + 50.0, u_max);
      if (!(lo < hi)) continue;
      const auto n = static_cast<std::size_t>(std::floor((hi - lo) * ppu));
      if (xs.size() + n > 16'000'000)
        throw std::invalid_argument("make_grid: refinement exceeds point cap");
      for (std::size_t j = 0; j <= n; ++j) {
        const double u = lo + static_cast<double>(j) / ppu;
        if (u <= hi) xs.push_back(std::log(u));
      }
    }
  }

  std::sort(xs.begin(), xs.end());
  std::vector<double> dedup;
  dedup.reserve(xs.size());
  for (double x : xs) {
    if (dedup.empty() || x - dedup.back() > 1e-9) dedup.push_back(x);
  }

  std::vector<GridPoint> pts;
  pts.reserve(dedup.size());
  for (double x : dedup) {
    GridPoint p;
    p.x = x;
    p.u = g.level == 1 ? x : std::exp(x);
    p.argument = LogScalar::from_log(p.u);
    pts.push_back(p);
  }
  return pts;
}

//! A function sampled on a grid: parallel arrays of grid coordinate,
//! ln(argument) and value, plus the spec that generated the grid.
struct SampledFunction {
  GridSpec spec;
  std::vector<double> xs;
  std::vector<double> us;
  std::vector<double> values;
  std::string label;
  //! Half-resolution consistency estimate where a producer supplies one
  //! (the averaging operator does); NaN otherwise.
  double quad_error = std::numeric_limits<double>::quiet_NaN();

  std::size_t size() const { return xs.size(); }

  void check_consistent() const {
    if (xs.size() != us.size() || xs.size() != values.size())
      throw std::logic_error("SampledFunction: ragged arrays");
    for (double v : values)
      if (!std::isfinite(v))
        throw std::logic_error("SampledFunction: non-finite value");
  }
};

//! Skeleton of a SampledFunction on the given grid, values zeroed.
inline SampledFunction sampled_on(const GridSpec& g, std::string label) {
  SampledFunction f;
  f.spec = g;
  f.label = std::move(label);
  auto pts = make_grid(g);
  f.xs.reserve(pts.size());
  f.us.reserve(pts.size());
  f.values.assign(pts.size(), 0.0);
  for (const auto& p : pts) {
    f.xs.push_back(p.x);
    f.us.push_back(p.u);
  }
  return f;
}

} // namespace asymlab
