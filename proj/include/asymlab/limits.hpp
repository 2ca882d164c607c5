#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "asymlab/functionals.hpp"
#include "asymlab/grid.hpp"

namespace asymlab {

enum class LimitClass { Converged, Oscillating, Unbounded, Inconclusive };

inline const char* to_string(LimitClass c) {
  switch (c) {
    case LimitClass::Converged: return "converged";
    case LimitClass::Oscillating: return "oscillating";
    case LimitClass::Unbounded: return "unbounded";
    case LimitClass::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct LimitEstimate {
  LimitClass cls = LimitClass::Inconclusive;
  double value = std::numeric_limits<double>::quiet_NaN(); // Converged only
  double liminf = std::numeric_limits<double>::quiet_NaN();
  double limsup = std::numeric_limits<double>::quiet_NaN();
  double tail_oscillation = std::numeric_limits<double>::quiet_NaN();
  double trend = std::numeric_limits<double>::quiet_NaN(); // |slope| * span
  std::size_t window_points = 0;
};

//! Classifies the x -> x_max behaviour of a sampled function from its
//! trailing window (the last window_fraction of the x range, at least 16
//! points).  Converged needs both a small oscillation (max - min < tol) and
//! a small least-squares drift (|slope| * window span < tol); the reported
//! value is the window mean.  Growth beyond both the global median and the
//! pre-window maximum reads as Unbounded.  Ties at exactly tol, or too few
//! points, are Inconclusive rather than guessed.
inline LimitEstimate estimate_limit(const SampledFunction& f,
                                    double tolerance = 1e-3,
                                    double window_fraction = 0.15) {
  f.check_consistent();
  LimitEstimate out;
  const std::size_t n = f.size();
  if (n < 16 || !(tolerance > 0.0) || !(window_fraction > 0.0) ||
      !(window_fraction <= 1.0))
    return out;

  const double x_lo = f.xs.front();
  const double x_hi = f.xs.back();
  const double cut = x_hi - (x_hi - x_lo) * window_fraction;
  std::size_t start = 0;
  while (start < n && f.xs[start] < cut) ++start;
  if (n - start < 16) {
    if (n < 16) return out;
    start = n - 16;
  }
  out.window_points = n - start;

  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  KahanSum mean_sum;
  for (std::size_t i = start; i < n; ++i) {
    mn = std::min(mn, f.values[i]);
    mx = std::max(mx, f.values[i]);
    mean_sum.add(f.values[i]);
  }
  const double mean = mean_sum.value() / static_cast<double>(n - start);
  out.liminf = mn;
  out.limsup = mx;
  out.tail_oscillation = mx - mn;

  // Least-squares slope over the window, as drift across the window span.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = start; i < n; ++i) {
    sx += f.xs[i];
    sy += f.values[i];
    sxx += f.xs[i] * f.xs[i];
    sxy += f.xs[i] * f.values[i];
  }
  const double m = static_cast<double>(n - start);
  const double den = m * sxx - sx * sx;
  const double slope = den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
  const double span = f.xs[n - 1] - f.xs[start];
  out.trend = std::fabs(slope) * span;

  // Unbounded: the trailing window towers over the function's typical
  // magnitude and over everything seen before the window.
  std::vector<double> mag(f.values.size());
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::fabs(f.values[i]);
  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double median = sorted[n / 2];
  double early_max = 0.0;
  for (std::size_t i = 0; i < start; ++i)
    early_max = std::max(early_max, mag[i]);
  double trail_max = 0.0;
  for (std::size_t i = start; i < n; ++i)
    trail_max = std::max(trail_max, mag[i]);
  if (trail_max > 10.0 * median && trail_max > 0.0 &&
      (start == 0 || trail_max >= 2.0 * early_max)) {
    out.cls = LimitClass::Unbounded;
    return out;
  }

  if (out.tail_oscillation > tolerance) {
    out.cls = LimitClass::Oscillating;
    return out;
  }
  if (out.tail_oscillation < tolerance && out.trend < tolerance) {
    out.cls = LimitClass::Converged;
    out.value = mean;
    return out;
  }
  out.cls = LimitClass::Inconclusive;
  return out;
}

//==============================================================================
// Averaging consistency (Tauberian-style checks)
//==============================================================================

enum class TauberianMode { CesaroM, Derivative };

struct TauberianReport {
  bool hypotheses_hold = false;
  double hypothesis_stat = std::numeric_limits<double>::quiet_NaN();
  LimitEstimate premise;
  LimitEstimate conclusion;
  bool implication_holds = false;
  double value_gap = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

//! Additive-scale average (1/t) * integral of z over (0, t], sampled on the
//! same grid, with z extended as a constant on [0, t_0).
inline SampledFunction additive_average(const SampledFunction& z) {
  z.check_consistent();
  if (z.us.back() > 700.0)
    throw std::invalid_argument(
        "additive_average: arguments above e^700 overflow the t-scale");
  const std::size_t n = z.size();
  SampledFunction out;
  out.spec = z.spec;
  out.label = "A(" + z.label + ")";
  out.xs = z.xs;
  out.us = z.us;
  out.values.assign(n, 0.0);
  // Work in t = e^u: integral of z dt = integral of z e^u du.
  const double t0 = std::exp(z.us.front());
  KahanSum acc;
  double head = z.values.front() * t0;
  out.values[0] = z.values.front();
  for (std::size_t i = 1; i < n; ++i) {
    const double ti = std::exp(z.us[i]);
    const double tp = std::exp(z.us[i - 1]);
    acc.add(0.5 * (z.values[i] + z.values[i - 1]) * (ti - tp));
    out.values[i] = (head + acc.value()) / ti;
  }
  return out;
}

} // namespace detail

//! Checks one of the averaging-order implications on sampled data.
//!
//! CesaroM: for bounded nonnegative z, convergence of M^2 z forces
//! convergence of M z to the same value.  Derivative: for z with
//! t z'(t) bounded below, convergence of the additive averages forces
//! convergence of z itself.  The report carries the hypothesis statistic,
//! both limit classifications, and whether the implication held to 2 * tol
//! (vacuously when the premise did not converge).
inline TauberianReport tauberian_check(const SampledFunction& z,
                                       TauberianMode mode,
                                       double tol = 1e-3) {
  z.check_consistent();
  TauberianReport out;
  if (mode == TauberianMode::CesaroM) {
    double mn = std::numeric_limits<double>::infinity();
    for (double v : z.values) mn = std::min(mn, v);
    const SampledFunction mz = cesaro(z);
    const SampledFunction m2z = cesaro(mz);
    double sup = 0.0;
    for (double v : mz.values) sup = std::max(sup, std::fabs(v));
    out.hypothesis_stat = sup;
    out.hypotheses_hold = mn >= -1e-12 && std::isfinite(sup);
    out.premise = estimate_limit(m2z, tol);
    out.conclusion = estimate_limit(mz, tol);
  } else {
    // Hypothesis statistic: inf of t z'(t) = inf of dz/du on the log scale.
    double inf_stat = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < z.size(); ++i) {
      const double d =
          (z.values[i + 1] - z.values[i - 1]) / (z.us[i + 1] - z.us[i - 1]);
      inf_stat = std::min(inf_stat, d);
    }
    out.hypothesis_stat = inf_stat;
    out.hypotheses_hold = std::isfinite(inf_stat);
    out.premise = estimate_limit(detail::additive_average(z), tol);
    out.conclusion = estimate_limit(z, tol);
  }
  if (out.premise.cls != LimitClass::Converged) {
    out.implication_holds = true; // vacuous
    return out;
  }
  if (out.conclusion.cls == LimitClass::Converged) {
    out.value_gap = std::fabs(out.conclusion.value - out.premise.value);
    out.implication_holds = out.value_gap <= 2.0 * tol;
  }
  return out;
}

//==============================================================================
// Measurability report
//==============================================================================

struct MeasurabilityGrids {
  GridSpec avg;   // for the averaged trace a(t)
  GridSpec heat;  // for the heat trace and its Cesaro average
  GridSpec zeta;  // level-1 sweep in x = ln(1/s)
};

struct MeasurabilityReport {
  double q = 1.0;
  LimitEstimate avg_limit;
  LimitEstimate mheat_limit;
  LimitEstimate zeta_limit;
  LimitEstimate raw_heat; // diagnostic: the unaveraged heat trace
  //! mheat_limit.value divided by Gamma(1 + 1/q), the factor relating the
  //! averaged heat trace to the other two routes; equals mheat_limit.value
  //! when q = 1.
  double mheat_normalized = std::numeric_limits<double>::quiet_NaN();
  bool agree = false;
  double common_value = std::numeric_limits<double>::quiet_NaN();
  double avg_liminf = std::numeric_limits<double>::quiet_NaN();
  double avg_limsup = std::numeric_limits<double>::quiet_NaN();
  std::string notes;
};

//! Compares the three candidate traces on one profile: the limit of the
//! averaged trace, the Cesaro-averaged normalized heat trace, and the zeta
//! residue s * tau(A^{1+s}) as s -> 0 (all with the same normalization when
//! q = 1).  agree means all three converged pairwise within 2 * tol.  The
//! heat route leans on the equivalence between the averaged trace and the
//! averaged heat trace; the raw heat estimate is included because the
//! unaveraged trace can oscillate even when every averaged form settles.
inline MeasurabilityReport measurability_report(const PiecewiseProfile& p,
                                                double q,
                                                const MeasurabilityGrids& g,
                                                double tol = 1e-3) {
  MeasurabilityReport out;
  out.q = q;
  const SampledFunction avg = dixmier_average(p, g.avg);
  out.avg_limit = estimate_limit(avg, tol);
  out.avg_liminf = out.avg_limit.liminf;
  out.avg_limsup = out.avg_limit.limsup;

  const SampledFunction heat = heat_function(p, q, 1.0, g.heat);
  out.raw_heat = estimate_limit(heat, tol);
  const SampledFunction mheat = cesaro(heat);
  out.mheat_limit = estimate_limit(mheat, tol);

  const SampledFunction zs = zeta_sweep(p, 1.0, g.zeta);
  out.zeta_limit = estimate_limit(zs, tol);

  const bool all =
      out.avg_limit.cls == LimitClass::Converged &&
      out.mheat_limit.cls == LimitClass::Converged &&
      out.zeta_limit.cls == LimitClass::Converged;
  if (out.mheat_limit.cls == LimitClass::Converged)
    out.mheat_normalized = out.mheat_limit.value / std::tgamma(1.0 + 1.0 / q);
  if (all) {
    const double a = out.avg_limit.value;
    const double b = out.mheat_normalized;
    const double c = out.zeta_limit.value;
    const double gap =
        std::max({std::fabs(a - b), std::fabs(a - c), std::fabs(b - c)});
    out.agree = gap <= 2.0 * tol;
    if (out.agree) out.common_value = (a + b + c) / 3.0;
  }
  out.notes =
      "heat route normalized by Gamma(1 + 1/q) via the averaged-trace "
      "equivalence; raw heat may oscillate while all averaged forms converge";
  return out;
}

} // namespace asymlab
