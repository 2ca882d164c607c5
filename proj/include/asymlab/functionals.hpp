#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymlab/grid.hpp"
#include "asymlab/log_scalar.hpp"
#include "asymlab/parallel.hpp"
#include "asymlab/profile.hpp"
#include "asymlab/special.hpp"

namespace asymlab {

//! Compensated (Kahan) accumulator for long plain-double sums.
struct KahanSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

namespace detail {

//! Integral of t^{-alpha} over (from, to], all in the log domain.
//! to may be infinite when alpha > 1; from may be zero when alpha < 1.
inline LogScalar power_piece_integral(const LogScalar& from,
                                      const LogScalar& to, double alpha) {
  if (alpha == 1.0) {
    if (from.is_zero() || to.is_infinite())
      throw std::domain_error("power_piece_integral: log piece diverges");
    return LogScalar::from_value(to.log_magnitude() - from.log_magnitude());
  }
  const double e = 1.0 - alpha;
  if (e > 0.0) {
    if (to.is_infinite())
      throw std::domain_error("power_piece_integral: tail diverges");
    if (from.is_zero())
      return LogScalar::from_log(e * to.log_magnitude() - std::log(e));
    const double d = e * (to.log_magnitude() - from.log_magnitude());
    return LogScalar::from_log(e * from.log_magnitude() + log_expm1(d) -
                               std::log(e));
  }
  // e < 0: primitive decreases; integral is (from^e - to^e) / (-e).
  if (from.is_zero())
    throw std::domain_error("power_piece_integral: diverges at zero");
  if (to.is_infinite())
    return LogScalar::from_log(e * from.log_magnitude() - std::log(-e));
  const double d = (-e) * (to.log_magnitude() - from.log_magnitude());
  return LogScalar::from_log(e * to.log_magnitude() + log_expm1(d) -
                             std::log(-e));
}

//! Integral of mu(s)^q over one segment clipped to (from, cut], where the
//! segment value is c (constant) or c s^{-alpha} (power).
inline LogScalar segment_power_mass(const Segment& seg, double q,
                                    const LogScalar& cut) {
  const LogScalar hi = cut < seg.to ? cut : seg.to;
  if (!(seg.from < hi)) return LogScalar::zero();
  const LogScalar cq = seg.c.pow(q);
  if (seg.kind == Segment::Kind::Constant) {
    if (hi.is_infinite())
      throw std::domain_error("segment_power_mass: constant tail diverges");
    if (seg.from.is_zero())
      return cq * hi;
    const double d = hi.log_magnitude() - seg.from.log_magnitude();
    return cq * LogScalar::from_log(seg.from.log_magnitude() + log_expm1(d));
  }
  return cq * power_piece_integral(seg.from, hi, seg.alpha * q);
}

} // namespace detail

//==============================================================================
// Profile integrals
//==============================================================================

//! Integral of mu over (0, t]: the numerator of the averaged trace.
inline LogScalar partial_integral(const PiecewiseProfile& p,
                                  const LogScalar& t) {
  if (!t.is_positive())
    throw std::domain_error("partial_integral: cut must be positive");
  LogScalar acc = LogScalar::zero();
  for (std::size_t i = 0;; ++i) {
    if (!p.is_generated() && i >= *p.segment_count()) break;
    const Segment seg = p.segment(i);
    if (!(seg.from < t)) break;
    acc += detail::segment_power_mass(seg, 1.0, t);
    if (t <= seg.to && !seg.to.is_infinite()) break;
    if (seg.to.is_infinite()) break;
  }
  return acc;
}

struct PowerIntegral {
  bool divergent = false;
  //! The full integral when convergent; the accumulated mass at the point
  //! where divergence was detected otherwise.
  LogScalar value;
  std::size_t segments_used = 0;
};

//! Integral of mu^q over (0, upper], upper infinite by default.  This is
//! the trace of the q-th power of the modeled operator.  Divergence (a tail
//! with alpha * q <= 1, or a generated family whose segment masses stop
//! decaying) is reported as data, not as an error.
inline PowerIntegral power_integral(
    const PiecewiseProfile& p, double q,
    const LogScalar& upper = LogScalar::infinity()) {
  if (!(q > 0.0)) throw std::domain_error("power_integral: q must be positive");
  if (!upper.is_positive())
    throw std::domain_error("power_integral: upper must be positive");
  PowerIntegral out;
  out.value = LogScalar::zero();
  LogScalar prev_term = LogScalar::zero();
  std::vector<double> recent_lm;
  for (std::size_t i = 0;; ++i) {
    if (!p.is_generated() && i >= *p.segment_count()) break;
    if (i >= 5000) {
      out.divergent = true;
      break;
    }
    const Segment seg = p.segment(i);
    if (!(seg.from < upper)) break;
    if (seg.to.is_infinite() && upper.is_infinite() &&
        seg.kind == Segment::Kind::Power && seg.alpha * q <= 1.0) {
      out.divergent = true;
      out.segments_used = i;
      return out;
    }
    const LogScalar term = detail::segment_power_mass(seg, q, upper);
    out.value += term;
    out.segments_used = i + 1;
    if (!seg.to.is_infinite() && upper <= seg.to) break;
    if (seg.to.is_infinite()) break;
    if (p.is_generated()) {
      // Divergence heuristics for endless families: masses that stop
      // decaying, or an accumulated log magnitude far beyond anything a
      // convergent profile in this algebra produces.
      if (!term.is_zero()) recent_lm.push_back(term.log_magnitude());
      const std::size_t k = recent_lm.size();
      if (k > 120 && recent_lm[k - 1] >= recent_lm[k - 21]) {
        out.divergent = true;
        break;
      }
      if (out.value.is_positive() && out.value.log_magnitude() > 1e5) {
        out.divergent = true;
        break;
      }
      // Convergent families decay fast; stop once two successive masses
      // are negligible against the accumulated value.
      if (i >= 8 && out.value.is_positive()) {
        const double acc_lm = out.value.log_magnitude();
        const bool tiny_now =
            term.is_zero() || term.log_magnitude() < acc_lm - 46.0;
        const bool tiny_prev = prev_term.is_zero() ||
                               prev_term.log_magnitude() < acc_lm - 46.0;
        if (tiny_now && tiny_prev) break;
      }
      prev_term = term;
    }
  }
  return out;
}

struct HeatIntegral {
  LogScalar value;
  std::size_t segments_used = 0;
  //! Bound on the dropped tail when a generated family was truncated;
  //! zero for explicit profiles (every segment is summed).
  LogScalar tail_bound;
};

//! Heat trace integral of exp(-(lambda * mu(s))^{-q}) ds over (0, inf),
//! assembled segment by segment in the log domain.  Constant pieces
//! contribute exp(-(lambda c)^{-q}) * length exactly; power pieces reduce
//! to incomplete gamma cuts, so lambda as large as e^{e^700} is fine.
inline HeatIntegral heat_integral(const PiecewiseProfile& p,
                                  const LogScalar& lambda, double q) {
  if (!lambda.is_positive())
    throw std::domain_error("heat_integral: lambda must be positive");
  if (!(q > 0.0)) throw std::domain_error("heat_integral: q must be positive");
  const double llam = lambda.log_magnitude();
  HeatIntegral out;
  out.value = LogScalar::zero();
  out.tail_bound = LogScalar::zero();
  LogScalar prev_term = LogScalar::zero();
  for (std::size_t i = 0;; ++i) {
    if (!p.is_generated() && i >= *p.segment_count()) break;
    if (i >= 5000)
      throw std::runtime_error("heat_integral: segment cap exceeded");
    const Segment seg = p.segment(i);
    LogScalar term;
    if (seg.kind == Segment::Kind::Constant) {
      if (seg.to.is_infinite())
        throw std::domain_error("heat_integral: constant tail diverges");
      const LogScalar w =
          LogScalar::from_log(-q * (llam + seg.c.log_magnitude()));
      const LogScalar len =
          seg.from.is_zero()
              ? seg.to
              : LogScalar::from_log(
                    seg.from.log_magnitude() +
                    log_expm1(seg.to.log_magnitude() -
                              seg.from.log_magnitude()));
      term = exp_neg(w) * len;
    } else {
      // Substituting u = (lambda c)^{-q} s^{q alpha} turns the piece into
      // an incomplete gamma cut with index 1 / (q alpha).
      const double lw = -q * (llam + seg.c.log_magnitude());
      const double qa = q * seg.alpha;
      const LogScalar u_from =
          seg.from.is_zero()
              ? LogScalar::zero()
              : LogScalar::from_log(lw + qa * seg.from.log_magnitude());
      const LogScalar u_to =
          seg.to.is_infinite()
              ? LogScalar::infinity()
              : LogScalar::from_log(lw + qa * seg.to.log_magnitude());
      const LogScalar pref = LogScalar::from_log(
          (llam + seg.c.log_magnitude()) / seg.alpha - std::log(qa));
      term = pref * gamma_diff(1.0 / qa, u_from, u_to);
    }
    out.value += term;
    out.segments_used = i + 1;
    if (!p.is_generated()) {
      if (seg.to.is_infinite()) break;
      continue;
    }
    // Generated families: later segments sit at ever larger arguments where
    // the integrand has decayed doubly exponentially.  Stop when two
    // successive contributions are negligible and decreasing.
    if (i >= 8 && out.value.is_positive()) {
      const double acc_lm = out.value.log_magnitude();
      const bool tiny_now =
          term.is_zero() || term.log_magnitude() < acc_lm - 46.0;
      const bool tiny_prev =
          prev_term.is_zero() || prev_term.log_magnitude() < acc_lm - 46.0;
      const bool decreasing = term.is_zero() || prev_term.is_zero() ||
                              term.log_magnitude() <= prev_term.log_magnitude();
      if (tiny_now && tiny_prev && decreasing) {
        out.tail_bound = term.abs() * LogScalar::from_value(2.0);
        break;
      }
    }
    prev_term = term;
  }
  return out;
}

//==============================================================================
// Sampled functionals
//==============================================================================

//! Multiplicative Cesaro average: (M f)(e^y) = (1/y) * integral of f(e^u)
//! over (0, y).  Input samples live on u = ln(argument); the integral uses
//! the trapezoid rule on the sample grid, extending f as a constant on
//! [0, u_0) when the grid starts above u = 0.  Output keeps only the points
//! with argument >= e (y >= 1), where the average is well conditioned.
//! quad_error on the result holds a half-resolution Richardson estimate of
//! the quadrature error at the final point.
inline SampledFunction cesaro(const SampledFunction& f) {
  f.check_consistent();
  const std::size_t n = f.size();
  if (n < 3) throw std::invalid_argument("cesaro: need at least 3 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(f.us[i] > f.us[i - 1]))
      throw std::invalid_argument("cesaro: arguments must increase");
  if (f.us.front() < -1e-12)
    throw std::invalid_argument("cesaro: grid must start at argument >= 1");
  if (f.us.front() > 1.0 + 1e-9)
    throw std::invalid_argument("cesaro: grid must start at argument <= e");

  const double u0 = std::max(f.us.front(), 0.0);
  const double head = f.values.front() * u0;

  std::vector<double> prefix(n, 0.0);
  KahanSum full;
  for (std::size_t i = 1; i < n; ++i) {
    full.add(0.5 * (f.values[i] + f.values[i - 1]) * (f.us[i] - f.us[i - 1]));
    prefix[i] = full.value();
  }

  SampledFunction out;
  out.spec = f.spec;
  out.label = "M(" + f.label + ")";
  for (std::size_t i = 0; i < n; ++i) {
    if (f.us[i] < 1.0 - 1e-12) continue;
    out.xs.push_back(f.xs[i]);
    out.us.push_back(f.us[i]);
    out.values.push_back((head + prefix[i]) / f.us[i]);
  }
  if (out.values.empty())
    throw std::invalid_argument("cesaro: no output points at argument >= e");

  // Half-resolution pass over every other sample for an error estimate.
  KahanSum half;
  std::size_t last_even = 0;
  for (std::size_t i = 2; i < n; i += 2) {
    half.add(0.5 * (f.values[i] + f.values[i - 2]) * (f.us[i] - f.us[i - 2]));
    last_even = i;
  }
  if (last_even > 0 && f.us[last_even] >= 1.0) {
    const double m_half = (head + half.value()) / f.us[last_even];
    const double m_full = (head + prefix[last_even]) / f.us[last_even];
    out.quad_error = std::fabs(m_full - m_half) / 3.0;
  }
  return out;
}

//==============================================================================
// Membership classification
//==============================================================================

struct Membership {
  bool weak_l1 = false;
  bool m1_inf = false;
  bool little_o = false;
  double weak_l1_sup = 0.0; // sup of t mu(t) over probes (saturates at inf)
  double m1_inf_sup = 0.0;  // sup of the average over the grid
};

namespace detail {

//! Supremum of t mu(t) on one segment; infinite LogScalar when unbounded.
inline LogScalar segment_tmu_sup(const Segment& seg) {
  if (seg.kind == Segment::Kind::Constant) {
    if (seg.to.is_infinite()) return LogScalar::infinity();
    return seg.c * seg.to;
  }
  if (seg.alpha == 1.0) return seg.c;
  if (seg.alpha > 1.0) return seg.c * seg.from.pow(1.0 - seg.alpha);
  if (seg.to.is_infinite()) return LogScalar::infinity();
  return seg.c * seg.to.pow(1.0 - seg.alpha);
}

} // namespace detail

//! Classifies mu against the weak-L1 and Marcinkiewicz ideals and checks
//! whether t mu(t) = o(log t).  Explicit profiles get exact tail verdicts;
//! generated families are probed out to the grid range with a growth-trend
//! test on the per-segment suprema.
inline Membership classify_membership(const PiecewiseProfile& p,
                                      const GridSpec& grid) {
  validate(grid);
  Membership out;
  const auto pts = make_grid(grid);
  const double u_hi = pts.back().u;

  // Per-segment suprema of t mu(t).
  bool tmu_unbounded = false;
  LogScalar tmu_sup = LogScalar::zero();
  std::vector<double> trend;
  std::vector<std::pair<double, LogScalar>> seg_ends; // (u at right end, t mu)
  for (std::size_t i = 0;; ++i) {
    if (!p.is_generated() && i >= *p.segment_count()) break;
    const Segment seg = p.segment(i);
    const LogScalar sup = detail::segment_tmu_sup(seg);
    if (sup.is_infinite()) {
      tmu_unbounded = true;
      break;
    }
    if (sup > tmu_sup) tmu_sup = sup;
    trend.push_back(sup.is_zero() ? -1e308 : sup.log_magnitude());
    if (!seg.to.is_infinite())
      seg_ends.emplace_back(seg.to.log_magnitude(),
                            seg.right_value() * seg.to);
    if (p.is_generated() &&
        (!seg.to.is_infinite() && seg.to.log_magnitude() > u_hi))
      break;
    if (seg.to.is_infinite()) break;
    if (i >= 100000) break;
  }
  if (p.is_generated() && trend.size() >= 6) {
    // Strictly growing suprema over the last few segments mean t mu(t)
    // is unbounded along the family.
    bool growing = true;
    const std::size_t k = trend.size();
    for (std::size_t j = k - 5; j < k; ++j)
      if (!(trend[j] > trend[j - 1])) growing = false;
    if (growing && trend[k - 1] > trend[k - 6] + std::log(1.5))
      tmu_unbounded = true;
  }
  out.weak_l1 = !tmu_unbounded;
  out.weak_l1_sup = tmu_unbounded
                        ? std::numeric_limits<double>::infinity()
                        : tmu_sup.to_double();

  // Average mu over (0, t] against log t, on the grid.
  std::vector<double> avg(pts.size(), 0.0);
  parallel_for(pts.size(), [&](std::size_t i) {
    const LogScalar part = partial_integral(p, pts[i].argument);
    avg[i] = part.is_zero()
                 ? 0.0
                 : std::exp(part.log_magnitude() -
                            std::log(log1p_exp(pts[i].u)));
  });
  double avg_sup = 0.0;
  for (double v : avg) avg_sup = std::max(avg_sup, v);
  out.m1_inf_sup = avg_sup;
  bool avg_bounded = true;
  if (!p.is_generated()) {
    const Segment tail = p.segment(*p.segment_count() - 1);
    avg_bounded = tail.alpha >= 1.0; // alpha < 1: partial grows like t^{1-a}
  } else {
    const std::size_t k = pts.size();
    const std::size_t q3 = k - k / 4;
    double early = 0.0, late = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      (i < q3 ? early : late) = std::max(i < q3 ? early : late, avg[i]);
    if (late > 1.2 * std::max(early, 1e-300)) avg_bounded = false;
  }
  out.m1_inf = avg_bounded;

  // t mu(t) = o(log t): probe at grid points and at segment right ends,
  // then compare the trailing third of the range against the global sup.
  std::vector<std::pair<double, double>> probes; // (u, t mu / log(1+t))
  for (const auto& pt : pts) {
    const LogScalar v = p.evaluate(pt.argument) * pt.argument;
    const double r = v.is_zero() ? 0.0
                                 : std::exp(v.log_magnitude() -
                                            std::log(log1p_exp(pt.u)));
    probes.emplace_back(pt.u, r);
  }
  for (const auto& [u, tmu] : seg_ends) {
    if (u < pts.front().u || u > u_hi) continue;
    const double r = tmu.is_zero() ? 0.0
                                   : std::exp(tmu.log_magnitude() -
                                              std::log(log1p_exp(u)));
    probes.emplace_back(u, r);
  }
  double global = 0.0, trailing = 0.0;
  const double u_cut = u_hi - (u_hi - pts.front().u) / 3.0;
  for (const auto& [u, r] : probes) {
    global = std::max(global, r);
    if (u >= u_cut) trailing = std::max(trailing, r);
  }
  // Unbounded t mu(t) does not settle this: the plateau family has
  // t mu(t) -> inf yet still o(log t).  The ratio trend decides.
  out.little_o = trailing <= 0.05 * global || trailing < 1e-9;
  return out;
}

//==============================================================================
// Derived sampled functions
//==============================================================================

//! Averaged trace a(t) = (integral of mu over (0, t]) / log(1 + t), the
//! pre-limit form of the Dixmier trace.  Requires mu in the Marcinkiewicz
//! class; throws std::domain_error otherwise.
inline SampledFunction dixmier_average(const PiecewiseProfile& p,
                                       const GridSpec& grid) {
  const Membership m = classify_membership(p, grid);
  if (!m.m1_inf)
    throw std::domain_error(
        "dixmier_average: profile is outside the bounded-average class");
  SampledFunction out = sampled_on(grid, "avg:" + p.name());
  const auto pts = make_grid(grid);
  parallel_for(pts.size(), [&](std::size_t i) {
    const LogScalar part = partial_integral(p, pts[i].argument);
    out.values[i] = part.is_zero()
                        ? 0.0
                        : std::exp(part.log_magnitude() -
                                   std::log(log1p_exp(pts[i].u)));
  });
  out.check_consistent();
  return out;
}

//! Normalized heat trace lambda^{-power_p} * integral of
//! exp(-(lambda mu)^{-q}), sampled over the grid arguments.
inline SampledFunction heat_function(const PiecewiseProfile& p, double q,
                                     double power_p, const GridSpec& grid) {
  SampledFunction out =
      sampled_on(grid, "heat:" + p.name() + ":q=" + std::to_string(q));
  const auto pts = make_grid(grid);
  parallel_for(pts.size(), [&](std::size_t i) {
    const HeatIntegral h = heat_integral(p, pts[i].argument, q);
    const LogScalar v = h.value / pts[i].argument.pow(power_p);
    out.values[i] = v.to_double();
  });
  out.check_consistent();
  return out;
}

struct ZetaPoint {
  double s = 0.0;
  bool divergent = false;
  double s_tau = std::numeric_limits<double>::quiet_NaN();
  double tau_log = std::numeric_limits<double>::quiet_NaN(); // ln tau
};

//! s * tau(A^{base_power + s}) for each requested offset s > 0, where tau
//! of a power is the corresponding profile integral.  Divergent entries
//! (possible when base_power + s is at or below the tail exponent) carry
//! the flag instead of a value.
inline std::vector<ZetaPoint> zeta_residue(const PiecewiseProfile& p,
                                           double base_power,
                                           const std::vector<double>& s_list) {
  if (!(base_power > 0.0))
    throw std::domain_error("zeta_residue: base power must be positive");
  std::vector<ZetaPoint> out(s_list.size());
  parallel_for(s_list.size(), [&](std::size_t i) {
    const double s = s_list[i];
    if (!(s > 0.0)) throw std::domain_error("zeta_residue: offsets must be > 0");
    ZetaPoint z;
    z.s = s;
    const double q = base_power + s;
    // The represented exponent rounds at ulp(base_power); multiply by the
    // offset that was actually evaluated so the sample sits exactly on the
    // curve, falling back to s if the offset collapses to zero entirely.
    const double s_eff = q > base_power ? q - base_power : s;
    const PowerIntegral tau = power_integral(p, q);
    z.divergent = tau.divergent;
    if (!tau.divergent && tau.value.is_positive()) {
      z.tau_log = tau.value.log_magnitude();
      z.s_tau = std::exp(std::log(s_eff) + z.tau_log);
    } else if (!tau.divergent) {
      z.tau_log = -std::numeric_limits<double>::infinity();
      z.s_tau = 0.0;
    }
    out[i] = z;
  });
  return out;
}

//! Sweep of s * tau(A^{base_power + s}) along s = e^{-x} on a level-1 grid,
//! so the x -> infinity tail of the sampled function is the s -> 0 limit.
//! Throws if any sample diverges; use zeta_residue for the flagged form.
inline SampledFunction zeta_sweep(const PiecewiseProfile& p, double base_power,
                                  const GridSpec& grid) {
  if (grid.level != 1)
    throw std::invalid_argument("zeta_sweep: grid must be level 1");
  SampledFunction out = sampled_on(grid, "zeta:" + p.name());
  std::vector<double> s_list(out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    s_list[i] = std::exp(-out.xs[i]);
  const auto pointsz = zeta_residue(p, base_power, s_list);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (pointsz[i].divergent)
      throw std::domain_error("zeta_sweep: divergent sample at s = " +
                              std::to_string(pointsz[i].s));
    out.values[i] = pointsz[i].s_tau;
  }
  out.check_consistent();
  return out;
}

//==============================================================================
// Signed differences and boundedness probes
//==============================================================================

struct SignedPair {
  PiecewiseProfile plus;
  PiecewiseProfile minus;
  std::string name;
};

struct SignedDiff {
  SampledFunction heat_diff; // lambda^{-1} (heat_+ - heat_-)
  SampledFunction avg_diff;  // (partial_+ - partial_-) / log(1 + t)
};

//! Pointwise differences of the normalized heat traces and of the averaged
//! traces of a signed pair, on a shared grid.
inline SignedDiff signed_diff(const SignedPair& pair, const GridSpec& grid,
                              double q) {
  SignedDiff out;
  out.heat_diff = sampled_on(grid, "heatdiff:" + pair.name);
  out.avg_diff = sampled_on(grid, "avgdiff:" + pair.name);
  const auto pts = make_grid(grid);
  parallel_for(pts.size(), [&](std::size_t i) {
    const HeatIntegral hp = heat_integral(pair.plus, pts[i].argument, q);
    const HeatIntegral hm = heat_integral(pair.minus, pts[i].argument, q);
    out.heat_diff.values[i] =
        ((hp.value - hm.value) / pts[i].argument).to_double();
    const LogScalar pp = partial_integral(pair.plus, pts[i].argument);
    const LogScalar pm = partial_integral(pair.minus, pts[i].argument);
    const LogScalar num = pp - pm;
    out.avg_diff.values[i] =
        num.is_zero() ? 0.0
                      : (num.sign() > 0 ? 1.0 : -1.0) *
                            std::exp(num.abs().log_magnitude() -
                                     std::log(log1p_exp(pts[i].u)));
  });
  out.heat_diff.check_consistent();
  out.avg_diff.check_consistent();
  return out;
}

struct BoundedCheck {
  SampledFunction raw;     // lambda^{-1} heat trace
  SampledFunction averaged;
  double raw_sup = 0.0;
  double averaged_sup = 0.0;
};

//! Samples the normalized heat trace and its Cesaro average on the grid and
//! reports both suprema.  A bounded raw trace with a larger grid-sup than
//! its average is the usual picture; a growing raw sup flags trouble.
inline BoundedCheck bounded_check(const PiecewiseProfile& p,
                                  const GridSpec& grid, double q = 1.0) {
  BoundedCheck out;
  out.raw = heat_function(p, q, 1.0, grid);
  out.averaged = cesaro(out.raw);
  for (double v : out.raw.values) out.raw_sup = std::max(out.raw_sup, v);
  for (double v : out.averaged.values)
    out.averaged_sup = std::max(out.averaged_sup, v);
  return out;
}

} // namespace asymlab
