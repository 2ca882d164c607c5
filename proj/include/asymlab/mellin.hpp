#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymlab/functionals.hpp"
#include "asymlab/limits.hpp"
#include "asymlab/profile.hpp"
#include "asymlab/scenarios.hpp"
#include "asymlab/special.hpp"

namespace asymlab {

//! Log-periodic heat-trace parameters: h(t) = t^{-beta} (a + b sin(omega0
//! (ln t - c))) below t = 1, with omega0 = 2 pi / ln 5 and, in the
//! geometric case, beta = ln 3 / ln 5.  Requires a > |b| so the trace stays
//! positive.
struct GasketParams {
  double a = 1.0;
  double b = 0.05;
  double c = 0.0;
  double beta = std::log(3.0) / std::log(5.0);
};

inline double gasket_omega0() { return 2.0 * M_PI / std::log(5.0); }

//! A small-t heat trace model t -> h(t), the input side of the Mellin
//! route to the zeta residue.  Three kinds:
//!   PowerCutoff: h = a t^{-p/2} on (0, 1], a e^{1-t} beyond.
//!   Gasket: the log-periodic form above, continued as h(1) e^{1-t}.
//!   FromProfile: h(t) = tau(exp(-t mu^{-q})), evaluated through the
//!   segmentwise heat integral at lambda = t^{-1/q}.
class HeatTraceModel {
public:
  enum class Kind { PowerCutoff, Gasket, FromProfile };

  static HeatTraceModel power_cutoff(double a, double p) {
    if (!(a > 0.0) || !(p > 0.0))
      throw std::invalid_argument("power_cutoff: a and p must be positive");
    HeatTraceModel m;
    m.kind_ = Kind::PowerCutoff;
    m.a_ = a;
    m.p_ = p;
    m.name_ = "power_cutoff";
    return m;
  }

  static HeatTraceModel gasket(const GasketParams& g) {
    if (!(g.a > std::fabs(g.b)))
      throw std::invalid_argument("gasket: need a > |b|");
    if (!(g.beta > 0.0) || !(g.beta < 1.0))
      throw std::invalid_argument("gasket: beta must lie in (0, 1)");
    HeatTraceModel m;
    m.kind_ = Kind::Gasket;
    m.gasket_ = g;
    m.name_ = "gasket";
    return m;
  }

  static HeatTraceModel from_profile(PiecewiseProfile profile, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("from_profile: q must be positive");
    HeatTraceModel m;
    m.kind_ = Kind::FromProfile;
    m.q_ = q;
    m.name_ = "from_profile:" + profile.name();
    // The spectral dimension comes from the tail exponent of the profile.
    if (profile.is_generated())
      throw std::invalid_argument(
          "from_profile: generated profiles have no power tail");
    const Segment tail = profile.segment(*profile.segment_count() - 1);
    if (tail.kind != Segment::Kind::Power)
      throw std::invalid_argument("from_profile: profile needs a power tail");
    m.p_ = 2.0 / (q * tail.alpha);
    m.profile_ = std::move(profile);
    return m;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  //! Exponent p with h(t) comparable to t^{-p/2} near zero.
  double spectral_p() const {
    if (kind_ == Kind::Gasket) return 2.0 * gasket_.beta;
    return p_;
  }

  //! h(t) for a positive LogScalar argument; exact in the log domain for
  //! t far outside native double range.
  LogScalar eval(const LogScalar& t) const {
    if (!t.is_positive())
      throw std::domain_error("HeatTraceModel: argument must be positive");
    const double lt = t.log_magnitude();
    switch (kind_) {
      case Kind::PowerCutoff:
        if (lt <= 0.0)
          return LogScalar::from_log(std::log(a_) - 0.5 * p_ * lt);
        return LogScalar::from_log(std::log(a_) + 1.0 - t.to_double());
      case Kind::Gasket: {
        if (lt <= 0.0) {
          const double osc =
              gasket_.a +
              gasket_.b * std::sin(gasket_omega0() * (lt - gasket_.c));
          return LogScalar::from_log(-gasket_.beta * lt + std::log(osc));
        }
        const double h1 =
            gasket_.a + gasket_.b * std::sin(-gasket_omega0() * gasket_.c);
        return LogScalar::from_log(std::log(h1) + 1.0 - t.to_double());
      }
      case Kind::FromProfile: {
        const LogScalar lambda = LogScalar::from_log(-lt / q_);
        return heat_integral(*profile_, lambda, q_).value;
      }
    }
    throw std::logic_error("HeatTraceModel: unknown kind");
  }

  double eval_d(double t) const {
    return eval(LogScalar::from_value(t)).to_double();
  }

  const std::optional<PiecewiseProfile>& profile() const { return profile_; }
  double q() const { return q_; }
  double a() const { return a_; }
  const GasketParams& gasket_params() const { return gasket_; }

private:
  HeatTraceModel() = default;
  Kind kind_ = Kind::PowerCutoff;
  double a_ = 1.0;
  double p_ = 2.0;
  double q_ = 1.0;
  GasketParams gasket_;
  std::optional<PiecewiseProfile> profile_;
  std::string name_;
};

namespace detail {

//! 32-point Gauss-Legendre on [a, b].
template <class F>
double gl32_on(F&& f, double a, double b) {
  const auto& rule = gl32();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 32; ++i) s += rule.w[i] * f(mid + half * rule.x[i]);
  return s * half;
}

template <class F>
double adaptive_gl(F&& f, double a, double b, double tol_abs, int depth) {
  const double whole = gl32_on(f, a, b);
  const double mid = 0.5 * (a + b);
  const double split = gl32_on(f, a, mid) + gl32_on(f, mid, b);
  if (depth <= 0 || std::fabs(whole - split) <= tol_abs ||
      std::fabs(whole - split) <= 1e-13 * std::fabs(split))
    return split;
  return adaptive_gl(f, a, mid, 0.5 * tol_abs, depth - 1) +
         adaptive_gl(f, mid, b, 0.5 * tol_abs, depth - 1);
}

} // namespace detail

struct MellinZeta {
  double zeta = 0.0;
  double near_part = 0.0; // integral over (0, min(split, 1)]
  double mid_part = 0.0;  // integral between split and 1 when they differ
  double tail_part = 0.0; // integral beyond max(split, 1)
  double tail_truncation_log = -std::numeric_limits<double>::infinity();
  int tail_panels = 0;
};

//! zeta(s) = (1 / Gamma(s/2)) * integral of t^{s/2 - 1} h(t) over (0, inf),
//! for s above the model's spectral exponent p.
//!
//! The near-zero part is where s -> p blows up; it is done in closed form
//! for the power-cutoff and log-periodic models, and for profile models by
//! substituting w = t^{(s-p)/2}, which turns the near-singular integrand
//! into a bounded one (the naive form concentrates all its mass below any
//! fixed t once s - p is small, and fixed quadrature misses it entirely).
//! The split point (default 1) only moves mass between the reported parts;
//! the total must not depend on it, which makes it a useful consistency
//! knob.
inline MellinZeta mellin_zeta(const HeatTraceModel& model, double s,
                              double split = 1.0) {
  const double p = model.spectral_p();
  if (!(s > p))
    throw std::domain_error("mellin_zeta: need s above the spectral exponent");
  if (!(split > 0.0) || !std::isfinite(split))
    throw std::domain_error("mellin_zeta: split must be positive");
  MellinZeta out;
  const double sigma = 0.5 * (s - p);
  const double m = std::min(split, 1.0);
  const double lm = std::log(m);

  // Near part over (0, m].
  switch (model.kind()) {
    case HeatTraceModel::Kind::PowerCutoff:
      out.near_part = model.a() * std::exp(sigma * lm) / sigma;
      break;
    case HeatTraceModel::Kind::Gasket: {
      const GasketParams& g = model.gasket_params();
      const double w0 = gasket_omega0();
      const double th = w0 * (lm - g.c);
      const double trig = std::exp(sigma * lm) *
                          (sigma * std::sin(th) - w0 * std::cos(th)) /
                          (sigma * sigma + w0 * w0);
      out.near_part = g.a * std::exp(sigma * lm) / sigma + g.b * trig;
      break;
    }
    case HeatTraceModel::Kind::FromProfile: {
      // w = t^{sigma}: integral becomes (1/sigma) int_0^{m^sigma}
      // w^{s/(2 sigma) - 1} h(w^{1/sigma}) dw with a bounded integrand.
      const double W = std::exp(sigma * lm);
      auto f = [&](double w) {
        if (!(w > 0.0)) return 0.0;
        const double lw = std::log(w);
        const LogScalar t = LogScalar::from_log(lw / sigma);
        const LogScalar h = model.eval(t);
        if (h.is_zero()) return 0.0;
        const double lg = -std::log(sigma) +
                          (0.5 * s / sigma - 1.0) * lw + h.log_magnitude();
        return std::exp(lg);
      };
      const double probe = f(0.37 * W) * W;
      out.near_part = detail::adaptive_gl(
          f, 0.0, W, 1e-11 * std::max(std::fabs(probe), 1e-30), 24);
      break;
    }
  }

  // Mid part between m and max(split, 1), in v = ln t.
  const double M = std::max(split, 1.0);
  auto integrand_v = [&](double v) {
    const LogScalar h = model.eval(LogScalar::from_log(v));
    if (h.is_zero()) return 0.0;
    return std::exp(0.5 * s * v + h.log_magnitude());
  };
  if (M > m) {
    out.mid_part = detail::adaptive_gl(integrand_v, lm, std::log(M),
                                       1e-12 * std::fabs(out.near_part) + 1e-30,
                                       20);
  }

  // Tail beyond M: geometric panels in v = ln t until negligible.
  double acc = 0.0;
  double v0 = std::log(M);
  int quiet = 0;
  double last = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double v1 = v0 + 1.0;
    const double piece = detail::adaptive_gl(
        integrand_v, v0, v1,
        1e-12 * (std::fabs(acc) + std::fabs(out.near_part)) + 1e-300, 16);
    acc += piece;
    last = piece;
    out.tail_panels = k + 1;
    const double scale = std::fabs(acc) + std::fabs(out.near_part) + 1e-300;
    if (std::fabs(piece) < 1e-16 * scale) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
    v0 = v1;
  }
  out.tail_part = acc;
  out.tail_truncation_log =
      last != 0.0 ? std::log(std::fabs(last))
                  : -std::numeric_limits<double>::infinity();

  out.zeta = (out.near_part + out.mid_part + out.tail_part) /
             std::tgamma(0.5 * s);
  return out;
}

//==============================================================================
// Bound check and residue extraction
//==============================================================================

struct ZetaBound {
  bool hypothesis_ok = false;
  double worst_ratio_low = 0.0;  // min of h(t) t^{p/2} over the probe set
  double worst_ratio_high = 0.0; // max of the same
  std::vector<ScenarioRow> rows;
  bool pass = false;
};

//! Checks the two-sided residue bound: when 1/C <= h(t) t^{p/2} <= C near
//! zero, (s - p) zeta(s) must land in [2 / (C Gamma(p/2)) - tol,
//! 2 C / Gamma(p/2) + tol] for s near p.  (At p = 2 the gamma factor is 1
//! and the window is the familiar [2/C, 2C].)
inline ZetaBound zeta_bound_check(const HeatTraceModel& model, double C,
                                  const std::vector<double>& s_offsets,
                                  double tol = 0.05) {
  if (!(C >= 1.0)) throw std::invalid_argument("zeta_bound_check: need C >= 1");
  ZetaBound out;
  const double p = model.spectral_p();

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int j = 0; j <= 80; ++j) {
    const double lt = -static_cast<double>(j) / 4.0;
    const LogScalar h = model.eval(LogScalar::from_log(lt));
    const double ratio =
        h.is_zero() ? 0.0 : std::exp(h.log_magnitude() + 0.5 * p * lt);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  out.worst_ratio_low = lo;
  out.worst_ratio_high = hi;
  out.hypothesis_ok = lo >= 1.0 / C - 1e-9 && hi <= C + 1e-9;
  out.rows.push_back(row_flag("envelope:within-C", true, out.hypothesis_ok,
                              "h(t) t^{p/2} in [1/C, C] over the probe set"));

  const double gp = std::tgamma(0.5 * p);
  const double lo_bound = 2.0 / (C * gp) - tol;
  const double hi_bound = 2.0 * C / gp + tol;
  for (double d : s_offsets) {
    if (!(d > 0.0))
      throw std::invalid_argument("zeta_bound_check: offsets must be > 0");
    const MellinZeta z = mellin_zeta(model, p + d);
    const double v = d * z.zeta;
    const std::string at = "@s-p=" + std::to_string(d);
    out.rows.push_back(row_at_least("residue-lower" + at, lo_bound, v));
    out.rows.push_back(row_at_most("residue-upper" + at, hi_bound, v));
  }
  out.pass = true;
  for (const auto& r : out.rows) out.pass = out.pass && r.pass;
  return out;
}

struct HeatResidue {
  double residue = 0.0;        // lim (s - p) zeta(s), linear extrapolation
  double scaled_residue = 0.0; // (1/2) Gamma(p/2) * residue
  LimitEstimate cesaro_limit;  // of lambda^{-p} h(lambda^{-2})
  bool consistent = false;
  double gap = std::numeric_limits<double>::quiet_NaN();
};

//! Extracts the zeta residue from two samples of (s - p) zeta(s) and
//! compares (1/2) Gamma(p/2) residue with the Cesaro limit of the
//! normalized trace lambda^{-p} h(lambda^{-2}).  When the Cesaro average
//! does not converge on the grid the report stays inconsistent rather than
//! forcing a verdict.
inline HeatResidue heat_to_residue(const HeatTraceModel& model,
                                   double tol = 1e-2, double x_max = 100.0,
                                   int ppu = 16) {
  HeatResidue out;
  const double p = model.spectral_p();
  const double d1 = 1e-3, d2 = 1e-2;
  const double r1 = d1 * mellin_zeta(model, p + d1).zeta;
  const double r2 = d2 * mellin_zeta(model, p + d2).zeta;
  out.residue = r1 - d1 * (r2 - r1) / (d2 - d1);
  out.scaled_residue = 0.5 * std::tgamma(0.5 * p) * out.residue;

  const GridSpec g{1, 0.0, x_max, ppu, {}};
  SampledFunction trace = sampled_on(g, "normtrace:" + model.name());
  parallel_for(trace.size(), [&](std::size_t i) {
    const double x = trace.xs[i];
    const LogScalar t = LogScalar::from_log(-2.0 * x);
    const LogScalar h = model.eval(t);
    trace.values[i] =
        h.is_zero() ? 0.0 : std::exp(h.log_magnitude() - p * x);
  });
  trace.check_consistent();
  const SampledFunction m = cesaro(trace);
  out.cesaro_limit = estimate_limit(m, 1e-3);
  if (out.cesaro_limit.cls == LimitClass::Converged) {
    out.gap = std::fabs(out.cesaro_limit.value - out.scaled_residue);
    out.consistent = out.gap <= tol;
  }
  return out;
}

//==============================================================================
// Log-periodic Cesaro average
//==============================================================================

struct GasketCesaro {
  SampledFunction trace;       // g(lambda) = lambda^{-2 beta} h(lambda^{-2})
  SampledFunction averaged;
  LimitEstimate limit;
  double max_excess = 0.0;     // max over nu >= e^10 of |M - a| minus bound
  bool within_bound = false;
};

//! Cesaro average of the normalized log-periodic trace.  The oscillation
//! a + b sin averages out at rate |M(g)(nu) - a| <= 2|b| / (omega ln nu)
//! with omega = 2 omega0; the report checks that bound from nu = e^10 up to
//! the end of the grid.  With b = 0 the average is constant a to rounding.
inline GasketCesaro gasket_cesaro(const GasketParams& params,
                                  double x_max = 40.0, int ppu = 256) {
  if (!(x_max >= 12.0))
    throw std::invalid_argument("gasket_cesaro: need x_max >= 12");
  const HeatTraceModel model = HeatTraceModel::gasket(params);
  GasketCesaro out;
  const GridSpec g{1, 0.0, x_max, ppu, {}};
  out.trace = sampled_on(g, "gasket-trace");
  const double beta = params.beta;
  for (std::size_t i = 0; i < out.trace.size(); ++i) {
    const double x = out.trace.xs[i];
    const LogScalar h = model.eval(LogScalar::from_log(-2.0 * x));
    out.trace.values[i] = std::exp(h.log_magnitude() - 2.0 * beta * x);
  }
  out.trace.check_consistent();
  out.averaged = cesaro(out.trace);
  out.limit = estimate_limit(out.averaged, 1e-3);

  const double omega = 2.0 * gasket_omega0();
  // The analytic bound is attained (cosine endpoints at +-1), so the slack
  // must cover the trapezoid error of the averaged oscillation, which is
  // h^2 omega |b| / 6 with h the grid step.
  const double h = 1.0 / static_cast<double>(ppu);
  const double slack = std::max(1e-9, h * h * omega * std::fabs(params.b));
  out.within_bound = true;
  for (std::size_t i = 0; i < out.averaged.size(); ++i) {
    const double u = out.averaged.us[i];
    if (u < 10.0) continue;
    const double bound = 2.0 * std::fabs(params.b) / (omega * u);
    const double excess =
        std::fabs(out.averaged.values[i] - params.a) - bound;
    out.max_excess = std::max(out.max_excess, excess);
    if (excess > slack) out.within_bound = false;
  }
  return out;
}

//==============================================================================
// Scenario wrappers
//==============================================================================

//! Residue bound rows for one model, plus the split-independence check and,
//! for profile-backed models, agreement with the exact power-integral route.
inline ScenarioResult run_mellin_scenario(
    const HeatTraceModel& model, double C,
    std::vector<double> s_offsets = {1e-3, 3e-3, 1e-2}, double tol = 0.05) {
  ScenarioResult out;
  out.name = "mellin:" + model.name();
  const double p = model.spectral_p();

  const ZetaBound zb = zeta_bound_check(model, C, s_offsets, tol);
  out.rows = zb.rows;

  {
    const double s_probe = p + 0.1;
    const double za = mellin_zeta(model, s_probe, 0.5).zeta;
    const double zc = mellin_zeta(model, s_probe, 2.0).zeta;
    out.rows.push_back(row_at_most(
        "split-independence", 1e-8 * std::fabs(za),
        std::fabs(za - zc), "zeta must not depend on the split point"));
  }

  if (model.kind() == HeatTraceModel::Kind::FromProfile) {
    // Dual route: the Mellin transform of the heat trace must match the
    // profile integral tau(A^{q s / 2}) computed with no transform at all.
    for (double d : {1e-2, 1e-1, 5e-1}) {
      const double s = p + d;
      const double via_mellin = mellin_zeta(model, s).zeta;
      const PowerIntegral direct =
          power_integral(*model.profile(), model.q() * s / 2.0);
      const double via_direct = direct.divergent
                                    ? std::numeric_limits<double>::quiet_NaN()
                                    : direct.value.to_double();
      out.rows.push_back(row_near("dual-route@s-p=" + std::to_string(d),
                                  via_direct, via_mellin,
                                  1e-6 * std::fabs(via_direct)));
    }
  }
  out.notes = "Mellin-route zeta against the residue envelope";
  out.finish();
  return out;
}

//! Cesaro-of-oscillation rows: the log-periodic average obeys its 1/ln nu
//! bound, collapses to exact constancy at b = 0, and still lands inside the
//! residue envelope through the Mellin route.
inline ScenarioResult run_gasket_scenario(const GasketParams& params,
                                          double x_max = 40.0) {
  ScenarioResult out;
  out.name = "gasket";

  const GasketCesaro gc = gasket_cesaro(params, x_max);
  out.rows.push_back(row_flag("average:within-1/log-bound", true,
                              gc.within_bound,
                              "checked for nu from e^10 to e^" +
                                  std::to_string(static_cast<int>(x_max))));
  out.rows.push_back(row_near("average:limit", params.a,
                              gc.limit.cls == LimitClass::Converged
                                  ? gc.limit.value
                                  : std::nan(""),
                              1e-3));

  GasketParams flat = params;
  flat.b = 0.0;
  const GasketCesaro fc = gasket_cesaro(flat, x_max);
  double worst = 0.0;
  for (double v : fc.averaged.values)
    worst = std::max(worst, std::fabs(v - flat.a));
  out.rows.push_back(row_at_most("average:b=0-exact", 1e-12, worst,
                                 "no oscillation: average equals a"));

  const double C =
      std::max(params.a + std::fabs(params.b),
               1.0 / (params.a - std::fabs(params.b))) + 0.01;
  const ZetaBound zb = zeta_bound_check(HeatTraceModel::gasket(params), C,
                                        {1e-3, 1e-2});
  for (const auto& r : zb.rows) out.rows.push_back(r);

  out.notes = "log-periodic trace: averaging beats the oscillation at rate "
              "1/ln nu";
  out.finish();
  return out;
}

//! Residue-vs-average consistency rows for a list of models.
inline ScenarioResult run_residue_scenario(
    const std::vector<HeatTraceModel>& models, double tol = 1e-2) {
  ScenarioResult out;
  out.name = "heat-residue";
  for (const auto& m : models) {
    const HeatResidue hr = heat_to_residue(m, tol);
    out.rows.push_back(row_flag(m.name() + ":cesaro-converged", true,
                                hr.cesaro_limit.cls == LimitClass::Converged));
    out.rows.push_back(row_near(m.name() + ":residue-vs-average",
                                hr.scaled_residue,
                                hr.cesaro_limit.cls == LimitClass::Converged
                                    ? hr.cesaro_limit.value
                                    : std::nan(""),
                                tol,
                                "(1/2) Gamma(p/2) residue against the "
                                "Cesaro limit"));
  }
  out.notes = "zeta residue extrapolation against the averaged trace";
  out.finish();
  return out;
}

} // namespace asymlab
