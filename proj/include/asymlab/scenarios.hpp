#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "asymlab/functionals.hpp"
#include "asymlab/grid.hpp"
#include "asymlab/limits.hpp"
#include "asymlab/profile.hpp"

namespace asymlab {

//! One checked quantity inside a scenario.  kind fixes the pass rule:
//! Near: |computed - expected| <= tolerance.
//! AtMost / AtLeast: one-sided comparison against expected (tolerance 0).
//! Flag: expected and computed are 0/1 and must match.
struct ScenarioRow {
  enum class Kind { Near, AtMost, AtLeast, Flag };
  std::string label;
  Kind kind = Kind::Near;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct ScenarioResult {
  std::string name;
  bool pass = false;
  std::vector<ScenarioRow> rows;
  std::string notes;

  void finish() {
    pass = true;
    for (const auto& r : rows) pass = pass && r.pass;
  }
};

inline ScenarioRow row_near(std::string label, double expected, double computed,
                            double tol, std::string note = "") {
  ScenarioRow r;
  r.label = std::move(label);
  r.kind = ScenarioRow::Kind::Near;
  r.expected = expected;
  r.computed = computed;
  r.tolerance = tol;
  r.pass = std::isfinite(computed) && std::fabs(computed - expected) <= tol;
  r.note = std::move(note);
  return r;
}

inline ScenarioRow row_at_most(std::string label, double bound, double computed,
                               std::string note = "") {
  ScenarioRow r;
  r.label = std::move(label);
  r.kind = ScenarioRow::Kind::AtMost;
  r.expected = bound;
  r.computed = computed;
  r.pass = std::isfinite(computed) && computed <= bound;
  r.note = std::move(note);
  return r;
}

inline ScenarioRow row_at_least(std::string label, double bound,
                                double computed, std::string note = "") {
  ScenarioRow r;
  r.label = std::move(label);
  r.kind = ScenarioRow::Kind::AtLeast;
  r.expected = bound;
  r.computed = computed;
  r.pass = std::isfinite(computed) && computed >= bound;
  r.note = std::move(note);
  return r;
}

inline ScenarioRow row_flag(std::string label, bool expected, bool computed,
                            std::string note = "") {
  ScenarioRow r;
  r.label = std::move(label);
  r.kind = ScenarioRow::Kind::Flag;
  r.expected = expected ? 1.0 : 0.0;
  r.computed = computed ? 1.0 : 0.0;
  r.pass = expected == computed;
  r.note = std::move(note);
  return r;
}

//==============================================================================
// Counterexample scenario
//==============================================================================

//! Reproduces the defining estimates of the tower-breakpoint profile:
//! the averaged trace tracks n + log n! at the block ends (so it
//! oscillates to 0 on the doubly exponential scale), the normalized heat
//! trace returns to about 1/e at every lambda = e^{e^n}, the Cesaro-averaged
//! heat trace and the zeta residue both go to 0, and tau(A^{1+s}) still
//! blows up as s -> 0.  n_max controls how many tower blocks are checked;
//! x2_max is the level-2 grid reach used for the oscillation rows.
inline ScenarioResult run_counterexample(int n_max = 30, double x2_max = 16.0) {
  if (n_max < 2 || n_max > 700)
    throw std::invalid_argument("run_counterexample: n_max out of range");
  if (x2_max < 10.0 || x2_max > 34.0)
    throw std::invalid_argument(
        "run_counterexample: x2_max must lie in [10, 34]");
  ScenarioResult out;
  out.name = "counterexample";
  const PiecewiseProfile mu = make_counterexample();
  const double inv_e = std::exp(-1.0);

  // Partial integrals at block ends against n + log n!.
  for (int n = 2; n <= n_max; ++n) {
    const LogScalar t = LogScalar::from_log(std::exp(n + 1.0));
    const double part = partial_integral(mu, t).to_double();
    const double target = n + std::lgamma(n + 1.0);
    out.rows.push_back(row_near("partial@block" + std::to_string(n), target,
                                part, 2.0,
                                "integral of mu over (0, e^{e^{n+1}}]"));
  }

  // Normalized heat trace at lambda = e^{e^n}.
  for (int n = 1; n <= n_max; ++n) {
    const LogScalar lam = LogScalar::from_log(std::exp(static_cast<double>(n)));
    const HeatIntegral h = heat_integral(mu, lam, 1.0);
    const double v = (h.value / lam).to_double();
    out.rows.push_back(row_at_least("heat@tower" + std::to_string(n),
                                    inv_e - std::exp(-static_cast<double>(n)),
                                    v, "lambda^{-1} heat at e^{e^n}"));
  }

  // Averaged trace at t = e^{e^8} sits below 0.01 even though the heat
  // trace just peaked again.
  {
    const double u8 = std::exp(8.0);
    const LogScalar t = LogScalar::from_log(u8);
    const double a =
        std::exp(partial_integral(mu, t).log_magnitude() -
                 std::log(log1p_exp(u8)));
    out.rows.push_back(row_at_most("avg@e^{e^8}", 0.01, a));
  }

  // Cesaro-averaged heat trace at nu = e^{e^8}.
  {
    GridSpec g;
    g.level = 2;
    g.x_min = 0.0;
    g.x_max = 8.0;
    g.points_per_unit = 16;
    for (int r = 1; r <= 8; ++r) g.refinement_points.push_back(r);
    const SampledFunction heat = heat_function(mu, 1.0, 1.0, g);
    const SampledFunction m = cesaro(heat);
    out.rows.push_back(
        row_at_most("mheat@e^{e^8}", 0.05, m.values.back(),
                    "Cesaro average of the normalized heat trace"));
  }

  // Zeta residue endpoints: s tau(A^{1+s}) small at s = 1e-3 while tau
  // itself is already past 100 by s = 1e-14.
  {
    const auto z = zeta_residue(mu, 1.0, {1e-3, 1e-14});
    out.rows.push_back(row_flag("zeta@1e-3:finite", true, !z[0].divergent));
    out.rows.push_back(row_at_most("s*tau@1e-3", 0.05, z[0].s_tau));
    out.rows.push_back(row_flag("zeta@1e-14:finite", true, !z[1].divergent));
    out.rows.push_back(
        row_at_least("tau@1e-14", 100.0, std::exp(z[1].tau_log),
                     "tau(A^{1+s}) at s = 1e-14"));
    const PowerIntegral trace = power_integral(mu, 1.0);
    out.rows.push_back(row_flag("tau@s=0:divergent", true, trace.divergent,
                                "the trace itself must diverge"));
  }

  // The raw heat trace keeps oscillating at tower scales: not converged,
  // with trailing peaks still at the 1/e level.
  {
    GridSpec g;
    g.level = 2;
    g.x_min = 0.0;
    g.x_max = x2_max;
    g.points_per_unit = 16;
    for (int r = 1; r <= static_cast<int>(x2_max); ++r)
      g.refinement_points.push_back(r);
    const SampledFunction heat = heat_function(mu, 1.0, 1.0, g);
    const LimitEstimate raw = estimate_limit(heat, 1e-3);
    out.rows.push_back(row_flag("rawheat:not-converged", true,
                                raw.cls != LimitClass::Converged,
                                std::string("classified ") + to_string(raw.cls)));
    out.rows.push_back(
        row_at_least("rawheat:limsup", inv_e - 1e-6, raw.limsup));

    // All three averaged routes agree on the value 0.
    MeasurabilityGrids mg;
    mg.avg = g;
    mg.heat = g;
    mg.zeta = GridSpec{1, 0.0, 32.0, 8, {}};
    const MeasurabilityReport rep = measurability_report(mu, 1.0, mg, 1e-3);
    out.rows.push_back(row_flag("averaged-routes:agree", true, rep.agree));
    out.rows.push_back(
        row_near("averaged-routes:value", 0.0,
                 rep.agree ? rep.common_value : std::nan(""), 1e-3));
  }

  out.notes =
      "tower-breakpoint profile: averaged forms settle at 0 while the raw "
      "heat trace and the averaged trace keep returning to order-one values";
  out.finish();
  return out;
}

//==============================================================================
// Gamma-factor scenario
//==============================================================================

//! Ratio of the Cesaro-averaged heat trace at exponent q to the zeta
//! residue on the canonical profile, against Gamma(1 + 1/q).  The q = 1 row
//! doubles as the normalization identity Gamma(2) = 1.
inline ScenarioResult run_gamma_factor(std::vector<double> qs = {0.5, 1.0, 2.0,
                                                                 3.0},
                                       double x_max = 2000.0) {
  ScenarioResult out;
  out.name = "gamma-factor";
  const PiecewiseProfile mu = make_canonical();
  const GridSpec zg{1, 0.0, 9.5, 16, {}};
  const SampledFunction zs = zeta_sweep(mu, 1.0, zg);
  const LimitEstimate zl = estimate_limit(zs, 1e-3);
  out.rows.push_back(row_flag("zeta:converged", true,
                              zl.cls == LimitClass::Converged));
  for (double q : qs) {
    GridSpec hg{1, 0.0, x_max, 4, {}};
    const SampledFunction heat = heat_function(mu, q, 1.0, hg);
    const SampledFunction m = cesaro(heat);
    const LimitEstimate ml = estimate_limit(m, 1e-3);
    const double target = std::tgamma(1.0 + 1.0 / q);
    const bool ok = ml.cls == LimitClass::Converged && zl.cls == LimitClass::Converged;
    const double ratio = ok ? ml.value / zl.value : std::nan("");
    out.rows.push_back(row_near("gamma-ratio:q=" + std::to_string(q), target,
                                ratio, 1e-3 * target,
                                q == 1.0 ? "identity check: Gamma(2) = 1"
                                         : ""));
  }
  out.notes = "M(heat)/zeta-residue against Gamma(1 + 1/q) on the canonical "
              "profile";
  out.finish();
  return out;
}

//==============================================================================
// p-th power scenario
//==============================================================================

//! For B = A^p the three routes must line up: the averaged trace of B, the
//! Cesaro average of lambda^{-p} tau(exp(-(lambda A)^{-p})), and
//! (1/p) s tau(A^{p+s}) as s -> 0.  The heat trace of A at exponent p is
//! also checked against the change of variable onto B's heat trace at
//! exponent 1, which must agree to rounding.
inline ScenarioResult run_p_case(const PiecewiseProfile& b, double p,
                                 double x_max = 1000.0) {
  if (!(p > 0.0)) throw std::invalid_argument("run_p_case: p must be positive");
  ScenarioResult out;
  out.name = "p-case";
  const double tol = 1e-3;
  const PiecewiseProfile a = b.pth_power(1.0 / p);

  const GridSpec ag{1, 0.0, 2.0 * x_max, 2, {}};
  const SampledFunction avg = dixmier_average(b, ag);
  const LimitEstimate al = estimate_limit(avg, tol);
  out.rows.push_back(
      row_flag("avg:converged", true, al.cls == LimitClass::Converged));

  const GridSpec hg{1, 0.0, x_max, 4, {}};
  const SampledFunction heat = heat_function(a, p, p, hg);
  const SampledFunction m = cesaro(heat);
  const LimitEstimate ml = estimate_limit(m, tol);
  out.rows.push_back(
      row_flag("mheat:converged", true, ml.cls == LimitClass::Converged));

  const GridSpec zg{1, 0.0, 9.5, 16, {}};
  SampledFunction zs = sampled_on(zg, "zeta:" + a.name());
  {
    std::vector<double> s_list(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i)
      s_list[i] = std::exp(-zs.xs[i]);
    const auto pts = zeta_residue(a, p, s_list);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      if (pts[i].divergent)
        throw std::domain_error("run_p_case: divergent zeta sample");
      zs.values[i] = pts[i].s_tau / p;
    }
  }
  const LimitEstimate zl = estimate_limit(zs, tol);
  out.rows.push_back(
      row_flag("zeta:converged", true, zl.cls == LimitClass::Converged));

  if (al.cls == LimitClass::Converged) {
    out.rows.push_back(row_near("mheat-vs-avg", al.value,
                                ml.cls == LimitClass::Converged ? ml.value
                                                                : std::nan(""),
                                2.0 * tol));
    out.rows.push_back(row_near("zeta-vs-avg", al.value,
                                zl.cls == LimitClass::Converged ? zl.value
                                                                : std::nan(""),
                                2.0 * tol,
                                "(1/p) s tau(A^{p+s}) against lim avg(B)"));
  }

  // Change of variable: the heat trace of A at exponent p equals the heat
  // trace of B at exponent 1 evaluated at lambda^p, to rounding error.
  double worst = 0.0;
  for (double lx : {2.0, 5.0, 10.0, 50.0, 200.0}) {
    const LogScalar lam = LogScalar::from_log(lx);
    const HeatIntegral ha = heat_integral(a, lam, p);
    const HeatIntegral hb = heat_integral(b, lam.pow(p), 1.0);
    if (ha.value.is_zero() && hb.value.is_zero()) continue;
    const double d = std::fabs(ha.value.log_magnitude() -
                               hb.value.log_magnitude());
    worst = std::max(worst, d / std::max(1.0, std::fabs(ha.value.log_magnitude())));
  }
  out.rows.push_back(row_at_most("change-of-variable", 1e-12, worst,
                                 "relative log-gap over sample lambdas"));

  out.notes = "p-th power routes on B = A^p, plus the exact heat-trace "
              "change of variable";
  out.finish();
  return out;
}

//==============================================================================
// Signed difference scenario
//==============================================================================

//! Differences of two profiles acting as the positive and negative parts
//! of a signed element: both the averaged-trace difference and the
//! Cesaro-averaged heat-trace difference converge to the same value.
inline ScenarioResult run_signed(const SignedPair& pair, double q = 1.0,
                                 double x_max = 1000.0) {
  ScenarioResult out;
  out.name = "signed";
  const double tol = 1e-3;
  const GridSpec g{1, 0.0, x_max, 4, {}};
  const SignedDiff d = signed_diff(pair, g, q);

  const SampledFunction mheat = cesaro(d.heat_diff);
  const LimitEstimate hl = estimate_limit(mheat, tol);
  const LimitEstimate al = estimate_limit(d.avg_diff, tol);
  out.rows.push_back(
      row_flag("avgdiff:converged", true, al.cls == LimitClass::Converged));
  out.rows.push_back(
      row_flag("mheatdiff:converged", true, hl.cls == LimitClass::Converged));
  if (al.cls == LimitClass::Converged)
    out.rows.push_back(row_near(
        "mheatdiff-vs-avgdiff", al.value,
        hl.cls == LimitClass::Converged ? hl.value : std::nan(""), 2.0 * tol));

  const GridSpec cg{1, 0.0, x_max, 2, {}};
  const Membership mp = classify_membership(pair.plus, cg);
  const Membership mm = classify_membership(pair.minus, cg);
  out.rows.push_back(row_flag("plus:small", true, mp.little_o,
                              "t mu(t) = o(log t) for the positive part"));
  out.rows.push_back(row_flag("minus:small", true, mm.little_o));

  out.notes = "signed pair: averaged difference routes agree";
  out.finish();
  return out;
}

//==============================================================================
// Averaging implication scenario
//==============================================================================

//! Exercises both averaging implications on concrete traces: the double
//! Cesaro average against the single one for the tower-breakpoint heat
//! trace and a settling canonical trace, and the derivative-sided check on
//! the canonical averaged trace.
inline ScenarioResult run_tauberian() {
  ScenarioResult out;
  out.name = "tauberian";
  const double tol = 1e-3;

  {
    GridSpec g;
    g.level = 2;
    g.x_min = 0.0;
    g.x_max = 16.0;
    g.points_per_unit = 16;
    for (int r = 1; r <= 16; ++r) g.refinement_points.push_back(r);
    const SampledFunction z =
        heat_function(make_counterexample(), 1.0, 1.0, g);
    const TauberianReport rep = tauberian_check(z, TauberianMode::CesaroM, tol);
    out.rows.push_back(row_flag("tower:hypotheses", true, rep.hypotheses_hold));
    out.rows.push_back(
        row_flag("tower:implication", true, rep.implication_holds,
                 std::string("premise ") + to_string(rep.premise.cls) +
                     ", conclusion " + to_string(rep.conclusion.cls)));
  }
  {
    const GridSpec g{1, 0.0, 2000.0, 4, {}};
    const SampledFunction z = heat_function(make_canonical(), 1.0, 1.0, g);
    const TauberianReport rep = tauberian_check(z, TauberianMode::CesaroM, tol);
    out.rows.push_back(
        row_flag("canonical:hypotheses", true, rep.hypotheses_hold));
    out.rows.push_back(row_flag("canonical:implication", true,
                                rep.implication_holds));
    out.rows.push_back(row_flag("canonical:premise-converged", true,
                                rep.premise.cls == LimitClass::Converged));
  }
  {
    const GridSpec g{1, 0.0, 600.0, 8, {}};
    const SampledFunction z = dixmier_average(make_canonical(), g);
    const TauberianReport rep =
        tauberian_check(z, TauberianMode::Derivative, tol);
    out.rows.push_back(row_flag("derivative:hypotheses", true,
                                rep.hypotheses_hold));
    out.rows.push_back(
        row_flag("derivative:implication", true, rep.implication_holds));
  }
  out.notes = "averaging implications on sampled traces";
  out.finish();
  return out;
}

} // namespace asymlab
