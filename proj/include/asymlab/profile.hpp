#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "asymlab/log_scalar.hpp"

namespace asymlab {

//! One piece of a decreasing rearrangement profile on (from, to].
//!
//! Constant: value c throughout.  Power: value c * t^{-alpha} with
//! alpha > 0.  The final piece of an explicit profile must have an
//! infinite right endpoint.
struct Segment {
  enum class Kind { Constant, Power };

  Kind kind = Kind::Constant;
  LogScalar c = LogScalar::one();
  double alpha = 0.0;
  LogScalar from = LogScalar::zero();
  LogScalar to = LogScalar::infinity();

  LogScalar value_at(const LogScalar& t) const {
    if (kind == Kind::Constant) return c;
    return c * t.pow(-alpha);
  }

  //! Value as t decreases to the left endpoint (the supremum on the piece).
  LogScalar left_limit_value() const {
    if (kind == Kind::Constant) return c;
    if (from.is_zero())
      throw std::domain_error("Segment: power piece starting at zero");
    return c * from.pow(-alpha);
  }

  LogScalar right_value() const {
    if (kind == Kind::Constant) return c;
    if (to.is_infinite()) return LogScalar::zero();
    return c * to.pow(-alpha);
  }
};

//! Piecewise profile t -> mu(t): positive, nonincreasing, left-open pieces.
//!
//! Two storage modes share one interface.  An explicit profile holds its
//! segment list.  A generated profile materializes segment i on demand from
//! a builtin family whose breakpoints (towers like e^{e^n}) would be
//! unrepresentable as native endpoints.  Scaling and taking pointwise
//! powers are lazy: segment(i) applies mu -> (s * mu_base)^p when
//! materializing, so both storage modes support them uniformly.
class PiecewiseProfile {
public:
  enum class Generator { None, Counterexample, Spike };

  //! Builds an explicit profile; throws std::invalid_argument with a
  //! segment-indexed message when the list is not a valid nonincreasing
  //! profile.
  static PiecewiseProfile from_segments(std::string name,
                                        std::vector<Segment> segments) {
    PiecewiseProfile p;
    p.name_ = std::move(name);
    p.segments_ = std::move(segments);
    p.validate();
    return p;
  }

  static PiecewiseProfile generated(std::string name, Generator g) {
    PiecewiseProfile p;
    p.name_ = std::move(name);
    p.generator_ = g;
    return p;
  }

  const std::string& name() const { return name_; }
  Generator generator() const { return generator_; }
  bool is_generated() const { return generator_ != Generator::None; }

  //! Number of segments for an explicit profile; nullopt for a generated
  //! (conceptually infinite) one.
  std::optional<std::size_t> segment_count() const {
    if (is_generated()) return std::nullopt;
    return segments_.size();
  }

  double scale_log() const { return scale_log_; }
  double power() const { return power_; }
  bool transformed() const { return scale_log_ != 0.0 || power_ != 1.0; }

  //! Materializes segment i with the lazy scale and power applied.
  Segment segment(std::size_t i) const {
    Segment s = base_segment(i);
    if (!transformed()) return s;
    // mu = (e^{scale_log} * mu_base)^{power}; for a power piece this maps
    // c t^{-alpha} to (e^{scale_log} c)^{power} t^{-alpha * power}.
    const double lc = s.c.log_magnitude();
    s.c = LogScalar::from_log((lc + scale_log_) * power_);
    if (s.kind == Segment::Kind::Power) s.alpha *= power_;
    return s;
  }

  //! mu(t) for t > 0, using the left-open right-closed piece convention:
  //! at a junction the earlier (larger-value) piece applies.
  LogScalar evaluate(const LogScalar& t) const {
    if (!t.is_positive())
      throw std::domain_error("PiecewiseProfile: argument must be positive");
    for (std::size_t i = 0;; ++i) {
      if (!is_generated() && i >= segments_.size())
        throw std::logic_error("PiecewiseProfile: no covering segment");
      const Segment s = segment(i);
      if (t <= s.to || s.to.is_infinite()) return s.value_at(t);
    }
  }

  //! Distribution function: the measure of {mu > s} for s > 0, equal to
  //! sup{t : mu(t) > s} for a nonincreasing profile (0 if the set is empty).
  LogScalar distribution(const LogScalar& s) const {
    if (!s.is_positive())
      throw std::domain_error("PiecewiseProfile: level must be positive");
    LogScalar reach = LogScalar::zero();
    for (std::size_t i = 0;; ++i) {
      if (!is_generated() && i >= segments_.size()) return reach;
      const Segment seg = segment(i);
      if (seg.left_limit_value() <= s) return reach;
      if (seg.right_value() > s) {
        if (seg.to.is_infinite()) {
          // Power tail staying above s forever cannot happen for alpha > 0;
          // constant tails are rejected by validation.
          throw std::logic_error("PiecewiseProfile: level set unbounded");
        }
        reach = seg.to;
        continue;
      }
      if (seg.kind == Segment::Kind::Constant) return reach;
      // Crossing inside a power piece: c t^{-alpha} = s.
      const double lt =
          (seg.c.log_magnitude() - s.log_magnitude()) / seg.alpha;
      return LogScalar::from_log(lt);
    }
  }

  //! The profile c * mu (c > 0).
  PiecewiseProfile scaled(double c) const {
    if (!(c > 0.0))
      throw std::domain_error("PiecewiseProfile: scale must be positive");
    PiecewiseProfile p = *this;
    p.scale_log_ += std::log(c) / power_;
    p.name_ = name_ + "*" + std::to_string(c);
    return p;
  }

  //! The profile mu^p (p > 0), the rearrangement of the p-th power.
  PiecewiseProfile pth_power(double p) const {
    if (!(p > 0.0))
      throw std::domain_error("PiecewiseProfile: exponent must be positive");
    PiecewiseProfile q = *this;
    q.power_ *= p;
    q.name_ = name_ + "^" + std::to_string(p);
    return q;
  }

private:
  PiecewiseProfile() = default;

  Segment base_segment(std::size_t i) const {
    switch (generator_) {
      case Generator::None:
        if (i >= segments_.size())
          throw std::out_of_range("PiecewiseProfile: segment index");
        return segments_[i];
      case Generator::Counterexample:
        return counterexample_segment(i);
      case Generator::Spike:
        return spike_segment(i);
    }
    throw std::logic_error("PiecewiseProfile: unknown generator");
  }

  //! Tower-breakpoint profile: e^{-e} on (0, e^e]; then for n >= 1 the
  //! value 1/t on (e^{e^n}, n e^{e^n}] followed by e^{-e^{n+1}} on
  //! (n e^{e^n}, e^{e^{n+1}}].  For n = 1 the 1/t piece is empty, so the
  //! segment list interleaves starting from the second constant.
  static Segment counterexample_segment(std::size_t i) {
    const double e1 = std::exp(1.0);
    Segment s;
    if (i == 0) {
      s.kind = Segment::Kind::Constant;
      s.c = LogScalar::from_log(-e1);
      s.from = LogScalar::zero();
      s.to = LogScalar::from_log(e1);
      return s;
    }
    if (i % 2 == 0) {
      const double n = static_cast<double>(i / 2 + 1);
      s.kind = Segment::Kind::Power;
      s.c = LogScalar::one();
      s.alpha = 1.0;
      s.from = LogScalar::from_log(std::exp(n));
      s.to = LogScalar::from_log(std::exp(n) + std::log(n));
      return s;
    }
    const double n = static_cast<double>((i + 1) / 2);
    s.kind = Segment::Kind::Constant;
    s.c = LogScalar::from_log(-std::exp(n + 1.0));
    s.from = LogScalar::from_log(std::exp(n) + std::log(n));
    s.to = LogScalar::from_log(std::exp(n + 1.0));
    return s;
  }

  //! Plateau profile: value n e^{-n^2} on (e^{(n-1)^2}, e^{n^2}], n >= 1,
  //! with the first piece extended down to 0.  t mu(t) is unbounded while
  //! every average stays bounded.
  static Segment spike_segment(std::size_t i) {
    const double n = static_cast<double>(i + 1);
    Segment s;
    s.kind = Segment::Kind::Constant;
    s.c = LogScalar::from_log(std::log(n) - n * n);
    s.from = i == 0 ? LogScalar::zero()
                    : LogScalar::from_log((n - 1.0) * (n - 1.0));
    s.to = LogScalar::from_log(n * n);
    return s;
  }

  void validate() const {
    if (segments_.empty())
      throw std::invalid_argument("profile: needs at least one segment");
    const double rel_tol = 1e-12;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const Segment& s = segments_[i];
      const std::string where = "segment " + std::to_string(i) + ": ";
      if (!s.c.is_positive())
        throw std::invalid_argument(where + "coefficient must be positive");
      if (s.kind == Segment::Kind::Power && !(s.alpha > 0.0))
        throw std::invalid_argument(where + "power piece needs alpha > 0");
      if (i == 0) {
        if (!s.from.is_zero())
          throw std::invalid_argument(where + "first piece must start at 0");
        if (s.kind != Segment::Kind::Constant)
          throw std::invalid_argument(where +
                                      "first piece must be constant");
      } else {
        const Segment& prev = segments_[i - 1];
        if (prev.to.is_infinite())
          throw std::invalid_argument(where + "piece after infinite tail");
        if (s.from.is_zero() ||
            std::fabs(s.from.log_magnitude() - prev.to.log_magnitude()) >
                rel_tol * std::max(1.0, std::fabs(prev.to.log_magnitude())))
          throw std::invalid_argument(where + "junction gap");
        // Nonincreasing across the junction: the new piece's supremum must
        // not exceed the old piece's value at the junction.
        const LogScalar left = prev.right_value();
        const LogScalar right = s.left_limit_value();
        if (right.log_magnitude() >
            left.log_magnitude() +
                rel_tol * std::max(1.0, std::fabs(left.log_magnitude())))
          throw std::invalid_argument(where + "value increases at junction");
      }
      if (!s.to.is_infinite() && !(s.from < s.to))
        throw std::invalid_argument(where + "empty or reversed piece");
      if (i + 1 == segments_.size()) {
        if (!s.to.is_infinite())
          throw std::invalid_argument(where +
                                      "last piece must extend to infinity");
        if (s.kind == Segment::Kind::Constant)
          throw std::invalid_argument(
              where + "constant tail is not a decreasing profile");
      }
    }
  }

  std::string name_;
  std::vector<Segment> segments_;
  Generator generator_ = Generator::None;
  double scale_log_ = 0.0;
  double power_ = 1.0;
};

//! The tower-breakpoint profile whose averaging functionals disagree.
inline PiecewiseProfile make_counterexample() {
  return PiecewiseProfile::generated("counterexample",
                                     PiecewiseProfile::Generator::Counterexample);
}

//! The plateau profile with unbounded t mu(t) but convergent averages.
inline PiecewiseProfile make_spike() {
  return PiecewiseProfile::generated("spike", PiecewiseProfile::Generator::Spike);
}

//! c * min(1, 1/t): constant c on (0, 1], then c/t.
inline PiecewiseProfile make_canonical(double c = 1.0) {
  if (!(c > 0.0))
    throw std::domain_error("make_canonical: c must be positive");
  Segment head;
  head.kind = Segment::Kind::Constant;
  head.c = LogScalar::from_value(c);
  head.from = LogScalar::zero();
  head.to = LogScalar::from_log(0.0);
  Segment tail;
  tail.kind = Segment::Kind::Power;
  tail.c = LogScalar::from_value(c);
  tail.alpha = 1.0;
  tail.from = LogScalar::from_log(0.0);
  tail.to = LogScalar::infinity();
  return PiecewiseProfile::from_segments("canonical", {head, tail});
}

} // namespace asymlab
