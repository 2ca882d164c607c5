#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace asymlab {

//! ln(1 + e^u), stable for any u.
inline double log1p_exp(double u) {
  if (u > 0.0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

//! ln(e^d - 1) for d > 0, stable near both ends.
inline double log_expm1(double d) {
  if (d > 36.75) return d; // e^{-d} below double epsilon
  if (d > 0.6931471805599453) return d + std::log1p(-std::exp(-d));
  return std::log(std::expm1(d));
}

//! Sign-and-log representation of a real scalar.
//!
//! Stores sign(x) in {-1, 0, +1} and ln|x| as a double, so quantities like
//! e^{e^30} or e^{-e^30} remain representable and multiplicative arithmetic
//! is exact in the exponent.  Addition and subtraction go through
//! log-sum-exp.  Log magnitudes up to about 1.7e308 are usable; to_double()
//! saturates to 0 or +/-inf outside native double range.
class LogScalar {
public:
  constexpr LogScalar() : lm_(0.0), sign_(0) {}

  static constexpr LogScalar zero() { return LogScalar{}; }
  static LogScalar one() { return from_log(0.0); }

  //! +infinity as a LogScalar (log magnitude +inf).  Useful as an
  //! integration endpoint; arithmetic on infinities is not supported.
  static LogScalar infinity() {
    return from_log(std::numeric_limits<double>::infinity());
  }

  //! The value sign * e^{lm}.
  static LogScalar from_log(double lm, int sign = +1) {
    if (sign == 0) return zero();
    if (sign != 1 && sign != -1)
      throw std::invalid_argument("LogScalar: sign must be -1, 0 or +1");
    if (std::isnan(lm))
      throw std::invalid_argument("LogScalar: log magnitude is NaN");
    if (lm == -std::numeric_limits<double>::infinity()) return zero();
    LogScalar r;
    r.sign_ = static_cast<std::int8_t>(sign);
    r.lm_ = lm;
    return r;
  }

  static LogScalar from_value(double v) {
    if (std::isnan(v)) throw std::invalid_argument("LogScalar: value is NaN");
    if (v == 0.0) return zero();
    return from_log(std::log(std::fabs(v)), v > 0.0 ? +1 : -1);
  }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  bool is_positive() const { return sign_ > 0; }
  bool is_negative() const { return sign_ < 0; }
  bool is_infinite() const {
    return sign_ != 0 && std::isinf(lm_) && lm_ > 0.0;
  }

  //! ln|x|.  Throws for the zero value, which has no log magnitude.
  double log_magnitude() const {
    if (sign_ == 0)
      throw std::domain_error("LogScalar: log magnitude of zero");
    return lm_;
  }

  //! Nearest double; saturates to 0 below and +/-inf above native range.
  double to_double() const {
    if (sign_ == 0) return 0.0;
    const double m = std::exp(lm_);
    return sign_ > 0 ? m : -m;
  }

  LogScalar operator-() const {
    LogScalar r = *this;
    r.sign_ = static_cast<std::int8_t>(-r.sign_);
    return r;
  }

  LogScalar abs() const {
    LogScalar r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
  }

  friend LogScalar operator+(const LogScalar& a, const LogScalar& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    if (a.sign_ == b.sign_) {
      const double hi = std::max(a.lm_, b.lm_);
      const double lo = std::min(a.lm_, b.lm_);
      return from_log(hi + std::log1p(std::exp(lo - hi)), a.sign_);
    }
    // Opposite signs: the larger magnitude wins.
    if (a.lm_ == b.lm_) return zero();
    const bool a_wins = a.lm_ > b.lm_;
    const double hi = a_wins ? a.lm_ : b.lm_;
    const double lo = a_wins ? b.lm_ : a.lm_;
    const double lm = hi + std::log1p(-std::exp(lo - hi));
    return from_log(lm, a_wins ? a.sign_ : b.sign_);
  }

  friend LogScalar operator-(const LogScalar& a, const LogScalar& b) {
    return a + (-b);
  }

  friend LogScalar operator*(const LogScalar& a, const LogScalar& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return zero();
    return from_log(a.lm_ + b.lm_, a.sign_ * b.sign_);
  }

  friend LogScalar operator/(const LogScalar& a, const LogScalar& b) {
    if (b.sign_ == 0) throw std::domain_error("LogScalar: division by zero");
    if (a.sign_ == 0) return zero();
    return from_log(a.lm_ - b.lm_, a.sign_ * b.sign_);
  }

  LogScalar& operator+=(const LogScalar& o) { return *this = *this + o; }
  LogScalar& operator-=(const LogScalar& o) { return *this = *this - o; }
  LogScalar& operator*=(const LogScalar& o) { return *this = *this * o; }
  LogScalar& operator/=(const LogScalar& o) { return *this = *this / o; }

  //! x^e for positive x (and for x = 0 with e > 0).
  LogScalar pow(double e) const {
    if (sign_ == 0) {
      if (e > 0.0) return zero();
      if (e == 0.0) return one();
      throw std::domain_error("LogScalar: 0 raised to a non-positive power");
    }
    if (sign_ < 0)
      throw std::domain_error("LogScalar: power of a negative value");
    if (e == 0.0) return one();
    return from_log(lm_ * e);
  }

  friend bool operator==(const LogScalar& a, const LogScalar& b) {
    if (a.sign_ != b.sign_) return false;
    return a.sign_ == 0 || a.lm_ == b.lm_;
  }
  friend bool operator!=(const LogScalar& a, const LogScalar& b) {
    return !(a == b);
  }
  friend bool operator<(const LogScalar& a, const LogScalar& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    if (a.sign_ == 0) return false;
    return a.sign_ > 0 ? a.lm_ < b.lm_ : a.lm_ > b.lm_;
  }
  friend bool operator>(const LogScalar& a, const LogScalar& b) { return b < a; }
  friend bool operator<=(const LogScalar& a, const LogScalar& b) {
    return !(b < a);
  }
  friend bool operator>=(const LogScalar& a, const LogScalar& b) {
    return !(a < b);
  }

  std::string str() const {
    if (sign_ == 0) return "0";
    std::string s = sign_ < 0 ? "-e^" : "e^";
    return s + std::to_string(lm_);
  }

private:
  double lm_;
  std::int8_t sign_;
};

//! e^{-u} as a LogScalar.  Exact in the exponent: the result's log
//! magnitude is -u, so values like e^{-e^{30}} stay meaningful.  For u so
//! large that e^{ln u} overflows a double the result is the zero value.
inline LogScalar exp_neg(const LogScalar& u) {
  if (u.is_zero()) return LogScalar::one();
  const double uv = u.to_double();
  if (std::isinf(uv)) {
    if (uv > 0.0) return LogScalar::zero();
    throw std::overflow_error("exp_neg: exponent overflows double range");
  }
  return LogScalar::from_log(-uv);
}

//! ln x as a plain double (x > 0 required).
inline double log_of(const LogScalar& x) {
  if (!x.is_positive())
    throw std::domain_error("log_of: argument must be positive");
  return x.log_magnitude();
}

} // namespace asymlab
