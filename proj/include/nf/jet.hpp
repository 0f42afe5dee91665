#pragma once

#include <cmath>
#include <stdexcept>

namespace nf {

// Truncated second-order Taylor element in two designated directions a, b:
// value, the two directional derivatives, and the mixed second derivative.
// All arithmetic is exact to machine rounding; there is no truncation error.
struct Jet2 {
  double v = 0.0;
  double da = 0.0;
  double db = 0.0;
  double dab = 0.0;

  static Jet2 constant(double c) { return {c, 0.0, 0.0, 0.0}; }
};

inline Jet2 operator+(const Jet2& x, const Jet2& y) {
  return {x.v + y.v, x.da + y.da, x.db + y.db, x.dab + y.dab};
}

inline Jet2 operator-(const Jet2& x, const Jet2& y) {
  return {x.v - y.v, x.da - y.da, x.db - y.db, x.dab - y.dab};
}

inline Jet2 operator-(const Jet2& x) { return {-x.v, -x.da, -x.db, -x.dab}; }

inline Jet2 operator*(const Jet2& x, const Jet2& y) {
  return {x.v * y.v,
          x.da * y.v + x.v * y.da,
          x.db * y.v + x.v * y.db,
          x.dab * y.v + x.da * y.db + x.db * y.da + x.v * y.dab};
}

struct JetDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Jet2 operator/(const Jet2& x, const Jet2& y) {
  if (y.v == 0.0) throw JetDomainError("division by zero");
  const double q = x.v / y.v;
  const double da = (x.da - q * y.da) / y.v;
  const double db = (x.db - q * y.db) / y.v;
  const double dab = (x.dab - da * y.db - db * y.da - q * y.dab) / y.v;
  return {q, da, db, dab};
}

// Chain rule for a univariate f applied to a jet u:
// d_a = f'(u) u_a, d_b = f'(u) u_b, d_ab = f''(u) u_a u_b + f'(u) u_ab.
inline Jet2 lift(const Jet2& u, double f, double fp, double fpp) {
  return {f, fp * u.da, fp * u.db, fpp * u.da * u.db + fp * u.dab};
}

inline Jet2 sin(const Jet2& u) { return lift(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v)); }
inline Jet2 cos(const Jet2& u) { return lift(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v)); }
inline Jet2 exp(const Jet2& u) {
  const double e = std::exp(u.v);
  return lift(u, e, e, e);
}
inline Jet2 sinh(const Jet2& u) { return lift(u, std::sinh(u.v), std::cosh(u.v), std::sinh(u.v)); }
inline Jet2 cosh(const Jet2& u) { return lift(u, std::cosh(u.v), std::sinh(u.v), std::cosh(u.v)); }
inline Jet2 tanh(const Jet2& u) {
  const double t = std::tanh(u.v);
  const double sech2 = 1.0 - t * t;
  return lift(u, t, sech2, -2.0 * t * sech2);
}
inline Jet2 sqrt(const Jet2& u) {
  if (u.v < 0.0) throw JetDomainError("sqrt of negative value");
  if (u.v == 0.0 && (u.da != 0.0 || u.db != 0.0 || u.dab != 0.0))
    throw JetDomainError("sqrt not differentiable at zero");
  const double s = std::sqrt(u.v);
  const double fp = u.v == 0.0 ? 0.0 : 0.5 / s;
  const double fpp = u.v == 0.0 ? 0.0 : -0.25 / (s * u.v);
  return lift(u, s, fp, fpp);
}
inline Jet2 log(const Jet2& u) {
  if (u.v <= 0.0) throw JetDomainError("log of non-positive value");
  return lift(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
}

inline Jet2 pow(const Jet2& x, const Jet2& y) {
  const bool const_exponent = y.da == 0.0 && y.db == 0.0 && y.dab == 0.0;
  if (const_exponent) {
    const double p = y.v;
    if (p == 0.0) return Jet2::constant(1.0);
    if (x.v == 0.0 && p < 2.0 && (x.da != 0.0 || x.db != 0.0)) {
      if (p < 1.0) throw JetDomainError("pow not differentiable at zero base");
    }
    const double f = std::pow(x.v, p);
    const double fp = p * std::pow(x.v, p - 1.0);
    const double fpp = p * (p - 1.0) * std::pow(x.v, p - 2.0);
    return lift(x, f, fp, fpp);
  }
  if (x.v <= 0.0) throw JetDomainError("pow with varying exponent needs positive base");
  return exp(y * log(x));
}

// Carrier-generic helpers so the expression evaluator can run on plain doubles
// with the same spelling.
inline double lift_pow(double x, double y) { return std::pow(x, y); }
inline Jet2 lift_pow(const Jet2& x, const Jet2& y) { return pow(x, y); }

}  // namespace nf
