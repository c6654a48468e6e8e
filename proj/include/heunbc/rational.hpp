#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "heunbc/cpoly.hpp"

namespace heunbc::rational {

// Exact rational from a literal: a fraction "7/3" or a terminating decimal
// "0.25", "-3".  Scientific notation is not accepted.  Throws
// invalid_argument on anything else.
mpq_class mpq_from_decimal(const std::string& text);

// Element a + b*sqrt(2) of the real quadratic field Q(sqrt 2).  Closed under
// the four operations; inversion uses the conjugate, and the norm a^2 - 2b^2
// vanishes only at zero, so every nonzero element divides.
struct Q2 {
  mpq_class a{0}, b{0};

  Q2() = default;
  Q2(long v) : a(v) {}
  Q2(mpq_class ra) : a(std::move(ra)) {}
  Q2(mpq_class ra, mpq_class rb) : a(std::move(ra)), b(std::move(rb)) {}
  static Q2 sqrt2(mpq_class m = 1) { return Q2(0, std::move(m)); }

  bool is_zero() const { return a == 0 && b == 0; }
  double to_double() const;

  Q2 operator-() const { return Q2(-a, -b); }
  friend Q2 operator+(const Q2& x, const Q2& y) { return Q2(x.a + y.a, x.b + y.b); }
  friend Q2 operator-(const Q2& x, const Q2& y) { return Q2(x.a - y.a, x.b - y.b); }
  friend Q2 operator*(const Q2& x, const Q2& y) {
    return Q2(x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a);
  }
  friend Q2 operator/(const Q2& x, const Q2& y);
  friend bool operator==(const Q2& x, const Q2& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(const Q2& x, const Q2& y) { return !(x == y); }
};

struct Q2DivResult;

// Dense univariate polynomial over Q2 with exact arithmetic throughout: no
// trimming thresholds, a coefficient is zero only when it is exactly zero.
class Q2Poly {
 public:
  Q2Poly() = default;
  explicit Q2Poly(std::vector<Q2> coeffs);
  static Q2Poly constant(Q2 c) { return Q2Poly({std::move(c)}); }
  static Q2Poly monomial(int k, Q2 c);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return is_zero() ? -1 : int(c_.size()) - 1; }
  const std::vector<Q2>& coeffs() const { return c_; }
  Q2 operator[](int k) const {
    return (k < 0 || k >= int(c_.size())) ? Q2() : c_[size_t(k)];
  }

  CPoly to_cpoly() const;

  friend Q2Poly operator+(const Q2Poly& x, const Q2Poly& y);
  friend Q2Poly operator-(const Q2Poly& x, const Q2Poly& y);
  friend Q2Poly operator*(const Q2Poly& x, const Q2Poly& y);

  // Exact long division; throws division_error on a zero divisor.
  static Q2DivResult divide(const Q2Poly& x, const Q2Poly& y);

 private:
  std::vector<Q2> c_;
};

struct Q2DivResult {
  Q2Poly quotient, remainder;
};

}  // namespace heunbc::rational
