#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace heunbc {

// Complex value carried as mantissa * exp(logscale).  The periodic-form
// solutions contain exp(-e^{2z}/2) factors whose modulus on shifted contours
// approaches the double-precision overflow threshold; sums and products of
// such values are formed in this representation and only collapsed to a plain
// double once a quotient or a normalized ratio makes the magnitude tame.
struct ScaledC {
  std::complex<double> m{0.0, 0.0};  // mantissa
  double logscale = 0.0;             // natural-log scale factor

  static ScaledC zero() { return {{0.0, 0.0}, 0.0}; }

  static ScaledC from(std::complex<double> v) {
    if (v == std::complex<double>(0.0, 0.0)) return zero();
    double a = std::abs(v);
    return {v / a, std::log(a)};
  }

  // exp(w) for complex w, without evaluating exp of the real part.
  static ScaledC expw(std::complex<double> w) {
    return {std::polar(1.0, w.imag()), w.real()};
  }

  bool is_zero() const { return m == std::complex<double>(0.0, 0.0); }

  ScaledC normalized() const {
    if (is_zero()) return zero();
    double a = std::abs(m);
    return {m / a, logscale + std::log(a)};
  }

  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return logscale + std::log(std::abs(m));
  }

  std::complex<double> value() const {
    if (is_zero()) return {0.0, 0.0};
    return m * std::exp(logscale);
  }

  friend ScaledC operator*(const ScaledC& x, const ScaledC& y) {
    if (x.is_zero() || y.is_zero()) return zero();
    return ScaledC{x.m * y.m, x.logscale + y.logscale}.normalized();
  }
  friend ScaledC operator*(const ScaledC& x, std::complex<double> v) {
    return x * from(v);
  }
  friend ScaledC operator/(const ScaledC& x, const ScaledC& y) {
    return ScaledC{x.m / y.m, x.logscale - y.logscale}.normalized();
  }
  friend ScaledC operator-(const ScaledC& x, const ScaledC& y) {
    return scaled_sum({x, ScaledC{-y.m, y.logscale}});
  }

  // Sum with a shared scale anchored at the largest term.
  static ScaledC scaled_sum(const std::vector<ScaledC>& terms) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms)
      if (!t.is_zero() && t.logscale > top) top = t.logscale;
    if (top == -std::numeric_limits<double>::infinity()) return zero();
    std::complex<double> acc{0.0, 0.0};
    for (const auto& t : terms)
      if (!t.is_zero()) acc += t.m * std::exp(t.logscale - top);
    return ScaledC{acc, top}.normalized();
  }
};

}  // namespace heunbc
