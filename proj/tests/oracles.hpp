#pragma once

// Reference values computed along routes independent of the library code
// under test: closed forms, finite differences, and textbook integrals.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// int_0^inf t^k exp(-t^2) dt = Gamma((k+1)/2) / 2.
inline double gaussian_moment(int k) {
  return 0.5 * std::tgamma(0.5 * (double(k) + 1.0));
}

// Central finite differences, h tuned for ~1e-9 accuracy on tame functions.
inline cplx fd1(const std::function<cplx(cplx)>& f, cplx z, double h = 1e-5) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}
inline cplx fd2(const std::function<cplx(cplx)>& f, cplx z, double h = 1e-5) {
  return (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
}

inline std::vector<cplx> quadratic_roots(cplx a, cplx b, cplx c) {
  cplx disc = std::sqrt(b * b - 4.0 * a * c);
  return {(-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a)};
}

}  // namespace oracle
