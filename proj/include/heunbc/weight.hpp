#pragma once

#include <vector>

#include "heunbc/cpoly.hpp"

namespace heunbc::weight {

using heunbc::cplx;

// Laurent tail of the orthogonality weight on a circle around the origin,
//   rho(z) = sum_{k>=0} a_k z^{-k},
//   a_0 = -n - alpha/2,
//   a_1 = beta a_0 / (1 + 2n + alpha),
//   a_k = (beta a_{k-1} + 2 a_{k-2}) / (2 - k + 2n + alpha).
// The coefficients are real for real alpha, beta.
struct WeightSeries {
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> a;

  int kmax() const { return int(a.size()) - 1; }
};

// True when 2 + 2n + alpha is a positive integer: a recursion denominator
// vanishes there and the weight series does not exist in this form.
bool degenerate(int n, double alpha);

WeightSeries weight_series(int n, double alpha, double beta, int kmax);

// beta = 0 closed form for the even coefficients, products of (j - q) with
// q = n + alpha/2; odd coefficients vanish.  Independent of the recursion.
std::vector<double> closed_form_even(int n, double alpha, int kmax);

cplx weight_eval(const WeightSeries& w, cplx z);
// As weight_eval, but fails with insufficient_truncation when the tail
// estimate at |z| exceeds 1e-12 of the absolute term sum.
cplx weight_eval_checked(const WeightSeries& w, cplx z);

// Upper estimate of sum_{k>kmax} |a_k| r^-k from the observed growth shape
// |a_k| ~ C c^k / sqrt(k!), plus a roundoff floor on the kept terms.
double tail_estimate(const WeightSeries& w, double radius);

// Residual of the first-order equation the weight satisfies,
//   (z^3 rho)' - [(1-2n-alpha) z^2 + beta z + 2] rho - (2+2n+alpha) a_0 z^2,
// normalised by the largest term.
double self_adjoint_residual(const WeightSeries& w, cplx z);

// (|a_k| sqrt(k!))^{1/k}; tends to sqrt 2 as k grows.
double growth_exponent(const WeightSeries& w, int k);

}  // namespace heunbc::weight
