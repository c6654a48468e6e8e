#include "heunbc/weight.hpp"

#include <algorithm>
#include <cmath>

#include "heunbc/error.hpp"

namespace heunbc::weight {

bool degenerate(int n, double alpha) {
  double t = 2.0 + 2.0 * double(n) + alpha;
  double r = std::round(t);
  return r >= 0.5 && std::abs(t - r) < 1e-9;
}

WeightSeries weight_series(int n, double alpha, double beta, int kmax) {
  if (n < 0) fail(errc::invalid_argument, "weight_series: negative index");
  if (kmax < 2) fail(errc::invalid_argument, "weight_series: kmax below 2");
  if (degenerate(n, alpha))
    fail(errc::degenerate_parameter,
         "weight_series: 2 + 2n + alpha is a positive integer");
  WeightSeries w;
  w.n = n;
  w.alpha = alpha;
  w.beta = beta;
  w.a.assign(size_t(kmax) + 1, 0.0);
  double s = 2.0 * double(n) + alpha;
  w.a[0] = -double(n) - alpha / 2.0;
  w.a[1] = beta * w.a[0] / (1.0 + s);
  for (int k = 2; k <= kmax; ++k)
    w.a[size_t(k)] = (beta * w.a[size_t(k) - 1] + 2.0 * w.a[size_t(k) - 2]) /
                     (2.0 - double(k) + s);
  return w;
}

std::vector<double> closed_form_even(int n, double alpha, int kmax) {
  if (degenerate(n, alpha))
    fail(errc::degenerate_parameter,
         "closed_form_even: 2 + 2n + alpha is a positive integer");
  double q = double(n) + alpha / 2.0;
  std::vector<double> even;
  for (int k = 0; 2 * k <= kmax; ++k) {
    if (k == 0) {
      even.push_back(-q);
      continue;
    }
    double v = (k % 2 == 0) ? 1.0 : -1.0;
    for (int j = 1; j <= k - 1; ++j) v /= (double(j) - q);
    even.push_back(v);
  }
  return even;
}

cplx weight_eval(const WeightSeries& w, cplx z) {
  if (z == cplx{0.0, 0.0})
    fail(errc::evaluation, "weight_eval: z = 0 is outside the annulus");
  cplx iz = 1.0 / z;
  cplx v{0.0, 0.0};
  for (size_t k = w.a.size(); k-- > 0;) v = v * iz + w.a[k];
  return v;
}

cplx weight_eval_checked(const WeightSeries& w, cplx z) {
  cplx v = weight_eval(w, z);
  double r = std::abs(z);
  double scale = 0.0;
  for (size_t k = 0; k < w.a.size(); ++k)
    scale += std::abs(w.a[k]) * std::pow(r, -double(k));
  if (tail_estimate(w, r) > 1e-12 * scale)
    fail(errc::insufficient_truncation,
         "weight_eval_checked: series truncated too early for this radius");
  return v;
}

double tail_estimate(const WeightSeries& w, double radius) {
  // Fit the prefactor of |a_k| ~ C c^k / sqrt(k!) on the last kept stretch,
  // with c slightly above the asymptotic sqrt 2 for safety.
  const double c = std::sqrt(2.0) + 0.5;
  const double logc = std::log(c);
  int kmax = w.kmax();
  double logC = -1e30;
  for (int k = std::max(2, kmax - 8); k <= kmax; ++k) {
    double ak = std::abs(w.a[size_t(k)]);
    if (ak == 0.0) continue;
    logC = std::max(logC, std::log(ak) + 0.5 * std::lgamma(double(k) + 1.0) -
                              double(k) * logc);
  }
  double tail = 0.0;
  if (logC > -1e29) {
    double logr = std::log(radius);
    for (int k = kmax + 1; k <= kmax + 240; ++k) {
      double lt = logC + double(k) * logc -
                  0.5 * std::lgamma(double(k) + 1.0) - double(k) * logr;
      tail += std::exp(lt);
    }
  }
  double kept = 0.0;
  for (size_t k = 0; k < w.a.size(); ++k)
    kept += std::abs(w.a[k]) * std::pow(radius, -double(k));
  return tail + 2.22e-16 * kept;
}

double self_adjoint_residual(const WeightSeries& w, cplx z) {
  cplx iz = 1.0 / z;
  cplx rho{0.0, 0.0}, drho{0.0, 0.0};
  for (size_t k = w.a.size(); k-- > 0;) {
    rho = rho * iz + w.a[k];
    drho = drho * iz - double(k) * w.a[k] * iz;
  }
  double s = 2.0 * double(w.n) + w.alpha;
  cplx t1 = 3.0 * z * z * rho + z * z * z * drho;
  cplx t2 = -((1.0 - s) * z * z + w.beta * z + 2.0) * rho;
  cplx t3 = -(2.0 + s) * w.a[0] * z * z;
  double top = std::max({1.0, std::abs(t1), std::abs(t2), std::abs(t3)});
  return std::abs(t1 + t2 + t3) / top;
}

double growth_exponent(const WeightSeries& w, int k) {
  if (k < 1 || k > w.kmax())
    fail(errc::invalid_argument, "growth_exponent: k out of range");
  double ak = std::abs(w.a[size_t(k)]);
  if (ak == 0.0) fail(errc::evaluation, "growth_exponent: zero coefficient");
  return std::exp((std::log(ak) + 0.5 * std::lgamma(double(k) + 1.0)) /
                  double(k));
}

}  // namespace heunbc::weight
