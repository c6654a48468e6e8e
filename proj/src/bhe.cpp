#include "heunbc/bhe.hpp"

#include <algorithm>
#include <cmath>

#include "heunbc/error.hpp"

namespace heunbc::bhe {

namespace {

double residual_of_terms(const std::vector<cplx>& terms) {
  cplx sum{0.0, 0.0};
  double top = 1.0;
  for (const auto& t : terms) {
    sum += t;
    top = std::max(top, std::abs(t));
  }
  return std::abs(sum) / top;
}

}  // namespace

double pochhammer(double a, int n) {
  double p = 1.0;
  for (int j = 0; j < n; ++j) p *= a + double(j);
  return p;
}

double factorial(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= double(j);
  return f;
}

PbheCoeffs pbhe_from_bhe(const BheParams& p) {
  PbheCoeffs k;
  k.K4 = -1.0;
  k.K3 = -p.beta;
  k.K2 = p.gamma - p.beta * p.beta / 4.0;
  k.K1 = -0.5 * p.delta;
  k.K0 = -p.alpha * p.alpha / 4.0;
  k.sigma = 0.5 * p.alpha;
  return k;
}

BheParams bhe_from_pbhe(const PbheCoeffs& k) {
  if (k.K4 != -1.0)
    fail(errc::precondition, "bhe_from_pbhe: quartic coefficient must be -1");
  BheParams p;
  p.alpha = 2.0 * k.sigma;
  p.beta = -k.K3;
  p.gamma = k.K2 + k.K3 * k.K3 / 4.0;
  p.delta = -2.0 * k.K1;
  if (std::abs(k.K0 + p.alpha * p.alpha / 4.0) > 1e-9 * (1.0 + std::abs(k.K0)))
    fail(errc::precondition, "bhe_from_pbhe: K0 inconsistent with sigma");
  return p;
}

std::vector<cplx> series_coeffs(const BheParams& p, int kmax) {
  if (kmax < 0) fail(errc::invalid_argument, "series_coeffs: negative kmax");
  std::vector<cplx> a(size_t(kmax) + 1, cplx{0.0, 0.0});
  a[0] = 1.0;
  if (kmax >= 1) a[1] = p.theta();
  for (int k = 0; k + 2 <= kmax; ++k) {
    double kk = double(k);
    a[size_t(k) + 2] = ((kk + 1.0) * p.beta + p.theta()) * a[size_t(k) + 1] -
                       (kk + 1.0) * (kk + 1.0 + p.alpha) *
                           (p.gamma - p.alpha - 2.0 - 2.0 * kk) * a[size_t(k)];
  }
  return a;
}

CPoly eigenvalue_poly(int m, double alpha, double beta) {
  if (m < 0) fail(errc::invalid_argument, "eigenvalue_poly: negative degree");
  // theta as a linear polynomial in delta.
  CPoly theta({cplx{0.5 * beta * (1.0 + alpha), 0.0}, cplx{0.5, 0.0}});
  CPoly prev = CPoly::constant(1.0);
  CPoly cur = theta;
  for (int k = 0; k + 1 <= m; ++k) {
    double kk = double(k);
    CPoly lin = theta + CPoly::constant((kk + 1.0) * beta);
    double drop = (kk + 1.0) * (kk + 1.0 + alpha) * (2.0 * double(m) - 2.0 * kk);
    CPoly next = lin * cur - prev.scaled(drop);
    prev = cur;
    cur = next;
  }
  return cur;
}

HautotSolution solution_at(int m, double alpha, double beta, cplx delta,
                           int nu, int multiplicity) {
  if (m < 0) fail(errc::invalid_argument, "solution_at: negative degree");
  for (int j = 0; j < m; ++j)
    if (std::abs(1.0 + alpha + double(j)) < 1e-9)
      fail(errc::precondition,
           "alpha in {-1,...,-m} degenerates the series normalisation");

  HautotSolution s;
  s.m = m;
  s.nu = nu;
  s.multiplicity = multiplicity;
  s.delta = delta;
  s.params.alpha = alpha;
  s.params.beta = beta;
  s.params.gamma = alpha + 2.0 * double(m + 1);
  s.params.delta = delta;

  auto a = series_coeffs(s.params, m);
  std::vector<cplx> c(size_t(m) + 1, cplx{0.0, 0.0});
  for (int k = 0; k <= m; ++k)
    c[size_t(k)] = a[size_t(k)] / (pochhammer(1.0 + alpha, k) * factorial(k));
  s.poly = CPoly(std::move(c));
  s.reversed = s.poly.reversed(m);
  return s;
}

std::vector<HautotSolution> hautot(int m, double alpha, double beta) {
  if (m < 0) fail(errc::invalid_argument, "hautot: negative degree");
  CPoly ev = eigenvalue_poly(m, alpha, beta);
  std::vector<cplx> deltas = ev.roots();

  std::vector<HautotSolution> out;
  size_t i = 0;
  int nu = 0;
  while (i < deltas.size()) {
    size_t j = i + 1;
    double tol = 1e-7 * (1.0 + std::abs(deltas[i]));
    while (j < deltas.size() && std::abs(deltas[j] - deltas[j - 1]) < tol) ++j;
    cplx rep{0.0, 0.0};
    for (size_t t = i; t < j; ++t) rep += deltas[t];
    rep /= double(j - i);
    out.push_back(solution_at(m, alpha, beta, rep, nu++, int(j - i)));
    i = j;
  }
  return out;
}

double bhe_residual(const BheParams& p, const CPoly& u, cplx z) {
  auto [v, d1, d2] = u.eval12(z);
  std::vector<cplx> terms{
      z * d2,
      (1.0 + p.alpha - p.beta * z - 2.0 * z * z) * d1,
      ((p.gamma - p.alpha - 2.0) * z - p.theta()) * v,
  };
  return residual_of_terms(terms);
}

double reversed_residual(const BheParams& p, int m, const CPoly& y, cplx x) {
  auto [v, d1, d2] = y.eval12(x);
  double mm = double(m);
  std::vector<cplx> terms{
      x * x * x * d2,
      ((1.0 - 2.0 * mm - p.alpha) * x * x + p.beta * x + 2.0) * d1,
      ((p.alpha + mm) * mm * x - p.beta * mm - p.theta()) * v,
  };
  return residual_of_terms(terms);
}

double gen_bessel_residual(const PbheCoeffs& k, const CPoly& u, cplx x) {
  auto [v, d1, d2] = u.eval12(x);
  // Psi = x^sigma exp(-beta x/2 - x^2/2) u with beta = -K3; the prefactor is
  // factored out of the residual, leaving log-derivative corrections.
  double beta = -k.K3;
  cplx wp = k.sigma / x - 0.5 * beta - x;
  cplx wpp = -k.sigma / (x * x) - 1.0;
  cplx psi2 = d2 + 2.0 * wp * d1 + (wpp + wp * wp) * v;
  cplx psi1 = d1 + wp * v;
  cplx kpoly = ((((k.K4 * x) + k.K3) * x + k.K2) * x + k.K1) * x + k.K0;
  std::vector<cplx> terms{x * x * psi2, x * psi1, kpoly * v};
  return residual_of_terms(terms);
}

}  // namespace heunbc::bhe
