#include "heunbc/qes.hpp"

#include <algorithm>
#include <cmath>

#include "heunbc/error.hpp"

namespace heunbc::qes {

namespace {

constexpr double sqrt2 = 1.4142135623730951;

void validate(double s, int J) {
  if (!(s > 0.0)) fail(errc::precondition, "s must be positive");
  if (J < 0) fail(errc::invalid_argument, "J must be nonnegative");
}

// Sum of |c_j| |E|^j, the scale against which an evaluation of the
// polynomial can meaningfully be called zero.
double eval_scale(const CPoly& p, cplx E) {
  double scale = 0.0, pw = 1.0, ae = std::abs(E);
  for (int j = 0; j <= p.degree(); ++j) {
    scale += std::abs(p[j]) * pw;
    pw *= ae;
  }
  return scale;
}

// The terminating series factor S(x) = sum_{k<J} (-1/4)^k P_k(E) /
// (k! Gamma(k+2s)) x^{2k}, as a polynomial in x.
CPoly series_factor(const TurbinerParams& p) {
  auto polys = bender_dunne_polys(p.s, p.J, p.c, std::max(1, p.J - 1));
  std::vector<cplx> v(size_t(2 * (p.J - 1)) + 1, cplx{0.0, 0.0});
  double sign = 1.0;
  for (int k = 0; k <= p.J - 1; ++k) {
    v[size_t(2 * k)] = sign * polys[size_t(k)].eval(p.E) /
                       (bhe::factorial(k) * std::tgamma(double(k) + 2.0 * p.s));
    sign *= -0.25;
  }
  return CPoly(std::move(v));
}

}  // namespace

bhe::BheParams bhe_from_turbiner(const TurbinerParams& p) {
  validate(p.s, p.J);
  bhe::BheParams q;
  q.alpha = 2.0 * p.s - 1.0;
  q.beta = sqrt2 * p.c / 2.0;
  q.gamma = 2.0 * double(p.J) + 2.0 * p.s - 1.0;
  q.delta = -sqrt2 * p.E / 2.0 - p.c * p.c / 4.0;
  return q;
}

std::vector<CPoly> bender_dunne_polys(double s, int J, double c, int kmax) {
  validate(s, J);
  if (kmax < 1) fail(errc::invalid_argument, "kmax must be at least 1");
  std::vector<CPoly> P;
  P.reserve(size_t(kmax) + 1);
  P.push_back(CPoly::constant(1.0));
  P.push_back(CPoly({cplx{-(2.0 * c * s - sqrt2 * c * c / 4.0), 0.0}, cplx{1.0, 0.0}}));
  for (int k = 2; k <= kmax; ++k) {
    double shift = 2.0 * c * double(k - 1) + 2.0 * c * s - sqrt2 * c * c / 4.0;
    double drop =
        16.0 * double(k - 1) * (double(k - 2) + 2.0 * s) * double(J + 1 - k);
    CPoly lin({cplx{-shift, 0.0}, cplx{1.0, 0.0}});
    P.push_back(lin * P[size_t(k) - 1] - CPoly::constant(drop) * P[size_t(k) - 2]);
  }
  return P;
}

std::vector<rational::Q2Poly> bender_dunne_polys_exact(const mpq_class& s, int J,
                                                       const mpq_class& c, int kmax) {
  if (!(s > 0)) fail(errc::precondition, "s must be positive");
  if (J < 0) fail(errc::invalid_argument, "J must be nonnegative");
  if (kmax < 1) fail(errc::invalid_argument, "kmax must be at least 1");
  using rational::Q2;
  using rational::Q2Poly;
  std::vector<Q2Poly> P;
  P.reserve(size_t(kmax) + 1);
  P.push_back(Q2Poly::constant(Q2(1)));
  P.push_back(Q2Poly({Q2(-2 * c * s, c * c / 4), Q2(1)}));
  for (int k = 2; k <= kmax; ++k) {
    Q2 shift(2 * c * (k - 1) + 2 * c * s, -c * c / 4);
    Q2 drop(16 * (k - 1) * (k - 2 + 2 * s) * (J + 1 - k));
    Q2Poly lin({-shift, Q2(1)});
    P.push_back(lin * P[size_t(k) - 1] - Q2Poly::constant(drop) * P[size_t(k) - 2]);
  }
  return P;
}

std::vector<FactorStep> factorization_check(double s, int J, double c, int nmax) {
  validate(s, J);
  if (J < 1) fail(errc::precondition, "factorization needs J >= 1");
  auto P = bender_dunne_polys(s, J, c, J + std::max(1, nmax));
  std::vector<FactorStep> out;
  for (int n = 1; n <= nmax; ++n) {
    auto div = CPoly::divide(P[size_t(J + n)], P[size_t(J)]);
    double scale = std::max(1.0, P[size_t(J + n)].max_abs_coeff());
    out.push_back({div.quotient, div.remainder.max_abs_coeff() / scale});
  }
  return out;
}

std::vector<FactorStepExact> factorization_check_exact(const mpq_class& s, int J,
                                                       const mpq_class& c, int nmax) {
  if (J < 1) fail(errc::precondition, "factorization needs J >= 1");
  auto P = bender_dunne_polys_exact(s, J, c, J + std::max(1, nmax));
  std::vector<FactorStepExact> out;
  for (int n = 1; n <= nmax; ++n) {
    auto div = rational::Q2Poly::divide(P[size_t(J + n)], P[size_t(J)]);
    out.push_back({div.quotient, div.remainder.is_zero()});
  }
  return out;
}

std::vector<double> qes_spectrum(double s, int J, double c) {
  validate(s, J);
  if (J == 0) return {};
  CPoly A = bhe::eigenvalue_poly(J - 1, 2.0 * s - 1.0, sqrt2 * c / 2.0);
  auto deltas = A.roots();
  std::vector<double> out;
  double scale = 1.0;
  std::vector<cplx> energies;
  for (cplx d : deltas) {
    cplx E = -sqrt2 * (d + c * c / 4.0);
    energies.push_back(E);
    scale = std::max(scale, std::abs(E));
  }
  for (cplx E : energies) {
    if (std::abs(E.imag()) > 1e-7 * scale)
      fail(errc::verification, "spectrum contains a non-real energy");
    out.push_back(E.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

CPoly qes_det_poly(double s, int J, double c) {
  validate(s, J);
  if (J == 0) return CPoly::constant(1.0);
  double sigma = (2.0 * s - 1.0) / 2.0;
  double K3 = -sqrt2 * c / 2.0;
  double k2 = 2.0 * double(J - 1);
  CPoly k1({cplx{sqrt2 * c * s / 2.0 - c * c / 8.0, 0.0}, cplx{-sqrt2 / 4.0, 0.0}});
  CPoly prev = CPoly::constant(1.0);
  CPoly cur = k1;
  for (int j = 2; j <= J; ++j) {
    CPoly shifted = k1 - CPoly::constant(double(j - 1) * K3);
    double sub = double(j - 1) * (double(j - 1) + 2.0 * sigma) * (k2 - 2.0 * double(j - 2));
    CPoly next = shifted * cur - CPoly::constant(sub) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

cplx wavefunction(const TurbinerParams& p, cplx x) {
  validate(p.s, p.J);
  if (p.J == 0) fail(errc::precondition, "the polynomial sector is empty for J = 0");
  auto polys = bender_dunne_polys(p.s, p.J, p.c, p.J);
  const CPoly& PJ = polys[size_t(p.J)];
  if (std::abs(PJ.eval(p.E)) > 1e-8 * std::max(1.0, eval_scale(PJ, p.E)))
    fail(errc::precondition, "the energy does not terminate the series");
  double expo = 2.0 * p.s - 0.5;
  cplx head;
  if (std::abs(x) == 0.0) {
    if (expo < 0.0) fail(errc::precondition, "x = 0 is singular for this exponent");
    head = expo == 0.0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
  } else {
    head = std::pow(x, expo);
  }
  cplx x2 = x * x;
  cplx pref = std::exp(-x2 * x2 / 4.0 - p.c * x2 / 4.0) * head;
  return pref * series_factor(p).eval(x);
}

double wavefunction_residual(const TurbinerParams& p, cplx x) {
  validate(p.s, p.J);
  if (p.J == 0) fail(errc::precondition, "the polynomial sector is empty for J = 0");
  if (std::abs(x) < 1e-8)
    fail(errc::invalid_argument, "the residual needs x away from the coordinate singularity");
  auto jet = series_factor(p).eval12(x);
  double expo = 2.0 * p.s - 0.5;
  cplx x2 = x * x;
  cplx l = -x * x2 - p.c * x / 2.0 + expo / x;
  cplx lp = -3.0 * x2 - p.c / 2.0 - expo / x2;
  cplx V = (4.0 * p.s - 1.0) * (4.0 * p.s - 3.0) / (4.0 * x2) -
           (4.0 * p.s + 4.0 * double(p.J) - 2.0 - p.c * p.c / 4.0) * x2 + p.c * x2 * x2 +
           x2 * x2 * x2 - sqrt2 * p.c * p.c / 4.0;
  cplx t1 = (l * l + lp) * jet.v;
  cplx t2 = 2.0 * l * jet.d1;
  cplx t3 = jet.d2;
  cplx t4 = (V - p.E) * jet.v;
  double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4), 1e-300});
  return std::abs(-(t1 + t2 + t3) + t4) / scale;
}

bhe::PbheCoeffs periodic_turbiner_coeffs(const TurbinerParams& p) {
  validate(p.s, p.J);
  bhe::PbheCoeffs k;
  k.K4 = -1.0;
  k.K3 = -sqrt2 * p.c / 2.0;
  k.K2 = 2.0 * double(p.J) + 2.0 * p.s - 1.0 - p.c * p.c / 8.0;
  k.K1 = sqrt2 * p.E / 4.0 + p.c * p.c / 8.0;
  k.K0 = -(2.0 * p.s - 1.0) * (2.0 * p.s - 1.0) / 4.0;
  k.sigma = (2.0 * p.s - 1.0) / 2.0;
  return k;
}

ConditionReport condition_check(double s, int J, double c) {
  validate(s, J);
  ConditionReport r;
  double mid = 4.0 * c * c + 2.0 * (2.0 * s + 2.0 * double(J) + 1.0);
  r.literal_plus = mid + (2.0 * s - 1.0);
  r.literal_minus = mid - (2.0 * s - 1.0);
  r.literal_rhs = 4.0 * double(J + 1);
  r.literal_holds = std::abs(r.literal_plus - r.literal_rhs) < 1e-12 ||
                    std::abs(r.literal_minus - r.literal_rhs) < 1e-12;
  TurbinerParams p{s, J, c, cplx{0.0, 0.0}};
  auto k = periodic_turbiner_coeffs(p);
  r.derived_defect =
      std::abs(k.K3 * k.K3 / 4.0 + k.K2 - 2.0 * k.sigma - 2.0 * double(J));
  r.derived_holds = r.derived_defect < 1e-12;
  return r;
}

}  // namespace heunbc::qes
