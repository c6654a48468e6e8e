#include "heunbc/spectra.hpp"

#include <cmath>

#include "heunbc/error.hpp"

namespace heunbc::spectra {

namespace {

double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

double condition_value(double K3, double K2, double K0, Branch b) {
  return K3 * K3 / 4.0 + K2 + branch_sign(b) * 2.0 * std::sqrt(-K0);
}

}  // namespace

std::optional<int> check_termination(double K3, double K2, double K0,
                                     Branch b) {
  if (K0 > 0.0) return std::nullopt;
  double v = condition_value(K3, K2, K0, b);
  double n = v / 2.0 - 1.0;
  long r = std::lround(n);
  if (r < 0) return std::nullopt;
  if (std::abs(n - double(r)) > 1e-9 * (1.0 + std::abs(v))) return std::nullopt;
  return int(r);
}

SpectrumProblem make_problem(int n, double K3, double K2, double K0,
                             Branch b) {
  if (n < 0) fail(errc::invalid_argument, "make_problem: negative index");
  if (K0 > 0.0)
    fail(errc::precondition, "make_problem: K0 must be nonpositive");
  double v = condition_value(K3, K2, K0, b);
  double want = 2.0 * double(n + 1);
  if (std::abs(v - want) > 1e-12 * (1.0 + std::abs(v)))
    fail(errc::precondition,
         "make_problem: coefficients do not terminate at this index");
  SpectrumProblem p;
  p.n = n;
  p.K3 = K3;
  p.K2 = K2;
  p.K0 = K0;
  p.branch = b;
  p.sigma = -branch_sign(b) * std::sqrt(-K0);
  p.k2 = K2 + K3 * K3 / 4.0 - 2.0 - 2.0 * p.sigma;
  return p;
}

CPoly det_poly(const SpectrumProblem& p) {
  CPoly k1({cplx{-p.K3 * (1.0 + 2.0 * p.sigma) / 2.0, 0.0}, cplx{-1.0, 0.0}});
  CPoly prev = CPoly::constant(1.0);
  CPoly cur = k1;
  for (int j = 2; j <= p.n + 1; ++j) {
    double jj = double(j);
    CPoly lin = k1 + CPoly::constant(-(jj - 1.0) * p.K3);
    double drop =
        (jj - 1.0) * (jj - 1.0 + 2.0 * p.sigma) * (p.k2 - 2.0 * (jj - 2.0));
    CPoly next = lin * cur - prev.scaled(drop);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<cplx> k1_spectrum(const SpectrumProblem& p) {
  // Root magnitudes grow like n |K3|.  Solving in the rescaled variable
  // K1 = r t keeps the root iteration conditioned when K3 is large.
  double r = std::max(1.0, (p.n + 1) * std::abs(p.K3));
  std::vector<cplx> c = det_poly(p).coeffs();
  double f = 1.0;
  for (auto& v : c) {
    v *= f;
    f *= r;
  }
  auto roots = CPoly(std::move(c)).roots();
  for (auto& z : roots) z *= r;
  return roots;
}

cplx BhSolution::exponent(cplx z) const {
  cplx w = std::exp(z);
  return 0.5 * problem.K3 * w - 0.5 * w * w + problem.sigma * z;
}

BhSolution::Jet BhSolution::eval(cplx z) const {
  cplx w = std::exp(z);
  auto pj = base.poly.eval12(w);
  cplx f = pj.v;
  cplx f1 = pj.d1 * w;
  cplx f2 = pj.d2 * w * w + pj.d1 * w;
  cplx g1 = 0.5 * problem.K3 * w - w * w + problem.sigma;
  cplx g2 = 0.5 * problem.K3 * w - 2.0 * w * w;
  cplx e = std::exp(exponent(z));
  return {f * e, (f1 + f * g1) * e, (f2 + 2.0 * f1 * g1 + f * (g2 + g1 * g1)) * e};
}

ScaledC BhSolution::eval_scaled(cplx z) const {
  cplx w = std::exp(z);
  return ScaledC::expw(exponent(z)) * ScaledC::from(base.poly.eval(w));
}

BhSolution bh_solution(const SpectrumProblem& p, int nu) {
  auto spectrum = k1_spectrum(p);
  if (nu < 0 || nu >= int(spectrum.size()))
    fail_at(errc::invalid_argument, "bh_solution: eigenvalue index out of range",
            nu);
  BhSolution s;
  s.problem = p;
  s.nu = nu;
  s.K1 = spectrum[size_t(nu)];
  s.coeffs.K4 = -1.0;
  s.coeffs.K3 = p.K3;
  s.coeffs.K2 = p.K2;
  s.coeffs.K1 = s.K1;
  s.coeffs.K0 = p.K0;
  s.coeffs.sigma = p.sigma;
  s.base = bhe::solution_at(p.n, 2.0 * p.sigma, -p.K3, -2.0 * s.K1, nu);
  return s;
}

std::vector<BhSolution> bh_family(const SpectrumProblem& p) {
  std::vector<BhSolution> out;
  for (int nu = 0; nu <= p.n; ++nu) out.push_back(bh_solution(p, nu));
  return out;
}

double pbhe_residual(const BhSolution& s, cplx z) {
  auto jet = s.eval(z);
  cplx w = std::exp(z);
  cplx kpoly =
      ((((-1.0 * w) + s.problem.K3) * w + s.problem.K2) * w + s.K1) * w +
      s.problem.K0;
  cplx t1 = jet.d2;
  cplx t2 = kpoly * jet.v;
  double top = std::max({1e-300, std::abs(t1), std::abs(t2)});
  return std::abs(t1 + t2) / std::max(1.0, top);
}

double floquet_defect(const BhSolution& s, cplx z) {
  const double two_pi = 6.283185307179586476925286766559;
  ScaledC a = s.eval_scaled(z + cplx{0.0, two_pi});
  ScaledC b = s.eval_scaled(z) *
              ScaledC::expw(cplx{0.0, two_pi * s.problem.sigma});
  ScaledC d = a - b;
  if (b.is_zero()) return a.is_zero() ? 0.0 : 1.0;
  return std::exp(d.log_abs() - b.log_abs());
}

}  // namespace heunbc::spectra
