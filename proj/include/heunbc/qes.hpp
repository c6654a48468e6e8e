#pragma once

#include <vector>

#include "heunbc/bhe.hpp"
#include "heunbc/rational.hpp"

namespace heunbc::qes {

using heunbc::cplx;
using heunbc::CPoly;

// Parameters of the generalized sextic eigenproblem
//   H psi = E psi,
//   H = -d^2/dx^2 + (4s-1)(4s-3)/(4x^2) - (4s+4J-2-c^2/4) x^2 + c x^4 + x^6
//       - sqrt(2) c^2 / 4,
// whose x^{2s-1/2} e^{-x^4/4-cx^2/4} sector closes on polynomials of degree
// J-1 in x^2.  s > 0; E is the spectral parameter and stays symbolic in the
// polynomial operations below.
struct TurbinerParams {
  double s = 0.5;
  int J = 1;
  double c = 0.0;
  cplx E{0.0, 0.0};
};

// alpha = 2s-1, beta = sqrt(2)c/2, gamma = 2J+2s-1, delta = -sqrt(2)E/2-c^2/4.
// gamma - alpha - 2 = 2(J-1), so the polynomial degree is J-1.
bhe::BheParams bhe_from_turbiner(const TurbinerParams& p);

// P_0..P_kmax as polynomials in E:
//   P_k = [E - (2c(k-1) + 2cs - sqrt(2)c^2/4)] P_{k-1}
//         - 16 (k-1)(k-2+2s)(J+1-k) P_{k-2},
// P_0 = 1.  Monic, degree k.  Past k = J the factor P_J divides every member.
std::vector<CPoly> bender_dunne_polys(double s, int J, double c, int kmax);

// Same recursion over Q(sqrt 2), exact.
std::vector<rational::Q2Poly> bender_dunne_polys_exact(const mpq_class& s, int J,
                                                       const mpq_class& c, int kmax);

// Quotients Q_n = P_{J+n} / P_J for n = 1..nmax.  remainder_norm is the
// largest remainder coefficient relative to the dividend's largest.
struct FactorStep {
  CPoly quotient;
  double remainder_norm = 0.0;
};
std::vector<FactorStep> factorization_check(double s, int J, double c, int nmax);

struct FactorStepExact {
  rational::Q2Poly quotient;
  bool remainder_zero = false;
};
std::vector<FactorStepExact> factorization_check_exact(const mpq_class& s, int J,
                                                       const mpq_class& c, int nmax);

// The J admissible energies: roots of the degree-J eigenvalue polynomial of
// the mapped equation, sent through E = -sqrt(2)(delta + c^2/4), ascending.
// Empty for J = 0 (the polynomial sector is empty).  Throws verification if
// a root comes back non-real.
std::vector<double> qes_spectrum(double s, int J, double c);

// Independent route to the same energies: the tridiagonal determinant D_J of
// the periodic form, built directly as a polynomial in E.
CPoly qes_det_poly(double s, int J, double c);

// psi(x) for a spectrum member E; the series terminates at k = J-1.
cplx wavefunction(const TurbinerParams& p, cplx x);

// |H psi - E psi| at x, normalized by the largest participating term.
// Derivatives are exact (series plus closed-form log-derivatives).
double wavefunction_residual(const TurbinerParams& p, cplx x);

// Periodic-form coefficients (K4,K3,K2,K1,K0) =
//   (-1, -sqrt(2)c/2, 2J+2s-1-c^2/8, sqrt(2)E/4+c^2/8, -(2s-1)^2/4),
// sigma = (2s-1)/2.  Composing with the periodic-to-canonical map recovers
// bhe_from_turbiner exactly.
bhe::PbheCoeffs periodic_turbiner_coeffs(const TurbinerParams& p);

// Termination bookkeeping: the displayed closure condition
//   4c^2 + 2(2s+2J+1) +- (2s-1) = 4(J+1)
// is evaluated literally on both branches, alongside the identity
//   K3^2/4 + K2 - 2 sigma = 2J
// that the mapped coefficients satisfy for every (c, s, J).
struct ConditionReport {
  double literal_plus = 0.0;
  double literal_minus = 0.0;
  double literal_rhs = 0.0;
  bool literal_holds = false;
  double derived_defect = 0.0;
  bool derived_holds = false;
};
ConditionReport condition_check(double s, int J, double c);

}  // namespace heunbc::qes
