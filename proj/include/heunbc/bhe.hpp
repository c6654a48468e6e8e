#pragma once

#include <complex>
#include <vector>

#include "heunbc/cpoly.hpp"

namespace heunbc::bhe {

using heunbc::cplx;
using heunbc::CPoly;

// Parameters of the biconfluent Heun equation in its canonical form
//   z u'' + (1 + alpha - beta z - 2 z^2) u' + ((gamma - alpha - 2) z - theta) u = 0
// with theta the accessory combination below.  delta is kept complex because
// eigenvalue scans can hand back complex candidates.
struct BheParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  cplx delta{0.0, 0.0};

  cplx theta() const { return 0.5 * (delta + beta * (1.0 + alpha)); }
};

// Coefficients of the periodic form
//   x^2 Psi'' + x Psi' + (K4 x^4 + K3 x^3 + K2 x^2 + K1 x + K0) Psi = 0
// together with the exponent sigma of the x^sigma prefactor that reduces it
// to the equation above.  K1 plays the eigenvalue role and may be complex.
struct PbheCoeffs {
  double K4 = -1.0;
  double K3 = 0.0;
  double K2 = 0.0;
  cplx K1{0.0, 0.0};
  double K0 = 0.0;
  double sigma = 0.0;
};

PbheCoeffs pbhe_from_bhe(const BheParams& p);
BheParams bhe_from_pbhe(const PbheCoeffs& k);

// Taylor coefficients A_0..A_kmax of the Frobenius series around z = 0,
// A_0 = 1, A_1 = theta, three-term recursion in between.  gamma is free here;
// the sequence terminates iff gamma = alpha + 2(m+1) and A_{m+1} = 0.
std::vector<cplx> series_coeffs(const BheParams& p, int kmax);

// A_{m+1} as a polynomial in delta with gamma pinned to alpha + 2(m+1).
// Division-free, defined for every alpha.  Degree m+1, leading coefficient
// 2^-(m+1).
CPoly eigenvalue_poly(int m, double alpha, double beta);

// One terminating solution: a degree-m polynomial in z together with its
// reversal Y(x) = x^m P(1/x), which solves the reversed equation
//   x^3 Y'' + [(1-2m-alpha) x^2 + beta x + 2] Y' + [(alpha+m) m x - beta m - theta] Y = 0.
struct HautotSolution {
  int m = 0;
  int nu = 0;
  int multiplicity = 1;
  cplx delta{0.0, 0.0};
  BheParams params;
  CPoly poly;
  CPoly reversed;
};

// All degree-m polynomial eigen-solutions for the given alpha, beta.  The
// m+1 eigenvalues delta_nu are the roots of eigenvalue_poly, sorted by
// (Re, Im) and clustered into multiple roots at relative tolerance 1e-7.
// Requires alpha not in {-1, ..., -m}: the Pochhammer normalisation of the
// series coefficients degenerates there.
std::vector<HautotSolution> hautot(int m, double alpha, double beta);

// The solution at one fixed eigenvalue, same normalisation and alpha
// restriction as hautot.  delta is trusted, not re-verified.
HautotSolution solution_at(int m, double alpha, double beta, cplx delta,
                           int nu = 0, int multiplicity = 1);

// Residuals of the three equation forms at a point, each normalised by the
// largest participating term so magnitudes compare across parameter scales.
double bhe_residual(const BheParams& p, const CPoly& u, cplx z);
double reversed_residual(const BheParams& p, int m, const CPoly& y, cplx x);
// Residual of the periodic form on Psi = x^sigma exp(-beta x/2 - x^2/2) u(x).
double gen_bessel_residual(const PbheCoeffs& k, const CPoly& u, cplx x);

double pochhammer(double a, int n);
double factorial(int n);

}  // namespace heunbc::bhe
