#pragma once

#include <optional>
#include <vector>

#include "heunbc/bhe.hpp"
#include "heunbc/cpoly.hpp"
#include "heunbc/scaled.hpp"

namespace heunbc::spectra {

using heunbc::cplx;
using heunbc::CPoly;
using heunbc::ScaledC;

// Which square root of -K0 enters the termination condition
//   K3^2/4 + K2 + (plus ? +2 : -2) sqrt(-K0) = 2(n+1).
enum class Branch { plus, minus };

// A terminating configuration of the periodic form.  sigma is the exponent
// actually used downstream: sigma = -sqrt(-K0) on the plus branch and
// +sqrt(-K0) on the minus branch, so that K3^2/4 + K2 - 2 sigma = 2(n+1)
// and k2 = K2 + K3^2/4 - 2 - 2 sigma = 2n.
struct SpectrumProblem {
  int n = 0;
  double K3 = 0.0;
  double K2 = 0.0;
  double K0 = 0.0;
  Branch branch = Branch::plus;
  double sigma = 0.0;
  double k2 = 0.0;
};

// The n the condition lands on for this branch, if any (tolerance 1e-9).
std::optional<int> check_termination(double K3, double K2, double K0, Branch b);

// Validates the condition at tolerance 1e-12 relative; requires K0 <= 0.
SpectrumProblem make_problem(int n, double K3, double K2, double K0, Branch b);

// Characteristic determinant D_{n+1} of the tridiagonal truncation, as a
// polynomial in K1.  Division-free:
//   D_0 = 1,  D_1 = k1,  k1 = -K1 - K3 (1 + 2 sigma)/2,
//   D_j = (k1 - (j-1) K3) D_{j-1} - (j-1)(j-1+2 sigma)(k2 - 2(j-2)) D_{j-2}.
CPoly det_poly(const SpectrumProblem& p);

// The n+1 eigenvalues K1, roots of det_poly, sorted by (Re, Im).
std::vector<cplx> k1_spectrum(const SpectrumProblem& p);

// One eigen-solution of the periodic form,
//   BH(z) = P(e^z) exp[(K3/2) e^z - e^{2z}/2 + sigma z],
// with P the degree-n polynomial from the terminating series.  Equivalently
// Y(e^{-z}) exp[(K3/2) e^z - e^{2z}/2 + (n + sigma) z] with Y the reversal.
struct BhSolution {
  SpectrumProblem problem;
  int nu = 0;
  cplx K1{0.0, 0.0};
  bhe::PbheCoeffs coeffs;
  bhe::HautotSolution base;

  cplx exponent(cplx z) const;  // the log of the non-polynomial factor
  struct Jet {
    cplx v, d1, d2;
  };
  Jet eval(cplx z) const;
  ScaledC eval_scaled(cplx z) const;
};

BhSolution bh_solution(const SpectrumProblem& p, int nu);
std::vector<BhSolution> bh_family(const SpectrumProblem& p);

// Residual of BH'' + (K4 e^{4z} + K3 e^{3z} + K2 e^{2z} + K1 e^z + K0) BH,
// normalised by the largest term.
double pbhe_residual(const BhSolution& s, cplx z);

// Relative defect of BH(z + 2 pi i) against e^{2 pi i sigma} BH(z).
double floquet_defect(const BhSolution& s, cplx z);

}  // namespace heunbc::spectra
