#pragma once

#include <functional>
#include <vector>

#include "heunbc/cpoly.hpp"
#include "heunbc/parallel.hpp"
#include "heunbc/spectra.hpp"
#include "heunbc/weight.hpp"

namespace heunbc::quad {

using heunbc::cplx;
using heunbc::CPoly;
using heunbc::Exec;

// Uniform trapezoid rule on a closed parameter interval of length 2 pi.
//   circle:   z_j = r e^{2 pi i j/N},  dz_j = i z_j (2 pi/N)
//   vsegment: z_j = b + 2 pi i j/N,    dz_j = i (2 pi/N)
// Both parametrizations are periodic, so the sum is spectrally accurate once
// N resolves the angular bandwidth of the integrand.
struct ContourRule {
  enum class Kind { circle, vsegment };
  Kind kind = Kind::circle;
  double geom = 1.0;  // radius for circle, base point for vsegment
  int N = 512;

  cplx node(int j) const;
  cplx dz(int j) const;
  ContourRule doubled() const;
};

// N must be a power of two and at least 16 (supports doubling certificates).
ContourRule circle(double radius, int N = 512);
ContourRule vsegment(double base, int N = 512);

// Trapezoid sum of f over the rule.  Nodes are evaluated independently (the
// parallel path fills a buffer and reduces serially, so results are
// bit-identical across Exec).  A non-finite node value raises an evaluation
// error carrying the node index.
cplx contour_integral(const std::function<cplx(cplx)>& f, const ContourRule& rule,
                      Exec ex = Exec::serial);

// Gram matrix of a polynomial family under a bilinear (unconjugated) pairing.
struct OrthReport {
  std::vector<std::vector<cplx>> gram;
  // max |G_mn| / sqrt(|G_mm| |G_nn|) over m != n.  The pairings are
  // unconjugated, so a bilinear norm can vanish identically; the denominator
  // is floored at 1e-6 * scale so such a member cannot inflate the ratio.
  double normalized_offdiag = 0.0;
  ContourRule rule;
  bool adaptive = false;     // half-line reports integrate adaptively, no rule
  bool diag_nonzero = false; // every diagonal exceeds 1e-6 * scale
  double scale = 0.0;        // max entry magnitude
  double certificate = 0.0;  // max entry change under N -> 2N, over scale
  double symmetry_defect = 0.0;
  std::vector<int> skipped;  // member indices dropped for repeated eigenvalues
  bool deformed = false;     // segment integrals evaluated on the unit loop
};

// Gram of the reversed polynomials Y_{n,mu} against the Laurent weight
// rho_n on a circle of the given radius.  The weight truncation tail on the
// contour must stay below 1e-12 of the weight's magnitude there.
OrthReport circle_orthogonality(int n, double alpha, double beta,
                                const ContourRule& rule, int weight_kmax = 160,
                                Exec ex = Exec::serial);

// Gram of the polynomials P_{m,mu} against t^alpha e^{-beta t - t^2} on
// [0, inf), by adaptive Gauss-Kronrod panels with the tail cut where the
// weight is negligible.  Requires alpha > -1.
OrthReport halfline_orthogonality(int m, double alpha, double beta,
                                  Exec ex = Exec::serial);

// Ladder member of the shared-(K3, K2) terminating family:
//   sigma = (K3^2/4 + K2)/2 - (n+1),  K0 = -sigma^2.
spectra::SpectrumProblem segment_problem(int n, double K3, double K2);

// Gram G_{mu nu} = integral over one period segment of
// BH_{n,mu}(z) BH_{n,nu}(z) e^z dz.  Requires K3, K2, K0 < 0 and 2 sigma
// integral, so the integrand is single-valued in u = e^z.  The rule must be a
// vertical segment based at 0.
OrthReport single_orthogonality(const spectra::SpectrumProblem& p,
                                const ContourRule& rule, Exec ex = Exec::serial);

// Same pairing on the segment based at pi.  The integrand is the same
// single-valued function of u = e^z on a loop of radius e^pi, where direct
// double-precision summation is impossible (term magnitudes reach e^535), so
// the integral is evaluated on the unit-radius loop of the same homotopy
// class and the report is marked deformed.
OrthReport shifted_orthogonality(const spectra::SpectrumProblem& p,
                                 const ContourRule& rule, Exec ex = Exec::serial);

// One entry of the double pairing between families n and m.  The tensor
// trapezoid sum of BH_{n,mu}(z) BH_{n,mu}(s) BH_{m,nu}(z) BH_{m,nu}(s)
// (e^z - e^s) over segment x segment factorizes exactly into
//   T = S1 B0 - S0 B1,   S_k = int phi e^{kz} dz,  B_k = int phi e^{ks} ds,
// with phi = BH_{n,mu} BH_{m,nu}, S on the base-0 segment and B on the
// base-pi segment.  Both segments are closed loops of one single-valued
// function of u = e^z, so S_k = B_k exactly and every entry cancels;
// the factors are reported so the cancellation is visible.
struct DoubleOrthPair {
  cplx S0, S1, B0, B1;
  cplx T;
  double scale = 0.0;       // max(|S1 B0|, |S0 B1|)
  double normalized = 0.0;  // |T| / scale
};

struct DoubleOrthReport {
  int n = 0, m = 0;
  std::vector<std::vector<DoubleOrthPair>> pairs;  // indexed [mu][nu]
  double max_offpair = 0.0;      // max normalized over (n,mu) != (m,nu)
  double max_coincident = 0.0;   // max normalized over coincident pairs
  double min_factor_scale = 0.0; // smallest per-entry scale
  ContourRule rule_z, rule_s;
  double certificate = 0.0;
  bool deformed_s = false;
};

// Requires the two problems to share (K3, K2); sigma_n + sigma_m is then
// automatically integral for terminating ladders.  rule_z is based at 0,
// rule_s at pi.
DoubleOrthReport double_orthogonality(const spectra::SpectrumProblem& pn,
                                      const spectra::SpectrumProblem& pm,
                                      const ContourRule& rule_z,
                                      const ContourRule& rule_s,
                                      Exec ex = Exec::serial);

// Symmetric product kernel exp[a(e^{2iz} + e^{2is}) + c(e^{iz} + e^{is})].
// Requires 4 a^2 = 1.
cplx fredholm_kernel(cplx z, cplx s, cplx a, cplx c);

// Max over a grid of |L_z K - L_s K| / max term, where L carries the
// potential e^{4ix} - K3 e^{3ix} - K2 e^{2ix} - K1 e^{ix} - K0 of the
// rotated periodic equation and the kernel derivatives are closed-form.
double kernel_pde_residual(cplx a, cplx c, const bhe::PbheCoeffs& k,
                           int grid = 8);

struct FredholmReport {
  cplx lambda{0.0, 0.0};
  double variation = 0.0;  // max_j |lambda_j - lambda| / |lambda|
  std::vector<double> sample_points;
  std::vector<cplx> samples;
  double certificate = 0.0;
};

// Pointwise eigenvalue extraction for the rotated solution ft(z) = BH(iz):
//   lambda_j = ft(z_j) / int_0^{2pi} K(z_j, s) ft(s) ds
// at M sample points, rejecting samples where |ft| is negligible.  Requires
// 4 a^2 = 1 and (n + sigma + 1)^2 = 1 (sigma integral keeps ft periodic).
// The kernel strength c is a free input so perturbation probes can detune it
// from the eigenvalue; a consistent call passes c = -K1.
FredholmReport fredholm_lambda(const spectra::BhSolution& sol, cplx a, cplx c,
                               int M, const ContourRule& rule,
                               Exec ex = Exec::serial);

// Bilinear concomitant of the kernel against ft at (x, s):
//   C(x, s) = ft(s) K_s(x, s) - ft'(s) K(x, s).
cplx concomitant_at(const spectra::BhSolution& sol, cplx a, cplx c, double x,
                    double s);

// Max over an x-grid of |C(x, 2 pi) - C(x, 0)|, over the max |C| seen.
// Near zero iff ft is 2 pi periodic; no periodicity precondition is imposed,
// so non-integral sigma serves as a negative control.
double concomitant_check(const spectra::BhSolution& sol, cplx a, cplx c,
                         int xgrid = 16);

}  // namespace heunbc::quad
