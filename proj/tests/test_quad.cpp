#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "heunbc/error.hpp"
#include "heunbc/quad.hpp"
#include "oracles.hpp"

using namespace heunbc::quad;
using heunbc::cplx;
using heunbc::errc;
using heunbc::Exec;
namespace spectra = heunbc::spectra;
namespace bhe = heunbc::bhe;

namespace {

constexpr double pi = 3.14159265358979323846;

template <class F>
bool throws_kind(F&& f, errc k) {
  try {
    f();
  } catch (const heunbc::error& e) {
    return e.kind() == k;
  } catch (...) {
    return false;
  }
  return false;
}

// Taylor coefficients of exp(K3 u - u^2), from (k+1) E_{k+1} = K3 E_k - 2 E_{k-1}.
std::vector<cplx> exp_series(double K3, int kmax) {
  std::vector<cplx> E(static_cast<std::size_t>(kmax) + 1, cplx{0.0, 0.0});
  E[0] = 1.0;
  if (kmax >= 1) E[1] = K3;
  for (int k = 1; k < kmax; ++k)
    E[static_cast<std::size_t>(k) + 1] =
        (K3 * E[static_cast<std::size_t>(k)] - 2.0 * E[static_cast<std::size_t>(k) - 1]) /
        static_cast<double>(k + 1);
  return E;
}

// Laurent-coefficient route for a segment integral of BH_a BH_b e^{kz}:
// 2 pi i times the u^{-k-sa-sb} coefficient of P_a P_b exp(K3 u - u^2).
cplx segment_factor_oracle(const spectra::BhSolution& A, const spectra::BhSolution& B, int k) {
  long sums = llround(A.problem.sigma + B.problem.sigma);
  long idx = -static_cast<long>(k) - sums;
  if (idx < 0) return cplx{0.0, 0.0};
  heunbc::CPoly prod = A.base.poly * B.base.poly;
  auto E = exp_series(A.problem.K3, static_cast<int>(idx) + 1);
  cplx acc{0.0, 0.0};
  for (int j = 0; j <= prod.degree(); ++j) {
    long e = idx - j;
    if (e >= 0 && e < static_cast<long>(E.size())) acc += prod[j] * E[static_cast<std::size_t>(e)];
  }
  return cplx{0.0, 2.0 * pi} * acc;
}

double half_moment(double p) { return 0.5 * std::tgamma(0.5 * (p + 1.0)); }

}  // namespace

TEST_CASE("contour rules validate node counts and geometry") {
  CHECK(throws_kind([] { circle(1.0, 15); }, errc::invalid_argument));
  CHECK(throws_kind([] { circle(1.0, 48); }, errc::invalid_argument));
  CHECK(throws_kind([] { circle(0.0, 64); }, errc::invalid_argument));
  CHECK(throws_kind([] { circle(-1.0, 64); }, errc::invalid_argument));

  auto c = circle(2.0, 16);
  CHECK(std::abs(c.node(0) - cplx{2.0, 0.0}) < 1e-15);
  CHECK(std::abs(c.node(4) - cplx{0.0, 2.0}) < 1e-14);
  auto v = vsegment(pi, 16);
  CHECK(std::abs(v.node(4) - cplx{pi, pi / 2.0}) < 1e-14);
  CHECK(std::abs(v.dz(7) - cplx{0.0, 2.0 * pi / 16.0}) < 1e-16);
}

TEST_CASE("trapezoid sums reproduce residue integrals") {
  auto r = circle(1.0, 64);
  cplx inv = contour_integral([](cplx z) { return 1.0 / z; }, r);
  CHECK(std::abs(inv - cplx{0.0, 2.0 * pi}) < 1e-13);
  cplx lin = contour_integral([](cplx z) { return z; }, r);
  CHECK(std::abs(lin) < 1e-13);
  cplx seg = contour_integral([](cplx z) { return std::exp(z); }, vsegment(0.0, 64));
  CHECK(std::abs(seg) < 1e-12);
}

TEST_CASE("non-finite integrand values are located by node index") {
  auto r = circle(1.0, 32);
  cplx pole = r.node(3);
  try {
    contour_integral([&](cplx z) { return 1.0 / (z - pole); }, r);
    CHECK(false);
  } catch (const heunbc::error& e) {
    CHECK(e.kind() == errc::evaluation);
    CHECK(e.index == 3);
  }
}

TEST_CASE("node parallelism does not change the sum") {
  auto r = circle(1.3, 256);
  auto f = [](cplx z) { return std::exp(z) / (z * z + 4.0); };
  cplx a = contour_integral(f, r, Exec::serial);
  cplx b = contour_integral(f, r, Exec::par);
  CHECK(a.real() == b.real());
  CHECK(a.imag() == b.imag());
}

TEST_CASE("circle orthogonality matches the residue-pairing oracle") {
  auto rule = circle(1.0, 512);
  for (auto [n, beta] : {std::pair{1, 0.0}, std::pair{2, 0.7}}) {
    auto rep = circle_orthogonality(n, 0.3, beta, rule);
    REQUIRE(int(rep.gram.size()) == n + 1);
    CHECK(rep.normalized_offdiag < 1e-8);
    CHECK(rep.diag_nonzero);
    CHECK(rep.certificate < 1e-11);
    CHECK(rep.symmetry_defect < 1e-12);

    // Independent route: pair Laurent coefficients of the weight with the
    // polynomial coefficients of Y_mu Y_nu.
    auto fam = bhe::hautot(n, 0.3, beta);
    auto w = heunbc::weight::weight_series(n, 0.3, beta, 160);
    for (std::size_t i = 0; i < rep.gram.size(); ++i)
      for (std::size_t j = 0; j < rep.gram.size(); ++j) {
        heunbc::CPoly prod = fam[i].reversed * fam[j].reversed;
        cplx want{0.0, 0.0};
        for (int d = 0; d <= prod.degree(); ++d)
          if (d + 1 <= w.kmax()) want += prod[d] * w.a[static_cast<std::size_t>(d) + 1];
        want *= cplx{0.0, 2.0 * pi};
        CHECK(std::abs(rep.gram[i][j] - want) < 1e-10 * std::max(1.0, rep.scale));
      }
  }
}

TEST_CASE("circle orthogonality is contour independent") {
  auto r1 = circle_orthogonality(2, 0.3, 0.7, circle(1.0, 512));
  auto r2 = circle_orthogonality(2, 0.3, 0.7, circle(2.0, 512));
  for (std::size_t i = 0; i < r1.gram.size(); ++i)
    for (std::size_t j = 0; j < r1.gram.size(); ++j)
      CHECK(std::abs(r1.gram[i][j] - r2.gram[i][j]) < 1e-10 * std::max(1.0, r1.scale));

  auto rep0 = circle_orthogonality(0, 0.3, 0.0, circle(1.0, 512));
  CHECK(rep0.gram.size() == 1);
  CHECK(rep0.diag_nonzero);

  auto par = circle_orthogonality(2, 0.3, 0.7, circle(1.0, 512), 160, Exec::par);
  for (std::size_t i = 0; i < r1.gram.size(); ++i)
    for (std::size_t j = 0; j < r1.gram.size(); ++j) {
      CHECK(par.gram[i][j].real() == r1.gram[i][j].real());
      CHECK(par.gram[i][j].imag() == r1.gram[i][j].imag());
    }
}

TEST_CASE("degenerate or under-truncated weights are refused") {
  CHECK(throws_kind([] { circle_orthogonality(1, 0.0, 0.0, circle(1.0, 512)); },
                    errc::degenerate_parameter));
  CHECK(throws_kind([] { circle_orthogonality(1, 0.3, 0.0, circle(1.0, 512), 20); },
                    errc::insufficient_truncation));
}

TEST_CASE("half-line Gram reproduces Gaussian moments") {
  auto rep0 = halfline_orthogonality(0, 0.0, 0.0);
  REQUIRE(rep0.gram.size() == 1);
  CHECK(std::abs(rep0.gram[0][0] - cplx{0.5 * std::sqrt(pi), 0.0}) < 1e-13);

  auto rep = halfline_orthogonality(1, 0.0, 0.0);
  auto fam = bhe::hautot(1, 0.0, 0.0);
  REQUIRE(fam.size() == 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      heunbc::CPoly prod = fam[i].poly * fam[j].poly;
      cplx want{0.0, 0.0};
      for (int d = 0; d <= prod.degree(); ++d) want += prod[d] * half_moment(double(d));
      CHECK(std::abs(rep.gram[i][j] - want) < 1e-12 * std::max(1.0, rep.scale));
    }
  CHECK(rep.normalized_offdiag < 1e-10);
  CHECK(rep.diag_nonzero);

  // Fractional exponent: integrable endpoint singularity.
  auto repf = halfline_orthogonality(1, -0.5, 0.0);
  auto famf = bhe::hautot(1, -0.5, 0.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      heunbc::CPoly prod = famf[i].poly * famf[j].poly;
      cplx want{0.0, 0.0};
      for (int d = 0; d <= prod.degree(); ++d) want += prod[d] * half_moment(double(d) - 0.5);
      CHECK(std::abs(repf.gram[i][j] - want) < 1e-9 * std::max(1.0, repf.scale));
    }
}

TEST_CASE("half-line orthogonality holds across the parameter grid") {
  for (int m : {3, 5})
    for (double alpha : {0.0, 1.0})
      for (double beta : {0.0, 1.0}) {
        auto rep = halfline_orthogonality(m, alpha, beta);
        CHECK(rep.normalized_offdiag < 1e-8);
        CHECK(rep.diag_nonzero);
        CHECK(rep.certificate < 1e-11);
      }
  CHECK(throws_kind([] { halfline_orthogonality(1, -1.5, 0.0); }, errc::precondition));
}

TEST_CASE("segment families demand negative coefficients and integral 2 sigma") {
  auto fractional = segment_problem(1, -2.0, -0.3);
  CHECK(throws_kind([&] { single_orthogonality(fractional, vsegment(0.0, 512)); },
                    errc::precondition));
  auto positive = segment_problem(1, -4.0, 1.0);
  CHECK(throws_kind([&] { single_orthogonality(positive, vsegment(0.0, 512)); },
                    errc::precondition));
  auto good = segment_problem(1, -2.0 * std::sqrt(2.5), -0.5);
  CHECK(throws_kind([&] { single_orthogonality(good, vsegment(pi, 512)); },
                    errc::invalid_argument));
  CHECK(throws_kind([&] { single_orthogonality(good, circle(1.0, 512)); },
                    errc::invalid_argument));
}

TEST_CASE("single orthogonality: off-diagonals vanish, diagonals do not") {
  for (int n = 0; n <= 4; ++n) {
    auto p = segment_problem(n, -2.0 * std::sqrt(double(n) + 1.5), -0.5);
    CHECK(p.sigma == doctest::Approx(-0.5 * double(n + 1)));
    auto rep = single_orthogonality(p, vsegment(0.0, 512));
    REQUIRE(int(rep.gram.size()) == n + 1);
    CHECK(rep.normalized_offdiag < 1e-8);
    CHECK(rep.diag_nonzero);
    CHECK(rep.certificate < 1e-11);
    CHECK(!rep.deformed);

    auto fam = spectra::bh_family(p);
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = 0; j < fam.size(); ++j) {
        cplx want = segment_factor_oracle(fam[i], fam[j], 1);
        CHECK(std::abs(rep.gram[i][j] - want) < 1e-9 * std::max(1.0, rep.scale));
      }
    if (n == 0) CHECK(std::abs(rep.gram[0][0] - cplx{0.0, 2.0 * pi}) < 1e-10);
  }
}

TEST_CASE("the shifted segment carries the same pairing") {
  auto p = segment_problem(2, -2.0 * std::sqrt(3.5), -0.5);
  auto base = single_orthogonality(p, vsegment(0.0, 512));
  auto shift = shifted_orthogonality(p, vsegment(pi, 512));
  CHECK(shift.deformed);
  CHECK(!base.deformed);
  for (std::size_t i = 0; i < base.gram.size(); ++i)
    for (std::size_t j = 0; j < base.gram.size(); ++j)
      CHECK(std::abs(base.gram[i][j] - shift.gram[i][j]) < 1e-13 * std::max(1.0, base.scale));
  CHECK(shift.normalized_offdiag < 1e-8);
  CHECK(shift.diag_nonzero);
}

TEST_CASE("segment integrals are base independent where both bases resolve") {
  auto p1 = segment_problem(1, -2.0, -1.0);
  auto p2 = segment_problem(2, -2.0, -1.0);
  auto a = spectra::bh_family(p1)[0];
  auto b = spectra::bh_family(p2)[1];
  auto f = [&](cplx z) { return a.eval(z).v * b.eval(z).v * std::exp(z); };
  cplx at0 = contour_integral(f, vsegment(0.0, 512));
  cplx at03 = contour_integral(f, vsegment(0.3, 512));
  CHECK(std::abs(at0 - at03) < 1e-12 * (1.0 + std::abs(at0)));
}

TEST_CASE("double pairing cancels identically while its factors do not") {
  auto p1 = segment_problem(1, -2.0, -1.0);
  auto p2 = segment_problem(2, -2.0, -1.0);
  auto p3 = segment_problem(3, -2.0, -1.0);
  auto rz = vsegment(0.0, 128);
  auto rs = vsegment(pi, 128);

  auto r12 = double_orthogonality(p1, p2, rz, rs);
  CHECK(r12.max_offpair < 1e-7);
  CHECK(r12.min_factor_scale > 1e-3);
  CHECK(r12.deformed_s);
  CHECK(r12.certificate < 1e-11);

  // The factor integrals themselves are genuine: check one against the
  // Laurent-coefficient route, and check the two bases agree.
  auto fam1 = spectra::bh_family(p1);
  auto fam2 = spectra::bh_family(p2);
  cplx s0 = r12.pairs[0][1].S0;
  cplx want = segment_factor_oracle(fam1[0], fam2[1], 0);
  CHECK(std::abs(s0 - want) < 1e-9 * (1.0 + std::abs(want)));
  CHECK(r12.pairs[0][1].B0.real() == s0.real());
  CHECK(r12.pairs[0][1].B0.imag() == s0.imag());

  auto r23 = double_orthogonality(p2, p3, rz, rs);
  CHECK(r23.max_offpair < 1e-7);
  CHECK(r23.min_factor_scale > 1e-4);

  // Within one family the coincident entries cancel as well: both segments
  // integrate one single-valued function of u = e^z around closed loops, so
  // S1 B0 - S0 B1 vanishes entry by entry.  Off-diagonal pairs of the same
  // family have S1 = 0 already (one-weight diagonality), so the factor scale
  // is only meaningful on the diagonal.
  auto r33 = double_orthogonality(p3, p3, rz, rs);
  CHECK(r33.max_offpair < 1e-7);
  CHECK(r33.max_coincident < 1e-7);
  for (std::size_t i = 0; i < r33.pairs.size(); ++i)
    CHECK(r33.pairs[i][i].scale > 1e-2);

  auto incompatible = segment_problem(2, -2.0, -0.5);
  CHECK(throws_kind([&] { double_orthogonality(p1, incompatible, rz, rs); },
                    errc::precondition));
}

TEST_CASE("product kernel symmetry and periodicity") {
  cplx a{-0.5, 0.0}, c{0.7, 0.0};
  cplx z{1.1, 0.0}, s{2.3, 0.0};
  CHECK(std::abs(fredholm_kernel(z, s, a, c) - fredholm_kernel(s, z, a, c)) < 1e-14);
  cplx shifted = fredholm_kernel(z + 2.0 * pi, s, a, c);
  CHECK(std::abs(shifted - fredholm_kernel(z, s, a, c)) <
        1e-12 * std::abs(fredholm_kernel(z, s, a, c)));
  CHECK(throws_kind([&] { fredholm_kernel(z, s, cplx{0.4, 0.0}, c); }, errc::precondition));
}

namespace {

spectra::SpectrumProblem flat_problem(double K1) {
  // Degree-0 member with sigma = 0: K3 = -2 K1, K2 = 2 - K1^2, K0 = 0.
  return spectra::make_problem(0, -2.0 * K1, 2.0 - K1 * K1, 0.0, spectra::Branch::plus);
}

}  // namespace

TEST_CASE("kernel curvature matches the rotated potential") {
  auto p = flat_problem(0.8);
  auto sol = spectra::bh_solution(p, 0);
  CHECK(std::abs(sol.K1 - cplx{0.8, 0.0}) < 1e-10);

  CHECK(kernel_pde_residual(cplx{-0.5, 0.0}, cplx{-0.8, 0.0}, sol.coeffs) < 1e-12);
  CHECK(kernel_pde_residual(cplx{-0.5, 0.0}, cplx{-0.9, 0.0}, sol.coeffs) > 1e-3);

  // Finite differences confirm the closed-form curvature of the kernel.
  cplx a{-0.5, 0.0}, c{-0.8, 0.0};
  cplx s0{0.9, 0.0}, z0{2.1, 0.0};
  auto kz = [&](cplx z) { return fredholm_kernel(z, s0, a, c); };
  cplx numer = oracle::fd2(kz, z0);
  cplx e1 = std::exp(cplx{0.0, 1.0} * z0);
  cplx e2 = e1 * e1;
  cplx d1 = 2.0 * cplx{0.0, 1.0} * a * e2 + cplx{0.0, 1.0} * c * e1;
  cplx d2c = -4.0 * a * e2 - c * e1;
  cplx closed = (d2c + d1 * d1) * kz(z0);
  CHECK(std::abs(numer - closed) < 1e-4 * (1.0 + std::abs(closed)));
}

TEST_CASE("fredholm eigen-relation yields the flat eigenvalue") {
  auto rule = circle(1.0, 512);
  for (double K1 : {0.8, -0.3}) {
    auto sol = spectra::bh_solution(flat_problem(K1), 0);
    auto rep = fredholm_lambda(sol, cplx{-0.5, 0.0}, cplx{-K1, 0.0}, 16, rule);
    CHECK(std::abs(rep.lambda - cplx{1.0 / (2.0 * pi), 0.0}) < 1e-10);
    CHECK(rep.variation < 1e-10);
    CHECK(rep.certificate < 1e-11);
  }

  auto sol = spectra::bh_solution(flat_problem(0.8), 0);
  auto valid = fredholm_lambda(sol, cplx{-0.5, 0.0}, cplx{-0.8, 0.0}, 16, rule);
  auto wide = fredholm_lambda(sol, cplx{-0.5, 0.0}, cplx{-0.8, 0.0}, 32, rule);
  CHECK(std::abs(valid.lambda - wide.lambda) < 1e-9 * std::abs(valid.lambda));

  auto again = fredholm_lambda(sol, cplx{-0.5, 0.0}, cplx{-0.8, 0.0}, 16, rule);
  CHECK(again.lambda.real() == valid.lambda.real());
  CHECK(again.lambda.imag() == valid.lambda.imag());
  auto par = fredholm_lambda(sol, cplx{-0.5, 0.0}, cplx{-0.8, 0.0}, 16, rule, Exec::par);
  CHECK(par.lambda.real() == valid.lambda.real());
  CHECK(par.lambda.imag() == valid.lambda.imag());

  // Detuning the kernel strength by 1e-2 must blow the variation up by at
  // least five orders of magnitude.
  auto pert = fredholm_lambda(sol, cplx{-0.5, 0.0}, cplx{-0.79, 0.0}, 16, rule);
  CHECK(pert.variation > 1e-2);
  CHECK(pert.variation / std::max(valid.variation, 1e-30) > 1e5);
}

TEST_CASE("structurally degenerate configurations are reported") {
  // sigma = -2 ladder member whose eigenvalue is 0: the kernel image of the
  // rotated solution vanishes identically.
  auto p = spectra::make_problem(2, 0.0, 2.0, -4.0, spectra::Branch::plus);
  auto spec = spectra::k1_spectrum(p);
  REQUIRE(spec.size() == 3);
  CHECK(std::abs(spec[1]) < 1e-9);
  auto sol = spectra::bh_solution(p, 1);
  CHECK(throws_kind(
      [&] { fredholm_lambda(sol, cplx{-0.5, 0.0}, cplx{0.0, 0.0}, 16, circle(1.0, 512)); },
      errc::degenerate_integral));

  // Degree-1 members never pair with the kernel: with the matched strength
  // c = -K1 the image vanishes identically (the n = 1 image coefficient is
  // K1 + c), and detuning c leaves an O(1) variation.
  auto p1 = spectra::make_problem(1, -1.0, 1.75, -1.0, spectra::Branch::plus);
  auto sol1 = spectra::bh_solution(p1, 0);
  CHECK(throws_kind(
      [&] { fredholm_lambda(sol1, cplx{-0.5, 0.0}, -sol1.K1, 16, circle(1.0, 512)); },
      errc::degenerate_integral));
  auto rep1 = fredholm_lambda(sol1, cplx{-0.5, 0.0}, -sol1.K1 + 0.1, 16, circle(1.0, 512));
  CHECK(rep1.variation > 1e-2);

  // Fractional sigma violates the reduced-index constraint.
  auto ph = segment_problem(0, -2.0 * std::sqrt(1.5), -0.5);
  auto solh = spectra::bh_solution(ph, 0);
  CHECK(throws_kind(
      [&] { fredholm_lambda(solh, cplx{-0.5, 0.0}, cplx{0.3, 0.0}, 16, circle(1.0, 512)); },
      errc::precondition));
}

TEST_CASE("concomitant periodicity separates valid and invalid exponents") {
  // Non-vacuous case: a degree-2 solution with integer exponent and a kernel
  // strength it is not proportional to.
  auto p2 = spectra::make_problem(2, 0.0, 2.0, -4.0, spectra::Branch::plus);
  auto sol2 = spectra::bh_solution(p2, 1);
  cplx probe = concomitant_at(sol2, cplx{-0.5, 0.0}, cplx{-0.3, 0.0}, 1.7, 0.0);
  CHECK(std::abs(probe) > 1e-2);
  CHECK(concomitant_check(sol2, cplx{-0.5, 0.0}, cplx{-0.3, 0.0}) < 1e-9);

  // The flat member is proportional to the kernel's s-factor, so its
  // concomitant vanishes identically and the defect reads as zero.
  auto sol = spectra::bh_solution(flat_problem(0.8), 0);
  CHECK(std::abs(concomitant_at(sol, cplx{-0.5, 0.0}, cplx{-0.8, 0.0}, 1.7, 1.234)) < 1e-11);
  CHECK(concomitant_check(sol, cplx{-0.5, 0.0}, cplx{-0.8, 0.0}) < 1e-9);

  auto ph = segment_problem(0, -2.0 * std::sqrt(1.5), -0.5);
  auto solh = spectra::bh_solution(ph, 0);
  CHECK(concomitant_check(solh, cplx{-0.5, 0.0}, cplx{0.3, 0.0}) > 1e-3);

  // The kernel's s-derivative entering the concomitant matches finite
  // differences.
  cplx a{-0.5, 0.0}, c{-0.8, 0.0};
  double x = 1.7;
  auto ks = [&](cplx s) { return fredholm_kernel(cplx{x, 0.0}, s, a, c); };
  cplx numer = oracle::fd1(ks, cplx{2.2, 0.0});
  cplx e1 = std::exp(cplx{0.0, 1.0} * cplx{2.2, 0.0});
  cplx closed = (2.0 * cplx{0.0, 1.0} * a * e1 * e1 + cplx{0.0, 1.0} * c * e1) *
                ks(cplx{2.2, 0.0});
  CHECK(std::abs(numer - closed) < 1e-5 * (1.0 + std::abs(closed)));
}
