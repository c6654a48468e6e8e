#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "heunbc/bhe.hpp"
#include "heunbc/error.hpp"
#include "heunbc/qes.hpp"
#include "heunbc/rational.hpp"
#include "oracles.hpp"

using namespace heunbc::qes;
using heunbc::cplx;
using heunbc::CPoly;
using heunbc::errc;
using heunbc::rational::Q2;
using heunbc::rational::Q2Poly;
namespace bhe = heunbc::bhe;

namespace {

constexpr double rt2 = 1.4142135623730951;

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

// The published degree-3 family, transcribed term by term as an independent
// route to the same polynomials.
double tbl_P1(double E, double s, double c) { return E - 2 * c * s + rt2 / 4 * c * c; }
double tbl_P2(double E, double s, double c) {
  return E * E + (rt2 / 2 * c * c - 2 * c - 4 * c * s) * E + 4 * c * c * s * s +
         (-rt2 * c * c * c + 4 * c * c - 64) * s + std::pow(c, 4) / 8 -
         rt2 / 2 * c * c * c;
}
double tbl_P3(double E, double s, double c) {
  double c2 = c * c, c3 = c2 * c, c4 = c3 * c, c5 = c4 * c, c6 = c5 * c;
  double e2 = (3 * rt2 / 4 * c2 - 6 * c - 6 * c * s);
  double e1 = 8 * c2 + 3.0 / 8 * c4 - 128 * s - 3 * rt2 * c3 * s - 32 + 24 * c2 * s +
              12 * c2 * s * s - 3 * rt2 * c3;
  double e0 = -8 * c3 * s * s * s + (256 * c - 24 * c3 + 3 * rt2 * c4) * s * s +
              (320 * c - 32 * rt2 * c2 - 16 * c3 + 6 * rt2 * c4 - 0.75 * c5) * s -
              8 * rt2 * c2 + 2 * rt2 * c4 - 0.75 * c5 + rt2 / 32 * c6;
  return E * E * E + e2 * E * E + e1 * E + e0;
}
double tbl_Q1(double E, double s, double c) { return E - 6 * c - 2 * c * s + rt2 / 4 * c * c; }
double tbl_Q2(double E, double s, double c) {
  double c2 = c * c, c3 = c2 * c, c4 = c3 * c;
  return E * E + (-4 * c * s + rt2 / 2 * c2 - 14 * c) * E + 4 * c2 * s * s +
         (28 * c2 + 128 - rt2 * c3) * s + c4 / 8 - 7 * rt2 / 2 * c3 + 48 * c2 + 192;
}

}  // namespace

TEST_CASE("field arithmetic over Q(sqrt 2) is exact") {
  Q2 u(1, 1), v(1, -1);
  CHECK((u * v == Q2(-1)));
  CHECK((Q2(1) / Q2(3, 2) == Q2(3, -2)));
  Q2 w = Q2(mpq_class(7, 3), mpq_class(-1, 6));
  CHECK(((w / u) * u == w));
  CHECK(w.to_double() == doctest::Approx(7.0 / 3.0 - std::sqrt(2.0) / 6.0));
  CHECK(throws_kind([&] { (void)(u / Q2()); }, errc::division_error));

  Q2Poly a({Q2(-2), Q2(0), Q2(1)});
  Q2Poly b({Q2::sqrt2(-1), Q2(1)});
  auto d = Q2Poly::divide(a, b);
  CHECK(d.remainder.is_zero());
  CHECK(d.quotient.degree() == 1);
  CHECK((d.quotient[0] == Q2::sqrt2()));
  CHECK((d.quotient[1] == Q2(1)));
  auto r = Q2Poly::divide(Q2Poly({Q2(1), Q2(0), Q2(1)}), b);
  CHECK(!r.remainder.is_zero());
  CHECK(((r.quotient * b + r.remainder - Q2Poly({Q2(1), Q2(0), Q2(1)})).is_zero()));
  CHECK(throws_kind([&] { Q2Poly::divide(a, Q2Poly()); }, errc::division_error));
}

TEST_CASE("canonical parameter map and closure bookkeeping") {
  auto q = bhe_from_turbiner({0.5, 1, 0.0, cplx{0.0, 0.0}});
  CHECK(q.alpha == 0.0);
  CHECK(q.beta == 0.0);
  CHECK(q.gamma == 2.0);
  CHECK(std::abs(q.delta) == 0.0);

  for (double s : {0.3, 1.0, 2.7})
    for (int J : {0, 1, 4})
      for (double c : {0.0, 1.5}) {
        auto m = bhe_from_turbiner({s, J, c, cplx{0.4, 0.0}});
        CHECK(m.gamma - m.alpha - 2.0 == doctest::Approx(2.0 * (J - 1)).epsilon(1e-14));
        auto rep = condition_check(s, J, c);
        CHECK(rep.derived_holds);
        CHECK(rep.derived_defect < 1e-12);
      }

  // The literal closure display holds only on the isolated slice c = 0,
  // s = 1/2 (minus branch); elsewhere the identity carries the bookkeeping.
  CHECK(condition_check(0.5, 2, 0.0).literal_holds);
  CHECK(!condition_check(0.5, 2, 1.0).literal_holds);
  CHECK(!condition_check(0.8, 2, 0.0).literal_holds);

  CHECK(throws_kind([] { bhe_from_turbiner({-0.5, 1, 0.0, cplx{}}); }, errc::precondition));
  CHECK(throws_kind([] { bhe_from_turbiner({0.5, -1, 0.0, cplx{}}); }, errc::invalid_argument));
}

TEST_CASE("recursion reproduces the published degree-3 table") {
  const double pts[5][3] = {{0.7, 0.3, 1.2},
                            {-1.3, 1.7, 0.4},
                            {2.1, 0.9, -0.8},
                            {0.2, 2.3, 2.0},
                            {-2.6, 0.6, -1.5}};
  for (const auto& pt : pts) {
    double E = pt[0], s = pt[1], c = pt[2];
    auto P = bender_dunne_polys(s, 3, c, 5);
    REQUIRE(P.size() == 6);
    cplx Ez{E, 0.0};
    double want[6] = {1.0,
                      tbl_P1(E, s, c),
                      tbl_P2(E, s, c),
                      tbl_P3(E, s, c),
                      tbl_Q1(E, s, c) * tbl_P3(E, s, c),
                      tbl_Q2(E, s, c) * tbl_P3(E, s, c)};
    for (int k = 0; k <= 5; ++k)
      CHECK(std::abs(P[size_t(k)].eval(Ez) - want[k]) <=
            1e-11 * std::max(1.0, std::abs(want[k])));
  }
}

TEST_CASE("the critical member divides every later one") {
  auto steps = factorization_check(0.5, 3, 1.0, 2);
  REQUIRE(steps.size() == 2);
  for (const auto& st : steps) CHECK(st.remainder_norm < 1e-10);
  for (double E : {-2.0, -0.5, 0.0, 1.3, 2.9}) {
    cplx Ez{E, 0.0};
    CHECK(std::abs(steps[0].quotient.eval(Ez) - tbl_Q1(E, 0.5, 1.0)) <
          1e-10 * std::max(1.0, std::abs(tbl_Q1(E, 0.5, 1.0))));
    CHECK(std::abs(steps[1].quotient.eval(Ez) - tbl_Q2(E, 0.5, 1.0)) <
          1e-10 * std::max(1.0, std::abs(tbl_Q2(E, 0.5, 1.0))));
  }

  // J = 1: the recursion drops its second term at k = 2, so P_1 divides
  // everything after it.
  for (const auto& st : factorization_check(0.9, 1, 1.7, 3))
    CHECK(st.remainder_norm < 1e-10);

  CHECK(throws_kind([] { factorization_check(0.5, 0, 0.0, 1); }, errc::precondition));
}

TEST_CASE("exact factorization over the quadratic field") {
  for (long cnum : {0L, 1L, 2L})
    for (int J = 1; J <= 4; ++J)
      for (mpq_class s : {mpq_class(1, 2), mpq_class(7, 3)}) {
        auto steps = factorization_check_exact(s, J, mpq_class(cnum), 4);
        REQUIRE(steps.size() == 4);
        for (const auto& st : steps) CHECK(st.remainder_zero);
      }

  // Reconstruction: quotient times the critical member gives the dividend
  // back exactly.
  mpq_class s(1, 2), c(2);
  auto P = bender_dunne_polys_exact(s, 3, c, 7);
  auto steps = factorization_check_exact(s, 3, c, 4);
  for (int n = 1; n <= 4; ++n)
    CHECK(((steps[size_t(n) - 1].quotient * P[3] - P[size_t(3 + n)]).is_zero()));
}

TEST_CASE("zero-coupling parity") {
  auto P = bender_dunne_polys(0.8, 3, 0.0, 8);
  for (int k = 0; k <= 8; ++k)
    for (int j = 0; j <= P[size_t(k)].degree(); ++j)
      if ((k - j) % 2 != 0) CHECK(std::abs(P[size_t(k)][j]) == 0.0);

  cplx E{1.37, 0.0};
  for (int k = 0; k <= 8; ++k) {
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    CHECK(P[size_t(k)].eval(-E) == sign * P[size_t(k)].eval(E));
  }
}

TEST_CASE("both spectrum routes agree") {
  for (int J : {1, 2, 3, 4})
    for (double c : {0.0, 1.0, 2.0})
      for (double s : {0.5, 1.25}) {
        auto spec = qes_spectrum(s, J, c);
        REQUIRE(int(spec.size()) == J);
        auto roots = qes_det_poly(s, J, c).roots();
        REQUIRE(roots.size() == spec.size());
        double scale = 1.0;
        for (double e : spec) scale = std::max(scale, std::abs(e));
        for (std::size_t i = 0; i < roots.size(); ++i) {
          CHECK(std::abs(roots[i].imag()) < 1e-9 * scale);
          CHECK(std::abs(roots[i].real() - spec[i]) < 1e-9 * scale);
        }
      }

  CHECK(qes_spectrum(0.7, 0, 1.0).empty());
  CHECK(qes_det_poly(0.7, 0, 1.0).degree() == 0);

  // Degree-1 sector in closed form: E = 2cs - sqrt(2) c^2 / 4.
  for (double c : {0.0, 1.3}) {
    auto spec = qes_spectrum(0.9, 1, c);
    REQUIRE(spec.size() == 1);
    CHECK(spec[0] == doctest::Approx(2.0 * c * 0.9 - rt2 * c * c / 4.0).epsilon(1e-12));
  }

  // Zero coupling: the spectrum is symmetric about zero.
  auto sym = qes_spectrum(0.6, 4, 0.0);
  for (std::size_t i = 0; i < sym.size(); ++i)
    CHECK(sym[i] == doctest::Approx(-sym[sym.size() - 1 - i]).epsilon(1e-10));
}

TEST_CASE("wavefunction solves the eigenproblem") {
  // Single-member sector: psi is the bare weight factor.
  TurbinerParams p1{0.7, 1, 0.0, cplx{0.0, 0.0}};
  for (double x : {0.5, 1.0, 2.0}) {
    CHECK(wavefunction_residual(p1, cplx{x, 0.0}) < 1e-9);
    cplx psi = wavefunction(p1, cplx{x, 0.0});
    cplx bare = std::exp(-std::pow(x, 4) / 4.0) * std::pow(x, 2.0 * 0.7 - 0.5);
    CHECK(std::abs(psi / bare - 1.0 / std::tgamma(1.4)) < 1e-12);
  }

  // Full degree-3 sector at nonzero coupling, every admissible energy.
  auto spec = qes_spectrum(0.5, 3, 1.0);
  for (double E : spec) {
    TurbinerParams p{0.5, 3, 1.0, cplx{E, 0.0}};
    for (double x : {0.5, 1.1, 2.3})
      CHECK(wavefunction_residual(p, cplx{x, 0.0}) < 1e-9);
    CHECK(wavefunction_residual(p, cplx{0.8, 0.3}) < 1e-9);
    TurbinerParams off{0.5, 3, 1.0, cplx{E + 0.01, 0.0}};
    CHECK(wavefunction_residual(off, cplx{1.1, 0.0}) > 1e-3);
    CHECK(throws_kind([&] { wavefunction(off, cplx{1.0, 0.0}); }, errc::precondition));
  }

  CHECK(throws_kind([] { wavefunction({0.5, 0, 0.0, cplx{}}, cplx{1.0, 0.0}); },
                    errc::precondition));
  CHECK(throws_kind([] { wavefunction({0.2, 1, 0.0, cplx{0.4, 0.0}}, cplx{}); },
                    errc::precondition));

  // At the exponent threshold the head factor is exactly one.
  TurbinerParams thr{0.25, 1, 0.0, cplx{0.0, 0.0}};
  CHECK(std::abs(wavefunction(thr, cplx{}) - 1.0 / std::tgamma(0.5)) < 1e-14);
}

TEST_CASE("periodic coefficients compose with the canonical map") {
  for (double s : {0.5, 0.8, 1.9})
    for (int J : {1, 3})
      for (double c : {0.0, 1.1})
        for (double E : {0.0, -1.7}) {
          TurbinerParams p{s, J, c, cplx{E, 0.0}};
          auto k = periodic_turbiner_coeffs(p);
          auto direct = bhe_from_turbiner(p);
          auto composed = bhe::bhe_from_pbhe(k);
          CHECK(std::abs(composed.alpha - direct.alpha) < 1e-12);
          CHECK(std::abs(composed.beta - direct.beta) < 1e-12);
          CHECK(std::abs(composed.gamma - direct.gamma) < 1e-12);
          CHECK(std::abs(composed.delta - direct.delta) < 1e-12);
          CHECK(k.K4 == -1.0);
          CHECK(k.K0 == doctest::Approx(-(2 * s - 1) * (2 * s - 1) / 4.0).epsilon(1e-14));
        }

  auto k = periodic_turbiner_coeffs({0.5, 2, 0.0, cplx{1.0, 0.0}});
  CHECK(k.K0 == 0.0);
  CHECK(k.sigma == 0.0);
  CHECK(k.K2 == doctest::Approx(2.0 * 2 + 2.0 * 0.5 - 1.0));
}

TEST_CASE("series coefficients match the energy polynomials") {
  struct Cfg {
    double s, c, E;
    int J;
  };
  for (Cfg cfg : {Cfg{0.8, 1.1, 0.9, 3}, Cfg{1.3, -0.7, -1.4, 2}}) {
    TurbinerParams p{cfg.s, cfg.J, cfg.c, cplx{cfg.E, 0.0}};
    auto A = bhe::series_coeffs(bhe_from_turbiner(p), 12);
    auto P = bender_dunne_polys(cfg.s, cfg.J, cfg.c, 12);
    double factor = 1.0;
    for (int k = 0; k <= 12; ++k) {
      cplx want = factor * P[size_t(k)].eval(p.E);
      CHECK(std::abs(A[size_t(k)] - want) <= 1e-11 * std::max(1.0, std::abs(want)));
      factor *= -rt2 / 4.0;
    }
  }
}
