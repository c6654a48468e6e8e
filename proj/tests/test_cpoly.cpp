#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <vector>

#include "heunbc/cpoly.hpp"
#include "heunbc/error.hpp"

using heunbc::CPoly;
using heunbc::cplx;

TEST_CASE("construction trims numerically dead leading coefficients") {
  CPoly p({cplx{1.0, 0.0}, cplx{2.0, 0.0}, cplx{1e-16, 0.0}});
  CHECK(p.degree() == 1);
  CPoly z({cplx{0.0, 0.0}, cplx{0.0, 0.0}});
  CHECK(z.is_zero());
  CHECK(z.degree() == -1);
}

TEST_CASE("evaluation matches the Horner jet") {
  CPoly p({cplx{3.0, 0.0}, cplx{-1.0, 2.0}, cplx{0.0, 0.0}, cplx{5.0, -1.0}});
  cplx z{0.3, -0.7};
  auto jet = p.eval12(z);
  CHECK(std::abs(jet.v - p.eval(z)) == doctest::Approx(0.0));
  CHECK(std::abs(jet.d1 - p.derivative().eval(z)) < 1e-13);
  CHECK(std::abs(jet.d2 - p.derivative().derivative().eval(z)) < 1e-12);
}

TEST_CASE("reversal is an involution on full-degree polynomials") {
  CPoly p({cplx{2.0, 1.0}, cplx{0.5, 0.0}, cplx{-3.0, 0.0}});
  CPoly q = p.reversed(2).reversed(2);
  REQUIRE(q.degree() == p.degree());
  for (int k = 0; k <= 2; ++k) CHECK(std::abs(q[k] - p[k]) < 1e-15);
  CHECK_THROWS_AS((void)p.reversed(1), heunbc::error);
}

TEST_CASE("reversal pads with the requested degree") {
  CPoly p({cplx{1.0, 0.0}, cplx{4.0, 0.0}});
  CPoly r = p.reversed(3);
  CHECK(r.degree() == 3);
  CHECK(std::abs(r[2] - cplx{4.0, 0.0}) == doctest::Approx(0.0));
  CHECK(std::abs(r[3] - cplx{1.0, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("arithmetic agrees with pointwise evaluation") {
  CPoly a({cplx{1.0, 0.0}, cplx{2.0, -1.0}, cplx{0.0, 3.0}});
  CPoly b({cplx{-2.0, 0.5}, cplx{1.0, 1.0}});
  for (cplx z : {cplx{0.2, 0.1}, cplx{-1.5, 2.0}, cplx{3.0, 0.0}}) {
    CHECK(std::abs((a + b).eval(z) - (a.eval(z) + b.eval(z))) < 1e-12);
    CHECK(std::abs((a - b).eval(z) - (a.eval(z) - b.eval(z))) < 1e-12);
    CHECK(std::abs((a * b).eval(z) - a.eval(z) * b.eval(z)) < 1e-12);
  }
}

TEST_CASE("division multiplies back to the dividend") {
  CPoly b({cplx{1.0, 0.0}, cplx{0.0, 1.0}, cplx{2.0, 0.0}});
  CPoly q0({cplx{-0.5, 0.0}, cplx{3.0, 1.0}});
  CPoly r0({cplx{0.25, -0.25}});
  CPoly a = b * q0 + r0;
  auto [q, r] = CPoly::divide(a, b);
  CPoly back = b * q + r - a;
  CHECK(back.max_abs_coeff() < 1e-12 * a.max_abs_coeff());
  CHECK(r.degree() < b.degree());
}

TEST_CASE("roots recover a synthetic spectrum") {
  std::vector<cplx> want{{-2.0, 0.0}, {-0.5, 1.5}, {1.0, 0.0}, {3.0, -1.0}};
  heunbc::sort_roots(want);
  CPoly p = CPoly::from_roots(want, cplx{2.0, 0.5});
  auto got = p.roots();
  REQUIRE(got.size() == want.size());
  for (size_t k = 0; k < want.size(); ++k)
    CHECK(std::abs(got[k] - want[k]) < 1e-10);
}

TEST_CASE("roots handle a clustered double root") {
  std::vector<cplx> want{{1.0, 0.0}, {1.0, 0.0}, {-4.0, 0.0}};
  CPoly p = CPoly::from_roots(want);
  auto got = p.roots();
  REQUIRE(got.size() == 3);
  CHECK(std::abs(got[0] - cplx{-4.0, 0.0}) < 1e-9);
  CHECK(std::abs(got[1] - cplx{1.0, 0.0}) < 1e-6);
  CHECK(std::abs(got[2] - cplx{1.0, 0.0}) < 1e-6);
}

TEST_CASE("roots of degenerate polynomials are rejected") {
  CHECK_THROWS_AS((void)CPoly().roots(), heunbc::error);
  CHECK_THROWS_AS((void)CPoly::constant(cplx{2.0, 0.0}).roots(), heunbc::error);
}

TEST_CASE("from_roots expands elementary symmetric functions") {
  CPoly p = CPoly::from_roots({cplx{2.0, 0.0}, cplx{-3.0, 0.0}});
  CHECK(std::abs(p[0] - cplx{-6.0, 0.0}) < 1e-14);
  CHECK(std::abs(p[1] - cplx{1.0, 0.0}) < 1e-14);
  CHECK(std::abs(p[2] - cplx{1.0, 0.0}) < 1e-14);
}
