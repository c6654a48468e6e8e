#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "heunbc/error.hpp"
#include "heunbc/spectra.hpp"
#include "oracles.hpp"

using namespace heunbc::spectra;
using heunbc::cplx;

namespace {

// A terminating configuration with prescribed sigma on the minus branch:
// K3 is derived so that K3^2/4 + K2 - 2 sigma = 2(n+1).
SpectrumProblem derived_problem(int n, double sigma, double K2) {
  double quarter = 2.0 * double(n + 1) + 2.0 * sigma - K2;
  REQUIRE(quarter > 0.0);
  double K3 = -2.0 * std::sqrt(quarter);
  return make_problem(n, K3, K2, -sigma * sigma, Branch::minus);
}

}  // namespace

TEST_CASE("termination detection matches the worked configuration") {
  auto plus = check_termination(-1.0, 4.75, -0.25, Branch::plus);
  REQUIRE(plus.has_value());
  CHECK(*plus == 2);
  auto minus = check_termination(-1.0, 4.75, -0.25, Branch::minus);
  REQUIRE(minus.has_value());
  CHECK(*minus == 1);
  CHECK(!check_termination(-1.0, 5.05, -0.25, Branch::plus).has_value());
  CHECK(!check_termination(-1.0, 4.75, 0.25, Branch::plus).has_value());
}

TEST_CASE("the worked configuration yields the cubic spectrum") {
  auto p = make_problem(2, -1.0, 4.75, -0.25, Branch::plus);
  CHECK(p.sigma == doctest::Approx(-0.5));
  CHECK(p.k2 == doctest::Approx(4.0));
  auto spec = k1_spectrum(p);
  REQUIRE(spec.size() == 3);
  double s17 = std::sqrt(17.0);
  CHECK(std::abs(spec[0] - cplx{(3.0 - s17) / 2.0, 0.0}) < 1e-10);
  CHECK(std::abs(spec[1]) < 1e-10);
  CHECK(std::abs(spec[2] - cplx{(3.0 + s17) / 2.0, 0.0}) < 1e-10);
}

TEST_CASE("determinant roots equal the eigenvalue-polynomial roots") {
  // Dual route: the same spectrum through the terminating-series eigenvalues,
  // K1 = -delta/2 with alpha = 2 sigma, beta = -K3.
  for (int n : {1, 2, 3, 4}) {
    auto p = derived_problem(n, 0.8, 1.5);
    auto spec = k1_spectrum(p);
    auto sols = heunbc::bhe::hautot(n, 2.0 * p.sigma, -p.K3);
    REQUIRE(spec.size() == sols.size());
    std::vector<cplx> mapped;
    for (const auto& s : sols) mapped.push_back(-0.5 * s.delta);
    heunbc::sort_roots(mapped);
    for (size_t k = 0; k < spec.size(); ++k)
      CHECK(std::abs(spec[k] - mapped[k]) < 1e-8 * (1.0 + std::abs(spec[k])));
  }
}

TEST_CASE("low-order determinants match hand expansion") {
  auto p = derived_problem(1, 0.5, 1.0);
  auto d = det_poly(p);
  REQUIRE(d.degree() == 2);
  // D_2 = (k1 - K3) k1 - (1 + 2 sigma) k2 with k1 = -K1 - K3 (1+2 sigma)/2.
  for (double K1 : {-1.5, 0.0, 0.7, 2.2}) {
    double k1 = -K1 - p.K3 * (1.0 + 2.0 * p.sigma) / 2.0;
    double want = (k1 - p.K3) * k1 - (1.0 + 2.0 * p.sigma) * p.k2;
    CHECK(std::abs(d.eval(cplx{K1, 0.0}) - want) < 1e-11 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("eigen-solutions satisfy the periodic-form equation") {
  auto p = derived_problem(3, 0.8, 1.5);
  for (const auto& s : bh_family(p)) {
    for (cplx z : {cplx{0.0, 0.0}, cplx{0.3, 1.1}, cplx{-0.8, 2.4},
                   cplx{0.5, -0.9}}) {
      CHECK(pbhe_residual(s, z) < 1e-9);
    }
  }
}

TEST_CASE("eigen-solutions pick up the Floquet factor over one period") {
  auto p = derived_problem(2, 0.75, 0.5);
  for (const auto& s : bh_family(p))
    for (cplx z : {cplx{0.0, 0.4}, cplx{0.2, -1.0}})
      CHECK(floquet_defect(s, z) < 1e-10);
}

TEST_CASE("both representations of the solution agree") {
  auto p = derived_problem(2, 0.6, 1.0);
  auto s = bh_solution(p, 1);
  for (cplx z : {cplx{0.1, 0.7}, cplx{-0.4, 2.0}}) {
    cplx w = std::exp(z);
    cplx via_p = s.base.poly.eval(w) * std::exp(s.exponent(z));
    cplx via_y = s.base.reversed.eval(1.0 / w) *
                 std::exp(s.exponent(z) + double(p.n) * z);
    CHECK(std::abs(via_p - via_y) < 1e-12 * std::abs(via_p));
    CHECK(std::abs(s.eval(z).v - via_p) < 1e-12 * std::abs(via_p));
  }
}

TEST_CASE("solution derivatives match finite differences") {
  auto p = derived_problem(2, 0.6, 1.0);
  auto s = bh_solution(p, 0);
  cplx z{0.2, 0.5};
  auto jet = s.eval(z);
  auto f = [&](cplx w) { return s.eval(w).v; };
  CHECK(std::abs(jet.d1 - oracle::fd1(f, z)) < 1e-5 * (1.0 + std::abs(jet.d1)));
  CHECK(std::abs(jet.d2 - oracle::fd2(f, z)) < 1e-4 * (1.0 + std::abs(jet.d2)));
}

TEST_CASE("scaled evaluation agrees with plain evaluation in range") {
  auto p = derived_problem(2, 0.6, 1.0);
  auto s = bh_solution(p, 2);
  for (cplx z : {cplx{0.0, 1.0}, cplx{0.9, 2.2}}) {
    cplx plain = s.eval(z).v;
    cplx scaled = s.eval_scaled(z).value();
    CHECK(std::abs(plain - scaled) < 1e-12 * (1.0 + std::abs(plain)));
  }
}

TEST_CASE("invalid configurations are rejected") {
  CHECK_THROWS_AS((void)make_problem(2, -1.0, 4.80, -0.25, Branch::plus),
                  heunbc::error);
  CHECK_THROWS_AS((void)make_problem(2, -1.0, 4.75, 0.25, Branch::plus),
                  heunbc::error);
  auto p = derived_problem(1, 0.5, 1.0);
  CHECK_THROWS_AS((void)bh_solution(p, 5), heunbc::error);
  CHECK_THROWS_AS((void)bh_solution(p, -1), heunbc::error);
}
