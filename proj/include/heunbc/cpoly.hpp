#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "heunbc/scaled.hpp"

namespace heunbc {

using cplx = std::complex<double>;

struct DivResult;

// Dense univariate polynomial over the complex numbers, coefficients stored
// ascending by power.  Trailing coefficients below trim_rel * max|c| are
// dropped on construction so degree() reflects the numerically honest degree.
class CPoly {
 public:
  static constexpr double trim_rel = 1e-13;

  CPoly() = default;
  explicit CPoly(std::vector<cplx> coeffs);
  static CPoly constant(cplx c) { return CPoly({c}); }
  static CPoly monomial(int k, cplx c = 1.0);
  static CPoly from_roots(const std::vector<cplx>& roots, cplx leading = 1.0);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return is_zero() ? -1 : int(c_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx operator[](int k) const {
    return (k < 0 || k >= int(c_.size())) ? cplx{0.0, 0.0} : c_[size_t(k)];
  }

  cplx eval(cplx z) const;
  // Value together with first and second derivative at z.
  struct Jet {
    cplx v, d1, d2;
  };
  Jet eval12(cplx z) const;
  ScaledC eval_scaled(cplx z) const { return ScaledC::from(eval(z)); }

  CPoly derivative() const;
  // z^n * p(1/z); requires n >= degree().
  CPoly reversed(int n) const;
  CPoly scaled(cplx s) const;

  friend CPoly operator+(const CPoly& a, const CPoly& b);
  friend CPoly operator-(const CPoly& a, const CPoly& b);
  friend CPoly operator*(const CPoly& a, const CPoly& b);

  // Long division a / b.  remainder has degree < degree(b).
  static DivResult divide(const CPoly& a, const CPoly& b);

  // All roots, via the Aberth iteration with a Newton polish, sorted by
  // (Re, Im).  Throws convergence_failure with the final iterate attached if
  // the simultaneous iteration stalls.
  std::vector<cplx> roots() const;

  double max_abs_coeff() const;

 private:
  std::vector<cplx> c_;
};

struct DivResult {
  CPoly quotient, remainder;
};

// Roots sorted by (Re, Im) lexicographically; shared by every spectrum
// routine so root lists compare positionally across routes.
void sort_roots(std::vector<cplx>& r);

}  // namespace heunbc
