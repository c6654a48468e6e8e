#include "heunbc/cpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heunbc/error.hpp"

namespace heunbc {

CPoly::CPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  double top = 0.0;
  for (const auto& v : c_) top = std::max(top, std::abs(v));
  if (top == 0.0) {
    c_.clear();
    return;
  }
  while (!c_.empty() && std::abs(c_.back()) <= trim_rel * top) c_.pop_back();
}

CPoly CPoly::monomial(int k, cplx c) {
  if (k < 0) fail(errc::invalid_argument, "monomial: negative power");
  std::vector<cplx> v(size_t(k) + 1, cplx{0.0, 0.0});
  v.back() = c;
  return CPoly(std::move(v));
}

CPoly CPoly::from_roots(const std::vector<cplx>& roots, cplx leading) {
  std::vector<cplx> c{leading};
  for (const auto& r : roots) {
    c.push_back(c.back());
    for (size_t k = c.size() - 2; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return CPoly(std::move(c));
}

cplx CPoly::eval(cplx z) const {
  cplx v{0.0, 0.0};
  for (size_t k = c_.size(); k-- > 0;) v = v * z + c_[k];
  return v;
}

CPoly::Jet CPoly::eval12(cplx z) const {
  cplx v{0.0, 0.0}, d1{0.0, 0.0}, d2{0.0, 0.0};
  for (size_t k = c_.size(); k-- > 0;) {
    d2 = d2 * z + 2.0 * d1;
    d1 = d1 * z + v;
    v = v * z + c_[k];
  }
  return {v, d1, d2};
}

CPoly CPoly::derivative() const {
  if (degree() <= 0) return CPoly();
  std::vector<cplx> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = double(k) * c_[k];
  return CPoly(std::move(d));
}

CPoly CPoly::reversed(int n) const {
  if (n < degree()) fail(errc::invalid_argument, "reversed: n below degree");
  std::vector<cplx> r(size_t(n) + 1, cplx{0.0, 0.0});
  for (size_t k = 0; k < c_.size(); ++k) r[size_t(n) - k] = c_[k];
  return CPoly(std::move(r));
}

CPoly CPoly::scaled(cplx s) const {
  std::vector<cplx> r = c_;
  for (auto& v : r) v *= s;
  return CPoly(std::move(r));
}

CPoly operator+(const CPoly& a, const CPoly& b) {
  std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()), cplx{0.0, 0.0});
  for (size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
  for (size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
  return CPoly(std::move(r));
}

CPoly operator-(const CPoly& a, const CPoly& b) {
  std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()), cplx{0.0, 0.0});
  for (size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
  for (size_t k = 0; k < b.c_.size(); ++k) r[k] -= b.c_[k];
  return CPoly(std::move(r));
}

CPoly operator*(const CPoly& a, const CPoly& b) {
  if (a.is_zero() || b.is_zero()) return CPoly();
  std::vector<cplx> r(a.c_.size() + b.c_.size() - 1, cplx{0.0, 0.0});
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return CPoly(std::move(r));
}

DivResult CPoly::divide(const CPoly& a, const CPoly& b) {
  if (b.is_zero()) fail(errc::division_error, "divide: zero divisor");
  if (a.degree() < b.degree()) return {CPoly(), a};
  std::vector<cplx> rem = a.c_;
  std::vector<cplx> quot(size_t(a.degree() - b.degree()) + 1, cplx{0.0, 0.0});
  cplx lead = b.c_.back();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    cplx q = rem[size_t(k) + b.c_.size() - 1] / lead;
    quot[size_t(k)] = q;
    for (size_t j = 0; j < b.c_.size(); ++j)
      rem[size_t(k) + j] -= q * b.c_[j];
  }
  rem.resize(size_t(std::max(b.degree(), 1)));
  return {CPoly(std::move(quot)), CPoly(std::move(rem))};
}

double CPoly::max_abs_coeff() const {
  double top = 0.0;
  for (const auto& v : c_) top = std::max(top, std::abs(v));
  return top;
}

void sort_roots(std::vector<cplx>& r) {
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

namespace {

// One Aberth sweep in place; returns the largest correction magnitude.
double aberth_sweep(const CPoly& p, const CPoly& dp, std::vector<cplx>& z) {
  double worst = 0.0;
  size_t n = z.size();
  for (size_t j = 0; j < n; ++j) {
    cplx pv = p.eval(z[j]);
    cplx dv = dp.eval(z[j]);
    if (pv == cplx{0.0, 0.0}) continue;
    cplx w = dv == cplx{0.0, 0.0} ? cplx{0.0, 0.0} : pv / dv;
    cplx s{0.0, 0.0};
    for (size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      cplx d = z[j] - z[k];
      if (d == cplx{0.0, 0.0}) d = cplx{1e-30, 0.0};
      s += 1.0 / d;
    }
    cplx denom = 1.0 - w * s;
    cplx corr = denom == cplx{0.0, 0.0} ? w : w / denom;
    z[j] -= corr;
    worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(z[j])));
  }
  return worst;
}

}  // namespace

std::vector<cplx> CPoly::roots() const {
  int d = degree();
  if (d < 0) fail(errc::invalid_argument, "roots: zero polynomial");
  if (d == 0) fail(errc::invalid_argument, "roots: constant polynomial");
  if (d == 1) return {-c_[0] / c_[1]};

  // Cauchy-style inclusion radius, all roots inside |z| <= R.
  double ratio = 0.0;
  for (int k = 0; k < d; ++k)
    ratio = std::max(ratio, std::abs(c_[size_t(k)] / c_.back()));
  double radius = 1.0 + ratio;

  std::vector<cplx> z(static_cast<size_t>(d), cplx{0.0, 0.0});
  for (int j = 0; j < d; ++j) {
    double phi = 2.0 * std::numbers::pi * double(j) / double(d) + 0.4;
    z[size_t(j)] = std::polar(0.7 * radius, phi);
  }

  CPoly dp = derivative();
  const int cap = 500;
  bool converged = false;
  double best = 1e300;
  int stale = 0;
  for (int it = 0; it < cap; ++it) {
    double worst = aberth_sweep(*this, dp, z);
    if (worst < 1e-14) {
      converged = true;
      break;
    }
    // Small corrections that stop shrinking mean the sweep reached its
    // roundoff floor for this coefficient scale; accept and let the Newton
    // polish below finish the job.
    if (worst < 0.7 * best) {
      best = worst;
      stale = 0;
    } else if (++stale >= 12 && worst < 1e-10) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    error e(errc::convergence_failure, "roots: iteration cap reached");
    e.iterate = z;
    throw e;
  }

  for (auto& r : z) {
    for (int it = 0; it < 3; ++it) {
      cplx pv = eval(r);
      cplx dv = dp.eval(r);
      if (dv == cplx{0.0, 0.0}) break;
      cplx step = pv / dv;
      if (std::abs(step) > 1e-6 * (1.0 + std::abs(r))) break;
      r -= step;
    }
  }
  sort_roots(z);
  return z;
}

}  // namespace heunbc
