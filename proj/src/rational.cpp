#include "heunbc/rational.hpp"

#include <cmath>

#include "heunbc/error.hpp"

namespace heunbc::rational {

mpq_class mpq_from_decimal(const std::string& text) {
  if (text.empty()) fail(errc::invalid_argument, "empty rational literal");
  if (text.find('/') != std::string::npos) {
    try {
      mpq_class q(text, 10);
      q.canonicalize();
      return q;
    } catch (const std::invalid_argument&) {
      fail(errc::invalid_argument, "bad rational literal: " + text);
    }
  }
  std::string s = text;
  std::string sign;
  if (s[0] == '+' || s[0] == '-') {
    if (s[0] == '-') sign = "-";
    s.erase(0, 1);
  }
  auto dot = s.find('.');
  std::string digits =
      dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    fail(errc::invalid_argument, "bad rational literal: " + text);
  mpz_class num(sign + digits);
  mpz_class den(1);
  if (dot != std::string::npos)
    for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

double Q2::to_double() const { return a.get_d() + b.get_d() * std::sqrt(2.0); }

Q2 operator/(const Q2& x, const Q2& y) {
  mpq_class norm = y.a * y.a - 2 * y.b * y.b;
  if (norm == 0) fail(errc::division_error, "division by zero in Q(sqrt 2)");
  return Q2((x.a * y.a - 2 * x.b * y.b) / norm, (x.b * y.a - x.a * y.b) / norm);
}

Q2Poly::Q2Poly(std::vector<Q2> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Q2Poly Q2Poly::monomial(int k, Q2 c) {
  std::vector<Q2> v(size_t(k) + 1);
  v.back() = std::move(c);
  return Q2Poly(std::move(v));
}

CPoly Q2Poly::to_cpoly() const {
  std::vector<cplx> v;
  v.reserve(c_.size());
  for (const auto& q : c_) v.emplace_back(q.to_double(), 0.0);
  return CPoly(std::move(v));
}

Q2Poly operator+(const Q2Poly& x, const Q2Poly& y) {
  std::vector<Q2> v(std::max(x.c_.size(), y.c_.size()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = x[int(i)] + y[int(i)];
  return Q2Poly(std::move(v));
}

Q2Poly operator-(const Q2Poly& x, const Q2Poly& y) {
  std::vector<Q2> v(std::max(x.c_.size(), y.c_.size()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = x[int(i)] - y[int(i)];
  return Q2Poly(std::move(v));
}

Q2Poly operator*(const Q2Poly& x, const Q2Poly& y) {
  if (x.is_zero() || y.is_zero()) return Q2Poly();
  std::vector<Q2> v(x.c_.size() + y.c_.size() - 1);
  for (size_t i = 0; i < x.c_.size(); ++i)
    for (size_t j = 0; j < y.c_.size(); ++j) v[i + j] = v[i + j] + x.c_[i] * y.c_[j];
  return Q2Poly(std::move(v));
}

Q2DivResult Q2Poly::divide(const Q2Poly& x, const Q2Poly& y) {
  if (y.is_zero()) fail(errc::division_error, "polynomial division by zero");
  std::vector<Q2> rem(x.c_.begin(), x.c_.end());
  std::vector<Q2> quo;
  int dy = y.degree();
  if (int(rem.size()) - 1 >= dy) quo.assign(rem.size() - size_t(dy), Q2());
  for (int d = int(rem.size()) - 1; d >= dy; --d) {
    if (rem[size_t(d)].is_zero()) continue;
    Q2 f = rem[size_t(d)] / y[dy];
    quo[size_t(d - dy)] = f;
    for (int j = 0; j <= dy; ++j)
      rem[size_t(d - dy + j)] = rem[size_t(d - dy + j)] - f * y[j];
  }
  return {Q2Poly(std::move(quo)), Q2Poly(std::move(rem))};
}

}  // namespace heunbc::rational
