#include "qwjoin/exact_arith.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "qwjoin/errors.hpp"

namespace qwjoin {

int nu2(i64 x) {
  if (x == 0) throw DomainError("nu2 of zero is undefined");
  int v = 0;
  while ((x & 1) == 0) {
    x /= 2;
    ++v;
  }
  return v;
}

int nu2_or_inf(i64 x) { return x == 0 ? kNu2Infinity : nu2(x); }

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw NumericError("integer overflow in addition");
  return r;
}

i64 checked_sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw NumericError("integer overflow in subtraction");
  return r;
}

i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw NumericError("integer overflow in multiplication");
  return r;
}

i64 gcd2(i64 a, i64 b) {
  if (a == std::numeric_limits<i64>::min() || b == std::numeric_limits<i64>::min())
    throw NumericError("gcd operand out of range");
  return std::gcd(a, b);
}

i64 lcm2(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  i64 g = gcd2(a, b);
  return std::abs(checked_mul(a / g, b));
}

i64 gcd_all(std::span<const i64> xs) {
  i64 g = 0;
  for (i64 x : xs) g = gcd2(g, x);
  return g;
}

i64 lcm_all(std::span<const i64> xs) {
  i64 l = 1;
  for (i64 x : xs) l = lcm2(l, x);
  return l;
}

i64 isqrt(i64 x) {
  if (x < 0) throw DomainError("isqrt of a negative number");
  auto r = static_cast<i64>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && r > x / r) --r;
  while ((r + 1) <= x / (r + 1)) ++r;
  return r;
}

bool is_perfect_square(i64 x) {
  if (x < 0) return false;
  i64 r = isqrt(x);
  return r * r == x;
}

SquarefreeSplit squarefree_part(i64 x) {
  if (x <= 0) throw DomainError("squarefree_part needs a positive integer");
  i64 s = 1;
  i64 f = 1;
  i64 rest = x;
  for (i64 p = 2; p <= rest / p; ++p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) f *= p;
    if (e % 2 == 1) s *= p;
  }
  s *= rest;
  return {s, f};
}

Rational::Rational(i64 num, i64 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = checked_sub(0, num);
    den = checked_sub(0, den);
  }
  i64 g = gcd2(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::operator+(const Rational& o) const {
  i64 g = gcd2(den_, o.den_);
  i64 d = checked_mul(den_ / g, o.den_);
  i64 n = checked_add(checked_mul(num_, o.den_ / g), checked_mul(o.num_, den_ / g));
  return Rational(n, d);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
  i64 g1 = gcd2(num_, o.den_);
  i64 g2 = gcd2(o.num_, den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  return Rational(checked_mul(num_ / g1, o.num_ / g2), checked_mul(den_ / g2, o.den_ / g1));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw DomainError("division by zero rational");
  return *this * Rational(o.den_, o.num_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
  __extension__ using wide = __int128;
  const wide l = static_cast<wide>(num_) * o.den_;
  const wide r = static_cast<wide>(o.num_) * den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

int nu2(const Rational& r) {
  if (r.num() == 0) throw DomainError("nu2 of zero is undefined");
  return nu2(r.num()) - nu2(r.den());
}

std::optional<Rational> reconstruct_rational(double x, i64 max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  if (std::fabs(x) > 1e15) return std::nullopt;
  // convergents h/k of the continued fraction of x
  long double rest = x;
  long double h_prev = 1, h = std::floor(rest);
  long double k_prev = 0, k = 1;
  for (int iter = 0; iter < 64; ++iter) {
    if (k > static_cast<long double>(max_den)) break;
    if (std::fabs(static_cast<long double>(x) - h / k) <= tol)
      return Rational(static_cast<i64>(h), static_cast<i64>(k));
    long double frac = rest - std::floor(rest);
    if (frac < 1e-18L) break;
    rest = 1.0L / frac;
    long double a = std::floor(rest);
    long double h_next = a * h + h_prev;
    long double k_next = a * k + k_prev;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  return std::nullopt;
}

std::optional<i64> reconstruct_integer(double x, double tol) {
  if (!std::isfinite(x) || std::fabs(x) > 9e15) return std::nullopt;
  double r = std::round(x);
  if (std::fabs(x - r) <= tol * std::max(1.0, std::fabs(x) * 1e-3)) return static_cast<i64>(r);
  return std::nullopt;
}

double QuadraticEigenvalue::value() const {
  return (static_cast<double>(a) + static_cast<double>(b) * std::sqrt(static_cast<double>(delta))) / 2.0;
}

QuadraticEigenvalue make_integer_eigenvalue(i64 lambda) { return {checked_mul(2, lambda), 0, 1}; }

namespace {

// Candidate (a, delta) from a pair with integer sum and integer squared difference.
std::optional<std::pair<i64, i64>> pair_form(double x, double y, double tol) {
  auto s = reconstruct_integer(x + y, tol);
  if (!s) return std::nullopt;
  double d = x - y;
  auto n = reconstruct_integer(d * d, tol * std::max(1.0, 4.0 * std::fabs(d)));
  if (!n || *n <= 0) return std::nullopt;
  auto split = squarefree_part(*n);
  if (split.s <= 1) return std::nullopt;
  return std::make_pair(*s, split.s);
}

std::optional<std::vector<i64>> fit_form(std::span<const double> values, i64 a, i64 delta, double tol) {
  double root = std::sqrt(static_cast<double>(delta));
  std::vector<i64> b;
  b.reserve(values.size());
  for (double v : values) {
    double bb = (2.0 * v - static_cast<double>(a)) / root;
    auto bi = reconstruct_integer(bb, tol * std::max(1.0, 4.0 / root));
    if (!bi) return std::nullopt;
    b.push_back(*bi);
  }
  return b;
}

}  // namespace

std::optional<ArithmeticForm> classify_values(std::span<const double> values, double tol) {
  ArithmeticForm out;
  bool all_int = true;
  for (double v : values) {
    auto r = reconstruct_integer(v, tol);
    if (!r) {
      all_int = false;
      break;
    }
    out.b.push_back(checked_mul(2, *r));
  }
  if (all_int) return out;

  std::vector<std::pair<i64, i64>> candidates;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (auto c = pair_form(values[i], values[j], tol)) candidates.push_back(*c);
    }
  }
  // an integer element pins a = 2c
  for (double c : values) {
    auto ci = reconstruct_integer(c, tol);
    if (!ci) continue;
    for (double v : values) {
      if (reconstruct_integer(v, tol)) continue;
      double d = 2.0 * v - 2.0 * static_cast<double>(*ci);
      auto n = reconstruct_integer(d * d, tol * std::max(1.0, 4.0 * std::fabs(d)));
      if (!n || *n <= 0) continue;
      auto split = squarefree_part(*n);
      if (split.s > 1) candidates.emplace_back(2 * *ci, split.s);
    }
  }
  for (auto [a, delta] : candidates) {
    if (auto b = fit_form(values, a, delta, tol)) {
      out.a = a;
      out.delta = delta;
      out.b = *b;
      return out;
    }
  }
  return std::nullopt;
}

std::optional<QuadraticEigenvalue> classify_with_partners(double lambda, std::span<const double> partners,
                                                          double tol) {
  if (auto r = reconstruct_integer(lambda, tol)) return make_integer_eigenvalue(*r);
  for (double mu : partners) {
    if (std::fabs(mu - lambda) < 1e-6) continue;
    auto form = pair_form(lambda, mu, tol);
    if (!form) continue;
    auto [a, delta] = *form;
    double bb = (2.0 * lambda - static_cast<double>(a)) / std::sqrt(static_cast<double>(delta));
    auto b = reconstruct_integer(bb, tol * 10);
    if (b && *b != 0) return QuadraticEigenvalue{a, *b, delta};
  }
  return std::nullopt;
}

}  // namespace qwjoin
