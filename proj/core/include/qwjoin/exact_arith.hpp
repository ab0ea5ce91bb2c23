#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qwjoin {

using i64 = std::int64_t;

/// 2-adic valuation. Throws DomainError on zero.
int nu2(i64 x);

/// nu2 with zero mapped to a sentinel larger than any real valuation.
int nu2_or_inf(i64 x);
inline constexpr int kNu2Infinity = 1 << 20;

struct SquarefreeSplit {
  i64 s;  // squarefree part
  i64 f;  // x = f*f*s
};
SquarefreeSplit squarefree_part(i64 x);

i64 checked_add(i64 a, i64 b);
i64 checked_sub(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);

i64 gcd_all(std::span<const i64> xs);
i64 lcm_all(std::span<const i64> xs);
i64 gcd2(i64 a, i64 b);
i64 lcm2(i64 a, i64 b);

bool is_perfect_square(i64 x);
/// floor(sqrt(x)) for x >= 0, exact.
i64 isqrt(i64 x);

/// Exact rational in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(i64 num) : num_(num), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(i64 num, i64 den);

  i64 num() const { return num_; }
  i64 den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-num_, den_); }
  bool operator==(const Rational& o) const = default;
  std::strong_ordering operator<=>(const Rational& o) const;

  std::string str() const;

 private:
  i64 num_ = 0;
  i64 den_ = 1;
};

/// 2-adic valuation of a nonzero rational.
int nu2(const Rational& r);

/// Best continued-fraction convergent p/q with q <= max_den and |x - p/q| <= tol.
std::optional<Rational> reconstruct_rational(double x, i64 max_den = 1000000, double tol = 1e-7);

std::optional<i64> reconstruct_integer(double x, double tol = 1e-7);

/// (a + b*sqrt(delta))/2 with delta squarefree. Integers are a = 2*lambda, b = 0, delta = 1.
struct QuadraticEigenvalue {
  i64 a = 0;
  i64 b = 0;
  i64 delta = 1;

  double value() const;
  bool is_integer() const { return b == 0 || delta == 1; }
  bool operator==(const QuadraticEigenvalue&) const = default;
};

QuadraticEigenvalue make_integer_eigenvalue(i64 lambda);

/// Common arithmetic form of a finite set of reals: every element is (a + b_i*sqrt(delta))/2.
/// Integer sets use delta = 1, a = 0, b_i = 2*lambda_i.
struct ArithmeticForm {
  i64 a = 0;
  i64 delta = 1;
  std::vector<i64> b;  // aligned with the input values

  bool integral() const { return delta == 1; }
};

/// Integer form first, otherwise a common quadratic form with squarefree delta > 1.
std::optional<ArithmeticForm> classify_values(std::span<const double> values, double tol = 1e-7);

/// Classify one eigenvalue against a list of candidate partners (its algebraic conjugate).
std::optional<QuadraticEigenvalue> classify_with_partners(double lambda,
                                                          std::span<const double> partners,
                                                          double tol = 1e-7);

}  // namespace qwjoin
