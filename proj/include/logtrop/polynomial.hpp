#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "logtrop/arith.hpp"

namespace logtrop {

/// Product of variables with positive exponents, stored sorted by variable.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<std::pair<std::size_t, unsigned>> powers);
  static Monomial variable(std::size_t i, unsigned exponent = 1);

  const std::vector<std::pair<std::size_t, unsigned>>& powers() const { return powers_; }
  unsigned degree() const;
  unsigned exponent(std::size_t var) const;
  bool is_one() const { return powers_.empty(); }

  Monomial operator*(const Monomial& other) const;
  /// Graded order: total degree first, then lexicographic on the powers.
  bool operator<(const Monomial& other) const;
  bool operator==(const Monomial& other) const = default;

 private:
  std::vector<std::pair<std::size_t, unsigned>> powers_;
};

/// Sparse polynomial with rational coefficients in variables x_0, x_1, ...
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  static Polynomial variable(std::size_t i);
  /// sum_i coeffs[i] * x_i
  static Polynomial linear(const RatVector& coeffs);
  static Polynomial term(const Rational& c, const Monomial& m);

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous(unsigned k) const;
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;
  /// One past the largest variable index that occurs.
  std::size_t variable_bound() const;

  Polynomial graded_part(unsigned k) const;
  Polynomial truncated(unsigned max_degree) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  bool operator==(const Polynomial& o) const = default;

  Polynomial multiply_truncated(const Polynomial& o, unsigned max_degree) const;
  Polynomial pow(unsigned k) const;

  /// Replaces x_i by images[i] (variables beyond the list are kept).
  Polynomial substitute(const std::vector<Polynomial>& images) const;
  /// Replaces x_j by sum_i m[j][i] y_i.
  Polynomial linear_substitute(const RatMatrix& m) const;
  Polynomial linear_substitute(const IntMatrix& m) const;
  /// Renames x_i to x_{map[i]}.
  Polynomial rename(const std::vector<std::size_t>& map) const;
  Polynomial derivative(std::size_t var) const;
  Rational evaluate(const RatVector& point) const;

  /// Human readable form, e.g. "-1/2*l_1 - 1/2*l_2"; variables named by `labels`.
  std::string to_string(const std::vector<std::string>& labels) const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

Polynomial operator*(const Rational& c, const Polynomial& p);

}  // namespace logtrop
