#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace logtrop {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;
using IntMatrix = std::vector<IntVector>;
using RatMatrix = std::vector<RatVector>;

std::string to_string(const Integer& value);
/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

Integer parse_integer(std::string_view text);
Rational parse_rational(std::string_view text);

/// Comma separated integers, e.g. "1,-1,0". Whitespace is ignored.
IntVector parse_int_list(std::string_view text);
std::string join(const IntVector& values, std::string_view sep = ",");

IntVector int_vector(std::initializer_list<long> values);

/// gcd of the absolute values; zero for the zero vector.
Integer content(const IntVector& v);
/// Divides by the content. The zero vector is returned unchanged.
IntVector make_primitive(IntVector v);
bool is_zero(const IntVector& v);

Integer dot(const IntVector& a, const IntVector& b);
Rational dot(const RatVector& a, const RatVector& b);

RatVector to_rational(const IntVector& v);
/// Smallest positive multiple that is integral, then made primitive.
IntVector integerize(const RatVector& v);

int sign(const Integer& value);
int sign(const Rational& value);

Integer factorial(unsigned k);

}  // namespace logtrop
