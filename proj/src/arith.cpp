#include "logtrop/arith.hpp"

#include <algorithm>
#include <cctype>

#include "logtrop/error.hpp"

namespace logtrop {

std::string to_string(const Integer& value) { return value.get_str(); }

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

namespace {

std::string strip(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

bool looks_like_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(start), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

Integer parse_integer(std::string_view text) {
  std::string s = strip(text);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  if (!looks_like_integer(s)) throw Error("ParseError", "not an integer: '" + std::string(text) + "'");
  return Integer(s);
}

Rational parse_rational(std::string_view text) {
  std::string s = strip(text);
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(s));
  Integer num = parse_integer(s.substr(0, slash));
  Integer den = parse_integer(s.substr(slash + 1));
  if (den == 0) throw Error("ParseError", "zero denominator in '" + s + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

IntVector parse_int_list(std::string_view text) {
  IntVector out;
  std::string s = strip(text);
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(parse_integer(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

std::string join(const IntVector& values, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += values[i].get_str();
  }
  return out;
}

IntVector int_vector(std::initializer_list<long> values) {
  IntVector out;
  out.reserve(values.size());
  for (long v : values) out.emplace_back(v);
  return out;
}

Integer content(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntVector make_primitive(IntVector v) {
  Integer g = content(v);
  if (g > 1) {
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
  return v;
}

bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

Integer dot(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVector to_rational(const IntVector& v) {
  RatVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

IntVector integerize(const RatVector& v) {
  Integer l = 1;
  for (const auto& x : v) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  }
  IntVector out;
  out.reserve(v.size());
  for (const auto& x : v) {
    Integer scaled = x.get_num() * (l / x.get_den());
    out.push_back(scaled);
  }
  return make_primitive(std::move(out));
}

int sign(const Integer& value) { return sgn(value); }
int sign(const Rational& value) { return sgn(value); }

Integer factorial(unsigned k) {
  Integer f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace logtrop
