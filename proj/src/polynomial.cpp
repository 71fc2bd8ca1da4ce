#include "logtrop/polynomial.hpp"

#include <algorithm>

#include "logtrop/error.hpp"

namespace logtrop {

Monomial::Monomial(std::vector<std::pair<std::size_t, unsigned>> powers) {
  std::sort(powers.begin(), powers.end());
  for (auto& [v, e] : powers) {
    if (e == 0) continue;
    if (!powers_.empty() && powers_.back().first == v)
      powers_.back().second += e;
    else
      powers_.emplace_back(v, e);
  }
}

Monomial Monomial::variable(std::size_t i, unsigned exponent) { return Monomial({{i, exponent}}); }

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (auto& p : powers_) d += p.second;
  return d;
}

unsigned Monomial::exponent(std::size_t var) const {
  for (auto& [v, e] : powers_)
    if (v == var) return e;
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  auto all = powers_;
  all.insert(all.end(), other.powers_.begin(), other.powers_.end());
  return Monomial(std::move(all));
}

bool Monomial::operator<(const Monomial& other) const {
  unsigned a = degree(), b = other.degree();
  if (a != b) return a < b;
  return powers_ < other.powers_;
}

Polynomial::Polynomial(const Rational& c) { add_term(Monomial(), c); }

Polynomial Polynomial::variable(std::size_t i) { return term(1, Monomial::variable(i)); }

Polynomial Polynomial::linear(const RatVector& coeffs) {
  Polynomial p;
  for (std::size_t i = 0; i < coeffs.size(); ++i) p.add_term(Monomial::variable(i), coeffs[i]);
  return p;
}

Polynomial Polynomial::term(const Rational& c, const Monomial& m) {
  Polynomial p;
  p.add_term(m, c);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  Rational value = c;
  value.canonicalize();
  auto [it, inserted] = terms_.emplace(m, value);
  if (inserted) return;
  it->second += value;
  if (it->second == 0) terms_.erase(it);
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.rbegin()->first.degree());
}

bool Polynomial::is_homogeneous(unsigned k) const {
  return std::all_of(terms_.begin(), terms_.end(), [&](const auto& t) { return t.first.degree() == k; });
}

Rational Polynomial::constant_term() const { return coefficient(Monomial()); }

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::size_t Polynomial::variable_bound() const {
  std::size_t b = 0;
  for (auto& [m, c] : terms_)
    for (auto& [v, e] : m.powers()) b = std::max(b, v + 1);
  return b;
}

Polynomial Polynomial::graded_part(unsigned k) const {
  Polynomial p;
  for (auto& [m, c] : terms_)
    if (m.degree() == k) p.terms_.emplace(m, c);
  return p;
}

Polynomial Polynomial::truncated(unsigned max_degree) const {
  Polynomial p;
  for (auto& [m, c] : terms_)
    if (m.degree() <= max_degree) p.terms_.emplace(m, c);
  return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial p = *this;
  p += o;
  return p;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial p = *this;
  p -= o;
  return p;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& [m, c] : p.terms_) c = -c;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial p;
  for (auto& [m1, c1] : terms_)
    for (auto& [m2, c2] : o.terms_) p.add_term(m1 * m2, c1 * c2);
  return p;
}

Polynomial Polynomial::multiply_truncated(const Polynomial& o, unsigned max_degree) const {
  Polynomial p;
  for (auto& [m1, c1] : terms_)
    for (auto& [m2, c2] : o.terms_)
      if (m1.degree() + m2.degree() <= max_degree) p.add_term(m1 * m2, c1 * c2);
  return p;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r(1);
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images) const {
  Polynomial out;
  for (auto& [m, c] : terms_) {
    Polynomial t(c);
    for (auto& [v, e] : m.powers()) {
      Polynomial base = v < images.size() ? images[v] : variable(v);
      t = t * base.pow(e);
    }
    out += t;
  }
  return out;
}

Polynomial Polynomial::linear_substitute(const RatMatrix& m) const {
  std::vector<Polynomial> images;
  images.reserve(m.size());
  for (const auto& row : m) images.push_back(linear(row));
  const std::size_t bound = variable_bound();
  if (bound > images.size()) throw Error("DimensionMismatch", "substitution does not cover every variable");
  return substitute(images);
}

Polynomial Polynomial::linear_substitute(const IntMatrix& m) const {
  RatMatrix r;
  for (const auto& row : m) r.push_back(to_rational(row));
  return linear_substitute(r);
}

Polynomial Polynomial::rename(const std::vector<std::size_t>& map) const {
  Polynomial out;
  for (auto& [m, c] : terms_) {
    std::vector<std::pair<std::size_t, unsigned>> powers;
    for (auto& [v, e] : m.powers()) powers.emplace_back(map.at(v), e);
    out.add_term(Monomial(std::move(powers)), c);
  }
  return out;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial out;
  for (auto& [m, c] : terms_) {
    unsigned e = m.exponent(var);
    if (e == 0) continue;
    std::vector<std::pair<std::size_t, unsigned>> powers;
    for (auto& [v, x] : m.powers()) powers.emplace_back(v, v == var ? x - 1 : x);
    out.add_term(Monomial(std::move(powers)), c * e);
  }
  return out;
}

Rational Polynomial::evaluate(const RatVector& point) const {
  Rational s = 0;
  for (auto& [m, c] : terms_) {
    Rational t = c;
    for (auto& [v, e] : m.powers())
      for (unsigned k = 0; k < e; ++k) t *= point.at(v);
    s += t;
  }
  return s;
}

std::string Polynomial::to_string(const std::vector<std::string>& labels) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [m, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    first = false;
    std::string mono;
    for (auto& [v, e] : m.powers()) {
      if (!mono.empty()) mono += "*";
      mono += v < labels.size() ? labels[v] : "x" + std::to_string(v);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty())
      out += logtrop::to_string(a);
    else if (a == 1)
      out += mono;
    else
      out += logtrop::to_string(a) + "*" + mono;
  }
  return out;
}

Polynomial operator*(const Rational& c, const Polynomial& p) { return Polynomial(c) * p; }

}  // namespace logtrop
