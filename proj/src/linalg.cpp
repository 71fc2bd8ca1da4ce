#include "logtrop/linalg.hpp"

#include <algorithm>
#include <utility>

namespace logtrop {

std::vector<std::size_t> rref(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(RatMatrix m) { return rref(m).size(); }

std::size_t rank(const IntMatrix& m) { return rank(to_rational(m)); }

RatMatrix nullspace(const RatMatrix& m, std::size_t cols) {
  RatMatrix a = m;
  auto pivots = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  RatMatrix basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

IntMatrix integer_nullspace(const IntMatrix& m, std::size_t cols) {
  IntMatrix out;
  for (const auto& v : nullspace(to_rational(m), cols)) out.push_back(integerize(v));
  return out;
}

std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b, std::size_t cols) {
  RatMatrix aug;
  aug.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    RatVector row = a[i];
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  auto pivots = rref(aug);
  RatVector x(cols, Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == cols) return std::nullopt;
    x[pivots[i]] = aug[i][cols];
  }
  return x;
}

Rational determinant(RatMatrix m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

Integer determinant(const IntMatrix& m) {
  Rational d = determinant(to_rational(m));
  return d.get_num();
}

std::vector<std::size_t> independent_rows(const IntMatrix& rows) {
  std::vector<std::size_t> chosen;
  RatMatrix basis;
  std::vector<std::size_t> basis_pivots;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    RatVector v = to_rational(rows[i]);
    // Reduce against the current echelon basis.
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Rational f = v[basis_pivots[k]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * basis[k][j];
    }
    std::size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) continue;
    Rational inv = 1 / v[p];
    for (auto& x : v) x *= inv;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Rational f = basis[k][p];
      if (f == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) basis[k][j] -= f * v[j];
    }
    basis.push_back(std::move(v));
    basis_pivots.push_back(p);
    chosen.push_back(i);
  }
  return chosen;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix out;
  out.reserve(m.size());
  for (const auto& row : m) out.push_back(to_rational(row));
  return out;
}

IntMatrix transpose(const IntMatrix& m) {
  if (m.empty()) return {};
  IntMatrix t(m[0].size(), IntVector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

RatMatrix transpose(const RatMatrix& m) {
  if (m.empty()) return {};
  RatMatrix t(m[0].size(), RatVector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

IntVector mat_vec(const IntMatrix& m, const IntVector& v) {
  IntVector out;
  out.reserve(m.size());
  for (const auto& row : m) out.push_back(dot(row, v));
  return out;
}

RatVector mat_vec(const RatMatrix& m, const RatVector& v) {
  RatVector out;
  out.reserve(m.size());
  for (const auto& row : m) out.push_back(dot(row, v));
  return out;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.empty()) return {};
  const std::size_t inner = b.size();
  const std::size_t cols = inner ? b[0].size() : 0;
  IntMatrix out(a.size(), IntVector(cols, Integer(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

namespace {

void axpy(IntVector& target, const Integer& f, const IntVector& source) {
  for (std::size_t j = 0; j < target.size(); ++j) target[j] -= f * source[j];
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

IntMatrix hermite_normal_form(IntMatrix a) {
  if (a.empty()) return a;
  const std::size_t cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    while (true) {
      std::size_t best = a.size();
      for (std::size_t i = r; i < a.size(); ++i) {
        if (a[i][c] == 0) continue;
        if (best == a.size() || abs(a[i][c]) < abs(a[best][c])) best = i;
      }
      if (best == a.size()) break;
      std::swap(a[r], a[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < a.size(); ++i) {
        if (a[i][c] == 0) continue;
        axpy(a[i], floor_div(a[i][c], a[r][c]), a[r]);
        if (a[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (r >= a.size() || a[r][c] == 0) continue;
    if (a[r][c] < 0)
      for (auto& x : a[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) axpy(a[i], floor_div(a[i][c], a[r][c]), a[r]);
    ++r;
  }
  a.resize(r);
  return a;
}

bool in_lattice(const IntMatrix& hnf, IntVector v) {
  for (const auto& row : hnf) {
    std::size_t p = 0;
    while (row[p] == 0) ++p;
    if (v[p] % row[p] != 0) return false;
    Integer q = v[p] / row[p];
    axpy(v, q, row);
  }
  return is_zero(v);
}

IntVector smith_invariants(IntMatrix m) {
  for (int iter = 0; iter < 64; ++iter) {
    m = hermite_normal_form(std::move(m));
    if (m.empty()) return {};
    m = transpose(hermite_normal_form(transpose(m)));
    bool diagonal = true;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m[i].size(); ++j)
        if (i != j && m[i][j] != 0) diagonal = false;
    if (diagonal) break;
  }
  IntVector d;
  for (std::size_t i = 0; i < m.size() && i < m[i].size(); ++i)
    if (m[i][i] != 0) d.push_back(abs(m[i][i]));
  return d;
}

}  // namespace logtrop
