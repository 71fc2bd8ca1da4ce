#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "logtrop/arith.hpp"

namespace logtrop {

/// Row-reduces `m` in place to reduced row echelon form and returns the pivot
/// columns.
std::vector<std::size_t> rref(RatMatrix& m);

std::size_t rank(RatMatrix m);
std::size_t rank(const IntMatrix& m);

/// Basis of {x : m x = 0}, one vector per free column, in rref order.
RatMatrix nullspace(const RatMatrix& m, std::size_t cols);
/// Primitive integer basis of {x : m x = 0} (rational kernel, scaled).
IntMatrix integer_nullspace(const IntMatrix& m, std::size_t cols);

/// Some solution of a x = b, if one exists.
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b, std::size_t cols);

Rational determinant(RatMatrix m);
Integer determinant(const IntMatrix& m);

/// Indices of a maximal linearly independent subset of `rows`, greedily in order.
std::vector<std::size_t> independent_rows(const IntMatrix& rows);

RatMatrix to_rational(const IntMatrix& m);
IntMatrix transpose(const IntMatrix& m);
RatMatrix transpose(const RatMatrix& m);
IntVector mat_vec(const IntMatrix& m, const IntVector& v);
RatVector mat_vec(const RatMatrix& m, const RatVector& v);
IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows dropped.
IntMatrix hermite_normal_form(IntMatrix rows);
/// Membership of `v` in the lattice whose Hermite form is `hnf`.
bool in_lattice(const IntMatrix& hnf, IntVector v);
/// Diagonal of a Smith normal form (nonzero invariants only, unordered by divisibility).
IntVector smith_invariants(IntMatrix m);

}  // namespace logtrop
