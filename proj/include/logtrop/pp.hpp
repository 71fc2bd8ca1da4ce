#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "logtrop/cones.hpp"
#include "logtrop/moduli.hpp"
#include "logtrop/polynomial.hpp"

namespace logtrop {

/// A polynomial on one full-dimensional cone of a stratum. Variables are the
/// stratum coordinates.
struct PPPiece {
  Cone cone;
  Polynomial poly;
};

/// A piecewise-polynomial class on a cone stack: per stratum, a list of
/// full-dimensional cones covering the orthant (one orthant piece when
/// strict) with a polynomial on each.
class PPClass {
 public:
  PPClass(StackPtr base, std::vector<std::vector<PPPiece>> pieces);
  static PPClass strict(StackPtr base, std::vector<Polynomial> polys);
  static PPClass constant(StackPtr base, const Rational& c);

  const StackPtr& base() const { return base_; }
  const std::vector<PPPiece>& pieces(std::size_t stratum) const { return pieces_[stratum]; }
  const std::vector<std::vector<PPPiece>>& all_pieces() const { return pieces_; }
  bool is_strict() const;
  /// Maximal total degree over all pieces; -1 for the zero class.
  int degree() const;
  bool is_homogeneous(unsigned k) const;
  bool is_zero() const;

  /// Value at a lattice point of a stratum cone.
  Rational evaluate(std::size_t stratum, const IntVector& point) const;

  PPClass operator+(const PPClass& o) const;
  PPClass operator-(const PPClass& o) const;
  PPClass operator*(const PPClass& o) const;
  PPClass operator-() const;
  PPClass scaled(const Rational& c) const;
  PPClass graded_part(unsigned k) const;
  PPClass truncated(unsigned max_degree) const;
  PPClass multiply_truncated(const PPClass& o, unsigned max_degree) const;

  /// Equality of functions, decided on the common refinement of the two
  /// subdivisions.
  bool equivalent(const PPClass& o) const;

 private:
  StackPtr base_;
  std::vector<std::vector<PPPiece>> pieces_;
};

/// sum_{k <= max_degree} x^k / k!; throws NonNilpotentExp if x has a constant part.
PPClass exp_truncated(const PPClass& x, unsigned max_degree);

/// The stratumwise difference a - b; empty when the classes agree.
struct ClassDifference {
  std::string stratum;
  std::string cone;
  std::string difference;
};
std::vector<ClassDifference> differences(const PPClass& a, const PPClass& b);

struct Violation {
  std::string kind;  // Cover, Wall, Automorphism, Face
  std::string stratum;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks that pieces cover each orthant, agree where they meet, are invariant
/// under the stratum symmetries and restrict to the face classes. A non-empty
/// `leg_group` adds the symmetries that permute legs by the declared group.
ValidationReport validate(const PPClass& c, const std::vector<std::vector<int>>& leg_group = {});

PPClass pullback(const StackMorphism& m, const PPClass& c);
/// a x b on the product stack, as a product in disjoint variables.
PPClass exterior_product(const PPClass& a, const PPClass& b);

/// The leg length l_i (1-based marking) on every stratum.
PPClass length_class(const StackPtr& stack, int marking);
/// Sum of the lengths of the edges whose contraction type is the one-edge graph delta.
PPClass boundary_class(const StackPtr& stack, const StableGraph& delta);

struct DRResult {
  PPClass value;
  std::vector<std::string> warnings;
};

/// Degree-g part of exp(1/2 (-sum a_i^2 l_i - L)) * P on M(g,n). L defaults to
/// 0 and P to 1.
DRResult dr_polynomial(int g, int n, const IntVector& a, const std::optional<PPClass>& L = std::nullopt,
                       const std::optional<PPClass>& P = std::nullopt);

/// Subdivision of every stratum of a stack.
struct StackSubdivision {
  StackPtr base;
  std::vector<Subdivision> strata;
  std::vector<std::vector<IntVector>> marked;  // images of the subdividing ray, per stratum
};

/// Star subdivision at a ray of one stratum, carried to every stratum that
/// contains that stratum as a face (once per embedding).
StackSubdivision star_subdivide(const StackPtr& stack, std::size_t stratum, const IntVector& ray);

/// The piecewise-linear function that is 1 on the marked rays and 0 on all others.
PPClass phi_class(const StackSubdivision& s);

}  // namespace logtrop
