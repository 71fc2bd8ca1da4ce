#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "logtrop/arith.hpp"

namespace logtrop {

/// A strongly convex rational polyhedral cone in Z^d, stored with both its
/// extreme rays (primitive, sorted) and an inequality description restricted
/// to its linear span: x in C iff equations * x = 0 and facets * x >= 0.
class Cone {
 public:
  /// The zero cone in rank d.
  explicit Cone(std::size_t rank = 0);

  static Cone from_generators(std::size_t rank, std::vector<IntVector> generators);
  static Cone from_inequalities(std::size_t rank, const IntMatrix& inequalities,
                                const IntMatrix& equations = {});
  static Cone orthant(std::size_t rank);

  std::size_t rank() const { return rank_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<IntVector>& rays() const { return rays_; }
  const IntMatrix& facets() const { return facets_; }
  const IntMatrix& equations() const { return equations_; }

  bool contains(const IntVector& x) const;
  bool contains(const RatVector& x) const;
  bool contains(const Cone& other) const;
  bool is_simplicial() const { return rays_.size() == dimension_; }
  bool has_ray(const IntVector& r) const;

  Cone intersect(const Cone& other) const;
  /// Faces of codimension one, as cones.
  std::vector<Cone> facet_cones() const;
  /// Every face, including the cone itself and the zero face.
  std::vector<Cone> faces() const;
  /// Smallest face containing x (x must lie in the cone).
  Cone minimal_face(const IntVector& x) const;
  /// A point in the relative interior: the sum of the rays.
  IntVector interior_point() const;

  bool operator==(const Cone& other) const { return rank_ == other.rank_ && rays_ == other.rays_; }
  bool operator<(const Cone& other) const { return rays_ < other.rays_; }

 private:
  std::size_t rank_ = 0;
  std::size_t dimension_ = 0;
  std::vector<IntVector> rays_;
  IntMatrix facets_;
  IntMatrix equations_;
};

/// Extreme rays of {y : rows * y >= 0}, assumed pointed; double description.
std::vector<IntVector> extreme_rays_of_pointed(const IntMatrix& rows, std::size_t dim);

/// Fourier-Motzkin elimination of the variables with index >= keep from
/// {x : ineqs x >= 0, eqs x = 0}; returns the projected system on the first
/// `keep` coordinates.
struct LinearSystem {
  IntMatrix inequalities;
  IntMatrix equations;
};
LinearSystem eliminate_variables(LinearSystem system, std::size_t num_vars, std::size_t keep);

/// Smooth iff simplicial and the rays extend to a lattice basis.
bool is_smooth(const Cone& c);
/// The same test for a cone presented by a generator list: the (primitive,
/// deduplicated) generators themselves must be independent and unimodular.
bool is_smooth(const std::vector<IntVector>& generators);

/// Splits a cone into simplicial cones using only its own rays.
std::vector<std::vector<IntVector>> triangulate(const Cone& c);

/// A finite collection of cones in a common lattice, given by its maximal
/// cones; every face of a listed cone belongs to the complex.
class ConeComplex {
 public:
  explicit ConeComplex(std::size_t rank = 0) : rank_(rank) {}
  ConeComplex(std::size_t rank, std::vector<Cone> maximal);

  std::size_t rank() const { return rank_; }
  const std::vector<Cone>& maximal() const { return maximal_; }
  /// Every cone of the complex, sorted.
  std::vector<Cone> all_cones() const;
  /// Distinct rays, sorted.
  std::vector<IntVector> rays() const;
  bool contains_point(const IntVector& x) const;
  bool has_cone(const Cone& c) const;
  /// Cones of the complex that lie inside the support of `region`, keeping maximal ones.
  ConeComplex restrict_to(const ConeComplex& region) const;
  bool is_simplicial() const;
  bool is_smooth() const;

  bool operator==(const ConeComplex& other) const {
    return rank_ == other.rank_ && maximal_ == other.maximal_;
  }

 private:
  std::size_t rank_ = 0;
  std::vector<Cone> maximal_;
};

/// A subdivision: every refined cone sits inside its assigned (minimal) target cone.
struct Subdivision {
  ConeComplex target;
  ConeComplex refined;
  std::vector<Cone> assignment;  // parallel to refined.maximal()
};

/// Builds the subdivision record, computing assignments and checking that the
/// refined cones exactly cover the target.
Subdivision make_subdivision(const ConeComplex& target, const ConeComplex& refined);
Subdivision trivial_subdivision(const ConeComplex& target);

/// Exact check: pieces lie in the target, have disjoint interiors, and the
/// slice volumes add up on every maximal target cone.
bool is_subdivision(const ConeComplex& target, const ConeComplex& refined);

ConeComplex star_subdivide(const ConeComplex& x, const IntVector& ray);
Subdivision star_subdivision(const ConeComplex& x, const IntVector& ray);

/// Piecewise-linear function on a simplicial complex given by its values on rays.
struct PLFunction {
  ConeComplex complex;
  std::vector<IntVector> rays;
  std::vector<Rational> values;

  Rational evaluate(const IntVector& x) const;
  /// A linear functional agreeing with the function on the given cone of the complex.
  RatVector linear_piece(const Cone& c) const;
};

PLFunction phi_function(const Subdivision& s, const IntVector& ray);

/// Refines `x` so that its restriction to the face-closed subcomplex `delta`
/// is exactly `sub_delta.refined`.
Subdivision extend_subdivision(const ConeComplex& x, const ConeComplex& delta,
                               const Subdivision& sub_delta);

/// Cones {x in sigma : f x in tau} for each maximal source cone and each
/// maximal refined target cone, keeping the full-dimensional pieces.
/// `f` has one row per target coordinate.
Subdivision preimage_subdivision(const IntMatrix& f, const ConeComplex& source, const Subdivision& s);

/// The cone {x in sigma : f x in tau}.
Cone preimage_cone(const IntMatrix& f, const Cone& sigma, const Cone& tau);

Subdivision common_refinement(const Subdivision& a, const Subdivision& b);

/// Whether every cone of `fine` lies in some cone of `coarse`.
bool refines(const ConeComplex& fine, const ConeComplex& coarse);

}  // namespace logtrop
