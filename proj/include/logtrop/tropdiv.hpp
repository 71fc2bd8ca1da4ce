#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "logtrop/cones.hpp"
#include "logtrop/graphs.hpp"
#include "logtrop/moduli.hpp"

namespace logtrop {

// Slope convention: edge e runs from tail to head and alpha(tail) - alpha(head)
// = s_e * l_e, so the outgoing slope is s_e at the head and -s_e at the tail.
// The divergence at v is sum_{legs at v} a_i + sum_{head v} s_e - sum_{tail v} s_e.

/// Divergence of an edge-slope assignment at every vertex.
IntVector divergence(const StableGraph& g, const IntVector& a, const IntVector& slopes);
bool is_balanced(const StableGraph& g, const IntVector& a, const IntVector& slopes);

struct SlopeEnumeration {
  std::vector<IntVector> assignments;  // ordered by max |s_e|, then lexicographically decreasing
  long bound = 0;
  int cycle_rank = 0;
  /// Every balanced assignment with all |s_e| <= bound is listed.
  bool complete_within_bound = true;
};

SlopeEnumeration enumerate_balanced_slopes(const StableGraph& g, const IntVector& a, long bound);

/// Edge lengths admitting vertex values with the given slopes, as a cone in
/// the edge coordinates (leg lengths are unconstrained).
struct DivCone {
  StableGraph graph;
  IntVector slopes;
  IntMatrix equations;  // rows over (l_e..., alpha_v...)
  Cone image;
};

DivCone div_cone(const StableGraph& g, const IntVector& a, const IntVector& slopes);

/// `c` times the orthant on `legs` extra coordinates.
Cone with_leg_coordinates(const Cone& c, std::size_t legs);

/// Piecewise-linear data on a pointed tropical curve whose edge and leg
/// lengths are linear forms on a coordinate space of dimension `dim`.
/// Vertex values are affine forms (last entry is the constant term).
struct PLCurveFunction {
  StableGraph graph = StableGraph::smooth(0, 3);
  std::size_t dim = 0;
  std::vector<RatVector> edge_lengths;
  std::vector<RatVector> leg_lengths;
  IntVector edge_slopes;
  IntVector leg_slopes;
  std::vector<RatVector> values;

  /// Value at the far end of leg i: alpha(v) + a_i l_i.
  RatVector leg_end_value(int i) const;
  /// Edge equations hold identically.
  bool is_consistent() const;
  bool is_balanced() const;
  /// Adds an affine form to every vertex value.
  PLCurveFunction shifted(const RatVector& delta) const;
  bool operator==(const PLCurveFunction&) const = default;
};

/// Edge and leg lengths are the coordinates offset, offset+1, ... (edges
/// first) of a space of dimension `dim` (0 means just large enough). Values
/// are propagated from vertex 0 (value `root`, an affine form) along a
/// spanning tree. Throws NotConsistent when a cycle equation fails identically.
PLCurveFunction make_pl_function(const StableGraph& g, const IntVector& edge_slopes, const IntVector& leg_slopes,
                                 const RatVector& root, std::size_t dim = 0, std::size_t offset = 0);

struct GluedFunction {
  PLCurveFunction function;
  Gluing gluing{StableGraph::smooth(0, 3), -1, {}, {}, 0, 0};
  StableGraph first = StableGraph::smooth(0, 3);
  StableGraph second = StableGraph::smooth(0, 3);
  int p = -1;
  int q = -1;
  RatVector p_length;
  RatVector q_length;
};

/// Glues leg p of f1 to leg q of f2 (0-based); both live on the same
/// coordinate space. The new edge has length l_p + l_q and slope
/// slope(q) = -slope(p). Throws SlopeMismatch, ValueMismatch or DimensionMismatch.
GluedFunction glue_pl_functions(const PLCurveFunction& f1, int p, const PLCurveFunction& f2, int q);

/// Recovers the two factors of a glued function.
std::pair<PLCurveFunction, PLCurveFunction> split_glued(const GluedFunction& g);

/// Submonoid of N^k x N^k given by generators and a membership predicate.
class SharpMonoid {
 public:
  SharpMonoid(std::size_t k, IntVector modulus, std::vector<IntVector> generators);

  std::size_t rank() const { return k_; }
  const IntVector& modulus() const { return modulus_; }
  const std::vector<IntVector>& generators() const { return generators_; }

  /// (a1, a2) in N^2k with a1 - a2 an integer multiple of the modulus.
  bool contains(const IntVector& v) const;
  /// v is a sum of generators.
  bool generated_by(const IntVector& v) const;
  bool is_sharp() const;

 private:
  std::size_t k_;
  IntVector modulus_;
  std::vector<IntVector> generators_;
};

/// {(a1, a2) : a1 - a2 in Z(l1 + l2)}, with irreducible generators found in the
/// box [0, 2 max(l1 + l2)]^{2k}. Throws ZeroLength.
SharpMonoid glue_node_monoid(std::size_t k, const IntVector& l1, const IntVector& l2);

struct SquareReport {
  bool pass = true;
  long bound = 0;
  IntVector b1;
  IntVector b2;
  std::size_t strata_pairs = 0;
  std::size_t glueable_pairs = 0;
  std::size_t glued_assignments = 0;
  std::size_t excluded_by_bound = 0;
  std::vector<std::string> mismatches;
};

/// For every product stratum of M(g1,n1+1) x M(g2,n2+1) -> M(g1+g2,n1+n2) and
/// all bounded balanced slopes, checks that glueable pairs of slope data
/// correspond bijectively to slope data on the glued stratum and that the Div
/// cones pull back to the product of the factor Div cones. `a` has one weight
/// per target leg, or additionally b1's glued weight at position n1.
SquareReport check_div_gluing_square(int g1, int n1, int g2, int n2, const IntVector& a, long bound);

}  // namespace logtrop
