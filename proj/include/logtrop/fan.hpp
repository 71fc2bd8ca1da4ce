#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "logtrop/cones.hpp"
#include "logtrop/polynomial.hpp"

namespace logtrop {

/// Homogeneous piecewise polynomials of one degree on a simplicial fan. On a
/// maximal cone with rays r_1..r_m the polynomial is written in the ray
/// coordinates t (x = sum t_i r_i); pieces agree on common faces.
struct PPSpace {
  ConeComplex fan;
  unsigned degree = 0;
  std::vector<std::vector<Monomial>> monomials;  // per maximal cone
  std::vector<std::size_t> offsets;              // per maximal cone, into the unknowns
  std::size_t unknowns = 0;
  RatMatrix basis;                               // rows, in the unknown coordinates

  std::size_t dimension() const { return basis.size(); }
  /// Per maximal cone polynomials of a coordinate vector, and back.
  std::vector<Polynomial> to_pieces(const RatVector& v) const;
  RatVector from_pieces(const std::vector<Polynomial>& pieces) const;
};

/// Throws NotSimplicial, or NotAFan when two cones meet outside a common face.
PPSpace pp_space(const ConeComplex& fan, unsigned degree);

/// Dimension of homogeneous piecewise polynomials of each degree 0..max_degree.
std::vector<std::size_t> pp_dimensions(const ConeComplex& fan, unsigned max_degree);

/// Piecewise polynomials modulo the ideal of global linear functions.
struct FanChowPresentation {
  std::size_t rank = 0;
  std::vector<std::size_t> dimensions;                     // per degree 0..rank
  std::size_t dimension_above_rank = 0;                    // degree rank+1; zero for complete smooth fans
  std::vector<std::vector<std::vector<Polynomial>>> basis;  // degree 0..rank+1 -> element -> per-cone pieces
  std::vector<std::vector<Polynomial>> ideal_generators;   // the coordinate functions x_j
  /// (i, a, j, b) -> coordinates of basis_i[a] * basis_j[b] in the degree i+j
  /// basis, for i + j <= rank + 1.
  std::map<std::tuple<unsigned, std::size_t, unsigned, std::size_t>, RatVector> products;
};

/// Throws NotComplete, NotSmooth or ResourceBound (rank > 4 or more than 64 rays).
FanChowPresentation chow_ring(const ConeComplex& fan);

struct ProbeStep {
  ConeComplex fan;
  std::vector<std::size_t> dimensions;  // per degree
  std::vector<bool> injective;          // transition from the previous step, per degree
};

struct ProbeResult {
  std::vector<ProbeStep> steps;
  std::string note;
};

/// Dimensions along a chain of refinements, with injectivity of each pullback
/// map. Throws NotARefinementChain.
ProbeResult logch_probe(const std::vector<ConeComplex>& chain, unsigned max_degree);
/// The chain of successive star subdivisions of a smooth cone at the given rays.
ProbeResult logch_probe(const Cone& cone, const std::vector<IntVector>& rays, unsigned max_degree);

/// The complex of a cone and all its faces.
ConeComplex cone_fan(const Cone& c);

}  // namespace logtrop
