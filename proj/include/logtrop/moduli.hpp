#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "logtrop/arith.hpp"
#include "logtrop/graphs.hpp"

namespace logtrop {

struct Signature {
  int g = 0;
  int n = 0;
  bool pointed = true;
  bool operator==(const Signature&) const = default;
};

/// "M(g,n)" for the pointed stack (edge and leg lengths), "Mbar(g,n)" for edge lengths only.
std::string to_string(const Signature& s);

/// A codimension-one face of a stratum cone: the stratum it is identified
/// with, and for each coordinate of that stratum the coordinate it occupies
/// in the larger cone.
struct StackFace {
  std::size_t face = 0;
  std::vector<int> embedding;
  int contracted = -1;  // coordinate set to zero
};

/// One cone of a cone stack: a product of orthants indexed by a tuple of
/// canonical stable graphs (one per factor).
struct Stratum {
  std::string key;  // digests joined by '|'
  std::vector<StableGraph> graphs;
  std::vector<std::string> labels;
  std::vector<int> factor;    // per coordinate
  std::vector<Coord> coords;  // per coordinate, within its factor's graph
  /// Coordinate permutations induced by graph automorphisms (legs fixed):
  /// the whole group, identity first. p[c] is the image of coordinate c.
  std::vector<std::vector<int>> symmetries;
  Integer automorphisms;
  std::vector<StackFace> facets;  // one per edge coordinate

  std::size_t dimension() const { return labels.size(); }
  bool is_edge(int c) const { return !coords[c].leg; }
};

/// Strata of M^trop_{g,n} (pointed) or Mbar^trop_{g,n}, or a product of such
/// stacks, with faces and automorphism actions. Immutable once built.
class ConeStack {
 public:
  ConeStack(std::vector<Signature> factors, std::vector<Stratum> strata);

  const std::vector<Signature>& factors() const { return factors_; }
  const std::vector<Stratum>& strata() const { return strata_; }
  const Stratum& stratum(std::size_t i) const { return strata_[i]; }
  std::size_t size() const { return strata_.size(); }
  std::string name() const;

  /// Index of the stratum with the given key; throws UnknownStratum.
  std::size_t index_of(const std::string& key) const;
  bool has_key(const std::string& key) const { return index_.count(key) != 0; }

  /// Locates a (possibly non-canonical) tuple of graphs. `edge_to_coord`
  /// receives, per factor, the coordinate of the located stratum that each
  /// input edge lands on.
  std::size_t locate(const std::vector<StableGraph>& graphs,
                     std::vector<std::vector<int>>* edge_to_coord = nullptr) const;

  /// The face obtained by setting the given edge coordinates of a stratum to zero.
  StackFace face(std::size_t stratum, const std::vector<int>& edge_coords) const;

  /// Coordinate index of a leg (0-based) or edge of a factor of a stratum.
  int coordinate(std::size_t stratum, int factor, const Coord& c) const;

 private:
  std::vector<Signature> factors_;
  std::vector<Stratum> strata_;
  std::map<std::string, std::size_t> index_;
};

using StackPtr = std::shared_ptr<const ConeStack>;

/// Cached stack for a signature; throws UnstableSignature or ResourceBound.
StackPtr build_moduli(int g, int n, bool pointed, const GraphLimits& limits = {});
StackPtr product_stack(const StackPtr& a, const StackPtr& b);

/// Symmetries of a stratum when legs may additionally be permuted by the
/// given group of leg permutations (`group[k][i]` is the new position of
/// leg i). Includes the plain automorphisms.
std::vector<std::vector<int>> declared_symmetries(const ConeStack& stack, std::size_t stratum,
                                                  const std::vector<std::vector<int>>& group);

/// Image of a source stratum: target stratum and the substitution matrix,
/// one row per target coordinate, one column per source coordinate.
struct StratumImage {
  std::size_t target = 0;
  IntMatrix matrix;
};

struct StackMorphism {
  std::string name;
  StackPtr source;
  StackPtr target;
  std::vector<StratumImage> images;  // per source stratum

  /// "l_e0 := 1:l_2 + 2:l_1"-style lines for one source stratum.
  std::vector<std::string> script(std::size_t source_stratum) const;
};

/// M(g1,n1+1) x M(g2,n2+1) -> M(g1+g2,n1+n2), gluing leg n1+1 to leg n2+1.
StackMorphism gluing_morphism(int g1, int n1, int g2, int n2);
/// M(g-1,n+2) -> M(g,n), gluing legs n+1 and n+2.
StackMorphism loop_gluing_morphism(int g, int n);
/// M(g,n+1) -> M(g,n) forgetting `leg` (0-based; the last leg when negative).
StackMorphism forgetful_morphism(int g, int n, bool pointed = true, int leg = -1);
/// M(g,n) -> M(g,n) moving leg i to position perm[i].
StackMorphism relabel_morphism(int g, int n, const std::vector<int>& perm, bool pointed = true);
StackMorphism identity_morphism(const StackPtr& stack);
StackMorphism product_morphism(const StackMorphism& a, const StackMorphism& b);
/// first, then second.
StackMorphism compose(const StackMorphism& first, const StackMorphism& second);

/// Whether the two morphisms agree stratumwise up to target automorphisms.
bool same_morphism(const StackMorphism& a, const StackMorphism& b);

/// Substitute-then-contract against contract-then-substitute on every
/// codimension-one face; returns a description of each mismatch.
std::vector<std::string> face_violations(const StackMorphism& m);

}  // namespace logtrop
