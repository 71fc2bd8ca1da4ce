#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logtrop/arith.hpp"

namespace logtrop {

/// A stable graph with genus-decorated vertices, edges and ordered legs.
///
/// Vertices are 0..V-1, edges are stored as (tail, head) vertex pairs, and leg
/// i (0-based; marking i+1) is attached to vertex `legs()[i]`. The half-edges
/// of edge e are 2e (at the tail) and 2e+1 (at the head); leg i is the
/// half-edge 2E+i. Construction validates stability, connectivity and the
/// genus formula.
class StableGraph {
 public:
  StableGraph(std::vector<int> vertex_genus, std::vector<std::pair<int, int>> edges,
              std::vector<int> legs);

  /// One vertex of genus g carrying n legs.
  static StableGraph smooth(int g, int n);

  int num_vertices() const { return static_cast<int>(vertex_genus_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_legs() const { return static_cast<int>(legs_.size()); }
  int genus() const;
  int first_betti() const { return num_edges() - num_vertices() + 1; }

  int vertex_genus(int v) const { return vertex_genus_[v]; }
  const std::vector<int>& vertex_genera() const { return vertex_genus_; }
  const std::pair<int, int>& edge(int e) const { return edges_[e]; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int leg_vertex(int i) const { return legs_[i]; }
  const std::vector<int>& legs() const { return legs_; }
  bool is_loop(int e) const { return edges_[e].first == edges_[e].second; }

  /// Number of incident half-edges (loops count twice).
  int valence(int v) const;
  std::vector<int> legs_at(int v) const;

  int num_half_edges() const { return 2 * num_edges() + num_legs(); }
  int half_edge_vertex(int h) const;
  int involution(int h) const;

  bool operator==(const StableGraph& other) const = default;

 private:
  std::vector<int> vertex_genus_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> legs_;
};

/// Unvalidated half-edge level data as read from JSON or built by hand.
struct RawGraph {
  int genus = 0;
  std::vector<std::pair<int, int>> vertices;  // (id, genus)
  std::vector<int> half_edge_vertex;          // incidence r, by half-edge index
  std::vector<int> involution;                // involution i, by half-edge index
  std::vector<int> legs;                      // half-edge indices in marking order

  /// Edges and legs given by vertex ids.
  static RawGraph from_edges(int genus, std::vector<std::pair<int, int>> vertices,
                             const std::vector<std::pair<int, int>>& edges,
                             const std::vector<int>& leg_vertices);
};

struct GraphIssue {
  std::string code;  // NotConnected, UnstableVertex, GenusMismatch, BadInvolution, LegCountMismatch, UnknownVertex
  int vertex = -1;
  std::string detail;
};

struct ValidationResult {
  std::optional<StableGraph> graph;
  std::vector<GraphIssue> issues;
};

ValidationResult validate_graph(const RawGraph& raw);

struct GraphLimits {
  int max_vertices = 12;
  int max_edges = 14;
};

/// Canonical representative together with the isomorphism from the input.
struct CanonicalForm {
  StableGraph graph;
  std::vector<int> vertex_map;     // input vertex -> canonical vertex
  std::vector<int> edge_map;       // input edge -> canonical edge
  std::vector<bool> edge_flipped;  // input (tail, head) lands as (head, tail)
  std::vector<int> code;           // canonical encoding
  std::uint64_t vertex_automorphisms = 0;
};

CanonicalForm canonical_form(const StableGraph& g, const GraphLimits& limits = {});
std::string digest(const StableGraph& g);
std::string digest_of_code(const std::vector<int>& code);
bool isomorphic(const StableGraph& a, const StableGraph& b);

/// |Aut(G)| counted on half-edges with legs fixed pointwise.
Integer automorphism_count(const StableGraph& g);

/// All permutations of edges induced by automorphisms of `g` (legs fixed).
/// `p[e]` is the image of edge e.
std::vector<std::vector<int>> edge_automorphisms(const StableGraph& g,
                                                 std::size_t cap = 100000);

struct EnumeratedGraph {
  StableGraph graph;  // canonical
  Integer automorphisms;
  std::string digest;
};

/// One canonical graph per isomorphism class of G_{g,n}, ordered by
/// (number of edges, canonical code).
std::vector<EnumeratedGraph> enumerate_stable_graphs(int g, int n, const GraphLimits& limits = {});

struct Contraction {
  StableGraph graph;
  std::vector<int> vertex_map;  // old vertex -> new vertex
  std::vector<int> edge_map;    // old edge -> new edge, -1 when contracted
};

Contraction contract_edges(const StableGraph& g, const std::vector<int>& edges);

/// Result of gluing leg p of G1 to leg q of G2 (or two legs of one graph).
/// Vertices of G2 follow those of G1; edges of G1, then G2, then the new edge
/// (tail on the p side). Legs: remaining legs of G1, then of G2.
struct Gluing {
  StableGraph graph;
  int new_edge = -1;
  std::vector<int> first_leg_map;   // -1 for the glued leg
  std::vector<int> second_leg_map;  // empty for loop gluing
  int second_vertex_offset = 0;
  int second_edge_offset = 0;
};

Gluing glue_graphs(const StableGraph& g1, int p, const StableGraph& g2, int q);
Gluing glue_loop(const StableGraph& g, int p, int q);

/// A coordinate of a pointed stratum cone: an edge length or a leg length.
struct Coord {
  bool leg = false;
  int index = 0;
  bool operator==(const Coord&) const = default;
};

enum class ForgetKind { Identity, RationalTail, RationalBridge };

struct ForgetResult {
  StableGraph graph;
  ForgetKind kind = ForgetKind::Identity;
  /// For every coordinate of the new graph (edges then legs), the source
  /// coordinates whose sum it equals.
  std::vector<std::pair<Coord, std::vector<Coord>>> script;
};

ForgetResult forget_leg(const StableGraph& g, int k);

std::string to_string(const Coord& c);

}  // namespace logtrop
