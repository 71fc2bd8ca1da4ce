#include "logtrop/tropdiv.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "logtrop/error.hpp"
#include "logtrop/linalg.hpp"

namespace logtrop {

namespace {

void require_weights(const StableGraph& g, const IntVector& a) {
  if (a.size() != static_cast<std::size_t>(g.num_legs()))
    throw Error("DimensionMismatch", "expected " + std::to_string(g.num_legs()) + " leg slopes");
}

Integer total(const IntVector& v) {
  Integer s = 0;
  for (const auto& x : v) s += x;
  return s;
}

// BFS spanning tree from vertex 0: order of discovery and the edge to the parent.
struct SpanningTree {
  std::vector<int> order;
  std::vector<int> parent_edge;
  std::vector<bool> in_tree;
};

SpanningTree spanning_tree(const StableGraph& g) {
  SpanningTree t;
  const int V = g.num_vertices();
  t.parent_edge.assign(V, -1);
  t.in_tree.assign(g.num_edges(), false);
  std::vector<bool> seen(V, false);
  std::deque<int> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    t.order.push_back(u);
    for (int e = 0; e < g.num_edges(); ++e) {
      auto [x, y] = g.edge(e);
      int w = x == u ? y : (y == u ? x : -1);
      if (w < 0 || seen[w]) continue;
      seen[w] = true;
      t.parent_edge[w] = e;
      t.in_tree[e] = true;
      queue.push_back(w);
    }
  }
  return t;
}

RatVector unit(std::size_t dim, std::size_t i) {
  RatVector v(dim, 0);
  v[i] = 1;
  return v;
}

RatVector axpy(const RatVector& x, const Rational& c, const RatVector& y) {
  RatVector r = x;
  for (std::size_t i = 0; i < y.size(); ++i) r[i] += c * y[i];
  return r;
}

// Affine form from a linear one (constant 0).
RatVector affine(const RatVector& linear) {
  RatVector r = linear;
  r.push_back(0);
  return r;
}

Cone product_cone(const Cone& a, const Cone& b) {
  const std::size_t r = a.rank() + b.rank();
  auto embed = [&](const IntMatrix& rows, std::size_t offset) {
    IntMatrix out;
    for (const auto& row : rows) {
      IntVector v(r, 0);
      for (std::size_t i = 0; i < row.size(); ++i) v[offset + i] = row[i];
      out.push_back(std::move(v));
    }
    return out;
  };
  IntMatrix ineqs = embed(a.facets(), 0), eqs = embed(a.equations(), 0);
  for (auto& row : embed(b.facets(), a.rank())) ineqs.push_back(std::move(row));
  for (auto& row : embed(b.equations(), a.rank())) eqs.push_back(std::move(row));
  return Cone::from_inequalities(r, ineqs, eqs);
}

}  // namespace

IntVector divergence(const StableGraph& g, const IntVector& a, const IntVector& slopes) {
  require_weights(g, a);
  if (slopes.size() != static_cast<std::size_t>(g.num_edges()))
    throw Error("DimensionMismatch", "expected " + std::to_string(g.num_edges()) + " edge slopes");
  IntVector div(g.num_vertices(), 0);
  for (int i = 0; i < g.num_legs(); ++i) div[g.leg_vertex(i)] += a[i];
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [t, h] = g.edge(e);
    div[h] += slopes[e];
    div[t] -= slopes[e];
  }
  return div;
}

bool is_balanced(const StableGraph& g, const IntVector& a, const IntVector& slopes) {
  auto d = divergence(g, a, slopes);
  return std::all_of(d.begin(), d.end(), [](const Integer& x) { return x == 0; });
}

SlopeEnumeration enumerate_balanced_slopes(const StableGraph& g, const IntVector& a, long bound) {
  require_weights(g, a);
  if (bound < 0) throw Error("InvalidBound", "slope bound must be non-negative");
  if (total(a) != 0) throw Error("NonZeroSum", "leg slopes sum to " + to_string(total(a)));
  SlopeEnumeration out;
  out.bound = bound;
  out.cycle_rank = g.first_betti();
  auto tree = spanning_tree(g);
  std::vector<int> free_edges;
  for (int e = 0; e < g.num_edges(); ++e)
    if (!tree.in_tree[e]) free_edges.push_back(e);

  IntVector slopes(g.num_edges(), 0);
  std::function<void(std::size_t)> assign_free = [&](std::size_t k) {
    if (k < free_edges.size()) {
      for (long s = -bound; s <= bound; ++s) {
        slopes[free_edges[k]] = s;
        assign_free(k + 1);
      }
      return;
    }
    IntVector excess(g.num_vertices(), 0);
    for (int i = 0; i < g.num_legs(); ++i) excess[g.leg_vertex(i)] += a[i];
    for (int e : free_edges) {
      auto [t, h] = g.edge(e);
      excess[h] += slopes[e];
      excess[t] -= slopes[e];
    }
    for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
      const int u = *it;
      const int e = tree.parent_edge[u];
      if (e < 0) continue;
      auto [t, h] = g.edge(e);
      const int parent = t == u ? h : t;
      slopes[e] = h == u ? Integer(-excess[u]) : excess[u];
      if (abs(slopes[e]) > bound) return;
      excess[u] = 0;
      if (h == u)
        excess[parent] -= slopes[e];
      else
        excess[parent] += slopes[e];
    }
    out.assignments.push_back(slopes);
  };
  assign_free(0);

  auto max_abs = [](const IntVector& v) {
    Integer m = 0;
    for (const auto& x : v) m = std::max(m, Integer(abs(x)));
    return m;
  };
  std::sort(out.assignments.begin(), out.assignments.end(), [&](const IntVector& x, const IntVector& y) {
    Integer mx = max_abs(x), my = max_abs(y);
    if (mx != my) return mx < my;
    return x > y;
  });
  return out;
}

DivCone div_cone(const StableGraph& g, const IntVector& a, const IntVector& slopes) {
  if (!is_balanced(g, a, slopes)) throw Error("NotBalanced", "slopes do not have divergence zero");
  const std::size_t E = g.num_edges(), V = g.num_vertices(), n = E + V;
  DivCone d{g, slopes, {}, Cone(E)};
  LinearSystem sys;
  for (std::size_t e = 0; e < E; ++e) {
    auto [t, h] = g.edge(static_cast<int>(e));
    IntVector row(n, 0);
    row[e] = -slopes[e];
    row[E + t] += 1;
    row[E + h] -= 1;
    d.equations.push_back(row);
    sys.equations.push_back(row);
    IntVector nonneg(n, 0);
    nonneg[e] = 1;
    sys.inequalities.push_back(std::move(nonneg));
  }
  auto projected = eliminate_variables(sys, n, E);
  d.image = Cone::from_inequalities(E, projected.inequalities, projected.equations);
  return d;
}

Cone with_leg_coordinates(const Cone& c, std::size_t legs) { return product_cone(c, Cone::orthant(legs)); }

RatVector PLCurveFunction::leg_end_value(int i) const {
  return axpy(values.at(graph.leg_vertex(i)), Rational(leg_slopes.at(i)), affine(leg_lengths.at(i)));
}

bool PLCurveFunction::is_consistent() const {
  for (int e = 0; e < graph.num_edges(); ++e) {
    auto [t, h] = graph.edge(e);
    RatVector lhs = axpy(values[t], -1, values[h]);
    if (lhs != axpy(RatVector(dim + 1, 0), Rational(edge_slopes[e]), affine(edge_lengths[e]))) return false;
  }
  return true;
}

bool PLCurveFunction::is_balanced() const { return logtrop::is_balanced(graph, leg_slopes, edge_slopes); }

PLCurveFunction PLCurveFunction::shifted(const RatVector& delta) const {
  if (delta.size() != dim + 1) throw Error("DimensionMismatch", "shift must be an affine form");
  PLCurveFunction f = *this;
  for (auto& v : f.values) v = axpy(v, 1, delta);
  return f;
}

PLCurveFunction make_pl_function(const StableGraph& g, const IntVector& edge_slopes, const IntVector& leg_slopes,
                                 const RatVector& root, std::size_t dim, std::size_t offset) {
  require_weights(g, leg_slopes);
  if (edge_slopes.size() != static_cast<std::size_t>(g.num_edges()))
    throw Error("DimensionMismatch", "expected " + std::to_string(g.num_edges()) + " edge slopes");
  const std::size_t needed = offset + g.num_edges() + g.num_legs();
  if (dim == 0) dim = needed;
  if (dim < needed) throw Error("DimensionMismatch", "coordinate space too small");
  if (root.size() != dim + 1) throw Error("DimensionMismatch", "root value must be an affine form");
  PLCurveFunction f;
  f.graph = g;
  f.dim = dim;
  f.edge_slopes = edge_slopes;
  f.leg_slopes = leg_slopes;
  for (int e = 0; e < g.num_edges(); ++e) f.edge_lengths.push_back(unit(dim, offset + e));
  for (int i = 0; i < g.num_legs(); ++i) f.leg_lengths.push_back(unit(dim, offset + g.num_edges() + i));
  auto tree = spanning_tree(g);
  f.values.assign(g.num_vertices(), RatVector(dim + 1, 0));
  f.values[0] = root;
  for (int u : tree.order) {
    const int e = tree.parent_edge[u];
    if (e < 0) continue;
    auto [t, h] = g.edge(e);
    const Rational s(edge_slopes[e]);
    if (h == u)
      f.values[h] = axpy(f.values[t], -s, affine(f.edge_lengths[e]));
    else
      f.values[t] = axpy(f.values[h], s, affine(f.edge_lengths[e]));
  }
  if (!f.is_consistent()) throw Error("NotConsistent", "a cycle carries non-zero total slope");
  return f;
}

GluedFunction glue_pl_functions(const PLCurveFunction& f1, int p, const PLCurveFunction& f2, int q) {
  if (f1.dim != f2.dim) throw Error("DimensionMismatch", "functions live on different coordinate spaces");
  if (p < 0 || p >= f1.graph.num_legs() || q < 0 || q >= f2.graph.num_legs())
    throw Error("NotALeg", "glued leg out of range");
  if (f1.leg_slopes[p] + f2.leg_slopes[q] != 0)
    throw Error("SlopeMismatch", "slopes at the glued legs add to " + to_string(Integer(f1.leg_slopes[p] + f2.leg_slopes[q])) +
                                     ", not 0");
  if (f1.leg_end_value(p) != f2.leg_end_value(q))
    throw Error("ValueMismatch", "values at the ends of the glued legs differ");
  GluedFunction out;
  out.gluing = glue_graphs(f1.graph, p, f2.graph, q);
  out.first = f1.graph;
  out.second = f2.graph;
  out.p = p;
  out.q = q;
  out.p_length = f1.leg_lengths[p];
  out.q_length = f2.leg_lengths[q];
  auto& f = out.function;
  f.graph = out.gluing.graph;
  f.dim = f1.dim;
  f.edge_lengths = f1.edge_lengths;
  f.edge_lengths.insert(f.edge_lengths.end(), f2.edge_lengths.begin(), f2.edge_lengths.end());
  f.edge_lengths.push_back(axpy(out.p_length, 1, out.q_length));
  f.edge_slopes = f1.edge_slopes;
  f.edge_slopes.insert(f.edge_slopes.end(), f2.edge_slopes.begin(), f2.edge_slopes.end());
  f.edge_slopes.push_back(f2.leg_slopes[q]);
  f.values = f1.values;
  f.values.insert(f.values.end(), f2.values.begin(), f2.values.end());
  f.leg_lengths.assign(f.graph.num_legs(), {});
  f.leg_slopes.assign(f.graph.num_legs(), 0);
  for (int i = 0; i < f1.graph.num_legs(); ++i)
    if (int j = out.gluing.first_leg_map[i]; j >= 0) {
      f.leg_lengths[j] = f1.leg_lengths[i];
      f.leg_slopes[j] = f1.leg_slopes[i];
    }
  for (int i = 0; i < f2.graph.num_legs(); ++i)
    if (int j = out.gluing.second_leg_map[i]; j >= 0) {
      f.leg_lengths[j] = f2.leg_lengths[i];
      f.leg_slopes[j] = f2.leg_slopes[i];
    }
  return out;
}

std::pair<PLCurveFunction, PLCurveFunction> split_glued(const GluedFunction& g) {
  const auto& f = g.function;
  const Integer s = f.edge_slopes.at(g.gluing.new_edge);
  auto side = [&](const StableGraph& graph, int vertex_offset, int edge_offset, const std::vector<int>& leg_map,
                  int glued, const RatVector& glued_length, const Integer& glued_slope) {
    PLCurveFunction h;
    h.graph = graph;
    h.dim = f.dim;
    for (int e = 0; e < graph.num_edges(); ++e) {
      h.edge_lengths.push_back(f.edge_lengths[edge_offset + e]);
      h.edge_slopes.push_back(f.edge_slopes[edge_offset + e]);
    }
    for (int v = 0; v < graph.num_vertices(); ++v) h.values.push_back(f.values[vertex_offset + v]);
    for (int i = 0; i < graph.num_legs(); ++i) {
      if (i == glued) {
        h.leg_lengths.push_back(glued_length);
        h.leg_slopes.push_back(glued_slope);
      } else {
        h.leg_lengths.push_back(f.leg_lengths[leg_map[i]]);
        h.leg_slopes.push_back(f.leg_slopes[leg_map[i]]);
      }
    }
    return h;
  };
  return {side(g.first, 0, 0, g.gluing.first_leg_map, g.p, g.p_length, Integer(-s)),
          side(g.second, g.gluing.second_vertex_offset, g.gluing.second_edge_offset, g.gluing.second_leg_map, g.q,
               g.q_length, s)};
}

SharpMonoid::SharpMonoid(std::size_t k, IntVector modulus, std::vector<IntVector> generators)
    : k_(k), modulus_(std::move(modulus)), generators_(std::move(generators)) {
  if (modulus_.size() != k_) throw Error("DimensionMismatch", "modulus must have rank entries");
  if (is_zero(modulus_)) throw Error("ZeroLength", "modulus is zero");
  for (const auto& g : generators_)
    if (g.size() != 2 * k_) throw Error("DimensionMismatch", "generators live in N^k x N^k");
}

bool SharpMonoid::contains(const IntVector& v) const {
  if (v.size() != 2 * k_) return false;
  for (const auto& x : v)
    if (x < 0) return false;
  std::size_t pivot = 0;
  while (modulus_[pivot] == 0) ++pivot;
  const Integer d = v[pivot] - v[k_ + pivot];
  if (d % modulus_[pivot] != 0) return false;
  const Integer t = d / modulus_[pivot];
  for (std::size_t i = 0; i < k_; ++i)
    if (v[i] - v[k_ + i] != t * modulus_[i]) return false;
  return true;
}

bool SharpMonoid::generated_by(const IntVector& v) const {
  std::map<IntVector, bool> memo;
  std::function<bool(const IntVector&)> rec = [&](const IntVector& w) {
    if (is_zero(w)) return true;
    if (auto it = memo.find(w); it != memo.end()) return it->second;
    bool ok = false;
    for (const auto& g : generators_) {
      if (is_zero(g)) continue;
      IntVector rest(w.size());
      bool fits = true;
      for (std::size_t i = 0; i < w.size() && fits; ++i) {
        rest[i] = w[i] - g[i];
        fits = rest[i] >= 0;
      }
      if (fits && rec(rest)) {
        ok = true;
        break;
      }
    }
    memo[w] = ok;
    return ok;
  };
  if (v.size() != 2 * k_) return false;
  for (const auto& x : v)
    if (x < 0) return false;
  return rec(v);
}

bool SharpMonoid::is_sharp() const {
  for (const auto& g : generators_) {
    if (is_zero(g)) return false;
    for (const auto& x : g)
      if (x < 0) return false;
  }
  return true;
}

SharpMonoid glue_node_monoid(std::size_t k, const IntVector& l1, const IntVector& l2) {
  if (l1.size() != k || l2.size() != k) throw Error("DimensionMismatch", "lengths must have rank entries");
  IntVector m(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (l1[i] < 0 || l2[i] < 0) throw Error("DimensionMismatch", "lengths must lie in N^k");
    m[i] = l1[i] + l2[i];
  }
  if (is_zero(m)) throw Error("ZeroLength", "l1 + l2 is zero");
  const long side = 2 * std::max_element(m.begin(), m.end())->get_si();
  SharpMonoid probe(k, m, {});
  std::vector<IntVector> members;
  IntVector v(2 * k, 0);
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (i == v.size()) {
      if (!is_zero(v) && probe.contains(v)) members.push_back(v);
      return;
    }
    for (long x = 0; x <= side; ++x) {
      v[i] = x;
      walk(i + 1);
    }
  };
  walk(0);
  auto degree = [](const IntVector& x) { return total(x); };
  std::stable_sort(members.begin(), members.end(),
                   [&](const IntVector& x, const IntVector& y) { return degree(x) < degree(y); });
  std::vector<IntVector> gens;
  for (const auto& x : members) {
    bool reducible = false;
    for (const auto& g : gens) {
      IntVector rest(x.size());
      bool fits = true;
      for (std::size_t i = 0; i < x.size() && fits; ++i) {
        rest[i] = x[i] - g[i];
        fits = rest[i] >= 0;
      }
      if (fits && probe.contains(rest)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) gens.push_back(x);
  }
  std::sort(gens.begin(), gens.end(), [&](const IntVector& x, const IntVector& y) {
    if (degree(x) != degree(y)) return degree(x) < degree(y);
    return x > y;
  });
  return SharpMonoid(k, m, std::move(gens));
}

SquareReport check_div_gluing_square(int g1, int n1, int g2, int n2, const IntVector& a_in, long bound) {
  const std::size_t n = n1 + n2;
  IntVector a = a_in;
  if (a.size() == n + 1) {
    Integer head = 0;
    for (int i = 0; i < n1; ++i) head += a[i];
    if (a[n1] != -head)
      throw Error("WeightMismatch", "weight at position " + std::to_string(n1) + " must be " + to_string(Integer(-head)));
    a.erase(a.begin() + n1);
  }
  if (a.size() != n) throw Error("DimensionMismatch", "expected " + std::to_string(n) + " leg weights");
  if (total(a) != 0) throw Error("NonZeroSum", "leg weights sum to " + to_string(total(a)));

  SquareReport r;
  r.bound = bound;
  Integer head = 0;
  for (int i = 0; i < n1; ++i) {
    r.b1.push_back(a[i]);
    head += a[i];
  }
  r.b1.push_back(-head);
  for (int i = n1; i < static_cast<int>(n); ++i) r.b2.push_back(a[i]);
  r.b2.push_back(head);

  const StackMorphism gl = gluing_morphism(g1, n1, g2, n2);
  const auto& src = *gl.source;
  const auto& tgt = *gl.target;
  auto fail = [&](const std::string& msg) {
    r.pass = false;
    r.mismatches.push_back(msg);
  };
  for (std::size_t s = 0; s < src.size(); ++s) {
    const auto& st = src.stratum(s);
    const StableGraph& A = st.graphs[0];
    const StableGraph& B = st.graphs[1];
    const Gluing glued = glue_graphs(A, n1, B, n2);
    const StratumImage& img = gl.images[s];
    const StableGraph& C = tgt.stratum(img.target).graphs[0];
    const CanonicalForm cf = canonical_form(glued.graph);
    ++r.strata_pairs;

    const auto S1 = enumerate_balanced_slopes(A, r.b1, bound).assignments;
    const auto S2 = enumerate_balanced_slopes(B, r.b2, bound).assignments;
    const auto SC = enumerate_balanced_slopes(C, a, bound).assignments;

    // Target assignments on the glued (non-canonical) graph.
    std::vector<IntVector> from_target;
    for (const auto& sc : SC) {
      IntVector t(glued.graph.num_edges());
      for (int e = 0; e < glued.graph.num_edges(); ++e)
        t[e] = cf.edge_flipped[e] ? Integer(-sc[cf.edge_map[e]]) : sc[cf.edge_map[e]];
      from_target.push_back(std::move(t));
    }
    std::sort(from_target.begin(), from_target.end());

    std::vector<IntVector> from_pairs;
    const std::string where = st.key + " -> " + tgt.stratum(img.target).key;
    for (const auto& x : S1)
      for (const auto& y : S2) {
        ++r.glueable_pairs;
        IntVector t = x;
        t.insert(t.end(), y.begin(), y.end());
        t.push_back(r.b2[n2]);
        if (abs(t.back()) > bound) {
          ++r.excluded_by_bound;
          continue;
        }
        if (!is_balanced(glued.graph, a, t)) fail(where + ": glued slopes (" + join(t) + ") not balanced");
        from_pairs.push_back(std::move(t));
      }
    std::sort(from_pairs.begin(), from_pairs.end());
    r.glued_assignments += from_target.size();
    if (from_pairs != from_target) {
      fail(where + ": " + std::to_string(from_pairs.size()) + " glued pairs against " +
           std::to_string(from_target.size()) + " target assignments");
      continue;
    }

    const Cone orthant = Cone::orthant(st.dimension());
    for (const auto& sc : SC) {
      IntVector t(glued.graph.num_edges());
      for (int e = 0; e < glued.graph.num_edges(); ++e)
        t[e] = cf.edge_flipped[e] ? Integer(-sc[cf.edge_map[e]]) : sc[cf.edge_map[e]];
      IntVector x(t.begin(), t.begin() + A.num_edges());
      IntVector y(t.begin() + glued.second_edge_offset, t.begin() + glued.second_edge_offset + B.num_edges());
      Cone pulled = preimage_cone(img.matrix, orthant, with_leg_coordinates(div_cone(C, a, sc).image, n));
      Cone product = product_cone(with_leg_coordinates(div_cone(A, r.b1, x).image, A.num_legs()),
                                  with_leg_coordinates(div_cone(B, r.b2, y).image, B.num_legs()));
      if (!(pulled == product))
        fail(where + ": cone mismatch for target slopes (" + join(sc) + ")");
    }
  }
  return r;
}

}  // namespace logtrop
