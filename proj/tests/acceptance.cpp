// Acceptance run: one PASS/FAIL line per criterion. All comparisons are exact;
// each criterion also has a wall-clock limit in seconds.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "graph_oracle.hpp"
#include "logtrop/cohft.hpp"
#include "logtrop/error.hpp"
#include "logtrop/fan.hpp"
#include "logtrop/tropdiv.hpp"

using namespace logtrop;

namespace {

struct Result {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string str(const IntVector& v) { return "(" + join(v) + ")"; }

Polynomial coordinate(const ConeStack& stack, std::size_t s, bool leg, int index) {
  return Polynomial::variable(stack.coordinate(s, 0, {leg, index}));
}

Result graph_enumeration() {
  Result r;
  const std::array<std::array<int, 3>, 5> expected{{{0, 3, 1}, {0, 4, 4}, {0, 5, 26}, {1, 1, 2}, {1, 2, 5}}};
  for (auto [g, n, count] : expected) {
    auto got = enumerate_stable_graphs(g, n);
    auto ref = oracle::enumerate(g, n);
    std::set<std::string> ref_digests;
    for (const auto& m : ref) ref_digests.insert(digest(StableGraph(m.genus, m.edge_list(), m.legs)));
    std::set<std::string> got_digests;
    for (const auto& e : got) got_digests.insert(e.digest);
    const std::string sig = "(" + std::to_string(g) + "," + std::to_string(n) + ")";
    r.require(static_cast<int>(got.size()) == count, sig + " count " + std::to_string(got.size()));
    r.require(ref.size() == got.size(), sig + " oracle count " + std::to_string(ref.size()));
    r.require(ref_digests == got_digests, sig + " oracle classes differ");
  }
  return r;
}

// pi^* l_j = l_j + (length of the edge to a genus-0 tail carrying exactly legs j and n+1)
Result forgetful_lengths() {
  Result r;
  for (auto [g, n] : {std::pair{0, 3}, std::pair{1, 1}}) {
    auto f = forgetful_morphism(g, n);
    for (int j = 1; j <= n; ++j) {
      auto pulled = pullback(f, length_class(f.target, j));
      for (std::size_t s = 0; s < f.source->size(); ++s) {
        const auto& gr = f.source->stratum(s).graphs[0];
        const int v = gr.leg_vertex(n);
        Polynomial expected = coordinate(*f.source, s, true, j - 1);
        if (gr.vertex_genus(v) == 0 && gr.valence(v) == 3 && gr.leg_vertex(j - 1) == v)
          for (int e = 0; e < gr.num_edges(); ++e)
            if (!gr.is_loop(e) && (gr.edge(e).first == v || gr.edge(e).second == v))
              expected += coordinate(*f.source, s, false, e);
        r.require(pulled.pieces(s).size() == 1 && pulled.pieces(s)[0].poly == expected,
                  f.name + " l_" + std::to_string(j) + " on " + f.source->stratum(s).key);
      }
    }
  }
  return r;
}

Result gluing_substitution() {
  Result r;
  for (auto [g1, n1, g2, n2] : {std::array{0, 2, 0, 2}, std::array{1, 0, 0, 2}}) {
    auto gl = gluing_morphism(g1, n1, g2, n2);
    auto delta0 = glue_graphs(StableGraph::smooth(g1, n1 + 1), n1, StableGraph::smooth(g2, n2 + 1), n2).graph;
    for (const auto& st : gl.target->strata()) {
      if (st.graphs[0].num_edges() != 1) continue;
      const bool carries = isomorphic(st.graphs[0], delta0);
      auto pulled = pullback(gl, boundary_class(gl.target, st.graphs[0]));
      for (std::size_t s = 0; s < gl.source->size(); ++s) {
        const auto& p = pulled.pieces(s)[0].poly;
        const auto cp = Monomial::variable(gl.source->coordinate(s, 0, {true, n1}));
        const auto cq = Monomial::variable(gl.source->coordinate(s, 1, {true, n2}));
        const Rational want = carries ? 1 : 0;
        r.require(p.coefficient(cp) == want && p.coefficient(cq) == want,
                  gl.name + " on " + gl.source->stratum(s).key + ": " + p.to_string(gl.source->stratum(s).labels));
      }
    }
  }
  return r;
}

Result node_monoid() {
  Result r;
  const std::vector<std::pair<IntVector, IntVector>> cases{
      {int_vector({1}), int_vector({1})}, {int_vector({1}), int_vector({2})}, {int_vector({1, 0}), int_vector({0, 1})}};
  const long side = 8;
  for (const auto& [l1, l2] : cases) {
    const std::size_t k = l1.size();
    auto mon = glue_node_monoid(k, l1, l2);
    IntVector v(2 * k, 0);
    std::function<void(std::size_t)> walk = [&](std::size_t i) {
      if (!r.ok) return;
      if (i == v.size()) {
        // divisibility description: a1 - a2 = t (l1 + l2) for an integer t
        std::optional<Integer> t;
        bool member = true;
        for (std::size_t j = 0; j < k && member; ++j) {
          Integer d = v[j] - v[k + j];
          Integer m = l1[j] + l2[j];
          if (m == 0) {
            member = d == 0;
            continue;
          }
          if (d % m != 0) {
            member = false;
            continue;
          }
          Integer q = d / m;
          if (t && *t != q) member = false;
          t = q;
        }
        r.require(mon.generated_by(v) == member, "l1=" + str(l1) + " l2=" + str(l2) + " at " + str(v));
        return;
      }
      for (long x = 0; x <= side; ++x) {
        v[i] = x;
        walk(i + 1);
      }
    };
    walk(0);
  }
  return r;
}

Result pl_gluing() {
  Result r;
  std::mt19937 rng(7);
  std::vector<StableGraph> pool;
  for (auto [g, n] : {std::pair{0, 3}, {0, 4}, {1, 2}, {0, 5}, {1, 3}})
    for (auto& eg : enumerate_stable_graphs(g, n)) pool.push_back(eg.graph);
  auto weights = [&](int n) {
    std::uniform_int_distribution<long> d(-3, 3);
    IntVector a(n);
    Integer s = 0;
    for (int i = 0; i + 1 < n; ++i) {
      a[i] = d(rng);
      s += a[i];
    }
    a[n - 1] = -s;
    return a;
  };
  int done = 0, negatives = 0;
  for (int attempt = 0; done < 20 && attempt < 2000; ++attempt) {
    const StableGraph& A = pool[rng() % pool.size()];
    const StableGraph& B = pool[rng() % pool.size()];
    const int p = static_cast<int>(rng() % A.num_legs()), q = static_cast<int>(rng() % B.num_legs());
    IntVector a1 = weights(A.num_legs()), a2 = weights(B.num_legs());
    const int other = (q + 1) % B.num_legs();
    a2[other] += a2[q] + a1[p];
    a2[q] = -a1[p];
    auto s1 = enumerate_balanced_slopes(A, a1, 3).assignments;
    auto s2 = enumerate_balanced_slopes(B, a2, 3).assignments;
    if (s1.empty() || s2.empty()) continue;
    const std::size_t d1 = A.num_edges() + A.num_legs(), dim = d1 + B.num_edges() + B.num_legs();
    RatVector root(dim + 1, 0);
    root[rng() % dim] = 2;
    root.back() = 5;
    PLCurveFunction f1, f2;
    try {
      f1 = make_pl_function(A, s1[rng() % s1.size()], a1, root, dim, 0);
      f2 = make_pl_function(B, s2[rng() % s2.size()], a2, RatVector(dim + 1, 0), dim, d1);
    } catch (const Error& e) {
      r.require(e.code() == "NotConsistent", "unexpected " + e.code());
      continue;
    }
    RatVector shift = f1.leg_end_value(p);
    auto end = f2.leg_end_value(q);
    for (std::size_t i = 0; i < shift.size(); ++i) shift[i] -= end[i];
    f2 = f2.shifted(shift);
    auto glued = glue_pl_functions(f1, p, f2, q);
    r.require(glued.function.is_consistent() && glued.function.is_balanced(), "glued function not balanced");
    auto [b1, b2] = split_glued(glued);
    r.require(b1 == f1 && b2 == f2, "split does not recover the factors");
    ++done;

    // negative case: slopes at the glued legs do not sum to zero
    if (a1[p] != 0 && A.num_legs() > 1) {
      IntVector bad = a1;
      bad[p] = -bad[p];
      bad[(p + 1) % A.num_legs()] += a1[p] * 2;
      auto sb = enumerate_balanced_slopes(A, bad, 3).assignments;
      if (!sb.empty()) {
        try {
          auto fb = make_pl_function(A, sb[0], bad, root, dim, 0);
          RatVector sh = fb.leg_end_value(p);
          for (std::size_t i = 0; i < sh.size(); ++i) sh[i] -= end[i];
          glue_pl_functions(fb, p, f2.shifted(sh), q);
          r.require(false, "slopes " + std::to_string(bad[p].get_si()) + " and " + a2[q].get_str() + " were glued");
        } catch (const Error& e) {
          r.require(e.code() == "SlopeMismatch" || e.code() == "NotConsistent", "unexpected " + e.code());
          if (e.code() == "SlopeMismatch") ++negatives;
        }
      }
    }
  }
  r.require(done == 20, "only " + std::to_string(done) + " instances");
  r.require(negatives > 0, "no negative case constructed");
  try {
    enumerate_balanced_slopes(StableGraph::smooth(0, 3), int_vector({1, 1, 0}), 2);
    r.require(false, "non-zero weight sum accepted");
  } catch (const Error& e) {
    r.require(e.code() == "NonZeroSum", "unexpected " + e.code());
  }
  if (r.ok) r.detail = std::to_string(done) + " round trips, " + std::to_string(negatives) + " rejections";
  return r;
}

Result div_square() {
  Result r;
  auto a = check_div_gluing_square(0, 2, 0, 2, int_vector({1, 1, -1, -1}), 4);
  r.require(a.pass, a.mismatches.empty() ? "(0,3)^2 failed" : a.mismatches[0]);
  auto b = check_div_gluing_square(1, 0, 0, 2, int_vector({0, 1, -1}), 4);
  r.require(b.pass, b.mismatches.empty() ? "(1,1)x(0,3) failed" : b.mismatches[0]);
  if (r.ok)
    r.detail = std::to_string(a.glued_assignments + b.glued_assignments) + " glued assignments over " +
               std::to_string(a.strata_pairs + b.strata_pairs) + " strata pairs";
  return r;
}

Result dr_values() {
  Result r;
  for (int n : {3, 4}) {
    auto one = PPClass::constant(build_moduli(0, n, true), 1);
    IntVector a(n, 0);
    std::function<void(int)> walk = [&](int i) {
      if (!r.ok) return;
      if (i == n) {
        Integer s = 0;
        for (const auto& x : a) s += x;
        auto got = dr_polynomial(0, n, a);
        if (s == 0)
          r.require(got.value.equivalent(one) && got.warnings.empty(), "g=0 a=" + str(a));
        else
          r.require(got.value.is_zero() && got.warnings.size() == 1, "g=0 a=" + str(a) + " sum non-zero");
        return;
      }
      for (long x = -2; x <= 2; ++x) {
        a[i] = x;
        walk(i + 1);
      }
    };
    walk(0);
  }
  auto m12 = build_moduli(1, 2, true);
  auto half = (length_class(m12, 1) + length_class(m12, 2)).scaled(Rational(-1, 2));
  r.require(dr_polynomial(1, 2, int_vector({1, -1})).value.equivalent(half), "g=1 a=(1,-1)");
  return r;
}

Result axiom_checkers() {
  Result r;
  for (const auto& rep : check_axioms(CohFTSpec::constant_spec(), {"sn", "sep", "loop", "unit"}, 1, 4))
    r.require(rep.passed(), "trivial spec " + rep.axiom + " " + rep.instance);

  auto eng = CohFTSpec::table_spec({0}, {{{0, 0}, 1}}, 0, 0, 4);
  auto m04 = build_moduli(0, 4, true);
  StableGraph d1324({0, 0}, {{0, 1}}, {0, 1, 0, 1}), d1423({0, 0}, {{0, 1}}, {0, 1, 1, 0});
  eng.table.emplace(std::make_tuple(0, 3, Labels{0, 0, 0}), PPClass::constant(build_moduli(0, 3, true), 1));
  eng.table.emplace(std::make_tuple(0, 4, Labels{0, 0, 0, 0}),
                    PPClass::constant(m04, 1) + boundary_class(m04, d1324) + boundary_class(m04, d1423));
  r.require(check_separating_gluing(eng, 0, 2, 0, 2, {{0, 0, 0, 0}}).passed(), "engineered table sep");

  auto dr = CohFTSpec::dr_spec(2, 1, 4);
  auto sep = check_separating_gluing(dr, 1, 0, 0, 2, {{1, -1}, {2, -2}});
  r.require(sep.verdict == Verdict::Fail && !sep.witnesses.empty() && sep.witnesses[0].difference != "0",
            "DR sep negative control did not fail with a witness");
  auto loop = check_loop_axiom(dr, 1, 2, {{1, -1}});
  bool infinite = false;
  for (const auto& w : loop.witnesses) infinite = infinite || w.detail.find("InfiniteSum") != std::string::npos;
  r.require(loop.verdict == Verdict::Fail && infinite, "DR loop negative control did not fail with a witness");
  return r;
}

Result minimality() {
  Result r;
  auto m03 = build_moduli(0, 3, true);
  std::vector<PPClass> monomials{PPClass::constant(m03, 1)};
  for (int i = 1; i <= 3; ++i) {
    monomials.push_back(length_class(m03, i));
    for (int j = i; j <= 3; ++j) monomials.push_back(length_class(m03, i) * length_class(m03, j));
  }
  for (const auto& c : monomials) r.require(check_minimality(c).passed(), "(0,3) monomial failed");
  auto m04 = build_moduli(0, 4, true);
  auto rep = check_minimality(boundary_class(m04, StableGraph({0, 0}, {{0, 1}}, {0, 0, 1, 1})));
  bool witness = false;
  for (const auto& w : rep.witnesses) witness = witness || w.difference.find("1:l_3 + 2:l_3") != std::string::npos;
  r.require(rep.verdict == Verdict::Fail && witness, "(0,4) boundary class lacks the l_p + l_q witness");
  return r;
}

Result line_chow() {
  Result r;
  ConeComplex line(1, {Cone::from_generators(1, {int_vector({1})}), Cone::from_generators(1, {int_vector({-1})})});
  auto p = chow_ring(line);
  r.require(p.dimensions == std::vector<std::size_t>{1, 1}, "graded dimensions");
  r.require(p.dimension_above_rank == 0, "degree 2 is non-zero");
  auto h2 = p.products.find({1, 0, 1, 0});
  r.require(h2 != p.products.end() && h2->second.empty(), "h^2 is not zero");
  return r;
}

Result probe() {
  Result r;
  auto res = logch_probe(Cone::orthant(3),
                         {int_vector({1, 1, 1}), int_vector({1, 1, 0}), int_vector({1, 0, 1}), int_vector({0, 1, 1})}, 1);
  r.require(res.steps.size() == 5, "step count");
  std::string dims;
  for (std::size_t i = 0; i < res.steps.size(); ++i) {
    const auto& s = res.steps[i];
    dims += (dims.empty() ? "" : ",") + std::to_string(s.dimensions[1]);
    r.require(s.dimensions[0] == 1, "degree 0 not constant");
    r.require(s.dimensions[1] == 3 + i, "degree 1 at step " + std::to_string(i));
    for (bool inj : s.injective) r.require(inj, "transition not injective");
  }
  if (r.ok) r.detail = "degree-1 dimensions " + dims;
  return r;
}

Result star_phi() {
  Result r;
  auto m12 = build_moduli(1, 2, true);
  std::size_t smooth = m12->index_of(digest(StableGraph::smooth(1, 2)));
  auto sub = star_subdivide(m12, smooth, int_vector({1, 1}));
  auto phi = phi_class(sub);
  r.require(validate(phi).ok(), "phi does not validate");
  for (std::size_t s = 0; s < m12->size(); ++s)
    for (const auto& piece : phi.pieces(s)) {
      bool has = false;
      for (const auto& t : sub.marked[s]) has = has || piece.cone.has_ray(t);
      if (!has) r.require(piece.poly.is_zero(), "phi non-zero away from tau on " + m12->stratum(s).key);
    }
  return r;
}

Result extension() {
  Result r;
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> coef(0, 2);
  int done = 0;
  for (int attempt = 0; done < 10 && attempt < 200; ++attempt) {
    const std::size_t d = 2 + rng() % 3;
    // a smooth cone of full dimension: the orthant under a random unimodular shear
    std::vector<IntVector> rays;
    for (std::size_t i = 0; i < d; ++i) {
      IntVector e(d, 0);
      e[i] = 1;
      for (std::size_t j = i + 1; j < d; ++j) e[j] = coef(rng);
      rays.push_back(e);
    }
    ConeComplex x(d, {Cone::from_generators(d, rays)});
    // delta: a random proper face
    std::vector<IntVector> face;
    for (const auto& ray : rays)
      if (rng() % 2) face.push_back(ray);
    if (face.size() < 2 || face.size() == d) continue;
    ConeComplex delta(d, {Cone::from_generators(d, face)});
    // refine delta by one or two star subdivisions at interior lattice points
    ConeComplex refined = delta;
    const int steps = 1 + static_cast<int>(rng() % 2);
    for (int s = 0; s < steps; ++s) {
      const Cone& c = refined.maximal()[rng() % refined.maximal().size()];
      IntVector ray(d, 0);
      for (const auto& g : c.rays()) {
        const long w = 1 + static_cast<long>(rng() % 2);
        for (std::size_t i = 0; i < d; ++i) ray[i] += w * g[i];
      }
      refined = star_subdivide(refined, make_primitive(ray));
    }
    auto sub = make_subdivision(delta, refined);
    auto ext = extend_subdivision(x, delta, sub);
    r.require(ext.refined.restrict_to(delta) == sub.refined, "restriction differs in rank " + std::to_string(d));
    r.require(is_subdivision(x, ext.refined), "extension is not a subdivision");
    ++done;
  }
  r.require(done == 10, "only " + std::to_string(done) + " instances");
  return r;
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  std::function<Result()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "graph enumeration counts against the brute-force oracle", 5, graph_enumeration},
      {2, "forgetful pullback of leg lengths on M(0,4) and M(1,2)", 5, forgetful_lengths},
      {3, "gluing pullback of boundary classes carries l_p + l_q", 5, gluing_substitution},
      {4, "glued node monoid against divisibility on a box of side 8", 5, node_monoid},
      {5, "PL function gluing round trips and slope rejection", 60, pl_gluing},
      {6, "Div gluing square, slope bound 4", 60, div_square},
      {7, "DR polynomial values", 60, dr_values},
      {8, "axiom checkers on trivial, engineered and DR specs", 120, axiom_checkers},
      {9, "minimality of (0,3) monomials and the (0,4) boundary class", 60, minimality},
      {10, "Chow ring of the fan of the line", 60, line_chow},
      {11, "piecewise-polynomial probe over four star subdivisions", 60, probe},
      {12, "star subdivision of M(1,2) and the phi class", 60, star_phi},
      {13, "subdivision extension on 10 random instances", 60, extension},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Result res;
    try {
      res = c.run();
    } catch (const std::exception& e) {
      res.ok = false;
      res.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (res.ok && secs > c.limit) {
      res.ok = false;
      res.detail = "time limit exceeded";
    }
    if (!res.ok) ++failed;
    std::printf("%s %2d %s (%.2f s, limit %.0f s)%s%s\n", res.ok ? "PASS" : "FAIL", c.id, c.name, secs, c.limit,
                res.detail.empty() ? "" : ": ", res.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
