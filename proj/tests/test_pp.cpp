#include <array>
#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "logtrop/error.hpp"
#include "logtrop/pp.hpp"

using namespace logtrop;

namespace {

Polynomial random_poly(std::mt19937& rng, std::size_t vars, unsigned max_deg, int terms) {
  std::uniform_int_distribution<int> coef(-5, 5), var(0, static_cast<int>(vars) - 1), deg(0, static_cast<int>(max_deg));
  Polynomial p;
  for (int t = 0; t < terms; ++t) {
    std::vector<std::pair<std::size_t, unsigned>> powers;
    int d = deg(rng);
    for (int k = 0; k < d; ++k) powers.emplace_back(var(rng), 1);
    p += Polynomial::term(Rational(coef(rng), 1 + (t % 3)), Monomial(powers));
  }
  return p;
}

RatVector random_point(std::mt19937& rng, std::size_t vars) {
  std::uniform_int_distribution<int> num(-7, 7), den(1, 4);
  RatVector x;
  for (std::size_t i = 0; i < vars; ++i) x.emplace_back(num(rng), den(rng));
  for (auto& v : x) v.canonicalize();
  return x;
}

int find_stratum(const ConeStack& stack, const std::function<bool(const StableGraph&)>& pred) {
  for (std::size_t s = 0; s < stack.size(); ++s)
    if (pred(stack.stratum(s).graphs[0])) return static_cast<int>(s);
  return -1;
}

Polynomial var(const ConeStack& stack, std::size_t s, bool leg, int index) {
  return Polynomial::variable(stack.coordinate(s, 0, {leg, index}));
}

// Legs on the side of edge e that contains its head, for trees.
std::set<int> legs_beyond(const StableGraph& g, int e) {
  std::vector<int> seen(g.num_vertices(), 0);
  std::vector<int> stack{g.edge(e).second};
  seen[g.edge(e).second] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int f = 0; f < g.num_edges(); ++f) {
      if (f == e) continue;
      auto [a, b] = g.edge(f);
      int w = a == v ? b : (b == v ? a : -1);
      if (w >= 0 && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::set<int> out;
  for (int i = 0; i < g.num_legs(); ++i)
    if (seen[g.leg_vertex(i)]) out.insert(i);
  return out;
}

StableGraph one_edge_tree(int n, const std::set<int>& side) {
  std::vector<int> legs(n);
  for (int i = 0; i < n; ++i) legs[i] = side.count(i) ? 1 : 0;
  return StableGraph({0, 0}, {{0, 1}}, legs);
}

}  // namespace

TEST_CASE("polynomial arithmetic agrees with evaluation") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t vars = 1 + trial % 4;
    Polynomial p = random_poly(rng, vars, 3, 4), q = random_poly(rng, vars, 3, 4);
    RatVector x = random_point(rng, vars);
    CHECK((p + q).evaluate(x) == p.evaluate(x) + q.evaluate(x));
    CHECK((p - q).evaluate(x) == p.evaluate(x) - q.evaluate(x));
    CHECK((p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x));
    std::vector<Polynomial> images;
    RatVector image_values;
    for (std::size_t i = 0; i < vars; ++i) {
      images.push_back(random_poly(rng, vars, 2, 3));
      image_values.push_back(images.back().evaluate(x));
    }
    CHECK(p.substitute(images).evaluate(x) == p.evaluate(image_values));
    Rational sum = 0;
    for (unsigned k = 0; k <= 3; ++k) sum += p.graded_part(k).evaluate(x);
    CHECK(sum == p.evaluate(x));
    // Euler: sum x_i d/dx_i p = sum k p_k
    Polynomial euler;
    for (std::size_t i = 0; i < vars; ++i) euler += Polynomial::variable(i) * p.derivative(i);
    Polynomial weighted;
    for (unsigned k = 1; k <= 3; ++k) weighted += Polynomial(static_cast<long>(k)) * p.graded_part(k);
    CHECK(euler == weighted);
  }
  Polynomial l1 = Polynomial::variable(0), l2 = Polynomial::variable(1);
  CHECK((l1 - l1).is_zero());
  CHECK((l1 * l2).degree() == 2);
  CHECK((Polynomial(Rational(-1, 2)) * (l1 + l2)).to_string({"l_1", "l_2"}) == "-1/2*l_1 - 1/2*l_2");
}

TEST_CASE("length classes") {
  auto m03 = build_moduli(0, 3, true);
  auto l1 = length_class(m03, 1);
  CHECK(l1.pieces(0)[0].poly == Polynomial::variable(0));
  CHECK(l1.evaluate(0, int_vector({0, 4, 5})) == 0);
  CHECK_THROWS_WITH_AS(length_class(build_moduli(0, 4, false), 1), doctest::Contains("NotPointed"), Error);
  CHECK_THROWS_WITH_AS(length_class(m03, 4), doctest::Contains("NotALeg"), Error);
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {0, 4}, {0, 5}, {1, 1}, {1, 2}, {1, 3}, {2, 1}}) {
    auto m = build_moduli(g, n, true);
    for (int i = 1; i <= n; ++i) CHECK(validate(length_class(m, i)).ok());
  }
}

TEST_CASE("forgetful pullback of leg lengths adds the tail edge") {
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {1, 1}, {0, 4}, {1, 2}}) {
    auto f = forgetful_morphism(g, n);
    for (int j = 1; j <= n; ++j) {
      auto pulled = pullback(f, length_class(f.target, j));
      REQUIRE(pulled.is_strict());
      for (std::size_t s = 0; s < f.source->size(); ++s) {
        const auto& gr = f.source->stratum(s).graphs[0];
        // oracle: leg n+1 sits on a genus-0 vertex with exactly leg j and one edge
        const int v = gr.leg_vertex(n);
        Polynomial expected = var(*f.source, s, true, j - 1);
        if (gr.vertex_genus(v) == 0 && gr.valence(v) == 3 && gr.leg_vertex(j - 1) == v)
          for (int e = 0; e < gr.num_edges(); ++e)
            if (!gr.is_loop(e) && (gr.edge(e).first == v || gr.edge(e).second == v))
              expected += var(*f.source, s, false, e);
        CHECK(pulled.pieces(s)[0].poly == expected);
      }
    }
  }
}

TEST_CASE("boundary classes") {
  auto m05 = build_moduli(0, 5, true);
  // every one-edge tree type against a cut oracle on every stratum
  for (const auto& st : m05->strata()) {
    if (st.graphs[0].num_edges() != 1) continue;
    auto delta = st.graphs[0];
    auto side = legs_beyond(delta, 0);
    auto cls = boundary_class(m05, delta);
    CHECK(validate(cls).ok());
    for (std::size_t s = 0; s < m05->size(); ++s) {
      const auto& gr = m05->stratum(s).graphs[0];
      Polynomial expected;
      for (int e = 0; e < gr.num_edges(); ++e) {
        auto cut = legs_beyond(gr, e);
        std::set<int> complement;
        for (int i = 0; i < 5; ++i)
          if (!cut.count(i)) complement.insert(i);
        if (cut == side || complement == side) expected += var(*m05, s, false, e);
      }
      CHECK(cls.pieces(s)[0].poly == expected);
    }
  }
  // chain {1,2}|{3}|{4,5}
  auto delta12 = one_edge_tree(5, {2, 3, 4});
  auto cls = boundary_class(m05, delta12);
  const int chain = find_stratum(*m05, [](const StableGraph& g) {
    return g.num_edges() == 2 && g.leg_vertex(0) == g.leg_vertex(1) && g.leg_vertex(3) == g.leg_vertex(4) &&
           g.leg_vertex(2) != g.leg_vertex(0) && g.leg_vertex(2) != g.leg_vertex(3);
  });
  REQUIRE(chain >= 0);
  CHECK(cls.pieces(chain)[0].poly.degree() == 1);
  CHECK(cls.pieces(chain)[0].poly.terms().size() == 1);
  CHECK(cls.pieces(0)[0].poly.is_zero());

  // both edges of the banana in G_{1,2} have the irreducible type
  auto m12 = build_moduli(1, 2, true);
  StableGraph irr({0}, {{0, 0}}, {0, 0});
  auto birr = boundary_class(m12, irr);
  CHECK(validate(birr).ok());
  const int banana = find_stratum(*m12, [](const StableGraph& g) {
    return g.num_vertices() == 2 && g.num_edges() == 2 && !g.is_loop(0) && !g.is_loop(1);
  });
  REQUIRE(banana >= 0);
  CHECK(birr.pieces(banana)[0].poly == var(*m12, banana, false, 0) + var(*m12, banana, false, 1));
  const int own = static_cast<int>(m12->index_of(digest(irr)));
  CHECK(birr.pieces(own)[0].poly == var(*m12, own, false, 0));

  CHECK_THROWS_WITH_AS(boundary_class(m12, StableGraph::smooth(1, 2)), doctest::Contains("NotOneEdge"), Error);

  // edge-only classes ignore leg coordinates and agree with the unpointed stack
  auto u12 = build_moduli(1, 2, false);
  auto uirr = boundary_class(u12, irr);
  for (std::size_t s = 0; s < m12->size(); ++s) {
    const auto& p = birr.pieces(s)[0].poly;
    CHECK(p == uirr.pieces(s)[0].poly);
    for (int i = 0; i < 2; ++i) CHECK(p.derivative(m12->coordinate(s, 0, {true, i})).is_zero());
  }
}

TEST_CASE("ring operations and the truncated exponential") {
  auto m03 = build_moduli(0, 3, true);
  auto l1 = length_class(m03, 1), l2 = length_class(m03, 2), l3 = length_class(m03, 3);
  CHECK((l1 + (-l1)).is_zero());
  CHECK(exp_truncated(l1, 3).graded_part(1).equivalent(l1));
  auto prod = l1 * l2;
  CHECK(prod.degree() == 2);
  CHECK(prod.pieces(0)[0].poly == Polynomial::variable(0) * Polynomial::variable(1));

  auto x = l1 + l2.scaled(2), y = l3 * l3 + l1;
  CHECK(exp_truncated(x + y, 4).equivalent(exp_truncated(x, 4).multiply_truncated(exp_truncated(y, 4), 4)));
  auto e = exp_truncated(x, 3);
  CHECK(e.graded_part(3).equivalent((x * x * x).scaled(Rational(1, 6))));
  CHECK_THROWS_WITH_AS(exp_truncated(l1 + PPClass::constant(m03, 1), 2), doctest::Contains("NonNilpotentExp"), Error);
  CHECK_THROWS_WITH_AS(l1 + length_class(build_moduli(0, 4, true), 1), doctest::Contains("BaseMismatch"), Error);
}

TEST_CASE("validation finds constructed violations") {
  auto m11 = build_moduli(1, 1, true);
  const int loop = find_stratum(*m11, [](const StableGraph& g) { return g.num_edges() == 1; });
  std::vector<Polynomial> polys(2);
  polys[loop] = var(*m11, loop, false, 0);
  polys[1 - loop] = Polynomial(1);
  auto bad = PPClass::strict(m11, polys);
  auto report = validate(bad);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == "Face");

  auto m12 = build_moduli(1, 2, true);
  const int banana = find_stratum(*m12, [](const StableGraph& g) {
    return g.num_vertices() == 2 && g.num_edges() == 2 && !g.is_loop(0) && !g.is_loop(1);
  });
  std::vector<Polynomial> lop(m12->size());
  lop[banana] = var(*m12, banana, false, 0) * var(*m12, banana, false, 1) * var(*m12, banana, false, 0);
  bool aut = false;
  for (const auto& v : validate(PPClass::strict(m12, lop)).violations) aut = aut || v.kind == "Automorphism";
  CHECK(aut);

  // discontinuous across a wall of the star subdivision at (1,1,1)
  auto m03 = build_moduli(0, 3, true);
  auto sub = star_subdivision(ConeComplex(3, {Cone::orthant(3)}), int_vector({1, 1, 1}));
  std::vector<PPPiece> pieces;
  int k = 0;
  for (const auto& c : sub.refined.maximal()) pieces.push_back({c, Polynomial(static_cast<long>(k++))});
  auto jumpy = PPClass(m03, {pieces});
  bool wall = false;
  for (const auto& v : validate(jumpy).violations) wall = wall || v.kind == "Wall";
  CHECK(wall);

  // the same subdivision carrying one polynomial is the strict class
  for (auto& p : pieces) p.poly = Polynomial::variable(1);
  auto flat = PPClass(m03, {pieces});
  CHECK(flat.is_strict());
  CHECK(flat.equivalent(length_class(m03, 2)));
}

TEST_CASE("pullback is a ring map and respects composition") {
  std::vector<StackMorphism> maps{gluing_morphism(0, 2, 0, 2), gluing_morphism(1, 0, 0, 2), loop_gluing_morphism(1, 2),
                                  forgetful_morphism(0, 4), forgetful_morphism(1, 2, true, 0),
                                  relabel_morphism(0, 5, {1, 0, 2, 4, 3})};
  for (const auto& m : maps) {
    INFO(m.name);
    const auto& sig = m.target->factors()[0];
    std::vector<PPClass> gens;
    for (int i = 1; i <= sig.n; ++i) gens.push_back(length_class(m.target, i));
    for (const auto& st : m.target->strata())
      if (st.graphs[0].num_edges() == 1) gens.push_back(boundary_class(m.target, st.graphs[0]));
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i; j < gens.size(); ++j) {
        auto x = gens[i] + gens[j].scaled(3);
        auto y = gens[j] * gens[j] + PPClass::constant(m.target, 2);
        CHECK(pullback(m, x * y).equivalent(pullback(m, x) * pullback(m, y)));
        CHECK(pullback(m, x + y).equivalent(pullback(m, x) + pullback(m, y)));
      }
    CHECK(pullback(m, PPClass::constant(m.target, 1)).equivalent(PPClass::constant(m.source, 1)));
    for (const auto& c : gens) CHECK(validate(pullback(m, c)).ok());
  }
  auto first = gluing_morphism(0, 3, 0, 2);
  auto second = forgetful_morphism(0, 4, true, 0);
  auto c = boundary_class(second.target, one_edge_tree(4, {2, 3})) * length_class(second.target, 2);
  CHECK(pullback(compose(first, second), c).equivalent(pullback(first, pullback(second, c))));
  CHECK_THROWS_WITH_AS(pullback(first, c), doctest::Contains("BaseMismatch"), Error);
}

TEST_CASE("gluing pullback of the boundary class carries lp + lq") {
  for (auto [g1, n1, g2, n2] : std::vector<std::array<int, 4>>{{0, 2, 0, 2}, {1, 0, 0, 2}}) {
    auto gl = gluing_morphism(g1, n1, g2, n2);
    auto delta = glue_graphs(StableGraph::smooth(g1, n1 + 1), n1, StableGraph::smooth(g2, n2 + 1), n2).graph;
    auto pulled = pullback(gl, boundary_class(gl.target, delta));
    for (std::size_t s = 0; s < gl.source->size(); ++s) {
      const auto& p = pulled.pieces(s)[0].poly;
      const int cp = gl.source->coordinate(s, 0, {true, n1});
      const int cq = gl.source->coordinate(s, 1, {true, n2});
      CHECK(p.coefficient(Monomial::variable(cp)) == 1);
      CHECK(p.coefficient(Monomial::variable(cq)) == 1);
      Polynomial rest = p - Polynomial::variable(cp) - Polynomial::variable(cq);
      for (const auto& [mono, coef] : rest.terms()) {
        CHECK(coef > 0);
        CHECK(mono.degree() == 1);
        CHECK(gl.source->stratum(s).is_edge(static_cast<int>(mono.powers()[0].first)));
      }
    }
  }
}

TEST_CASE("double ramification polynomial") {
  for (auto a : {int_vector({1, -1, 0}), int_vector({3, -1, -2}), int_vector({0, 0, 0})}) {
    auto r = dr_polynomial(0, 3, a);
    CHECK(r.warnings.empty());
    CHECK(r.value.equivalent(PPClass::constant(build_moduli(0, 3, true), 1)));
  }
  auto zero = dr_polynomial(0, 3, int_vector({1, 1, 0}));
  CHECK(zero.value.is_zero());
  REQUIRE(zero.warnings.size() == 1);
  CHECK(zero.warnings[0].find("NonZeroSum") == 0);

  auto m12 = build_moduli(1, 2, true);
  CHECK(dr_polynomial(1, 2, int_vector({0, 0})).value.is_zero());
  auto half = (length_class(m12, 1) + length_class(m12, 2)).scaled(Rational(-1, 2));
  CHECK(dr_polynomial(1, 2, int_vector({1, -1})).value.equivalent(half));

  CHECK(dr_polynomial(2, 1, int_vector({0})).value.is_zero());
  auto b = build_moduli(1, 3, true);
  IntVector a{2, -3, 1};
  PPClass s = PPClass::constant(b, 0);
  for (int i = 0; i < 3; ++i) s = s + length_class(b, i + 1).scaled(Rational(a[i] * a[i]));
  auto r13 = dr_polynomial(1, 3, a);
  CHECK(r13.value.equivalent(s.scaled(Rational(-1, 2))));

  auto L = boundary_class(m12, StableGraph({0}, {{0, 0}}, {0, 0}));
  auto P = PPClass::constant(m12, 3) + length_class(m12, 1);
  auto with = dr_polynomial(1, 2, int_vector({2, -2}), L, P);
  auto x = (length_class(m12, 1).scaled(4) + length_class(m12, 2).scaled(4) + L).scaled(Rational(-1, 2));
  CHECK(with.value.equivalent(x.scaled(3) + length_class(m12, 1)));
  CHECK_THROWS_WITH_AS(dr_polynomial(1, 2, int_vector({1, -1}), L * L), doctest::Contains("DegreeError"), Error);
}

TEST_CASE("star subdivision at the equal-leg ray") {
  auto m12 = build_moduli(1, 2, true);
  const std::size_t smooth = 0;
  REQUIRE(m12->stratum(smooth).graphs[0].num_edges() == 0);
  auto sub = star_subdivide(m12, smooth, int_vector({1, 1}));
  auto phi = phi_class(sub);
  CHECK(validate(phi).ok());
  for (std::size_t s = 0; s < m12->size(); ++s) {
    REQUIRE(sub.marked[s].size() == 1);
    IntVector tau = sub.marked[s][0];
    CHECK(sub.strata[s].refined.maximal().size() == 2);
    for (const auto& p : phi.pieces(s))
      if (!p.cone.has_ray(tau)) CHECK(p.poly.is_zero());
  }
  CHECK(phi.evaluate(smooth, int_vector({3, 5})) == 3);
  CHECK(phi.evaluate(smooth, int_vector({7, 2})) == 2);
  for (const auto& m : {gluing_morphism(1, 0, 0, 2), gluing_morphism(0, 2, 1, 0), loop_gluing_morphism(1, 2),
                        forgetful_morphism(1, 2)}) {
    INFO(m.name);
    auto pulled = pullback(m, phi);
    CHECK(validate(pulled).ok());
  }
  CHECK_THROWS_WITH_AS(star_subdivide(m12, smooth, int_vector({1, -1})), doctest::Contains("RayOutsideSupport"), Error);
}

TEST_CASE("exterior product") {
  auto m03 = build_moduli(0, 3, true);
  auto x = length_class(m03, 1) * length_class(m03, 1);
  auto y = length_class(m03, 2) + PPClass::constant(m03, 1);
  auto z = exterior_product(x, y);
  CHECK(z.base()->size() == 1);
  CHECK(z.pieces(0)[0].poly ==
        Polynomial::variable(0) * Polynomial::variable(0) * (Polynomial::variable(4) + Polynomial(1)));
  CHECK(validate(z).ok());
}
