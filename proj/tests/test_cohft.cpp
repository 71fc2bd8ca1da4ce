#include <algorithm>
#include <set>

#include "doctest.h"
#include "logtrop/cohft.hpp"
#include "logtrop/error.hpp"

using namespace logtrop;

namespace {

StableGraph split(std::vector<int> legs) { return StableGraph({0, 0}, {{0, 1}}, std::move(legs)); }

bool has_detail(const AxiomReport& r, const std::string& text) {
  return std::any_of(r.witnesses.begin(), r.witnesses.end(), [&](const Witness& w) {
    return w.detail.find(text) != std::string::npos || w.difference.find(text) != std::string::npos;
  });
}

// Omega_{0,3} = 1 and Omega_{0,4} = 1 + delta_{13|24} + delta_{14|23}: the two
// boundary classes vanish on the stratum hit by gluing legs {1,2} to {3,4}.
CohFTSpec engineered_sep_table() {
  auto spec = CohFTSpec::table_spec({0}, {{{0, 0}, 1}}, 0, 0, 4);
  auto m03 = build_moduli(0, 3, true);
  auto m04 = build_moduli(0, 4, true);
  spec.table.emplace(std::make_tuple(0, 3, Labels{0, 0, 0}), PPClass::constant(m03, 1));
  spec.table.emplace(std::make_tuple(0, 4, Labels{0, 0, 0, 0}),
                     PPClass::constant(m04, 1) + boundary_class(m04, split({0, 1, 0, 1})) +
                         boundary_class(m04, split({0, 1, 1, 0})));
  return spec;
}

}  // namespace

TEST_CASE("constant spec passes every axiom on g<=1, n<=4") {
  auto spec = CohFTSpec::constant_spec();
  spec.validate();
  auto reports = check_axioms(spec, {"sn", "sep", "loop", "unit"}, 1, 4);
  std::set<std::string> kinds;
  for (const auto& r : reports) {
    CHECK_MESSAGE(r.passed(), r.axiom << " " << r.instance);
    kinds.insert(r.axiom);
  }
  CHECK(kinds == std::set<std::string>{"sn", "sep", "loop", "unit"});
  CHECK_THROWS_WITH_AS(check_axioms(spec, {"sep"}, 2, 4), doctest::Contains("EnvelopeExceeded"), Error);
  CHECK_THROWS_WITH_AS(check_sn_equivariance(spec, 0, 5, {{0, 0, 0, 0, 0}}), doctest::Contains("EnvelopeExceeded"),
                       Error);
}

TEST_CASE("symmetric group equivariance") {
  auto dr = CohFTSpec::dr_spec(1, 1, 4);
  std::vector<Labels> inputs{{1, -1, 0}, {-1, 0, 1}, {0, 1, -1}};
  for (int g : {0, 1}) CHECK(check_sn_equivariance(dr, g, 3, inputs).passed());
  CHECK(check_sn_equivariance(dr, 1, 4, {{1, 1, -1, -1}, {1, 0, 0, -1}}).passed());

  auto skew = CohFTSpec::table_spec({0}, {{{0, 0}, 1}}, std::nullopt, 0, 4);
  auto m04 = build_moduli(0, 4, true);
  skew.table.emplace(std::make_tuple(0, 4, Labels{0, 0, 0, 0}), length_class(m04, 1));
  auto r = check_sn_equivariance(skew, 0, 4, {{0, 0, 0, 0}});
  CHECK(r.verdict == Verdict::Fail);
  REQUIRE_FALSE(r.witnesses.empty());
  CHECK(r.witnesses[0].stratum.find("swap 1,2") != std::string::npos);
}

TEST_CASE("separating gluing") {
  auto trivial = CohFTSpec::constant_spec();
  auto t = check_separating_gluing(trivial, 0, 2, 0, 2, {{0, 0, 0, 0}});
  CHECK(t.passed());
  CHECK(t.max_summands == 1);

  auto eng = engineered_sep_table();
  eng.validate();
  auto e = check_separating_gluing(eng, 0, 2, 0, 2, {{0, 0, 0, 0}});
  CHECK(e.passed());
  // the same table with a wrong (0,3) value fails
  auto bad = eng;
  bad.table.erase(std::make_tuple(0, 3, Labels{0, 0, 0}));
  bad.table.emplace(std::make_tuple(0, 3, Labels{0, 0, 0}), PPClass::constant(build_moduli(0, 3, true), 2));
  CHECK(check_separating_gluing(bad, 0, 2, 0, 2, {{0, 0, 0, 0}}).verdict == Verdict::Fail);
  // and adding the glued boundary class breaks it too
  auto worse = eng;
  auto m04 = build_moduli(0, 4, true);
  worse.table.erase(std::make_tuple(0, 4, Labels{0, 0, 0, 0}));
  worse.table.emplace(std::make_tuple(0, 4, Labels{0, 0, 0, 0}),
                      PPClass::constant(m04, 1) + boundary_class(m04, split({0, 0, 1, 1})));
  auto w = check_separating_gluing(worse, 0, 2, 0, 2, {{0, 0, 0, 0}});
  CHECK(w.verdict == Verdict::Fail);
  CHECK(has_detail(w, "1:l_3 + 2:l_3"));

  auto dr = CohFTSpec::dr_spec(2, 1, 4);
  std::vector<Labels> reachable;
  for (const auto& v : window_inputs(dr, 4, 1000))
    if (std::abs(v[0] + v[1]) <= 2) reachable.push_back(v);
  auto g0 = check_separating_gluing(dr, 0, 2, 0, 2, reachable);
  CHECK(g0.passed());
  CHECK(g0.max_summands == 1);

  auto neg = check_separating_gluing(dr, 1, 0, 0, 2, {{1, -1}, {2, -2}});
  CHECK(neg.verdict == Verdict::Fail);
  CHECK(neg.max_summands == 0);
  REQUIRE_FALSE(neg.witnesses.empty());
  CHECK(neg.witnesses[0].difference != "0");

  auto narrow = CohFTSpec::dr_spec(1, 1, 4);
  auto small = check_separating_gluing(narrow, 0, 2, 0, 2, {{1, 1, -1, -1}});
  CHECK(small.verdict == Verdict::WindowTooSmall);
  CHECK(has_detail(small, "outside the window"));
}

TEST_CASE("loop axiom") {
  auto trivial = CohFTSpec::constant_spec();
  CHECK(check_loop_axiom(trivial, 1, 2, {{0, 0}}).passed());
  CHECK(check_loop_axiom(trivial, 1, 1, {{0}}).passed());

  auto dr = CohFTSpec::dr_spec(2, 1, 4);
  auto r = check_loop_axiom(dr, 1, 2, {{1, -1}});
  CHECK(r.verdict == Verdict::Fail);
  CHECK(has_detail(r, "InfiniteSum"));
  CHECK(std::any_of(r.witnesses.begin(), r.witnesses.end(), [](const Witness& w) { return !w.difference.empty(); }));
  // non-zero label sum: every summand vanishes on both sides
  CHECK(check_loop_axiom(dr, 1, 2, {{1, 0}}).passed());

  // Omega_{0,3} chosen as the loop pullback of Omega_{1,1}
  auto spec = CohFTSpec::table_spec({0}, {{{0, 0}, 1}}, std::nullopt, 1, 3);
  auto m11 = build_moduli(1, 1, true);
  PPClass x = length_class(m11, 1) * length_class(m11, 1) + boundary_class(m11, StableGraph({0}, {{0, 0}}, {0}));
  spec.table.emplace(std::make_tuple(1, 1, Labels{0}), x);
  spec.table.emplace(std::make_tuple(0, 3, Labels{0, 0, 0}), pullback(loop_gluing_morphism(1, 1), x));
  CHECK(check_loop_axiom(spec, 1, 1, {{0}}).passed());
  spec.table.erase(std::make_tuple(0, 3, Labels{0, 0, 0}));
  CHECK(check_loop_axiom(spec, 1, 1, {{0}}).verdict == Verdict::Fail);
  CHECK_THROWS_WITH_AS(check_loop_axiom(spec, 0, 3, {{0, 0, 0}}), doctest::Contains("SignatureMismatch"), Error);
}

TEST_CASE("unit axioms") {
  CHECK(check_unit_axioms(CohFTSpec::constant_spec()).passed());

  auto dr0 = CohFTSpec::dr_spec(1, 0, 4);
  CHECK(check_unit_axioms(dr0).passed());
  // forgetting a zero-weight leg does not commute with the leg-length terms in genus 1
  auto dr1 = CohFTSpec::dr_spec(1, 1, 3);
  auto r = check_unit_axioms(dr1);
  CHECK(r.verdict == Verdict::Fail);
  for (const auto& w : r.witnesses) CHECK(w.stratum.find("normalisation") == std::string::npos);

  auto wrong = CohFTSpec::table_spec({0}, {{{0, 0}, 1}}, 0, 0, 3);
  wrong.table.emplace(std::make_tuple(0, 3, Labels{0, 0, 0}), PPClass::constant(build_moduli(0, 3, true), 3));
  auto f = check_unit_axioms(wrong);
  CHECK(f.verdict == Verdict::Fail);
  CHECK(f.witnesses[0].stratum.find("normalisation") != std::string::npos);

  auto none = CohFTSpec::table_spec({0}, {{{0, 0}, 1}}, std::nullopt, 0, 3);
  CHECK_THROWS_WITH_AS(check_unit_axioms(none), doctest::Contains("NoUnitDeclared"), Error);
}

TEST_CASE("table pairing inverse") {
  auto spec = CohFTSpec::table_spec({0, 1}, {{{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 2}}, 0, 0, 3);
  spec.validate();
  CHECK(spec.inverse_pairing(0, 0) == -2);
  CHECK(spec.inverse_pairing(0, 1) == 1);
  CHECK(spec.inverse_pairing(1, 1) == 0);
  CHECK_THROWS_WITH_AS(CohFTSpec::table_spec({0, 1}, {{{0, 0}, 1}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 1}}, 0, 0, 3),
                       doctest::Contains("BadPairing"), Error);
}

TEST_CASE("minimality") {
  auto m03 = build_moduli(0, 3, true);
  for (int i = 1; i <= 3; ++i) {
    CHECK(check_minimality(length_class(m03, i)).passed());
    for (int j = i; j <= 3; ++j) CHECK(check_minimality(length_class(m03, i) * length_class(m03, j)).passed());
  }
  CHECK(check_minimality(PPClass::constant(m03, 5)).passed());

  auto m04 = build_moduli(0, 4, true);
  CHECK(check_minimality(PPClass::constant(m04, 0)).passed());
  auto r = check_minimality(boundary_class(m04, split({0, 0, 1, 1})));
  CHECK(r.verdict == Verdict::Fail);
  CHECK(has_detail(r, "1:l_3 + 2:l_3"));

  auto m12 = build_moduli(1, 2, true);
  CHECK(check_minimality(PPClass::constant(m12, 0)).passed());
  CHECK(check_minimality(PPClass::constant(m12, 1)).verdict == Verdict::Fail);
}
