#include <random>
#include <set>

#include "doctest.h"
#include "logtrop/error.hpp"
#include "logtrop/fan.hpp"

using namespace logtrop;

namespace {

Cone cone(std::size_t rank, std::vector<IntVector> rays) { return Cone::from_generators(rank, std::move(rays)); }

// Face-ring count: degree-k monomials in the ray variables whose support is a cone.
std::size_t face_ring_count(const ConeComplex& fan, unsigned k) {
  if (k == 0) return 1;
  auto binom = [](long n, long r) {
    if (r < 0 || r > n) return 0L;
    long b = 1;
    for (long i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
  };
  std::size_t total = 0;
  for (const auto& f : fan.all_cones()) {
    const long m = static_cast<long>(f.rays().size());
    if (m > 0) total += static_cast<std::size_t>(binom(k - 1, m - 1));
  }
  return total;
}

ConeComplex projective_plane() {
  return ConeComplex(2, {cone(2, {int_vector({1, 0}), int_vector({0, 1})}),
                         cone(2, {int_vector({0, 1}), int_vector({-1, -1})}),
                         cone(2, {int_vector({-1, -1}), int_vector({1, 0})})});
}

ConeComplex line() { return ConeComplex(1, {cone(1, {int_vector({1})}), cone(1, {int_vector({-1})})}); }

bool is_zero_vector(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

}  // namespace

TEST_CASE("piecewise polynomial dimensions") {
  auto orthant = cone_fan(Cone::orthant(3));
  CHECK(pp_dimensions(orthant, 3) == std::vector<std::size_t>{1, 3, 6, 10});
  CHECK(pp_dimensions(line(), 2) == std::vector<std::size_t>{1, 2, 2});

  ConeComplex square(3, {cone(3, {int_vector({1, 0, 1}), int_vector({0, 1, 1}), int_vector({-1, 0, 1}),
                                  int_vector({0, -1, 1})})});
  CHECK_THROWS_WITH_AS(pp_dimensions(square, 1), doctest::Contains("NotSimplicial"), Error);

  // iterated star subdivisions: degree 1 grows strictly
  ConeComplex fan = orthant;
  std::size_t last = pp_dimensions(fan, 1)[1];
  for (auto r : {int_vector({1, 1, 1}), int_vector({1, 1, 0}), int_vector({2, 1, 1}), int_vector({0, 1, 1})}) {
    fan = star_subdivide(fan, r);
    std::size_t now = pp_dimensions(fan, 1)[1];
    CHECK(now > last);
    last = now;
  }
}

TEST_CASE("dimensions agree with the face-ring count") {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> coord(0, 3);
  for (int trial = 0; trial < 8; ++trial) {
    ConeComplex fan = trial % 2 ? cone_fan(Cone::orthant(3)) : projective_plane();
    const std::size_t d = fan.rank();
    for (int s = 0; s < 3; ++s) {
      IntVector r(d);
      for (auto& x : r) x = coord(rng);
      if (d == 2 && trial % 4 == 0) r[0] = -r[0];
      if (is_zero(r) || !fan.contains_point(r)) continue;
      fan = star_subdivide(fan, r);
    }
    auto dims = pp_dimensions(fan, 3);
    for (unsigned k = 0; k <= 3; ++k) CHECK(dims[k] == face_ring_count(fan, k));
    CHECK(dims[1] == fan.rays().size());
  }
}

TEST_CASE("chow ring of the line") {
  auto c = chow_ring(line());
  CHECK(c.dimensions == std::vector<std::size_t>{1, 1});
  CHECK(c.dimension_above_rank == 0);
  auto h2 = c.products.at({1, 0, 1, 0});
  CHECK(h2.empty());
  CHECK(c.products.at({0, 0, 1, 0}) == RatVector{1});
}

TEST_CASE("chow rings of complete smooth surfaces") {
  ConeComplex fan = projective_plane();
  auto p2 = chow_ring(fan);
  CHECK(p2.dimensions == std::vector<std::size_t>{1, 1, 1});
  CHECK_FALSE(is_zero_vector(p2.products.at({1, 0, 1, 0})));
  CHECK(p2.products.at({2, 0, 1, 0}).empty());
  std::size_t rays = 3;
  for (auto r : {int_vector({1, 1}), int_vector({-1, 0}), int_vector({0, -1})}) {
    fan = star_subdivide(fan, r);
    ++rays;
    auto c = chow_ring(fan);
    CHECK(c.dimensions[0] == 1);
    CHECK(c.dimensions[1] == rays - 2);
    CHECK(c.dimensions[2] == 1);
    // commutativity of the stored table
    for (std::size_t a = 0; a < c.dimensions[1]; ++a)
      for (std::size_t b = 0; b < c.dimensions[1]; ++b)
        CHECK(c.products.at({1, a, 1, b}) == c.products.at({1, b, 1, a}));
  }
  CHECK_THROWS_WITH_AS(chow_ring(cone_fan(Cone::orthant(2))), doctest::Contains("NotComplete"), Error);
  ConeComplex bad(2, {cone(2, {int_vector({1, 0}), int_vector({1, 2})})});
  CHECK_THROWS_WITH_AS(chow_ring(bad), doctest::Contains("NotSmooth"), Error);
}

TEST_CASE("log Chow probe") {
  auto zero = logch_probe(Cone::orthant(3), {}, 3);
  REQUIRE(zero.steps.size() == 1);
  CHECK(zero.steps[0].dimensions == std::vector<std::size_t>{1, 3, 6, 10});

  auto one = logch_probe(Cone::orthant(3), {int_vector({1, 1, 1})}, 2);
  CHECK(one.steps[1].dimensions[1] == 4);

  auto four = logch_probe(Cone::orthant(3),
                          {int_vector({1, 1, 1}), int_vector({1, 1, 0}), int_vector({1, 0, 1}), int_vector({0, 1, 1})}, 2);
  REQUIRE(four.steps.size() == 5);
  for (std::size_t s = 0; s < 5; ++s) {
    CHECK(four.steps[s].dimensions[0] == 1);
    CHECK(four.steps[s].dimensions[1] == 3 + s);
    for (bool inj : four.steps[s].injective) CHECK(inj);
  }
  CHECK(four.note.find("does not prove") != std::string::npos);

  CHECK_THROWS_WITH_AS(logch_probe(Cone::orthant(3), {int_vector({-1, 1, 1})}, 1),
                       doctest::Contains("NotARefinementChain"), Error);
  auto fine = star_subdivide(cone_fan(Cone::orthant(2)), int_vector({1, 1}));
  CHECK_THROWS_WITH_AS(logch_probe({fine, cone_fan(Cone::orthant(2))}, 1), doctest::Contains("NotARefinementChain"),
                       Error);
}
