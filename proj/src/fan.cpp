#include "logtrop/fan.hpp"

#include <algorithm>
#include <functional>

#include "logtrop/error.hpp"
#include "logtrop/linalg.hpp"

namespace logtrop {

namespace {

std::vector<Monomial> monomials_of_degree(std::size_t vars, unsigned degree) {
  std::vector<Monomial> out;
  std::vector<std::pair<std::size_t, unsigned>> powers;
  std::function<void(std::size_t, unsigned)> walk = [&](std::size_t v, unsigned left) {
    if (v + 1 >= vars) {
      if (vars == 0) {
        if (left == 0) out.emplace_back();
        return;
      }
      auto p = powers;
      p.emplace_back(v, left);
      out.emplace_back(std::move(p));
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      powers.emplace_back(v, e);
      walk(v + 1, left - e);
      powers.pop_back();
    }
  };
  walk(0, degree);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t index_of(const std::vector<Monomial>& list, const Monomial& m) {
  return static_cast<std::size_t>(std::lower_bound(list.begin(), list.end(), m) - list.begin());
}

// x_j on a cone, in its ray coordinates.
Polynomial coordinate_function(const Cone& c, std::size_t j) {
  Polynomial p;
  for (std::size_t i = 0; i < c.rays().size(); ++i)
    p += Polynomial::term(Rational(c.rays()[i][j]), Monomial::variable(i));
  return p;
}

std::vector<Polynomial> multiply(const std::vector<Polynomial>& a, const std::vector<Polynomial>& b) {
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] * b[i]);
  return out;
}

bool is_complete(const ConeComplex& fan) {
  const std::size_t d = fan.rank();
  std::map<Cone, int> walls;
  for (const auto& m : fan.maximal()) {
    if (m.dimension() != d) return false;
    for (auto& f : m.facet_cones()) ++walls[f];
  }
  return std::all_of(walls.begin(), walls.end(), [](const auto& w) { return w.second == 2; });
}

// Substitution expressing the ray coordinates of `coarse` through those of `fine` (fine inside coarse).
RatMatrix ray_change(const Cone& coarse, const Cone& fine) {
  const std::size_t m = coarse.rays().size();
  RatMatrix cols = transpose(to_rational(coarse.rays()));
  RatMatrix out(m, RatVector(fine.rays().size(), 0));
  for (std::size_t k = 0; k < fine.rays().size(); ++k) {
    auto c = solve(cols, to_rational(fine.rays()[k]), m);
    if (!c) throw Error("NotARefinementChain", "a refined ray leaves its cone");
    for (std::size_t i = 0; i < m; ++i) out[i][k] = (*c)[i];
  }
  return out;
}

}  // namespace

std::vector<Polynomial> PPSpace::to_pieces(const RatVector& v) const {
  std::vector<Polynomial> out;
  for (std::size_t c = 0; c < monomials.size(); ++c) {
    Polynomial p;
    for (std::size_t k = 0; k < monomials[c].size(); ++k) p += Polynomial::term(v[offsets[c] + k], monomials[c][k]);
    out.push_back(std::move(p));
  }
  return out;
}

RatVector PPSpace::from_pieces(const std::vector<Polynomial>& pieces) const {
  RatVector v(unknowns, 0);
  for (std::size_t c = 0; c < monomials.size(); ++c)
    for (const auto& [m, coef] : pieces.at(c).terms()) {
      if (m.degree() != degree) throw Error("DegreeError", "piece is not homogeneous of the space's degree");
      v[offsets[c] + index_of(monomials[c], m)] = coef;
    }
  return v;
}

PPSpace pp_space(const ConeComplex& fan, unsigned degree) {
  if (!fan.is_simplicial()) throw Error("NotSimplicial", "piecewise polynomials need a simplicial fan");
  PPSpace s{fan, degree, {}, {}, 0, {}};
  const auto& cones = fan.maximal();
  for (const auto& c : cones) {
    s.offsets.push_back(s.unknowns);
    s.monomials.push_back(monomials_of_degree(c.rays().size(), degree));
    s.unknowns += s.monomials.back().size();
  }
  RatMatrix constraints;
  for (std::size_t a = 0; a < cones.size(); ++a)
    for (std::size_t b = a + 1; b < cones.size(); ++b) {
      const auto& ra = cones[a].rays();
      const auto& rb = cones[b].rays();
      std::vector<int> to_b(ra.size(), -1);
      std::vector<IntVector> common;
      for (std::size_t i = 0; i < ra.size(); ++i) {
        auto it = std::find(rb.begin(), rb.end(), ra[i]);
        if (it == rb.end()) continue;
        to_b[i] = static_cast<int>(it - rb.begin());
        common.push_back(ra[i]);
      }
      if (!(cones[a].intersect(cones[b]) == Cone::from_generators(fan.rank(), common)))
        throw Error("NotAFan", "two cones meet outside a common face");
      for (std::size_t k = 0; k < s.monomials[a].size(); ++k) {
        const Monomial& m = s.monomials[a][k];
        std::vector<std::pair<std::size_t, unsigned>> moved;
        bool inside = true;
        for (auto [v, e] : m.powers()) {
          if (to_b[v] < 0) {
            inside = false;
            break;
          }
          moved.emplace_back(static_cast<std::size_t>(to_b[v]), e);
        }
        if (!inside) continue;
        RatVector row(s.unknowns, 0);
        row[s.offsets[a] + k] = 1;
        row[s.offsets[b] + index_of(s.monomials[b], Monomial(moved))] -= 1;
        constraints.push_back(std::move(row));
      }
    }
  s.basis = nullspace(constraints, s.unknowns);
  return s;
}

std::vector<std::size_t> pp_dimensions(const ConeComplex& fan, unsigned max_degree) {
  std::vector<std::size_t> dims;
  for (unsigned k = 0; k <= max_degree; ++k) dims.push_back(pp_space(fan, k).dimension());
  return dims;
}

FanChowPresentation chow_ring(const ConeComplex& fan) {
  const std::size_t d = fan.rank();
  if (d > 4 || fan.rays().size() > 64) throw Error("ResourceBound", "supported up to rank 4 and 64 rays");
  if (!fan.is_smooth()) throw Error("NotSmooth", "every cone must be smooth");
  if (!is_complete(fan)) throw Error("NotComplete", "the fan does not cover the whole space");
  FanChowPresentation out;
  out.rank = d;
  const auto& cones = fan.maximal();
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Polynomial> x;
    for (const auto& c : cones) x.push_back(coordinate_function(c, j));
    out.ideal_generators.push_back(std::move(x));
  }
  std::vector<PPSpace> spaces;
  std::vector<RatMatrix> ideal;   // per degree, spanning vectors
  std::vector<RatMatrix> chosen;  // per degree, basis vectors of the quotient
  for (unsigned k = 0; k <= d + 1; ++k) {
    spaces.push_back(pp_space(fan, k));
    const PPSpace& s = spaces.back();
    RatMatrix gens;
    if (k > 0)
      for (const auto& b : spaces[k - 1].basis) {
        auto pieces = spaces[k - 1].to_pieces(b);
        for (const auto& x : out.ideal_generators) gens.push_back(s.from_pieces(multiply(pieces, x)));
      }
    RatMatrix span = gens;
    std::size_t r = rank(span);
    RatMatrix basis;
    for (const auto& v : s.basis) {
      span.push_back(v);
      std::size_t next = rank(span);
      if (next > r) {
        basis.push_back(v);
        r = next;
      } else {
        span.pop_back();
      }
    }
    if (k <= d)
      out.dimensions.push_back(basis.size());
    else
      out.dimension_above_rank = basis.size();
    std::vector<std::vector<Polynomial>> elements;
    for (const auto& v : basis) elements.push_back(s.to_pieces(v));
    out.basis.push_back(std::move(elements));
    ideal.push_back(std::move(gens));
    chosen.push_back(std::move(basis));
  }
  for (unsigned i = 0; i <= d; ++i)
    for (unsigned j = i; j <= d && i + j <= d + 1; ++j) {
      const unsigned k = i + j;
      RatMatrix cols = chosen[k];
      cols.insert(cols.end(), ideal[k].begin(), ideal[k].end());
      RatMatrix a = cols.empty() ? RatMatrix(spaces[k].unknowns) : transpose(cols);
      for (std::size_t x = 0; x < out.basis[i].size(); ++x)
        for (std::size_t y = 0; y < out.basis[j].size(); ++y) {
          RatVector v = spaces[k].from_pieces(multiply(out.basis[i][x], out.basis[j][y]));
          auto sol = solve(a, v, cols.size());
          if (!sol) throw Error("NotComplete", "product leaves the piecewise-polynomial space");
          RatVector coords(sol->begin(), sol->begin() + static_cast<long>(chosen[k].size()));
          out.products[{i, x, j, y}] = coords;
          out.products[{j, y, i, x}] = coords;
        }
    }
  return out;
}

ConeComplex cone_fan(const Cone& c) { return ConeComplex(c.rank(), {c}); }

ProbeResult logch_probe(const std::vector<ConeComplex>& chain, unsigned max_degree) {
  ProbeResult out;
  out.note =
      "dimensions along one chain of refinements; growth here witnesses, but does not prove, infinite dimension of the "
      "colimit";
  std::vector<std::vector<PPSpace>> spaces;
  for (std::size_t step = 0; step < chain.size(); ++step) {
    const ConeComplex& fan = chain[step];
    if (step > 0 && !is_subdivision(chain[step - 1], fan))
      throw Error("NotARefinementChain", "step " + std::to_string(step) + " does not subdivide the previous fan");
    ProbeStep ps{fan, {}, {}};
    std::vector<PPSpace> here;
    for (unsigned k = 0; k <= max_degree; ++k) {
      here.push_back(pp_space(fan, k));
      ps.dimensions.push_back(here.back().dimension());
    }
    if (step > 0) {
      const ConeComplex& coarse = chain[step - 1];
      std::vector<std::pair<std::size_t, RatMatrix>> subst;  // per fine cone: coarse cone, substitution
      for (const auto& fine : fan.maximal()) {
        std::size_t found = coarse.maximal().size();
        for (std::size_t c = 0; c < coarse.maximal().size() && found == coarse.maximal().size(); ++c)
          if (coarse.maximal()[c].contains(fine)) found = c;
        if (found == coarse.maximal().size())
          throw Error("NotARefinementChain", "a refined cone lies in no cone of the previous fan");
        subst.emplace_back(found, ray_change(coarse.maximal()[found], fine));
      }
      for (unsigned k = 0; k <= max_degree; ++k) {
        const PPSpace& from = spaces.back()[k];
        RatMatrix image;
        for (const auto& b : from.basis) {
          auto pieces = from.to_pieces(b);
          std::vector<Polynomial> pulled;
          for (const auto& [c, m] : subst) pulled.push_back(pieces[c].linear_substitute(m));
          image.push_back(here[k].from_pieces(pulled));
        }
        ps.injective.push_back(rank(image) == from.dimension());
      }
    }
    spaces.push_back(std::move(here));
    out.steps.push_back(std::move(ps));
  }
  return out;
}

ProbeResult logch_probe(const Cone& cone, const std::vector<IntVector>& rays, unsigned max_degree) {
  if (!is_smooth(cone)) throw Error("NotSmooth", "the probe starts from a smooth cone");
  std::vector<ConeComplex> chain{cone_fan(cone)};
  for (const auto& r : rays) {
    try {
      chain.push_back(star_subdivide(chain.back(), r));
    } catch (const Error& e) {
      throw Error("NotARefinementChain", e.detail());
    }
  }
  return logch_probe(chain, max_degree);
}

}  // namespace logtrop
