#include "logtrop/cones.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "logtrop/error.hpp"
#include "logtrop/linalg.hpp"

namespace logtrop {

namespace {

std::vector<IntVector> normalize_generators(std::vector<IntVector> gens) {
  std::vector<IntVector> out;
  for (auto& g : gens) {
    if (is_zero(g)) continue;
    out.push_back(make_primitive(std::move(g)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IntMatrix select_rows(const IntMatrix& rows, const std::vector<std::size_t>& idx) {
  IntMatrix out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(rows[i]);
  return out;
}

IntMatrix identity_rows(std::size_t d) {
  IntMatrix out(d, IntVector(d, Integer(0)));
  for (std::size_t i = 0; i < d; ++i) out[i][i] = 1;
  return out;
}

}  // namespace

std::vector<IntVector> extreme_rays_of_pointed(const IntMatrix& rows, std::size_t dim) {
  if (dim == 0) return {};
  auto basis = independent_rows(rows);
  if (basis.size() < dim) throw Error("NotStronglyConvex", "inequality system has a lineality space");

  struct Ray {
    IntVector v;
    std::vector<std::size_t> zeros;  // processed rows vanishing on v, sorted
  };
  RatMatrix b = to_rational(select_rows(rows, basis));
  std::vector<Ray> rays;
  for (std::size_t j = 0; j < dim; ++j) {
    RatVector e(dim, Rational(0));
    e[j] = 1;
    auto x = solve(b, e, dim);
    Ray r{integerize(*x), {}};
    for (std::size_t k = 0; k < dim; ++k)
      if (k != j) r.zeros.push_back(basis[k]);
    std::sort(r.zeros.begin(), r.zeros.end());
    rays.push_back(std::move(r));
  }

  std::vector<bool> in_basis(rows.size(), false);
  for (auto i : basis) in_basis[i] = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (in_basis[i]) continue;
    const auto& a = rows[i];
    std::vector<Integer> val(rays.size());
    for (std::size_t k = 0; k < rays.size(); ++k) val[k] = dot(a, rays[k].v);
    std::vector<Ray> next;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      if (val[k] > 0) next.push_back(rays[k]);
      if (val[k] == 0) {
        Ray r = rays[k];
        r.zeros.insert(std::upper_bound(r.zeros.begin(), r.zeros.end(), i), i);
        next.push_back(std::move(r));
      }
    }
    for (std::size_t p = 0; p < rays.size(); ++p) {
      if (val[p] <= 0) continue;
      for (std::size_t q = 0; q < rays.size(); ++q) {
        if (val[q] >= 0) continue;
        std::vector<std::size_t> common;
        std::set_intersection(rays[p].zeros.begin(), rays[p].zeros.end(), rays[q].zeros.begin(),
                              rays[q].zeros.end(), std::back_inserter(common));
        if (common.size() + 2 < dim) continue;
        if (rank(select_rows(rows, common)) != dim - 2) continue;
        IntVector v(dim);
        for (std::size_t t = 0; t < dim; ++t) v[t] = val[p] * rays[q].v[t] - val[q] * rays[p].v[t];
        common.insert(std::upper_bound(common.begin(), common.end(), i), i);
        next.push_back({make_primitive(std::move(v)), std::move(common)});
      }
    }
    rays = std::move(next);
    if (rays.empty()) break;
  }
  std::vector<IntVector> out;
  for (auto& r : rays) out.push_back(std::move(r.v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Cone::Cone(std::size_t rank) : rank_(rank), dimension_(0), equations_(identity_rows(rank)) {}

Cone Cone::orthant(std::size_t rank) {
  Cone c(rank);
  c.dimension_ = rank;
  c.equations_.clear();
  c.rays_ = identity_rows(rank);
  std::sort(c.rays_.begin(), c.rays_.end());
  c.facets_ = c.rays_;
  return c;
}

Cone Cone::from_generators(std::size_t rank, std::vector<IntVector> generators) {
  for (const auto& g : generators)
    if (g.size() != rank) throw Error("DimensionMismatch", "generator length differs from the lattice rank");
  auto gens = normalize_generators(std::move(generators));
  Cone c(rank);
  if (gens.empty()) return c;

  auto basis_idx = independent_rows(gens);
  IntMatrix basis = select_rows(gens, basis_idx);
  const std::size_t k = basis.size();
  c.dimension_ = k;
  c.equations_ = integer_nullspace(basis, rank);
  std::sort(c.equations_.begin(), c.equations_.end());

  RatMatrix bt = transpose(to_rational(basis));
  IntMatrix coords;
  for (const auto& g : gens) coords.push_back(integerize(*solve(bt, to_rational(g), k)));
  auto dual = extreme_rays_of_pointed(coords, k);
  if (dual.empty()) throw Error("NotStronglyConvex", "generators span a cone containing a line");

  RatMatrix b = to_rational(basis);
  RatMatrix gram(k, RatVector(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gram[i][j] = dot(b[i], b[j]);
  for (const auto& y : dual) {
    auto z = *solve(gram, to_rational(y), k);
    RatVector a(rank, Rational(0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t t = 0; t < rank; ++t) a[t] += z[i] * b[i][t];
    c.facets_.push_back(integerize(a));
  }
  std::sort(c.facets_.begin(), c.facets_.end());

  IntVector sum(rank, Integer(0));
  for (const auto& f : c.facets_)
    for (std::size_t t = 0; t < rank; ++t) sum[t] += f[t];
  for (const auto& g : gens)
    if (dot(sum, g) <= 0) throw Error("NotStronglyConvex", "generators span a cone containing a line");

  for (const auto& g : gens) {
    IntMatrix tight;
    for (const auto& f : c.facets_)
      if (dot(f, g) == 0) tight.push_back(f);
    if (logtrop::rank(tight) + 1 == k) c.rays_.push_back(g);
  }
  return c;
}

Cone Cone::from_inequalities(std::size_t rank, const IntMatrix& inequalities, const IntMatrix& equations) {
  IntMatrix kernel = equations.empty() ? identity_rows(rank) : integer_nullspace(equations, rank);
  const std::size_t k = kernel.size();
  if (k == 0) return Cone(rank);
  IntMatrix rows;
  rows.reserve(inequalities.size());
  for (const auto& a : inequalities) {
    IntVector r(k);
    for (std::size_t j = 0; j < k; ++j) r[j] = dot(a, kernel[j]);
    rows.push_back(make_primitive(std::move(r)));
  }
  auto ys = extreme_rays_of_pointed(rows, k);
  std::vector<IntVector> gens;
  for (const auto& y : ys) {
    IntVector x(rank, Integer(0));
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t t = 0; t < rank; ++t) x[t] += y[j] * kernel[j][t];
    gens.push_back(std::move(x));
  }
  return from_generators(rank, std::move(gens));
}

bool Cone::contains(const IntVector& x) const {
  for (const auto& e : equations_)
    if (dot(e, x) != 0) return false;
  for (const auto& f : facets_)
    if (dot(f, x) < 0) return false;
  return true;
}

bool Cone::contains(const RatVector& x) const {
  for (const auto& e : equations_)
    if (dot(to_rational(e), x) != 0) return false;
  for (const auto& f : facets_)
    if (dot(to_rational(f), x) < 0) return false;
  return true;
}

bool Cone::contains(const Cone& other) const {
  return std::all_of(other.rays_.begin(), other.rays_.end(), [&](const IntVector& r) { return contains(r); });
}

bool Cone::has_ray(const IntVector& r) const {
  return std::binary_search(rays_.begin(), rays_.end(), make_primitive(r));
}

Cone Cone::intersect(const Cone& other) const {
  if (rank_ != other.rank_) throw Error("DimensionMismatch", "cones live in different lattices");
  IntMatrix ineqs = facets_;
  ineqs.insert(ineqs.end(), other.facets_.begin(), other.facets_.end());
  IntMatrix eqs = equations_;
  eqs.insert(eqs.end(), other.equations_.begin(), other.equations_.end());
  return from_inequalities(rank_, ineqs, eqs);
}

std::vector<Cone> Cone::facet_cones() const {
  std::vector<Cone> out;
  for (const auto& f : facets_) {
    std::vector<IntVector> tight;
    for (const auto& r : rays_)
      if (dot(f, r) == 0) tight.push_back(r);
    out.push_back(from_generators(rank_, std::move(tight)));
  }
  return out;
}

std::vector<Cone> Cone::faces() const {
  std::set<Cone> seen = {*this};
  std::vector<Cone> frontier = {*this};
  while (!frontier.empty()) {
    std::vector<Cone> next;
    for (const auto& c : frontier)
      for (auto& f : c.facet_cones())
        if (seen.insert(f).second) next.push_back(std::move(f));
    frontier = std::move(next);
  }
  if (dimension_ > 0) seen.insert(Cone(rank_));
  return {seen.begin(), seen.end()};
}

Cone Cone::minimal_face(const IntVector& x) const {
  std::vector<IntVector> gens;
  for (const auto& r : rays_) {
    bool ok = true;
    for (const auto& f : facets_)
      if (dot(f, x) == 0 && dot(f, r) != 0) ok = false;
    if (ok) gens.push_back(r);
  }
  return from_generators(rank_, std::move(gens));
}

IntVector Cone::interior_point() const {
  IntVector s(rank_, Integer(0));
  for (const auto& r : rays_)
    for (std::size_t t = 0; t < rank_; ++t) s[t] += r[t];
  return s;
}

LinearSystem eliminate_variables(LinearSystem sys, std::size_t num_vars, std::size_t keep) {
  auto normalize = [](IntMatrix rows) {
    IntMatrix out;
    for (auto& r : rows) {
      if (is_zero(r)) continue;
      out.push_back(make_primitive(std::move(r)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  for (std::size_t var = num_vars; var-- > keep;) {
    auto eq_it = std::find_if(sys.equations.begin(), sys.equations.end(),
                              [&](const IntVector& e) { return e[var] != 0; });
    if (eq_it != sys.equations.end()) {
      IntVector pivot = *eq_it;
      if (pivot[var] < 0)
        for (auto& x : pivot) x = -x;
      sys.equations.erase(eq_it);
      auto reduce = [&](IntVector& r) {
        if (r[var] == 0) return;
        Integer d = r[var];
        for (std::size_t t = 0; t < r.size(); ++t) r[t] = pivot[var] * r[t] - d * pivot[t];
      };
      for (auto& r : sys.equations) reduce(r);
      for (auto& r : sys.inequalities) reduce(r);
    } else {
      IntMatrix pos, neg, rest;
      for (auto& r : sys.inequalities) {
        if (r[var] > 0)
          pos.push_back(r);
        else if (r[var] < 0)
          neg.push_back(r);
        else
          rest.push_back(r);
      }
      for (const auto& p : pos)
        for (const auto& n : neg) {
          IntVector r(p.size());
          for (std::size_t t = 0; t < p.size(); ++t) r[t] = p[var] * n[t] - n[var] * p[t];
          rest.push_back(std::move(r));
        }
      sys.inequalities = std::move(rest);
    }
    sys.equations = normalize(std::move(sys.equations));
    sys.inequalities = normalize(std::move(sys.inequalities));
  }
  for (auto* m : {&sys.equations, &sys.inequalities})
    for (auto& r : *m) r.resize(keep);
  sys.equations = normalize(std::move(sys.equations));
  sys.inequalities = normalize(std::move(sys.inequalities));
  return sys;
}

bool is_smooth(const Cone& c) {
  if (!c.is_simplicial()) return false;
  if (c.rays().empty()) return true;
  auto inv = smith_invariants(c.rays());
  if (inv.size() != c.rays().size()) return false;
  return std::all_of(inv.begin(), inv.end(), [](const Integer& x) { return x == 1; });
}

bool is_smooth(const std::vector<IntVector>& generators) {
  auto gens = normalize_generators(generators);
  if (gens.empty()) return true;
  if (rank(gens) != gens.size()) return false;
  auto inv = smith_invariants(gens);
  return inv.size() == gens.size() &&
         std::all_of(inv.begin(), inv.end(), [](const Integer& x) { return x == 1; });
}

std::vector<std::vector<IntVector>> triangulate(const Cone& c) {
  if (c.is_simplicial()) return {c.rays()};
  const IntVector& apex = c.rays().front();
  std::vector<std::vector<IntVector>> out;
  for (std::size_t i = 0; i < c.facets().size(); ++i) {
    if (dot(c.facets()[i], apex) == 0) continue;
    for (auto simplex : triangulate(c.facet_cones()[i])) {
      simplex.push_back(apex);
      out.push_back(std::move(simplex));
    }
  }
  return out;
}

namespace {

bool is_face_of(const Cone& face, const Cone& c) {
  if (!c.contains(face)) return false;
  return c.minimal_face(face.interior_point()) == face;
}

// Slice volume of a simplicial cone with the given rays, measured in the span
// of `ambient` against the slice functional sum(facets(ambient)) = 1.
Rational slice_volume(const std::vector<IntVector>& simplex, const Cone& ambient) {
  const std::size_t k = ambient.dimension();
  if (k == 0) return 1;
  auto basis_idx = independent_rows(ambient.rays());
  IntMatrix basis;
  for (auto i : basis_idx) basis.push_back(ambient.rays()[i]);
  RatMatrix bt = transpose(to_rational(basis));
  IntVector slice(ambient.rank(), Integer(0));
  for (const auto& f : ambient.facets())
    for (std::size_t t = 0; t < slice.size(); ++t) slice[t] += f[t];
  RatMatrix coords;
  Rational denom = 1;
  for (const auto& r : simplex) {
    coords.push_back(*solve(bt, to_rational(r), k));
    denom *= dot(slice, r);
  }
  Rational det = determinant(coords);
  if (det < 0) det = -det;
  return det / denom;
}

Rational cone_volume(const Cone& c, const Cone& ambient) {
  Rational v = 0;
  for (const auto& s : triangulate(c)) v += slice_volume(s, ambient);
  return v;
}

std::vector<Cone> drop_faces(std::vector<Cone> cones) {
  std::sort(cones.begin(), cones.end());
  cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
  std::vector<Cone> out;
  for (std::size_t i = 0; i < cones.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < cones.size() && !redundant; ++j)
      if (i != j && cones[j].dimension() > cones[i].dimension() && is_face_of(cones[i], cones[j]))
        redundant = true;
    if (!redundant) out.push_back(cones[i]);
  }
  return out;
}

}  // namespace

ConeComplex::ConeComplex(std::size_t rank, std::vector<Cone> maximal) : rank_(rank) {
  for (const auto& c : maximal)
    if (c.rank() != rank) throw Error("DimensionMismatch", "cone rank differs from the complex rank");
  maximal_ = drop_faces(std::move(maximal));
}

std::vector<Cone> ConeComplex::all_cones() const {
  std::set<Cone> all;
  for (const auto& m : maximal_)
    for (auto& f : m.faces()) all.insert(std::move(f));
  return {all.begin(), all.end()};
}

std::vector<IntVector> ConeComplex::rays() const {
  std::set<IntVector> rs;
  for (const auto& m : maximal_) rs.insert(m.rays().begin(), m.rays().end());
  return {rs.begin(), rs.end()};
}

bool ConeComplex::contains_point(const IntVector& x) const {
  return std::any_of(maximal_.begin(), maximal_.end(), [&](const Cone& c) { return c.contains(x); });
}

bool ConeComplex::has_cone(const Cone& c) const {
  return std::any_of(maximal_.begin(), maximal_.end(), [&](const Cone& m) { return is_face_of(c, m); });
}

ConeComplex ConeComplex::restrict_to(const ConeComplex& region) const {
  std::vector<Cone> kept;
  for (const auto& c : all_cones()) {
    bool inside = std::any_of(region.maximal().begin(), region.maximal().end(),
                              [&](const Cone& m) { return m.contains(c); });
    if (inside) kept.push_back(c);
  }
  return ConeComplex(rank_, std::move(kept));
}

bool ConeComplex::is_simplicial() const {
  return std::all_of(maximal_.begin(), maximal_.end(), [](const Cone& c) { return c.is_simplicial(); });
}

bool ConeComplex::is_smooth() const {
  return std::all_of(maximal_.begin(), maximal_.end(), [](const Cone& c) { return logtrop::is_smooth(c); });
}

bool refines(const ConeComplex& fine, const ConeComplex& coarse) {
  for (const auto& c : fine.maximal()) {
    bool ok = std::any_of(coarse.maximal().begin(), coarse.maximal().end(),
                          [&](const Cone& m) { return m.contains(c); });
    if (!ok) return false;
  }
  return true;
}

bool is_subdivision(const ConeComplex& target, const ConeComplex& refined) {
  if (target.rank() != refined.rank()) return false;
  if (!refines(refined, target)) return false;
  for (const auto& t : target.maximal()) {
    std::vector<const Cone*> pieces;
    for (const auto& p : refined.maximal())
      if (p.dimension() == t.dimension() && t.contains(p)) pieces.push_back(&p);
    for (std::size_t i = 0; i < pieces.size(); ++i)
      for (std::size_t j = i + 1; j < pieces.size(); ++j)
        if (pieces[i]->intersect(*pieces[j]).dimension() == t.dimension()) return false;
    Rational total = 0;
    for (auto* p : pieces) total += cone_volume(*p, t);
    if (total != cone_volume(t, t)) return false;
  }
  // Lower-dimensional refined maximal cones must not stick out of the covered part.
  for (const auto& p : refined.maximal()) {
    bool in_full_piece = false;
    for (const auto& t : target.maximal()) {
      if (!t.contains(p)) continue;
      if (p.dimension() == t.dimension()) in_full_piece = true;
    }
    if (!in_full_piece) return false;
  }
  return true;
}

Subdivision make_subdivision(const ConeComplex& target, const ConeComplex& refined) {
  if (!is_subdivision(target, refined))
    throw Error("NotASubdivision", "refined cones do not exactly cover the target");
  Subdivision s{target, refined, {}};
  auto cones = target.all_cones();
  for (const auto& p : refined.maximal()) {
    const Cone* best = nullptr;
    for (const auto& c : cones)
      if (c.contains(p) && (!best || c.dimension() < best->dimension())) best = &c;
    s.assignment.push_back(*best);
  }
  return s;
}

Subdivision trivial_subdivision(const ConeComplex& target) { return make_subdivision(target, target); }

ConeComplex star_subdivide(const ConeComplex& x, const IntVector& ray) {
  if (ray.size() != x.rank()) throw Error("DimensionMismatch", "ray length differs from the lattice rank");
  if (is_zero(ray)) throw Error("RayOutsideSupport", "zero vector is not a ray");
  IntVector rho = make_primitive(ray);
  if (!x.contains_point(rho)) throw Error("RayOutsideSupport", "ray (" + join(rho) + ") is outside the support");
  auto existing = x.rays();
  if (std::binary_search(existing.begin(), existing.end(), rho)) return x;
  std::vector<Cone> cones;
  for (const auto& m : x.maximal()) {
    if (!m.contains(rho)) {
      cones.push_back(m);
      continue;
    }
    auto facets = m.facet_cones();
    for (std::size_t i = 0; i < facets.size(); ++i) {
      if (dot(m.facets()[i], rho) == 0) continue;
      auto gens = facets[i].rays();
      gens.push_back(rho);
      cones.push_back(Cone::from_generators(x.rank(), std::move(gens)));
    }
  }
  return ConeComplex(x.rank(), std::move(cones));
}

Subdivision star_subdivision(const ConeComplex& x, const IntVector& ray) {
  return make_subdivision(x, star_subdivide(x, ray));
}

Rational PLFunction::evaluate(const IntVector& x) const {
  for (const auto& c : complex.maximal()) {
    if (!c.contains(x)) continue;
    return dot(linear_piece(c), to_rational(x));
  }
  throw Error("RayOutsideSupport", "point (" + join(x) + ") is outside the support");
}

RatVector PLFunction::linear_piece(const Cone& c) const {
  const std::size_t k = c.rays().size();
  const std::size_t d = complex.rank();
  if (k == 0) return RatVector(d, Rational(0));
  RatMatrix r = to_rational(c.rays());
  RatVector v;
  for (const auto& ray : c.rays()) {
    auto it = std::lower_bound(rays.begin(), rays.end(), ray);
    v.push_back(values[static_cast<std::size_t>(it - rays.begin())]);
  }
  RatMatrix gram(k, RatVector(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gram[i][j] = dot(r[i], r[j]);
  auto z = solve(gram, v, k);
  if (!z) throw Error("NotSimplicial", "cone rays are linearly dependent");
  RatVector f(d, Rational(0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t t = 0; t < d; ++t) f[t] += (*z)[i] * r[i][t];
  return f;
}

PLFunction phi_function(const Subdivision& s, const IntVector& ray) {
  if (!s.refined.is_simplicial()) throw Error("NotSimplicial", "refined complex is not simplicial");
  auto rays = s.refined.rays();
  IntVector rho = make_primitive(ray);
  if (!std::binary_search(rays.begin(), rays.end(), rho))
    throw Error("NotARay", "(" + join(rho) + ") is not a ray of the refined complex");
  PLFunction f{s.refined, rays, std::vector<Rational>(rays.size(), Rational(0))};
  f.values[static_cast<std::size_t>(std::lower_bound(rays.begin(), rays.end(), rho) - rays.begin())] = 1;
  return f;
}

namespace {

// Subdivides every cone of x outside delta by coning its (already subdivided)
// boundary from an interior ray; cones of delta take their pieces from sub.
ConeComplex cone_over_boundary(const ConeComplex& x, const ConeComplex& delta, const ConeComplex& sub) {
  auto cones = x.all_cones();
  std::stable_sort(cones.begin(), cones.end(),
                   [](const Cone& a, const Cone& b) { return a.dimension() < b.dimension(); });
  auto sub_cones = sub.all_cones();
  std::map<Cone, std::vector<Cone>> pieces;
  for (const auto& c : cones) {
    if (delta.has_cone(c)) {
      std::vector<Cone> ps;
      for (const auto& s : sub_cones)
        if (s.dimension() == c.dimension() && c.contains(s)) ps.push_back(s);
      pieces[c] = ps;
      continue;
    }
    if (c.dimension() <= 1) {
      pieces[c] = {c};
      continue;
    }
    std::vector<Cone> boundary;
    bool subdivided = false;
    for (const auto& f : c.facet_cones()) {
      const auto& fp = pieces.at(f);
      if (fp.size() != 1 || !(fp[0] == f)) subdivided = true;
      boundary.insert(boundary.end(), fp.begin(), fp.end());
    }
    if (!subdivided) {
      pieces[c] = {c};
      continue;
    }
    IntVector apex = make_primitive(c.interior_point());
    std::vector<Cone> ps;
    for (const auto& b : boundary) {
      auto gens = b.rays();
      gens.push_back(apex);
      ps.push_back(Cone::from_generators(x.rank(), std::move(gens)));
    }
    pieces[c] = ps;
  }
  std::vector<Cone> out;
  for (const auto& m : x.maximal()) {
    const auto& ps = pieces.at(m);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return ConeComplex(x.rank(), std::move(out));
}

}  // namespace

Subdivision extend_subdivision(const ConeComplex& x, const ConeComplex& delta, const Subdivision& sub_delta) {
  for (const auto& c : delta.maximal())
    if (!x.has_cone(c)) throw Error("NotFaceClosed", "a cone of the subcomplex is not a cone of the complex");
  if (!(sub_delta.target == delta))
    throw Error("TargetMismatch", "the subdivision does not subdivide the given subcomplex");

  // Stellar schedule: new rays in canonical order, each accepted only if the
  // restriction to delta stays coarser than the requested subdivision.
  ConeComplex current = x;
  auto present = x.rays();
  std::vector<IntVector> pending;
  for (const auto& r : sub_delta.refined.rays())
    if (!std::binary_search(present.begin(), present.end(), r)) pending.push_back(r);
  bool stuck = false;
  while (!pending.empty() && !stuck) {
    stuck = true;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      ConeComplex trial = star_subdivide(current, pending[i]);
      if (refines(sub_delta.refined, trial.restrict_to(delta))) {
        current = std::move(trial);
        pending.erase(pending.begin() + static_cast<long>(i));
        stuck = false;
        break;
      }
    }
  }
  if (!stuck && current.restrict_to(delta) == sub_delta.refined) return make_subdivision(x, current);
  return make_subdivision(x, cone_over_boundary(x, delta, sub_delta.refined));
}

Cone preimage_cone(const IntMatrix& f, const Cone& sigma, const Cone& tau) {
  const std::size_t n = sigma.rank();
  auto pull = [&](const IntVector& a) {
    IntVector r(n, Integer(0));
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j] == 0) continue;
      for (std::size_t t = 0; t < n; ++t) r[t] += a[j] * f[j][t];
    }
    return r;
  };
  IntMatrix ineqs = sigma.facets();
  for (const auto& a : tau.facets()) ineqs.push_back(pull(a));
  IntMatrix eqs = sigma.equations();
  for (const auto& a : tau.equations()) eqs.push_back(pull(a));
  return Cone::from_inequalities(n, ineqs, eqs);
}

Subdivision preimage_subdivision(const IntMatrix& f, const ConeComplex& source, const Subdivision& s) {
  if (f.size() != s.target.rank()) throw Error("DimensionMismatch", "map rows differ from the target rank");
  std::vector<Cone> pieces;
  for (const auto& sigma : source.maximal()) {
    std::vector<Cone> local;
    for (const auto& tau : s.refined.maximal()) {
      Cone p = preimage_cone(f, sigma, tau);
      if (p.dimension() == sigma.dimension()) local.push_back(std::move(p));
    }
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    Rational covered = 0;
    for (const auto& p : local) covered += cone_volume(p, sigma);
    if (covered != cone_volume(sigma, sigma))
      throw Error("MapLeavesSupport", "image of a source cone is not covered by the target subdivision");
    pieces.insert(pieces.end(), local.begin(), local.end());
  }
  return make_subdivision(source, ConeComplex(source.rank(), std::move(pieces)));
}

Subdivision common_refinement(const Subdivision& a, const Subdivision& b) {
  if (!(a.target == b.target)) throw Error("TargetMismatch", "subdivisions of different complexes");
  std::vector<Cone> pieces;
  for (const auto& p : a.refined.maximal())
    for (const auto& q : b.refined.maximal()) {
      if (p.dimension() != q.dimension()) continue;
      Cone c = p.intersect(q);
      if (c.dimension() == p.dimension()) pieces.push_back(std::move(c));
    }
  return make_subdivision(a.target, ConeComplex(a.target.rank(), std::move(pieces)));
}

}  // namespace logtrop
