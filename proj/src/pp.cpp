#include "logtrop/pp.hpp"

#include <algorithm>
#include <set>

#include "logtrop/error.hpp"
#include "logtrop/linalg.hpp"

namespace logtrop {

namespace {

std::size_t dim_of(const StackPtr& base, std::size_t s) { return base->stratum(s).dimension(); }

std::string cone_text(const Cone& c) {
  std::string out = "cone(";
  for (std::size_t i = 0; i < c.rays().size(); ++i) out += (i ? ";" : "") + join(c.rays()[i]);
  return out + ")";
}

// Collapses a subdivided stratum back to one orthant piece when every piece
// carries the same polynomial.
std::vector<PPPiece> normalize(std::vector<PPPiece> pieces, std::size_t dim) {
  if (pieces.size() <= 1) return pieces;
  bool same = std::all_of(pieces.begin(), pieces.end(), [&](const PPPiece& p) { return p.poly == pieces[0].poly; });
  if (same) return {PPPiece{Cone::orthant(dim), pieces[0].poly}};
  std::sort(pieces.begin(), pieces.end(), [](const PPPiece& a, const PPPiece& b) { return a.cone < b.cone; });
  return pieces;
}

template <class F>
std::vector<PPPiece> combine(const std::vector<PPPiece>& a, const std::vector<PPPiece>& b, std::size_t dim, F&& op) {
  std::vector<PPPiece> out;
  if (a.size() == 1 && b.size() == 1) {
    out.push_back({a[0].cone, op(a[0].poly, b[0].poly)});
    return out;
  }
  for (const auto& p : a)
    for (const auto& q : b) {
      Cone c = p.cone.intersect(q.cone);
      if (c.dimension() == dim) out.push_back({std::move(c), op(p.poly, q.poly)});
    }
  return normalize(std::move(out), dim);
}

void require_same_base(const PPClass& a, const PPClass& b) {
  if (a.base() != b.base()) throw Error("BaseMismatch", a.base()->name() + " vs " + b.base()->name());
}

// Polynomial in coordinates of a basis of the span of `c`.
Polynomial restrict_to_span(const Polynomial& p, const Cone& c) {
  const auto& rays = c.rays();
  auto idx = independent_rows(rays);
  std::vector<Polynomial> images(rays.empty() ? 0 : rays[0].size());
  for (std::size_t j = 0; j < images.size(); ++j) {
    RatVector coeffs(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) coeffs[k] = rays[idx[k]][j];
    images[j] = Polynomial::linear(coeffs);
  }
  return p.substitute(images);
}

Cone permute_cone(const Cone& c, const std::vector<int>& perm) {
  std::vector<IntVector> gens;
  for (const auto& r : c.rays()) {
    IntVector v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[perm[i]] = r[i];
    gens.push_back(std::move(v));
  }
  return Cone::from_generators(c.rank(), std::move(gens));
}

std::vector<std::size_t> to_size_perm(const std::vector<int>& p) { return {p.begin(), p.end()}; }

// Restriction of a stratum's pieces to a face, in the face's coordinates.
std::vector<PPPiece> restrict_to_face(const std::vector<PPPiece>& pieces, std::size_t dim, const StackFace& f) {
  const std::size_t fd = f.embedding.size();
  std::vector<Polynomial> images(dim, Polynomial());
  for (std::size_t j = 0; j < fd; ++j) images[f.embedding[j]] = Polynomial::variable(j);
  std::vector<PPPiece> out;
  if (pieces.size() == 1) {
    out.push_back({Cone::orthant(fd), pieces[0].poly.substitute(images)});
    return out;
  }
  std::vector<IntVector> face_gens;
  for (int c : f.embedding) {
    IntVector e(dim, 0);
    e[c] = 1;
    face_gens.push_back(std::move(e));
  }
  Cone face_cone = Cone::from_generators(dim, face_gens);
  for (const auto& p : pieces) {
    Cone c = p.cone.intersect(face_cone);
    if (c.dimension() != fd) continue;
    std::vector<IntVector> gens;
    for (const auto& r : c.rays()) {
      IntVector v(fd);
      for (std::size_t j = 0; j < fd; ++j) v[j] = r[f.embedding[j]];
      gens.push_back(std::move(v));
    }
    out.push_back({Cone::from_generators(fd, std::move(gens)), p.poly.substitute(images)});
  }
  return out;
}

std::vector<std::pair<Cone, Polynomial>> piece_differences(const std::vector<PPPiece>& a,
                                                           const std::vector<PPPiece>& b, std::size_t dim) {
  std::vector<std::pair<Cone, Polynomial>> out;
  if (a.size() == 1 && b.size() == 1) {
    Polynomial d = a[0].poly - b[0].poly;
    if (!d.is_zero()) out.emplace_back(a[0].cone, std::move(d));
    return out;
  }
  for (const auto& p : a)
    for (const auto& q : b) {
      Cone c = p.cone.intersect(q.cone);
      if (c.dimension() != dim) continue;
      Polynomial d = p.poly - q.poly;
      if (!d.is_zero()) out.emplace_back(std::move(c), std::move(d));
    }
  return out;
}

}  // namespace

PPClass::PPClass(StackPtr base, std::vector<std::vector<PPPiece>> pieces)
    : base_(std::move(base)), pieces_(std::move(pieces)) {
  if (pieces_.size() != base_->size()) throw Error("BaseMismatch", "one piece list per stratum is required");
  for (std::size_t s = 0; s < pieces_.size(); ++s) {
    if (pieces_[s].empty()) throw Error("BaseMismatch", "stratum without pieces");
    for (const auto& p : pieces_[s])
      if (p.cone.rank() != dim_of(base_, s) || p.cone.dimension() != dim_of(base_, s))
        throw Error("DimensionMismatch", "piece is not full-dimensional in " + base_->stratum(s).key);
    pieces_[s] = normalize(std::move(pieces_[s]), dim_of(base_, s));
  }
}

PPClass PPClass::strict(StackPtr base, std::vector<Polynomial> polys) {
  if (polys.size() != base->size()) throw Error("BaseMismatch", "one polynomial per stratum is required");
  std::vector<std::vector<PPPiece>> pieces;
  for (std::size_t s = 0; s < polys.size(); ++s) pieces.push_back({{Cone::orthant(dim_of(base, s)), polys[s]}});
  return PPClass(std::move(base), std::move(pieces));
}

PPClass PPClass::constant(StackPtr base, const Rational& c) {
  std::vector<Polynomial> polys(base->size(), Polynomial(c));
  return strict(std::move(base), std::move(polys));
}

bool PPClass::is_strict() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const auto& ps) { return ps.size() == 1; });
}

int PPClass::degree() const {
  int d = -1;
  for (const auto& ps : pieces_)
    for (const auto& p : ps) d = std::max(d, p.poly.degree());
  return d;
}

bool PPClass::is_homogeneous(unsigned k) const {
  for (const auto& ps : pieces_)
    for (const auto& p : ps)
      if (!p.poly.is_homogeneous(k)) return false;
  return true;
}

bool PPClass::is_zero() const {
  for (const auto& ps : pieces_)
    for (const auto& p : ps)
      if (!p.poly.is_zero()) return false;
  return true;
}

Rational PPClass::evaluate(std::size_t stratum, const IntVector& point) const {
  for (const auto& p : pieces_.at(stratum))
    if (p.cone.contains(point)) return p.poly.evaluate(to_rational(point));
  throw Error("RayOutsideSupport", "point (" + join(point) + ") is outside the stratum cone");
}

PPClass PPClass::operator+(const PPClass& o) const {
  require_same_base(*this, o);
  std::vector<std::vector<PPPiece>> out;
  for (std::size_t s = 0; s < pieces_.size(); ++s)
    out.push_back(combine(pieces_[s], o.pieces_[s], dim_of(base_, s),
                          [](const Polynomial& x, const Polynomial& y) { return x + y; }));
  return PPClass(base_, std::move(out));
}

PPClass PPClass::operator-(const PPClass& o) const { return *this + (-o); }

PPClass PPClass::operator*(const PPClass& o) const {
  require_same_base(*this, o);
  std::vector<std::vector<PPPiece>> out;
  for (std::size_t s = 0; s < pieces_.size(); ++s)
    out.push_back(combine(pieces_[s], o.pieces_[s], dim_of(base_, s),
                          [](const Polynomial& x, const Polynomial& y) { return x * y; }));
  return PPClass(base_, std::move(out));
}

PPClass PPClass::multiply_truncated(const PPClass& o, unsigned max_degree) const {
  require_same_base(*this, o);
  std::vector<std::vector<PPPiece>> out;
  for (std::size_t s = 0; s < pieces_.size(); ++s)
    out.push_back(combine(pieces_[s], o.pieces_[s], dim_of(base_, s), [&](const Polynomial& x, const Polynomial& y) {
      return x.multiply_truncated(y, max_degree);
    }));
  return PPClass(base_, std::move(out));
}

PPClass PPClass::operator-() const { return scaled(-1); }

PPClass PPClass::scaled(const Rational& c) const {
  auto out = pieces_;
  for (auto& ps : out)
    for (auto& p : ps) p.poly = Polynomial(c) * p.poly;
  return PPClass(base_, std::move(out));
}

PPClass PPClass::graded_part(unsigned k) const {
  auto out = pieces_;
  for (auto& ps : out)
    for (auto& p : ps) p.poly = p.poly.graded_part(k);
  return PPClass(base_, std::move(out));
}

PPClass PPClass::truncated(unsigned max_degree) const {
  auto out = pieces_;
  for (auto& ps : out)
    for (auto& p : ps) p.poly = p.poly.truncated(max_degree);
  return PPClass(base_, std::move(out));
}

bool PPClass::equivalent(const PPClass& o) const { return base_ == o.base_ && differences(*this, o).empty(); }

std::vector<ClassDifference> differences(const PPClass& a, const PPClass& b) {
  require_same_base(a, b);
  std::vector<ClassDifference> out;
  for (std::size_t s = 0; s < a.base()->size(); ++s) {
    const auto& st = a.base()->stratum(s);
    for (auto& [c, d] : piece_differences(a.pieces(s), b.pieces(s), st.dimension()))
      out.push_back({st.key, cone_text(c), d.to_string(st.labels)});
  }
  return out;
}

PPClass exp_truncated(const PPClass& x, unsigned max_degree) {
  for (const auto& ps : x.all_pieces())
    for (const auto& p : ps)
      if (p.poly.constant_term() != 0)
        throw Error("NonNilpotentExp", "class has a nonzero degree-0 part");
  PPClass result = PPClass::constant(x.base(), 1);
  PPClass term = result;
  for (unsigned k = 1; k <= max_degree; ++k) {
    term = term.multiply_truncated(x, max_degree).scaled(Rational(1, k));
    result = result + term;
  }
  return result;
}

ValidationReport validate(const PPClass& c, const std::vector<std::vector<int>>& leg_group) {
  ValidationReport report;
  const auto& base = c.base();
  for (std::size_t s = 0; s < base->size(); ++s) {
    const auto& st = base->stratum(s);
    const auto& pieces = c.pieces(s);
    const std::size_t dim = st.dimension();
    if (pieces.size() > 1) {
      std::vector<Cone> cones;
      for (const auto& p : pieces) cones.push_back(p.cone);
      ConeComplex orthant(dim, {Cone::orthant(dim)});
      if (!is_subdivision(orthant, ConeComplex(dim, cones)))
        report.violations.push_back({"Cover", st.key, "pieces do not subdivide the stratum cone"});
      for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
          Cone wall = pieces[i].cone.intersect(pieces[j].cone);
          if (wall.dimension() == 0) continue;
          Polynomial d = restrict_to_span(pieces[i].poly - pieces[j].poly, wall);
          if (!d.is_zero())
            report.violations.push_back({"Wall", st.key,
                                         cone_text(wall) + ": " + (pieces[i].poly - pieces[j].poly).to_string(st.labels)});
        }
    }
    auto syms = leg_group.empty() ? st.symmetries : declared_symmetries(*base, s, leg_group);
    for (const auto& perm : syms) {
      std::vector<PPPiece> moved;
      for (const auto& p : pieces)
        moved.push_back({pieces.size() == 1 ? p.cone : permute_cone(p.cone, perm), p.poly.rename(to_size_perm(perm))});
      for (auto& [cone, d] : piece_differences(moved, pieces, dim)) {
        std::string text;
        for (std::size_t i = 0; i < perm.size(); ++i) text += (i ? "," : "") + std::to_string(perm[i]);
        report.violations.push_back({"Automorphism", st.key,
                                     "permutation (" + text + ") on " + cone_text(cone) + ": " + d.to_string(st.labels)});
      }
    }
    for (const auto& f : st.facets) {
      auto restricted = restrict_to_face(pieces, dim, f);
      const auto& fst = base->stratum(f.face);
      for (auto& [cone, d] : piece_differences(restricted, c.pieces(f.face), fst.dimension()))
        report.violations.push_back({"Face", st.key,
                                     st.labels[f.contracted] + " = 0 gives " + fst.key + " on " + cone_text(cone) +
                                         ": " + d.to_string(fst.labels)});
    }
  }
  return report;
}

PPClass pullback(const StackMorphism& m, const PPClass& c) {
  if (m.target != c.base()) throw Error("BaseMismatch", c.base()->name() + " is not " + m.target->name());
  std::vector<std::vector<PPPiece>> out;
  for (std::size_t s = 0; s < m.source->size(); ++s) {
    const auto& img = m.images[s];
    const std::size_t dim = dim_of(m.source, s);
    const auto& target_pieces = c.pieces(img.target);
    if (target_pieces.size() == 1) {
      out.push_back({{Cone::orthant(dim), target_pieces[0].poly.linear_substitute(img.matrix)}});
      continue;
    }
    const std::size_t tdim = dim_of(m.target, img.target);
    std::vector<Cone> cones;
    for (const auto& p : target_pieces) cones.push_back(p.cone);
    Subdivision sub = make_subdivision(ConeComplex(tdim, {Cone::orthant(tdim)}), ConeComplex(tdim, cones));
    Subdivision pre = preimage_subdivision(img.matrix, ConeComplex(dim, {Cone::orthant(dim)}), sub);
    std::vector<PPPiece> pieces;
    for (const auto& cone : pre.refined.maximal()) {
      const PPPiece* hit = nullptr;
      for (const auto& p : target_pieces)
        if (std::all_of(cone.rays().begin(), cone.rays().end(),
                        [&](const IntVector& r) { return p.cone.contains(mat_vec(img.matrix, r)); })) {
          hit = &p;
          break;
        }
      if (!hit) throw Error("MapLeavesSupport", "no target piece contains the image of a preimage cone");
      pieces.push_back({cone, hit->poly.linear_substitute(img.matrix)});
    }
    out.push_back(std::move(pieces));
  }
  return PPClass(m.source, std::move(out));
}

PPClass exterior_product(const PPClass& a, const PPClass& b) {
  auto base = product_stack(a.base(), b.base());
  std::vector<std::vector<PPPiece>> out(base->size());
  for (std::size_t i = 0; i < a.base()->size(); ++i)
    for (std::size_t j = 0; j < b.base()->size(); ++j) {
      const std::size_t s = base->index_of(a.base()->stratum(i).key + "|" + b.base()->stratum(j).key);
      const std::size_t da = dim_of(a.base(), i), db = dim_of(b.base(), j);
      std::vector<std::size_t> shift(db);
      for (std::size_t k = 0; k < db; ++k) shift[k] = da + k;
      for (const auto& p : a.pieces(i))
        for (const auto& q : b.pieces(j)) {
          std::vector<IntVector> gens;
          for (const auto& r : p.cone.rays()) {
            IntVector v(da + db, 0);
            std::copy(r.begin(), r.end(), v.begin());
            gens.push_back(std::move(v));
          }
          for (const auto& r : q.cone.rays()) {
            IntVector v(da + db, 0);
            std::copy(r.begin(), r.end(), v.begin() + static_cast<long>(da));
            gens.push_back(std::move(v));
          }
          out[s].push_back({Cone::from_generators(da + db, std::move(gens)), p.poly * q.poly.rename(shift)});
        }
    }
  return PPClass(base, std::move(out));
}

PPClass length_class(const StackPtr& stack, int marking) {
  if (stack->factors().size() != 1 || !stack->factors()[0].pointed)
    throw Error("NotPointed", stack->name() + " has no leg coordinates");
  if (marking < 1 || marking > stack->factors()[0].n) throw Error("NotALeg", "marking " + std::to_string(marking));
  std::vector<Polynomial> polys;
  for (std::size_t s = 0; s < stack->size(); ++s)
    polys.push_back(Polynomial::variable(stack->coordinate(s, 0, {true, marking - 1})));
  return PPClass::strict(stack, std::move(polys));
}

PPClass boundary_class(const StackPtr& stack, const StableGraph& delta) {
  if (delta.num_edges() != 1) throw Error("NotOneEdge", "graph has " + std::to_string(delta.num_edges()) + " edges");
  if (stack->factors().size() != 1) throw Error("SignatureMismatch", "boundary classes live on a single factor");
  const auto& sig = stack->factors()[0];
  if (delta.genus() != sig.g || delta.num_legs() != sig.n)
    throw Error("SignatureMismatch", "graph does not belong to " + stack->name());
  const std::string key = digest(delta);
  std::vector<Polynomial> polys;
  for (std::size_t s = 0; s < stack->size(); ++s) {
    const auto& gr = stack->stratum(s).graphs[0];
    Polynomial p;
    for (int e = 0; e < gr.num_edges(); ++e) {
      std::vector<int> others;
      for (int f = 0; f < gr.num_edges(); ++f)
        if (f != e) others.push_back(f);
      if (digest(contract_edges(gr, others).graph) == key) p += Polynomial::variable(stack->coordinate(s, 0, {false, e}));
    }
    polys.push_back(std::move(p));
  }
  return PPClass::strict(stack, std::move(polys));
}

DRResult dr_polynomial(int g, int n, const IntVector& a, const std::optional<PPClass>& L,
                       const std::optional<PPClass>& P) {
  auto stack = build_moduli(g, n, true);
  if (a.size() != static_cast<std::size_t>(n))
    throw Error("SignatureMismatch", "expected " + std::to_string(n) + " weights");
  for (const auto* c : {L ? &*L : nullptr, P ? &*P : nullptr})
    if (c && c->base() != stack) throw Error("BaseMismatch", c->base()->name() + " is not " + stack->name());
  Integer sum = 0;
  for (const auto& x : a) sum += x;
  if (sum != 0)
    return {PPClass::constant(stack, 0), {"NonZeroSum: weights sum to " + to_string(sum) + "; the class is 0"}};
  if (L && !L->is_zero() && !L->is_homogeneous(1)) throw Error("DegreeError", "L must be homogeneous of degree 1");
  PPClass x = L ? *L : PPClass::constant(stack, 0);
  for (int i = 0; i < n; ++i)
    if (a[i] != 0) x = x + length_class(stack, i + 1).scaled(Rational(a[i] * a[i]));
  PPClass e = exp_truncated(x.scaled(Rational(-1, 2)), static_cast<unsigned>(g));
  PPClass value = (P ? e.multiply_truncated(*P, g) : e).graded_part(static_cast<unsigned>(g));
  return {value, {}};
}

StackSubdivision star_subdivide(const StackPtr& stack, std::size_t stratum, const IntVector& ray) {
  const auto& src = stack->stratum(stratum);
  if (ray.size() != src.dimension()) throw Error("DimensionMismatch", "ray length differs from the stratum dimension");
  if (is_zero(ray) || std::any_of(ray.begin(), ray.end(), [](const Integer& x) { return x < 0; }))
    throw Error("RayOutsideSupport", "(" + join(ray) + ") is not in the stratum cone");
  const IntVector rho = make_primitive(ray);
  std::set<IntVector> images;
  for (const auto& perm : src.symmetries) {
    IntVector v(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) v[perm[i]] = rho[i];
    images.insert(v);
  }
  StackSubdivision out{stack, {}, {}};
  for (std::size_t t = 0; t < stack->size(); ++t) {
    const auto& st = stack->stratum(t);
    const std::size_t dim = st.dimension();
    std::set<IntVector> marked;
    if (dim >= src.dimension()) {
      std::vector<int> edges;
      for (int c = 0; c < static_cast<int>(dim); ++c)
        if (st.is_edge(c)) edges.push_back(c);
      const std::size_t k = dim - src.dimension();
      if (k <= edges.size())
        for (unsigned long mask = 0; mask < (1ul << edges.size()); ++mask) {
          if (static_cast<std::size_t>(__builtin_popcountl(mask)) != k) continue;
          std::vector<int> chosen;
          for (std::size_t i = 0; i < edges.size(); ++i)
            if (mask >> i & 1) chosen.push_back(edges[i]);
          StackFace f = k == 0 ? StackFace{t, {}, -1} : stack->face(t, chosen);
          if (f.face != stratum) continue;
          if (k == 0) {
            f.embedding.resize(dim);
            for (std::size_t i = 0; i < dim; ++i) f.embedding[i] = static_cast<int>(i);
          }
          for (const auto& r : images) {
            IntVector v(dim, 0);
            for (std::size_t j = 0; j < r.size(); ++j) v[f.embedding[j]] = r[j];
            marked.insert(v);
          }
        }
    }
    ConeComplex orthant(dim, {Cone::orthant(dim)});
    ConeComplex refined = orthant;
    for (const auto& r : marked) refined = star_subdivide(refined, r);
    out.strata.push_back(make_subdivision(orthant, refined));
    out.marked.emplace_back(marked.begin(), marked.end());
  }
  return out;
}

PPClass phi_class(const StackSubdivision& s) {
  std::vector<std::vector<PPPiece>> pieces;
  for (std::size_t t = 0; t < s.strata.size(); ++t) {
    const auto& sub = s.strata[t];
    const std::size_t dim = sub.target.rank();
    std::vector<PLFunction> fs;
    for (const auto& r : s.marked[t]) fs.push_back(phi_function(sub, r));
    std::vector<PPPiece> ps;
    for (const auto& cone : sub.refined.maximal()) {
      RatVector coeffs(dim, Rational(0));
      for (const auto& f : fs) {
        auto piece = f.linear_piece(cone);
        for (std::size_t i = 0; i < dim; ++i) coeffs[i] += piece[i];
      }
      ps.push_back({cone, Polynomial::linear(coeffs)});
    }
    pieces.push_back(std::move(ps));
  }
  return PPClass(s.base, std::move(pieces));
}

}  // namespace logtrop
