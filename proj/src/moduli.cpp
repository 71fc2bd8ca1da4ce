#include "logtrop/moduli.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>

#include "logtrop/error.hpp"
#include "logtrop/linalg.hpp"

namespace logtrop {

std::string to_string(const Signature& s) {
  return std::string(s.pointed ? "M(" : "Mbar(") + std::to_string(s.g) + "," + std::to_string(s.n) + ")";
}

namespace {

std::vector<int> layout_offsets(const std::vector<Signature>& factors, const std::vector<StableGraph>& graphs) {
  std::vector<int> offsets;
  int at = 0;
  for (std::size_t f = 0; f < graphs.size(); ++f) {
    offsets.push_back(at);
    at += graphs[f].num_edges() + (factors[f].pointed ? graphs[f].num_legs() : 0);
  }
  offsets.push_back(at);
  return offsets;
}

std::vector<std::vector<int>> coordinate_symmetries(const std::vector<Signature>& factors,
                                                    const std::vector<StableGraph>& graphs) {
  auto offsets = layout_offsets(factors, graphs);
  const int dim = offsets.back();
  std::vector<int> identity(dim);
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<std::vector<int>> group{identity};
  for (std::size_t f = 0; f < graphs.size(); ++f) {
    auto autos = edge_automorphisms(graphs[f]);
    std::vector<std::vector<int>> next;
    for (const auto& base : group)
      for (const auto& a : autos) {
        auto p = base;
        for (int e = 0; e < graphs[f].num_edges(); ++e) p[offsets[f] + e] = offsets[f] + a[e];
        next.push_back(std::move(p));
      }
    group = std::move(next);
  }
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  // identity sorts first
  return group;
}

Stratum make_stratum(const std::vector<Signature>& factors, std::vector<StableGraph> graphs) {
  Stratum s;
  s.automorphisms = 1;
  const bool product = factors.size() > 1;
  for (std::size_t f = 0; f < graphs.size(); ++f) {
    const auto& gr = graphs[f];
    if (!s.key.empty()) s.key += "|";
    s.key += digest(gr);
    s.automorphisms *= automorphism_count(gr);
    const std::string prefix = product ? std::to_string(f + 1) + ":" : "";
    for (int e = 0; e < gr.num_edges(); ++e) {
      s.coords.push_back({false, e});
      s.factor.push_back(static_cast<int>(f));
      s.labels.push_back(prefix + to_string(Coord{false, e}));
    }
    if (factors[f].pointed)
      for (int i = 0; i < gr.num_legs(); ++i) {
        s.coords.push_back({true, i});
        s.factor.push_back(static_cast<int>(f));
        s.labels.push_back(prefix + to_string(Coord{true, i}));
      }
  }
  s.symmetries = coordinate_symmetries(factors, graphs);
  s.graphs = std::move(graphs);
  return s;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, StackPtr>& cache() {
  static std::map<std::string, StackPtr> c;
  return c;
}

void fill_facets(ConeStack& stack, std::vector<Stratum>& strata) {
  for (std::size_t s = 0; s < strata.size(); ++s)
    for (int c = 0; c < static_cast<int>(strata[s].dimension()); ++c)
      if (strata[s].is_edge(c)) strata[s].facets.push_back(stack.face(s, {c}));
}

StackPtr finish(std::vector<Signature> factors, std::vector<Stratum> strata) {
  auto stack = std::make_shared<ConeStack>(factors, strata);
  fill_facets(*stack, strata);
  return std::make_shared<ConeStack>(std::move(factors), std::move(strata));
}

void require_stable(int g, int n, const char* code) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0)
    throw Error(code, "signature (" + std::to_string(g) + "," + std::to_string(n) + ") is not stable");
}

IntMatrix zero_matrix(std::size_t rows, std::size_t cols) { return IntMatrix(rows, IntVector(cols, 0)); }

bool equal_up_to_symmetry(const IntMatrix& a, const IntMatrix& b, const std::vector<std::vector<int>>& row_sym,
                          const std::vector<std::vector<int>>& col_sym) {
  if (a.size() != b.size()) return false;
  for (const auto& pr : row_sym)
    for (const auto& pc : col_sym) {
      bool ok = true;
      for (std::size_t r = 0; r < b.size() && ok; ++r)
        for (std::size_t c = 0; c < b[r].size() && ok; ++c)
          ok = a[pr[r]][pc[c]] == b[r][c];
      if (ok) return true;
    }
  return false;
}

std::vector<int> identity_perm(std::size_t n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace

ConeStack::ConeStack(std::vector<Signature> factors, std::vector<Stratum> strata)
    : factors_(std::move(factors)), strata_(std::move(strata)) {
  for (std::size_t i = 0; i < strata_.size(); ++i) index_[strata_[i].key] = i;
}

std::string ConeStack::name() const {
  std::string out;
  for (const auto& f : factors_) out += (out.empty() ? "" : " x ") + to_string(f);
  return out;
}

std::size_t ConeStack::index_of(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) throw Error("UnknownStratum", key + " in " + name());
  return it->second;
}

int ConeStack::coordinate(std::size_t stratum, int factor, const Coord& c) const {
  const auto& s = strata_[stratum];
  auto offsets = layout_offsets(factors_, s.graphs);
  if (c.leg) {
    if (!factors_[factor].pointed) throw Error("NotPointed", "leg coordinate on " + to_string(factors_[factor]));
    return offsets[factor] + s.graphs[factor].num_edges() + c.index;
  }
  return offsets[factor] + c.index;
}

std::size_t ConeStack::locate(const std::vector<StableGraph>& graphs,
                              std::vector<std::vector<int>>* edge_to_coord) const {
  if (graphs.size() != factors_.size()) throw Error("SignatureMismatch", "wrong number of factors");
  std::string key;
  std::vector<CanonicalForm> forms;
  for (const auto& gr : graphs) {
    forms.push_back(canonical_form(gr));
    if (!key.empty()) key += "|";
    key += digest_of_code(forms.back().code);
  }
  const std::size_t idx = index_of(key);
  if (edge_to_coord) {
    edge_to_coord->assign(graphs.size(), {});
    for (std::size_t f = 0; f < graphs.size(); ++f)
      for (int e = 0; e < graphs[f].num_edges(); ++e)
        (*edge_to_coord)[f].push_back(coordinate(idx, static_cast<int>(f), {false, forms[f].edge_map[e]}));
  }
  return idx;
}

StackFace ConeStack::face(std::size_t stratum, const std::vector<int>& edge_coords) const {
  const auto& s = strata_[stratum];
  std::vector<std::vector<int>> contract(s.graphs.size());
  for (int c : edge_coords) {
    if (!s.is_edge(c)) throw Error("NotAnEdge", s.labels.at(c));
    contract[s.factor[c]].push_back(s.coords[c].index);
  }
  std::vector<Contraction> cs;
  std::vector<StableGraph> graphs;
  for (std::size_t f = 0; f < s.graphs.size(); ++f) {
    cs.push_back(contract_edges(s.graphs[f], contract[f]));
    graphs.push_back(cs.back().graph);
  }
  std::vector<std::vector<int>> to_coord;
  StackFace out;
  out.face = locate(graphs, &to_coord);
  out.contracted = edge_coords.size() == 1 ? edge_coords[0] : -1;
  const auto& t = strata_[out.face];
  out.embedding.assign(t.dimension(), -1);
  for (std::size_t f = 0; f < s.graphs.size(); ++f) {
    const int fi = static_cast<int>(f);
    for (int e = 0; e < s.graphs[f].num_edges(); ++e) {
      const int ne = cs[f].edge_map[e];
      if (ne >= 0) out.embedding[to_coord[f][ne]] = coordinate(stratum, fi, {false, e});
    }
    if (factors_[f].pointed)
      for (int i = 0; i < s.graphs[f].num_legs(); ++i)
        out.embedding[coordinate(out.face, fi, {true, i})] = coordinate(stratum, fi, {true, i});
  }
  return out;
}

StackPtr build_moduli(int g, int n, bool pointed, const GraphLimits& limits) {
  require_stable(g, n, "UnstableSignature");
  const Signature sig{g, n, pointed};
  const std::string name = to_string(sig);
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache().find(name);
    if (it != cache().end()) return it->second;
  }
  std::vector<Stratum> strata;
  for (auto& eg : enumerate_stable_graphs(g, n, limits)) strata.push_back(make_stratum({sig}, {eg.graph}));
  auto stack = finish({sig}, std::move(strata));
  std::lock_guard<std::mutex> lock(cache_mutex());
  return cache().emplace(name, stack).first->second;
}

StackPtr product_stack(const StackPtr& a, const StackPtr& b) {
  auto factors = a->factors();
  factors.insert(factors.end(), b->factors().begin(), b->factors().end());
  const std::string name = a->name() + " x " + b->name();
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache().find(name);
    if (it != cache().end()) return it->second;
  }
  std::vector<Stratum> strata;
  for (const auto& x : a->strata())
    for (const auto& y : b->strata()) {
      auto graphs = x.graphs;
      graphs.insert(graphs.end(), y.graphs.begin(), y.graphs.end());
      strata.push_back(make_stratum(factors, std::move(graphs)));
    }
  auto stack = finish(factors, std::move(strata));
  std::lock_guard<std::mutex> lock(cache_mutex());
  return cache().emplace(name, stack).first->second;
}

std::vector<std::vector<int>> declared_symmetries(const ConeStack& stack, std::size_t stratum,
                                                  const std::vector<std::vector<int>>& group) {
  if (stack.factors().size() != 1) throw Error("SignatureMismatch", "declared symmetries need a single factor");
  const auto& s = stack.stratum(stratum);
  const auto& gr = s.graphs[0];
  std::set<std::vector<int>> out(s.symmetries.begin(), s.symmetries.end());
  for (const auto& sigma : group) {
    if (sigma.size() != static_cast<std::size_t>(gr.num_legs())) throw Error("BadPermutation", "wrong length");
    std::vector<int> legs(gr.num_legs());
    for (int i = 0; i < gr.num_legs(); ++i) legs.at(sigma[i]) = gr.leg_vertex(i);
    StableGraph moved(gr.vertex_genera(), gr.edges(), legs);
    auto cf = canonical_form(moved);
    if (digest_of_code(cf.code) != s.key) continue;
    std::vector<int> p(s.dimension());
    for (int e = 0; e < gr.num_edges(); ++e) p[e] = cf.edge_map[e];
    if (stack.factors()[0].pointed)
      for (int i = 0; i < gr.num_legs(); ++i) p[gr.num_edges() + i] = gr.num_edges() + sigma[i];
    for (const auto& h : s.symmetries) {
      std::vector<int> q(p.size());
      for (std::size_t c = 0; c < p.size(); ++c) q[c] = h[p[c]];
      out.insert(q);
    }
  }
  std::vector<std::vector<int>> result(out.begin(), out.end());
  return result;
}

std::vector<std::string> StackMorphism::script(std::size_t source_stratum) const {
  const auto& img = images.at(source_stratum);
  const auto& src = source->stratum(source_stratum);
  const auto& tgt = target->stratum(img.target);
  std::vector<std::string> lines;
  for (std::size_t r = 0; r < img.matrix.size(); ++r) {
    std::string rhs;
    for (std::size_t c = 0; c < img.matrix[r].size(); ++c) {
      const auto& k = img.matrix[r][c];
      if (k == 0) continue;
      if (!rhs.empty()) rhs += " + ";
      if (k != 1) rhs += logtrop::to_string(k) + "*";
      rhs += src.labels[c];
    }
    lines.push_back(tgt.labels[r] + " := " + (rhs.empty() ? "0" : rhs));
  }
  return lines;
}

StackMorphism gluing_morphism(int g1, int n1, int g2, int n2) {
  require_stable(g1, n1 + 1, "SignatureMismatch");
  require_stable(g2, n2 + 1, "SignatureMismatch");
  StackMorphism m;
  m.name = "glue:" + std::to_string(g1) + "," + std::to_string(n1) + "," + std::to_string(g2) + "," +
           std::to_string(n2);
  m.source = product_stack(build_moduli(g1, n1 + 1, true), build_moduli(g2, n2 + 1, true));
  m.target = build_moduli(g1 + g2, n1 + n2, true);
  for (std::size_t s = 0; s < m.source->size(); ++s) {
    const auto& st = m.source->stratum(s);
    const auto& a = st.graphs[0];
    const auto& b = st.graphs[1];
    Gluing gl = glue_graphs(a, n1, b, n2);
    std::vector<std::vector<int>> etc;
    StratumImage img;
    img.target = m.target->locate({gl.graph}, &etc);
    img.matrix = zero_matrix(m.target->stratum(img.target).dimension(), st.dimension());
    for (int e = 0; e < a.num_edges(); ++e) img.matrix[etc[0][e]][m.source->coordinate(s, 0, {false, e})] = 1;
    for (int e = 0; e < b.num_edges(); ++e)
      img.matrix[etc[0][gl.second_edge_offset + e]][m.source->coordinate(s, 1, {false, e})] = 1;
    auto& row = img.matrix[etc[0][gl.new_edge]];
    row[m.source->coordinate(s, 0, {true, n1})] += 1;
    row[m.source->coordinate(s, 1, {true, n2})] += 1;
    for (int i = 0; i < a.num_legs(); ++i)
      if (gl.first_leg_map[i] >= 0)
        img.matrix[m.target->coordinate(img.target, 0, {true, gl.first_leg_map[i]})]
                  [m.source->coordinate(s, 0, {true, i})] = 1;
    for (int i = 0; i < b.num_legs(); ++i)
      if (gl.second_leg_map[i] >= 0)
        img.matrix[m.target->coordinate(img.target, 0, {true, gl.second_leg_map[i]})]
                  [m.source->coordinate(s, 1, {true, i})] = 1;
    m.images.push_back(std::move(img));
  }
  return m;
}

StackMorphism loop_gluing_morphism(int g, int n) {
  if (g < 1) throw Error("SignatureMismatch", "loop gluing needs genus at least one");
  require_stable(g - 1, n + 2, "SignatureMismatch");
  StackMorphism m;
  m.name = "loop:" + std::to_string(g) + "," + std::to_string(n);
  m.source = build_moduli(g - 1, n + 2, true);
  m.target = build_moduli(g, n, true);
  for (std::size_t s = 0; s < m.source->size(); ++s) {
    const auto& st = m.source->stratum(s);
    const auto& a = st.graphs[0];
    Gluing gl = glue_loop(a, n, n + 1);
    std::vector<std::vector<int>> etc;
    StratumImage img;
    img.target = m.target->locate({gl.graph}, &etc);
    img.matrix = zero_matrix(m.target->stratum(img.target).dimension(), st.dimension());
    for (int e = 0; e < a.num_edges(); ++e) img.matrix[etc[0][e]][m.source->coordinate(s, 0, {false, e})] = 1;
    auto& row = img.matrix[etc[0][gl.new_edge]];
    row[m.source->coordinate(s, 0, {true, n})] += 1;
    row[m.source->coordinate(s, 0, {true, n + 1})] += 1;
    for (int i = 0; i < a.num_legs(); ++i)
      if (gl.first_leg_map[i] >= 0)
        img.matrix[m.target->coordinate(img.target, 0, {true, gl.first_leg_map[i]})]
                  [m.source->coordinate(s, 0, {true, i})] = 1;
    m.images.push_back(std::move(img));
  }
  return m;
}

StackMorphism forgetful_morphism(int g, int n, bool pointed, int leg) {
  require_stable(g, n, "ResultUnstable");
  if (leg < 0) leg = n;
  if (leg > n) throw Error("NotALeg", "leg " + std::to_string(leg + 1));
  StackMorphism m;
  m.name = "forget:" + std::to_string(g) + "," + std::to_string(n) + "," + std::to_string(leg + 1);
  m.source = build_moduli(g, n + 1, pointed);
  m.target = build_moduli(g, n, pointed);
  for (std::size_t s = 0; s < m.source->size(); ++s) {
    const auto& st = m.source->stratum(s);
    ForgetResult fr = forget_leg(st.graphs[0], leg);
    std::vector<std::vector<int>> etc;
    StratumImage img;
    img.target = m.target->locate({fr.graph}, &etc);
    img.matrix = zero_matrix(m.target->stratum(img.target).dimension(), st.dimension());
    for (const auto& [tc, sources] : fr.script) {
      if (tc.leg && !pointed) continue;
      const int row = tc.leg ? m.target->coordinate(img.target, 0, tc) : etc[0][tc.index];
      for (const auto& sc : sources) img.matrix[row][m.source->coordinate(s, 0, sc)] += 1;
    }
    m.images.push_back(std::move(img));
  }
  return m;
}

StackMorphism relabel_morphism(int g, int n, const std::vector<int>& perm, bool pointed) {
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != identity_perm(n)) throw Error("BadPermutation", "not a permutation of the legs");
  StackMorphism m;
  m.name = "relabel:" + std::to_string(g) + "," + std::to_string(n);
  m.source = build_moduli(g, n, pointed);
  m.target = m.source;
  for (std::size_t s = 0; s < m.source->size(); ++s) {
    const auto& st = m.source->stratum(s);
    const auto& gr = st.graphs[0];
    std::vector<int> legs(n);
    for (int i = 0; i < n; ++i) legs[perm[i]] = gr.leg_vertex(i);
    std::vector<std::vector<int>> etc;
    StratumImage img;
    img.target = m.target->locate({StableGraph(gr.vertex_genera(), gr.edges(), legs)}, &etc);
    img.matrix = zero_matrix(st.dimension(), st.dimension());
    for (int e = 0; e < gr.num_edges(); ++e) img.matrix[etc[0][e]][e] = 1;
    if (pointed)
      for (int i = 0; i < n; ++i)
        img.matrix[m.target->coordinate(img.target, 0, {true, perm[i]})][m.source->coordinate(s, 0, {true, i})] = 1;
    m.images.push_back(std::move(img));
  }
  return m;
}

StackMorphism identity_morphism(const StackPtr& stack) {
  StackMorphism m;
  m.name = "id";
  m.source = stack;
  m.target = stack;
  for (std::size_t s = 0; s < stack->size(); ++s) {
    const std::size_t d = stack->stratum(s).dimension();
    StratumImage img{s, zero_matrix(d, d)};
    for (std::size_t i = 0; i < d; ++i) img.matrix[i][i] = 1;
    m.images.push_back(std::move(img));
  }
  return m;
}

StackMorphism product_morphism(const StackMorphism& a, const StackMorphism& b) {
  StackMorphism m;
  m.name = "(" + a.name + ")x(" + b.name + ")";
  m.source = product_stack(a.source, b.source);
  m.target = product_stack(a.target, b.target);
  for (std::size_t i = 0; i < a.source->size(); ++i)
    for (std::size_t j = 0; j < b.source->size(); ++j) {
      const auto& ia = a.images[i];
      const auto& ib = b.images[j];
      const std::size_t s = m.source->index_of(a.source->stratum(i).key + "|" + b.source->stratum(j).key);
      StratumImage img;
      img.target = m.target->index_of(a.target->stratum(ia.target).key + "|" + b.target->stratum(ib.target).key);
      const std::size_t ra = ia.matrix.size(), ca = a.source->stratum(i).dimension();
      const std::size_t rb = ib.matrix.size(), cb = b.source->stratum(j).dimension();
      img.matrix = zero_matrix(ra + rb, ca + cb);
      for (std::size_t r = 0; r < ra; ++r)
        for (std::size_t c = 0; c < ca; ++c) img.matrix[r][c] = ia.matrix[r][c];
      for (std::size_t r = 0; r < rb; ++r)
        for (std::size_t c = 0; c < cb; ++c) img.matrix[ra + r][ca + c] = ib.matrix[r][c];
      if (m.images.size() <= s) m.images.resize(s + 1);
      m.images[s] = std::move(img);
    }
  return m;
}

StackMorphism compose(const StackMorphism& first, const StackMorphism& second) {
  if (first.target != second.source)
    throw Error("BaseMismatch", first.target->name() + " vs " + second.source->name());
  StackMorphism m;
  m.name = second.name + " o " + first.name;
  m.source = first.source;
  m.target = second.target;
  for (const auto& img : first.images) {
    const auto& next = second.images[img.target];
    m.images.push_back({next.target, mat_mul(next.matrix, img.matrix)});
  }
  return m;
}

bool same_morphism(const StackMorphism& a, const StackMorphism& b) {
  if (a.source != b.source || a.target != b.target || a.images.size() != b.images.size()) return false;
  for (std::size_t s = 0; s < a.images.size(); ++s) {
    if (a.images[s].target != b.images[s].target) return false;
    if (!equal_up_to_symmetry(a.images[s].matrix, b.images[s].matrix,
                              a.target->stratum(a.images[s].target).symmetries,
                              a.source->stratum(s).symmetries))
      return false;
  }
  return true;
}

std::vector<std::string> face_violations(const StackMorphism& m) {
  std::vector<std::string> out;
  for (std::size_t s = 0; s < m.source->size(); ++s) {
    const auto& st = m.source->stratum(s);
    const auto& img = m.images[s];
    for (const auto& f : st.facets) {
      // Restrict the substitution to the face, then contract the target edges that vanish.
      IntMatrix restricted;
      for (const auto& row : img.matrix) {
        IntVector r;
        for (int c : f.embedding) r.push_back(row[c]);
        restricted.push_back(std::move(r));
      }
      const auto& tst = m.target->stratum(img.target);
      std::vector<int> zero_edges;
      bool bad_leg = false;
      for (std::size_t r = 0; r < restricted.size(); ++r)
        if (is_zero(restricted[r])) {
          if (tst.is_edge(static_cast<int>(r)))
            zero_edges.push_back(static_cast<int>(r));
          else
            bad_leg = true;
        }
      const std::string where = st.key + " face " + st.labels[f.contracted];
      if (bad_leg) {
        out.push_back(where + ": a leg coordinate vanishes");
        continue;
      }
      StackFace tf = zero_edges.empty() ? StackFace{img.target, identity_perm(tst.dimension()), -1}
                                        : m.target->face(img.target, zero_edges);
      const auto& fimg = m.images[f.face];
      if (tf.face != fimg.target) {
        out.push_back(where + ": lands on " + m.target->stratum(tf.face).key + " instead of " +
                      m.target->stratum(fimg.target).key);
        continue;
      }
      IntMatrix on_face;
      for (int r : tf.embedding) on_face.push_back(restricted[r]);
      if (!equal_up_to_symmetry(on_face, fimg.matrix, m.target->stratum(tf.face).symmetries,
                                m.source->stratum(f.face).symmetries))
        out.push_back(where + ": substitution differs from the face's substitution");
    }
  }
  return out;
}

}  // namespace logtrop
