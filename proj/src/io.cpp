#include "logtrop/io.hpp"

#include <regex>

#include "logtrop/error.hpp"

namespace logtrop::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error("BadJson", std::string("missing field \"") + key + "\"");
  return j.at(key);
}

const Json& array_field(const Json& j, const char* key) {
  const Json& a = field(j, key);
  if (!a.is_array()) throw Error("BadJson", std::string("field \"") + key + "\" must be an array");
  return a;
}

Json string_list(const std::vector<std::string>& v) { return Json(v); }

Json labels_json(const Labels& v) {
  Json out = Json::array();
  for (long x : v) out.push_back(std::to_string(x));
  return out;
}

Labels labels_from(const Json& j) {
  if (!j.is_array()) throw Error("BadJson", "labels must be an array");
  Labels out;
  for (const auto& x : j) out.push_back(long_from(x));
  return out;
}

Json rays_json(const std::vector<IntVector>& rays) {
  Json out = Json::array();
  for (const auto& r : rays) out.push_back(to_json(r));
  return out;
}

std::vector<IntVector> rays_from(const Json& j) {
  if (!j.is_array()) throw Error("BadJson", "rays must be an array");
  std::vector<IntVector> out;
  for (const auto& r : j) out.push_back(int_vector_from(r));
  return out;
}

Json int_list(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(std::to_string(x));
  return out;
}

int int_from(const Json& j) {
  long v = long_from(j);
  if (v < INT32_MIN || v > INT32_MAX) throw Error("BadJson", "integer out of range");
  return static_cast<int>(v);
}

}  // namespace

Json to_json(const Integer& v) { return v.get_str(); }
Json to_json(const Rational& v) { return to_string(v); }

Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(const RatVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

Integer integer_from(const Json& j) {
  if (j.is_string()) {
    try {
      return parse_integer(j.get<std::string>());
    } catch (const Error&) {
      throw Error("BadJson", "not an integer: " + j.get<std::string>());
    }
  }
  if (j.is_number_integer()) return Integer(j.dump());
  throw Error("BadJson", "expected an integer, got " + j.dump());
}

Rational rational_from(const Json& j) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error&) {
      throw Error("BadJson", "not a rational: " + j.get<std::string>());
    }
  }
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  throw Error("BadJson", "expected a rational, got " + j.dump());
}

long long_from(const Json& j) {
  Integer v = integer_from(j);
  if (!v.fits_slong_p()) throw Error("BadJson", "integer out of range: " + v.get_str());
  return v.get_si();
}

IntVector int_vector_from(const Json& j) {
  if (!j.is_array()) throw Error("BadJson", "expected an array of integers");
  IntVector out;
  for (const auto& x : j) out.push_back(integer_from(x));
  return out;
}

Json to_json(const StableGraph& g) {
  Json vertices = Json::array();
  for (int v = 0; v < g.num_vertices(); ++v)
    vertices.push_back({{"id", std::to_string(v)}, {"genus", std::to_string(g.vertex_genus(v))}});
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({std::to_string(u), std::to_string(v)});
  return {{"genus", std::to_string(g.genus())},
          {"vertices", vertices},
          {"edges", edges},
          {"legs", int_list(g.legs())},
          {"digest", digest(g)}};
}

RawGraph raw_graph_from(const Json& j) {
  std::vector<std::pair<int, int>> vertices;
  for (const auto& v : array_field(j, "vertices")) vertices.emplace_back(int_from(field(v, "id")), int_from(field(v, "genus")));
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : array_field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw Error("BadJson", "an edge is a pair of vertex ids");
    edges.emplace_back(int_from(e[0]), int_from(e[1]));
  }
  std::vector<int> legs;
  for (const auto& l : array_field(j, "legs")) legs.push_back(int_from(l));
  return RawGraph::from_edges(int_from(field(j, "genus")), std::move(vertices), edges, legs);
}

StableGraph graph_from(const Json& j) {
  auto result = validate_graph(raw_graph_from(j));
  if (!result.graph) {
    std::string detail;
    for (const auto& i : result.issues) detail += (detail.empty() ? "" : "; ") + i.code + " " + i.detail;
    throw Error("InvalidGraph", detail);
  }
  return *result.graph;
}

Json to_json(const ValidationResult& r) {
  Json issues = Json::array();
  for (const auto& i : r.issues)
    issues.push_back({{"code", i.code}, {"vertex", std::to_string(i.vertex)}, {"detail", i.detail}});
  Json out{{"valid", r.graph.has_value()}, {"issues", issues}};
  if (r.graph) out["graph"] = to_json(*r.graph);
  return out;
}

Json to_json(const Cone& c) { return {{"rays", rays_json(c.rays())}}; }

Cone cone_from(const Json& j, std::size_t rank) {
  auto rays = rays_from(field(j, "rays"));
  for (const auto& r : rays)
    if (r.size() != rank) throw Error("DimensionMismatch", "ray length differs from the rank");
  return Cone::from_generators(rank, std::move(rays));
}

Json to_json(const ConeComplex& fan) {
  Json cones = Json::array();
  for (const auto& c : fan.maximal()) cones.push_back(to_json(c));
  return {{"rank", std::to_string(fan.rank())}, {"cones", cones}};
}

ConeComplex fan_from(const Json& j) {
  long rank = long_from(field(j, "rank"));
  if (rank < 0) throw Error("BadJson", "negative rank");
  std::vector<Cone> cones;
  for (const auto& c : array_field(j, "cones")) cones.push_back(cone_from(c, static_cast<std::size_t>(rank)));
  return ConeComplex(static_cast<std::size_t>(rank), std::move(cones));
}

Json to_json(const Subdivision& s) {
  Json assignment = Json::array();
  for (const auto& c : s.assignment) assignment.push_back(to_json(c));
  return {{"target", to_json(s.target)}, {"refined", to_json(s.refined)}, {"assignment", assignment}};
}

Subdivision subdivision_from(const Json& j) {
  return make_subdivision(fan_from(field(j, "target")), fan_from(field(j, "refined")));
}

Json to_json(const Polynomial& p, const std::vector<std::string>& labels) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) {
    Json powers = Json::array();
    for (auto [v, e] : m.powers()) powers.push_back({std::to_string(v), std::to_string(e)});
    terms.push_back({{"coeff", to_json(c)}, {"powers", powers}});
  }
  return {{"text", p.to_string(labels)}, {"terms", terms}};
}

Polynomial polynomial_from(const Json& j) {
  Polynomial p;
  for (const auto& t : array_field(j, "terms")) {
    std::vector<std::pair<std::size_t, unsigned>> powers;
    for (const auto& pw : array_field(t, "powers")) {
      if (!pw.is_array() || pw.size() != 2) throw Error("BadJson", "a power is a [variable, exponent] pair");
      long v = long_from(pw[0]);
      long e = long_from(pw[1]);
      if (v < 0 || e <= 0) throw Error("BadJson", "bad variable or exponent");
      powers.emplace_back(static_cast<std::size_t>(v), static_cast<unsigned>(e));
    }
    std::sort(powers.begin(), powers.end());
    p += Polynomial::term(rational_from(field(t, "coeff")), Monomial(powers));
  }
  return p;
}

StackPtr stack_from_name(const std::string& name) {
  static const std::regex factor(R"(\s*(M|Mbar)\((\d+),(\d+)\)\s*)");
  StackPtr out;
  std::size_t start = 0;
  while (true) {
    std::size_t cut = name.find(" x ", start);
    std::string part = name.substr(start, cut == std::string::npos ? std::string::npos : cut - start);
    std::smatch m;
    if (!std::regex_match(part, m, factor)) throw Error("BadJson", "unknown stack name: " + name);
    auto s = build_moduli(std::stoi(m[2]), std::stoi(m[3]), m[1] == "M");
    out = out ? product_stack(out, s) : s;
    if (cut == std::string::npos) break;
    start = cut + 3;
  }
  return out;
}

Json to_json(const ConeStack& s) {
  Json strata = Json::array();
  for (const auto& st : s.strata()) {
    Json graphs = Json::array();
    for (const auto& g : st.graphs) graphs.push_back(to_json(g));
    Json facets = Json::array();
    for (const auto& f : st.facets)
      facets.push_back({{"face", s.stratum(f.face).key},
                        {"contracted", std::to_string(f.contracted)},
                        {"embedding", int_list(f.embedding)}});
    Json symmetries = Json::array();
    for (const auto& p : st.symmetries) symmetries.push_back(int_list(p));
    strata.push_back({{"key", st.key},
                      {"graphs", graphs},
                      {"labels", string_list(st.labels)},
                      {"automorphisms", to_json(st.automorphisms)},
                      {"symmetries", symmetries},
                      {"facets", facets}});
  }
  return {{"stack", s.name()}, {"count", std::to_string(s.size())}, {"strata", strata}};
}

StackPtr stack_from(const Json& j) { return stack_from_name(field(j, "stack").get<std::string>()); }

Json to_json(const PPClass& c) {
  const ConeStack& stack = *c.base();
  Json strata = Json::array();
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const auto& st = stack.stratum(i);
    Json cones = Json::array();
    for (const auto& piece : c.pieces(i))
      cones.push_back({{"rays", rays_json(piece.cone.rays())}, {"poly", to_json(piece.poly, st.labels)}});
    strata.push_back({{"graph_digest", st.key}, {"labels", string_list(st.labels)}, {"cones", cones}});
  }
  return {{"stack", stack.name()}, {"strata", strata}};
}

PPClass class_from(const Json& j) {
  if (!field(j, "stack").is_string()) throw Error("BadJson", "stack must be a name");
  StackPtr stack = stack_from_name(j.at("stack").get<std::string>());
  std::vector<std::vector<PPPiece>> pieces(stack->size());
  for (const auto& st : array_field(j, "strata")) {
    std::size_t i = stack->index_of(field(st, "graph_digest").get<std::string>());
    const std::size_t dim = stack->stratum(i).dimension();
    if (!pieces[i].empty()) throw Error("BadJson", "stratum listed twice: " + stack->stratum(i).key);
    for (const auto& c : array_field(st, "cones")) {
      Polynomial poly = polynomial_from(field(c, "poly"));
      if (poly.variable_bound() > dim) throw Error("DimensionMismatch", "polynomial uses a missing coordinate");
      pieces[i].push_back({cone_from(c, dim), std::move(poly)});
    }
  }
  for (std::size_t i = 0; i < stack->size(); ++i)
    if (pieces[i].empty()) pieces[i].push_back({Cone::orthant(stack->stratum(i).dimension()), Polynomial()});
  return PPClass(stack, std::move(pieces));
}

Json to_json(const ValidationReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"kind", v.kind}, {"stratum", v.stratum}, {"detail", v.detail}});
  return {{"valid", r.ok()}, {"violations", violations}};
}

Json to_json(const StackMorphism& m) {
  Json images = Json::array();
  for (std::size_t i = 0; i < m.images.size(); ++i) {
    Json matrix = Json::array();
    for (const auto& row : m.images[i].matrix) matrix.push_back(to_json(row));
    images.push_back({{"source", m.source->stratum(i).key},
                      {"target", m.target->stratum(m.images[i].target).key},
                      {"matrix", matrix},
                      {"script", string_list(m.script(i))}});
  }
  return {{"name", m.name}, {"source", m.source->name()}, {"target", m.target->name()}, {"images", images}};
}

Json to_json(const CohFTSpec& s) {
  Json out{{"envelope", {{"g", std::to_string(s.max_g)}, {"n", std::to_string(s.max_n)}}}};
  switch (s.rule) {
    case CohFTSpec::Rule::Constant:
      out["rule"] = "constant";
      out["constant"] = to_json(s.constant);
      break;
    case CohFTSpec::Rule::DR: {
      out["rule"] = "dr";
      out["window"] = std::to_string(s.window.empty() ? 0 : s.window.back());
      Json l = Json::array();
      for (const auto& [gn, c] : s.dr_L) l.push_back(to_json(c));
      Json p = Json::array();
      for (const auto& [gn, c] : s.dr_P) p.push_back(to_json(c));
      out["L"] = l;
      out["P"] = p;
      break;
    }
    case CohFTSpec::Rule::Table: {
      out["rule"] = "table";
      out["basis"] = labels_json(s.window);
      Json eta = Json::array();
      for (const auto& [ij, v] : s.eta)
        if (v != 0) eta.push_back({std::to_string(ij.first), std::to_string(ij.second), to_json(v)});
      out["eta"] = eta;
      out["unit"] = s.unit ? Json(std::to_string(*s.unit)) : Json(nullptr);
      Json entries = Json::array();
      for (const auto& [key, c] : s.table)
        entries.push_back({{"labels", labels_json(std::get<2>(key))}, {"class", to_json(c)}});
      out["entries"] = entries;
      break;
    }
  }
  return out;
}

CohFTSpec spec_from(const Json& j) {
  const std::string rule = field(j, "rule").get<std::string>();
  int max_g = 1;
  int max_n = 4;
  if (j.contains("envelope")) {
    max_g = int_from(field(j.at("envelope"), "g"));
    max_n = int_from(field(j.at("envelope"), "n"));
  }
  CohFTSpec s;
  if (rule == "constant") {
    s = CohFTSpec::constant_spec(j.contains("constant") ? rational_from(j.at("constant")) : Rational(1), max_g, max_n);
  } else if (rule == "dr") {
    s = CohFTSpec::dr_spec(long_from(field(j, "window")), max_g, max_n);
    auto read = [&](const char* key, std::map<std::pair<int, int>, PPClass>& into) {
      if (!j.contains(key)) return;
      for (const auto& c : array_field(j, key)) {
        PPClass cls = class_from(c);
        const auto& f = cls.base()->factors();
        if (f.size() != 1 || !f[0].pointed) throw Error("BadJson", std::string(key) + " classes live on one M(g,n)");
        into.erase({f[0].g, f[0].n});
        into.emplace(std::make_pair(f[0].g, f[0].n), std::move(cls));
      }
    };
    read("L", s.dr_L);
    read("P", s.dr_P);
  } else if (rule == "table") {
    std::map<std::pair<long, long>, Rational> eta;
    for (const auto& e : array_field(j, "eta")) {
      if (!e.is_array() || e.size() != 3) throw Error("BadJson", "an eta entry is [i, j, value]");
      eta[{long_from(e[0]), long_from(e[1])}] = rational_from(e[2]);
    }
    std::optional<long> unit;
    if (j.contains("unit") && !j.at("unit").is_null()) unit = long_from(j.at("unit"));
    s = CohFTSpec::table_spec(labels_from(field(j, "basis")), eta, unit, max_g, max_n);
    if (j.contains("entries"))
      for (const auto& e : array_field(j, "entries")) {
        PPClass cls = class_from(field(e, "class"));
        const auto& f = cls.base()->factors();
        if (f.size() != 1 || !f[0].pointed) throw Error("BadJson", "table classes live on one M(g,n)");
        Labels labels = labels_from(field(e, "labels"));
        if (static_cast<int>(labels.size()) != f[0].n) throw Error("BadJson", "label count differs from n");
        auto key = std::make_tuple(f[0].g, f[0].n, labels);
        s.table.erase(key);
        s.table.emplace(key, std::move(cls));
      }
  } else {
    throw Error("BadJson", "unknown rule " + rule);
  }
  s.validate();
  return s;
}

Json to_json(const AxiomReport& r) {
  Json inputs = Json::array();
  for (const auto& v : r.inputs) inputs.push_back(labels_json(v));
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses)
    witnesses.push_back({{"input", labels_json(w.input)},
                         {"stratum", w.stratum},
                         {"cone", w.cone},
                         {"difference", w.difference},
                         {"detail", w.detail}});
  return {{"axiom", r.axiom},
          {"g", std::to_string(r.g)},
          {"n", std::to_string(r.n)},
          {"instance", r.instance},
          {"inputs", inputs},
          {"verdict", to_string(r.verdict)},
          {"witnesses", witnesses},
          {"notes", string_list(r.notes)},
          {"max_summands", std::to_string(r.max_summands)}};
}

Json to_json(const SlopeEnumeration& e) {
  Json a = Json::array();
  for (const auto& s : e.assignments) a.push_back(to_json(s));
  return {{"assignments", a},
          {"count", std::to_string(e.assignments.size())},
          {"bound", std::to_string(e.bound)},
          {"cycle_rank", std::to_string(e.cycle_rank)},
          {"complete_within_bound", e.complete_within_bound}};
}

Json to_json(const DivCone& c) {
  Json eq = Json::array();
  for (const auto& row : c.equations) eq.push_back(to_json(row));
  Json facets = Json::array();
  for (const auto& row : c.image.facets()) facets.push_back(to_json(row));
  Json equations = Json::array();
  for (const auto& row : c.image.equations()) equations.push_back(to_json(row));
  return {{"graph", to_json(c.graph)},
          {"slopes", to_json(c.slopes)},
          {"equations", eq},
          {"cone",
           {{"rays", rays_json(c.image.rays())},
            {"dimension", std::to_string(c.image.dimension())},
            {"inequalities", facets},
            {"equations", equations}}}};
}

Json to_json(const SquareReport& r) {
  return {{"pass", r.pass},
          {"bound", std::to_string(r.bound)},
          {"b1", to_json(r.b1)},
          {"b2", to_json(r.b2)},
          {"strata_pairs", std::to_string(r.strata_pairs)},
          {"glueable_pairs", std::to_string(r.glueable_pairs)},
          {"glued_assignments", std::to_string(r.glued_assignments)},
          {"excluded_by_bound", std::to_string(r.excluded_by_bound)},
          {"mismatches", string_list(r.mismatches)}};
}

Json to_json(const SharpMonoid& m) {
  return {{"rank", std::to_string(m.rank())},
          {"modulus", to_json(m.modulus())},
          {"generators", rays_json(m.generators())},
          {"sharp", m.is_sharp()}};
}

Json to_json(const FanChowPresentation& p) {
  std::vector<std::string> labels;
  Json dims = Json::array();
  for (auto d : p.dimensions) dims.push_back(std::to_string(d));
  Json basis = Json::array();
  for (const auto& degree : p.basis) {
    Json elements = Json::array();
    for (const auto& el : degree) {
      Json pieces = Json::array();
      for (const auto& poly : el) pieces.push_back(poly.to_string({}));
      elements.push_back(pieces);
    }
    basis.push_back(elements);
  }
  Json products = Json::array();
  for (const auto& [key, coords] : p.products) {
    auto [i, a, j, b] = key;
    products.push_back({{"left", {std::to_string(i), std::to_string(a)}},
                        {"right", {std::to_string(j), std::to_string(b)}},
                        {"coords", to_json(coords)}});
  }
  return {{"rank", std::to_string(p.rank)},
          {"dimensions", dims},
          {"dimension_above_rank", std::to_string(p.dimension_above_rank)},
          {"basis", basis},
          {"products", products}};
}

Json to_json(const ProbeResult& p) {
  Json steps = Json::array();
  for (const auto& s : p.steps) {
    Json dims = Json::array();
    for (auto d : s.dimensions) dims.push_back(std::to_string(d));
    steps.push_back({{"fan", to_json(s.fan)}, {"dimensions", dims}, {"injective", s.injective}});
  }
  return {{"steps", steps}, {"note", p.note}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace logtrop::io
