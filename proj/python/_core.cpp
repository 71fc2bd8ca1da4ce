#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "logtrop/error.hpp"
#include "logtrop/io.hpp"

namespace py = pybind11;
using namespace logtrop;
using io::Json;

namespace {

// Values cross the boundary as JSON text; the Python package decodes them.
std::string out(const Json& j) { return j.dump(); }
Json in(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error("BadJson", e.what());
  }
}

int marking(int i, int n) {
  if (i < 1 || i > n) throw Error("NotALeg", "marking " + std::to_string(i) + " of " + std::to_string(n));
  return i - 1;
}

IntVector ints(const std::vector<long>& v) {
  IntVector r;
  for (long x : v) r.emplace_back(x);
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tropical moduli of curves, piecewise polynomials and log CohFT checks";
  py::register_exception<Error>(m, "LogtropError");

  m.def("enumerate_graphs", [](int g, int n) {
    Json list = Json::array();
    for (const auto& e : enumerate_stable_graphs(g, n)) {
      Json j = io::to_json(e.graph);
      j["automorphisms"] = io::to_json(e.automorphisms);
      list.push_back(j);
    }
    return out(list);
  });
  m.def("validate_graph", [](const std::string& g) { return out(io::to_json(validate_graph(io::raw_graph_from(in(g))))); });
  m.def("glue_graphs", [](const std::string& a, int p, const std::string& b, int q) {
    auto g1 = io::graph_from(in(a));
    auto g2 = io::graph_from(in(b));
    return out(io::to_json(glue_graphs(g1, marking(p, g1.num_legs()), g2, marking(q, g2.num_legs())).graph));
  });
  m.def("glue_loop", [](const std::string& a, int p, int q) {
    auto g = io::graph_from(in(a));
    return out(io::to_json(glue_loop(g, marking(p, g.num_legs()), marking(q, g.num_legs())).graph));
  });
  m.def("forget_leg", [](const std::string& a, int leg) {
    auto g = io::graph_from(in(a));
    return out(io::to_json(forget_leg(g, marking(leg, g.num_legs())).graph));
  });

  m.def("build_moduli", [](int g, int n, bool pointed) { return out(io::to_json(*build_moduli(g, n, pointed))); });

  m.def("length_class", [](int g, int n, int i) { return out(io::to_json(length_class(build_moduli(g, n, true), i))); });
  m.def("boundary_class", [](int g, int n, const std::string& delta) {
    return out(io::to_json(boundary_class(build_moduli(g, n, true), io::graph_from(in(delta)))));
  });
  m.def("multiply", [](const std::string& a, const std::string& b) {
    return out(io::to_json(io::class_from(in(a)) * io::class_from(in(b))));
  });
  m.def("add", [](const std::string& a, const std::string& b) {
    return out(io::to_json(io::class_from(in(a)) + io::class_from(in(b))));
  });
  m.def("exp_truncated", [](const std::string& a, unsigned max_degree) {
    return out(io::to_json(exp_truncated(io::class_from(in(a)), max_degree)));
  });
  m.def("equivalent", [](const std::string& a, const std::string& b) {
    return io::class_from(in(a)).equivalent(io::class_from(in(b)));
  });
  m.def("pullback_glue", [](int g1, int n1, int g2, int n2, const std::string& c) {
    return out(io::to_json(pullback(gluing_morphism(g1, n1, g2, n2), io::class_from(in(c)))));
  });
  m.def("pullback_loop", [](int g, int n, const std::string& c) {
    return out(io::to_json(pullback(loop_gluing_morphism(g, n), io::class_from(in(c)))));
  });
  m.def("pullback_forget", [](int g, int n, const std::string& c) {
    return out(io::to_json(pullback(forgetful_morphism(g, n), io::class_from(in(c)))));
  });
  m.def(
      "dr_polynomial",
      [](int g, int n, const std::vector<long>& a, const std::optional<std::string>& L,
         const std::optional<std::string>& P) {
        std::optional<PPClass> lc, pc;
        if (L) lc = io::class_from(in(*L));
        if (P) pc = io::class_from(in(*P));
        auto r = dr_polynomial(g, n, ints(a), lc, pc);
        return std::make_pair(out(io::to_json(r.value)), r.warnings);
      },
      py::arg("g"), py::arg("n"), py::arg("a"), py::arg("L") = py::none(), py::arg("P") = py::none());
  m.def("validate_class", [](const std::string& c) { return out(io::to_json(validate(io::class_from(in(c))))); });

  m.def("balanced_slopes", [](const std::string& graph, const std::vector<long>& a, long bound) {
    return out(io::to_json(enumerate_balanced_slopes(io::graph_from(in(graph)), ints(a), bound)));
  });
  m.def("div_cone", [](const std::string& graph, const std::vector<long>& a, const std::vector<long>& slopes) {
    return out(io::to_json(div_cone(io::graph_from(in(graph)), ints(a), ints(slopes))));
  });
  m.def("div_square", [](int g1, int n1, int g2, int n2, const std::vector<long>& a, long bound) {
    return out(io::to_json(check_div_gluing_square(g1, n1, g2, n2, ints(a), bound)));
  });
  m.def("node_monoid", [](std::size_t k, const std::vector<long>& l1, const std::vector<long>& l2) {
    return out(io::to_json(glue_node_monoid(k, ints(l1), ints(l2))));
  });

  m.def("check_axioms", [](const std::string& spec, const std::vector<std::string>& axioms, int max_g, int max_n) {
    Json list = Json::array();
    for (const auto& r : check_axioms(io::spec_from(in(spec)), axioms, max_g, max_n)) list.push_back(io::to_json(r));
    return out(list);
  });
  m.def("check_minimality", [](const std::string& c) { return out(io::to_json(check_minimality(io::class_from(in(c))))); });

  m.def("pp_dimensions", [](const std::string& fan, unsigned max_degree) {
    return pp_dimensions(io::fan_from(in(fan)), max_degree);
  });
  m.def("chow_ring", [](const std::string& fan) { return out(io::to_json(chow_ring(io::fan_from(in(fan))))); });
  m.def("probe_orthant", [](std::size_t rank, const std::vector<std::vector<long>>& rays, unsigned max_degree) {
    std::vector<IntVector> r;
    for (const auto& x : rays) r.push_back(ints(x));
    return out(io::to_json(logch_probe(Cone::orthant(rank), r, max_degree)));
  });
  m.def("star_subdivision", [](const std::string& fan, const std::vector<long>& ray) {
    return out(io::to_json(star_subdivision(io::fan_from(in(fan)), ints(ray))));
  });
}
