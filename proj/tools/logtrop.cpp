// logtrop: command-line front end. Every command prints one JSON document.
// Exit codes: 0 success, 2 failing check or report, 1 usage or data error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "logtrop/error.hpp"
#include "logtrop/io.hpp"

using namespace logtrop;
using io::Json;

namespace {

struct Outcome {
  Json result;
  int code = 0;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("FileNotFound", path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error("BadJson", path + ": " + e.what());
  }
}

void write_output(const Json& j, const std::string& out) {
  const std::string text = io::dump(j);
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error("FileNotWritable", out);
  f << text;
}

void diagnostic(const Json& j) { std::cerr << j.dump() << "\n"; }

/// "g<=1,n<=4"
std::pair<int, int> parse_envelope(const std::string& text) {
  static const std::regex pattern(R"(\s*g\s*<=\s*(\d+)\s*,\s*n\s*<=\s*(\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw Error("UsageError", "envelope must look like \"g<=1,n<=4\"");
  return {std::stoi(m[1]), std::stoi(m[2])};
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (const auto& v : parse_int_list(text)) {
    if (!v.fits_sint_p()) throw Error("UsageError", "integer out of range");
    out.push_back(static_cast<int>(v.get_si()));
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

/// glue:g1,n1,g2,n2 | loop:g,n | forget:g,n[,leg] | relabel:g,n:perm (markings 1-based)
StackMorphism parse_map(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw Error("UsageError", "map must look like kind:args");
  const std::string kind = text.substr(0, colon);
  auto parts = split(text.substr(colon + 1), ':');
  auto args = parse_ints(parts.empty() ? "" : parts[0]);
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi || parts.size() > (kind == "relabel" ? 2u : 1u))
      throw Error("UsageError", "wrong number of arguments for map " + kind);
  };
  if (kind == "glue") {
    need(4, 4);
    return gluing_morphism(args[0], args[1], args[2], args[3]);
  }
  if (kind == "loop") {
    need(2, 2);
    return loop_gluing_morphism(args[0], args[1]);
  }
  if (kind == "forget") {
    need(2, 3);
    return forgetful_morphism(args[0], args[1], true, args.size() == 3 ? args[2] - 1 : -1);
  }
  if (kind == "relabel") {
    need(2, 2);
    if (parts.size() != 2) throw Error("UsageError", "relabel:g,n:perm");
    auto perm = parse_ints(parts[1]);
    for (auto& p : perm) --p;
    return relabel_morphism(args[0], args[1], perm);
  }
  throw Error("UsageError", "unknown map kind " + kind);
}

StableGraph find_graph(int g, int n, const std::string& digest_or_file) {
  if (digest_or_file.size() > 5 && digest_or_file.substr(digest_or_file.size() - 5) == ".json")
    return io::graph_from(read_json(digest_or_file));
  for (const auto& e : enumerate_stable_graphs(g, n))
    if (e.digest == digest_or_file) return e.graph;
  throw Error("UnknownStratum", "no graph of G(" + std::to_string(g) + "," + std::to_string(n) + ") has digest " +
                                    digest_or_file);
}

std::string forget_kind(ForgetKind k) {
  switch (k) {
    case ForgetKind::Identity:
      return "identity";
    case ForgetKind::RationalTail:
      return "rational-tail";
    case ForgetKind::RationalBridge:
      return "rational-bridge";
  }
  return "identity";
}

int marking(int i, int n, const char* what) {
  if (i < 1 || i > n) throw Error("UsageError", std::string(what) + " must be a marking between 1 and " + std::to_string(n));
  return i - 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tropical moduli, piecewise polynomials and log CohFT checks"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("--out", out, "Write the JSON result to this file instead of standard output");
  std::function<Outcome()> action;

  int g = 0, n = 0, g1 = 0, n1 = 0, g2 = 0, n2 = 0, i = 1, p = 1, q = 1, leg = 1, k = 1;
  long bound = 4;
  unsigned max_deg = 2;
  std::string in, in2, a, slopes, graph, map, L, P, spec, axioms = "sn,sep,loop,unit", envelope, fan, cone, script,
                                                         ray, l1, l2, kind;
  bool pointed = false, loop = false;
  int max_vertices = 12, max_edges = 14;

  // graphs
  auto graphs = app.add_subcommand("graphs", "Stable graphs");
  graphs->require_subcommand(1);
  auto g_enum = graphs->add_subcommand("enum", "Enumerate G(g,n) up to isomorphism");
  g_enum->add_option("--g", g)->required();
  g_enum->add_option("--n", n)->required();
  g_enum->add_option("--max-vertices", max_vertices);
  g_enum->add_option("--max-edges", max_edges);
  g_enum->callback([&] {
    action = [&] {
      auto list = enumerate_stable_graphs(g, n, {max_vertices, max_edges});
      Json items = Json::array();
      for (const auto& e : list) {
        Json j = io::to_json(e.graph);
        j["automorphisms"] = io::to_json(e.automorphisms);
        items.push_back(j);
      }
      return Outcome{{{"g", std::to_string(g)}, {"n", std::to_string(n)}, {"count", std::to_string(list.size())},
                      {"graphs", items}}};
    };
  });
  auto g_validate = graphs->add_subcommand("validate", "Validate a graph JSON file");
  g_validate->add_option("--in", in)->required();
  g_validate->callback([&] {
    action = [&] {
      auto r = validate_graph(io::raw_graph_from(read_json(in)));
      return Outcome{io::to_json(r), r.graph ? 0 : 2};
    };
  });
  auto g_glue = graphs->add_subcommand("glue", "Glue leg p of one graph to leg q of another (or the same with --loop)");
  g_glue->add_option("--in", in)->required();
  g_glue->add_option("--in2", in2);
  g_glue->add_option("--p", p)->required();
  g_glue->add_option("--q", q)->required();
  g_glue->add_flag("--loop", loop);
  g_glue->callback([&] {
    action = [&] {
      StableGraph first = io::graph_from(read_json(in));
      auto glued = [&] {
        if (loop) return glue_loop(first, marking(p, first.num_legs(), "--p"), marking(q, first.num_legs(), "--q"));
        if (in2.empty()) throw Error("UsageError", "--in2 is required unless --loop is given");
        StableGraph second = io::graph_from(read_json(in2));
        return glue_graphs(first, marking(p, first.num_legs(), "--p"), second, marking(q, second.num_legs(), "--q"));
      };
      Gluing gl = glued();
      Json first_map = Json::array();
      for (int x : gl.first_leg_map) first_map.push_back(std::to_string(x < 0 ? x : x + 1));
      Json second_map = Json::array();
      for (int x : gl.second_leg_map) second_map.push_back(std::to_string(x < 0 ? x : x + 1));
      return Outcome{{{"graph", io::to_json(gl.graph)},
                      {"new_edge", std::to_string(gl.new_edge)},
                      {"first_leg_map", first_map},
                      {"second_leg_map", second_map}}};
    };
  });
  auto g_forget = graphs->add_subcommand("forget", "Forget a leg and stabilise");
  g_forget->add_option("--in", in)->required();
  g_forget->add_option("--leg", leg)->required();
  g_forget->callback([&] {
    action = [&] {
      StableGraph gr = io::graph_from(read_json(in));
      auto r = forget_leg(gr, marking(leg, gr.num_legs(), "--leg"));
      Json script_json = Json::array();
      for (const auto& [c, sum] : r.script) {
        Json terms = Json::array();
        for (const auto& s : sum) terms.push_back(to_string(s));
        script_json.push_back({{"coordinate", to_string(c)}, {"sum", terms}});
      }
      return Outcome{{{"graph", io::to_json(r.graph)}, {"kind", forget_kind(r.kind)}, {"script", script_json}}};
    };
  });

  // moduli
  auto moduli = app.add_subcommand("moduli", "Tropical moduli cone stacks");
  moduli->require_subcommand(1);
  auto m_build = moduli->add_subcommand("build", "Strata, faces and automorphisms of M(g,n) or Mbar(g,n)");
  m_build->add_option("--g", g)->required();
  m_build->add_option("--n", n)->required();
  m_build->add_flag("--pointed", pointed, "Include leg lengths");
  m_build->callback([&] { action = [&] { return Outcome{io::to_json(*build_moduli(g, n, pointed))}; }; });

  // pp
  auto pp = app.add_subcommand("pp", "Piecewise-polynomial classes on M(g,n)");
  pp->require_subcommand(1);
  auto pp_length = pp->add_subcommand("make-length", "The leg length l_i");
  pp_length->add_option("--g", g)->required();
  pp_length->add_option("--n", n)->required();
  pp_length->add_option("--i", i)->required();
  pp_length->callback([&] { action = [&] { return Outcome{io::to_json(length_class(build_moduli(g, n, true), i))}; }; });
  auto pp_boundary = pp->add_subcommand("make-boundary", "Sum of the edge lengths of type delta");
  pp_boundary->add_option("--g", g)->required();
  pp_boundary->add_option("--n", n)->required();
  pp_boundary->add_option("--graph", graph, "One-edge graph JSON file")->required();
  pp_boundary->callback([&] {
    action = [&] {
      return Outcome{io::to_json(boundary_class(build_moduli(g, n, true), io::graph_from(read_json(graph))))};
    };
  });
  auto pp_mul = pp->add_subcommand("mul", "Product of two classes");
  pp_mul->add_option("--in", in)->required();
  pp_mul->add_option("--in2", in2)->required();
  pp_mul->callback([&] {
    action = [&] { return Outcome{io::to_json(io::class_from(read_json(in)) * io::class_from(read_json(in2)))}; };
  });
  auto pp_exp = pp->add_subcommand("exp", "Truncated exponential");
  pp_exp->add_option("--in", in)->required();
  pp_exp->add_option("--max-deg", max_deg)->required();
  pp_exp->callback([&] {
    action = [&] { return Outcome{io::to_json(exp_truncated(io::class_from(read_json(in)), max_deg))}; };
  });
  auto pp_pull = pp->add_subcommand("pullback", "Pullback along glue, loop, forget or relabel maps");
  pp_pull->add_option("--map", map, "glue:g1,n1,g2,n2 | loop:g,n | forget:g,n[,leg] | relabel:g,n:perm")->required();
  pp_pull->add_option("--in", in)->required();
  pp_pull->callback([&] {
    action = [&] { return Outcome{io::to_json(pullback(parse_map(map), io::class_from(read_json(in))))}; };
  });
  auto pp_dr = pp->add_subcommand("dr", "Degree-g part of exp(-1/2 (sum a_i^2 l_i + L)) P");
  pp_dr->add_option("--g", g)->required();
  pp_dr->add_option("--n", n)->required();
  pp_dr->add_option("--a", a)->required();
  pp_dr->add_option("--L", L, "Class JSON file for L");
  pp_dr->add_option("--P", P, "Class JSON file for P");
  pp_dr->callback([&] {
    action = [&] {
      std::optional<PPClass> lc, pc;
      if (!L.empty()) lc = io::class_from(read_json(L));
      if (!P.empty()) pc = io::class_from(read_json(P));
      auto r = dr_polynomial(g, n, parse_int_list(a), lc, pc);
      for (const auto& w : r.warnings) diagnostic({{"warning", w}});
      return Outcome{io::to_json(r.value)};
    };
  });
  auto pp_validate = pp->add_subcommand("validate", "Cover, wall, automorphism and face checks");
  pp_validate->add_option("--in", in)->required();
  bool legs_permuted = false;
  pp_validate->add_flag("--legs-permuted", legs_permuted, "Also require invariance under all leg permutations");
  pp_validate->callback([&] {
    action = [&] {
      PPClass c = io::class_from(read_json(in));
      std::vector<std::vector<int>> group;
      if (legs_permuted) {
        const auto& f = c.base()->factors();
        if (f.size() != 1) throw Error("UsageError", "--legs-permuted needs a single-factor stack");
        std::vector<int> perm(f[0].n);
        std::iota(perm.begin(), perm.end(), 0);
        do group.push_back(perm);
        while (std::next_permutation(perm.begin(), perm.end()));
      }
      auto r = validate(c, group);
      return Outcome{io::to_json(r), r.ok() ? 0 : 2};
    };
  });

  // divtrop
  auto div = app.add_subcommand("divtrop", "Balanced slopes and tropical divisors");
  div->require_subcommand(1);
  auto d_slopes = div->add_subcommand("slopes", "Balanced slope assignments with |s| <= bound");
  d_slopes->add_option("--g", g)->required();
  d_slopes->add_option("--n", n)->required();
  d_slopes->add_option("--a", a)->required();
  d_slopes->add_option("--graph", graph, "Stratum digest or graph JSON file")->required();
  d_slopes->add_option("--bound", bound);
  d_slopes->callback([&] {
    action = [&] {
      StableGraph gr = find_graph(g, n, graph);
      Json j = io::to_json(enumerate_balanced_slopes(gr, parse_int_list(a), bound));
      j["graph"] = io::to_json(gr);
      return Outcome{j};
    };
  });
  auto d_cone = div->add_subcommand("cone", "Edge lengths admitting the given slopes");
  d_cone->add_option("--g", g)->required();
  d_cone->add_option("--n", n)->required();
  d_cone->add_option("--a", a)->required();
  d_cone->add_option("--graph", graph)->required();
  d_cone->add_option("--slopes", slopes)->required();
  d_cone->callback([&] {
    action = [&] { return Outcome{io::to_json(div_cone(find_graph(g, n, graph), parse_int_list(a), parse_int_list(slopes)))}; };
  });
  auto d_square = div->add_subcommand("square", "Check the gluing square of Div cones");
  d_square->add_option("--g1", g1)->required();
  d_square->add_option("--n1", n1)->required();
  d_square->add_option("--g2", g2)->required();
  d_square->add_option("--n2", n2)->required();
  d_square->add_option("--a", a)->required();
  d_square->add_option("--bound", bound);
  d_square->callback([&] {
    action = [&] {
      auto r = check_div_gluing_square(g1, n1, g2, n2, parse_int_list(a), bound);
      return Outcome{io::to_json(r), r.pass ? 0 : 2};
    };
  });
  auto d_monoid = div->add_subcommand("monoid", "Monoid of a glued node");
  d_monoid->add_option("--k", k)->required();
  d_monoid->add_option("--l1", l1)->required();
  d_monoid->add_option("--l2", l2)->required();
  d_monoid->callback([&] {
    action = [&] {
      if (k < 1) throw Error("UsageError", "--k must be positive");
      return Outcome{io::to_json(glue_node_monoid(static_cast<std::size_t>(k), parse_int_list(l1), parse_int_list(l2)))};
    };
  });

  // cohft
  auto cohft = app.add_subcommand("cohft", "Log CohFT axiom checks");
  cohft->require_subcommand(1);
  auto c_check = cohft->add_subcommand("check", "Check axioms over an envelope");
  c_check->add_option("--spec", spec)->required();
  c_check->add_option("--axioms", axioms, "Comma separated: sn, sep, loop, unit");
  c_check->add_option("--envelope", envelope, "e.g. g<=1,n<=4 (defaults to the envelope declared in the file)");
  c_check->callback([&] {
    action = [&] {
      CohFTSpec s = io::spec_from(read_json(spec));
      auto [mg, mn] = envelope.empty() ? std::make_pair(s.max_g, s.max_n) : parse_envelope(envelope);
      auto reports = check_axioms(s, split(axioms, ','), mg, mn);
      Json list = Json::array();
      Verdict overall = Verdict::Pass;
      for (const auto& r : reports) {
        list.push_back(io::to_json(r));
        if (r.verdict == Verdict::Fail) overall = Verdict::Fail;
        if (r.verdict == Verdict::WindowTooSmall && overall == Verdict::Pass) overall = Verdict::WindowTooSmall;
      }
      return Outcome{{{"verdict", to_string(overall)},
                      {"envelope", {{"g", std::to_string(mg)}, {"n", std::to_string(mn)}}},
                      {"reports", list}},
                     overall == Verdict::Pass ? 0 : 2};
    };
  });
  auto c_min = cohft->add_subcommand("minimality", "Check that a class pulls back to zero along every gluing map");
  c_min->add_option("--in", in)->required();
  c_min->callback([&] {
    action = [&] {
      auto r = check_minimality(io::class_from(read_json(in)));
      return Outcome{io::to_json(r), r.passed() ? 0 : 2};
    };
  });

  // fan
  auto fanc = app.add_subcommand("fan", "Fans, piecewise polynomials and Chow rings");
  fanc->require_subcommand(1);
  auto f_chow = fanc->add_subcommand("chow", "Chow ring of a complete smooth fan");
  f_chow->add_option("--fan", fan)->required();
  f_chow->add_option("--max-deg", max_deg);
  f_chow->callback([&] {
    action = [&] {
      ConeComplex x = io::fan_from(read_json(fan));
      Json j = io::to_json(chow_ring(x));
      Json dims = Json::array();
      for (auto d : pp_dimensions(x, max_deg)) dims.push_back(std::to_string(d));
      j["pp_dimensions"] = dims;
      return Outcome{j};
    };
  });
  auto f_probe = fanc->add_subcommand("probe", "Piecewise-polynomial dimensions along a refinement chain");
  f_probe->add_option("--cone", cone, "rankD for the orthant, or a cone JSON file with rank and rays")->required();
  f_probe->add_option("--script", script, "JSON {\"rays\": [...]} of star subdivisions, or {\"chain\": [fan, ...]}");
  f_probe->add_option("--max-deg", max_deg);
  f_probe->callback([&] {
    action = [&] {
      Json s = script.empty() ? Json{{"rays", Json::array()}} : read_json(script);
      if (s.contains("chain")) {
        std::vector<ConeComplex> chain;
        for (const auto& f : s.at("chain")) chain.push_back(io::fan_from(f));
        return Outcome{io::to_json(logch_probe(chain, max_deg))};
      }
      Cone c;
      static const std::regex orthant(R"(rank(\d+))");
      std::smatch m;
      if (std::regex_match(cone, m, orthant)) {
        c = Cone::orthant(std::stoul(m[1]));
      } else {
        Json cj = read_json(cone);
        c = io::cone_from(cj, static_cast<std::size_t>(io::long_from(cj.at("rank"))));
      }
      std::vector<IntVector> rays;
      if (s.contains("rays"))
        for (const auto& r : s.at("rays")) rays.push_back(io::int_vector_from(r));
      return Outcome{io::to_json(logch_probe(c, rays, max_deg))};
    };
  });
  auto f_sub = fanc->add_subcommand("subdivide", "Star subdivision at a ray");
  f_sub->add_option("--fan", fan)->required();
  f_sub->add_option("--ray", ray)->required();
  f_sub->callback([&] {
    action = [&] { return Outcome{io::to_json(star_subdivision(io::fan_from(read_json(fan)), parse_int_list(ray)))}; };
  });

  // io
  auto echo = app.add_subcommand("echo", "Read a JSON value and write it back in normal form");
  echo->add_option("--kind", kind, "graph, fan, subdivision, class, spec or stack")->required();
  echo->add_option("--in", in)->required();
  echo->callback([&] {
    action = [&] {
      Json j = read_json(in);
      if (kind == "graph") return Outcome{io::to_json(io::graph_from(j))};
      if (kind == "fan") return Outcome{io::to_json(io::fan_from(j))};
      if (kind == "subdivision") return Outcome{io::to_json(io::subdivision_from(j))};
      if (kind == "class") return Outcome{io::to_json(io::class_from(j))};
      if (kind == "spec") return Outcome{io::to_json(io::spec_from(j))};
      if (kind == "stack") return Outcome{io::to_json(*io::stack_from(j))};
      throw Error("UsageError", "unknown kind " + kind);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    diagnostic({{"error", "UsageError"}, {"detail", e.what()}});
    return 1;
  }
  try {
    Outcome o = action();
    write_output(o.result, out);
    return o.code;
  } catch (const Error& e) {
    diagnostic({{"error", e.code()}, {"detail", e.detail()}});
  } catch (const Json::exception& e) {
    diagnostic({{"error", "BadJson"}, {"detail", e.what()}});
  } catch (const std::exception& e) {
    diagnostic({{"error", "InternalError"}, {"detail", e.what()}});
  }
  return 1;
}
