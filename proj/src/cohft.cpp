#include "logtrop/cohft.hpp"

#include <algorithm>
#include <functional>

#include "logtrop/error.hpp"

namespace logtrop {

namespace {

constexpr std::size_t kMaxWitnesses = 5;

std::string labels_string(const Labels& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return "(" + s + ")";
}

std::string sig(int g, int n) { return "(" + std::to_string(g) + "," + std::to_string(n) + ")"; }

IntVector to_ints(const Labels& v) {
  IntVector out;
  for (long x : v) out.emplace_back(x);
  return out;
}

long sum(const Labels& v) {
  long s = 0;
  for (long x : v) s += x;
  return s;
}

Labels concat(Labels v, std::initializer_list<long> tail) {
  v.insert(v.end(), tail);
  return v;
}

bool in_window(const CohFTSpec& spec, long x) {
  return std::find(spec.window.begin(), spec.window.end(), x) != spec.window.end();
}

// Records the differences of two classes; returns whether they agree.
bool compare(AxiomReport& r, const Labels& input, const PPClass& lhs, const PPClass& rhs, const std::string& prefix) {
  auto diffs = differences(lhs, rhs);
  if (diffs.empty()) return true;
  r.verdict = Verdict::Fail;
  for (const auto& d : diffs) {
    if (r.witnesses.size() >= kMaxWitnesses) break;
    r.witnesses.push_back({input, prefix + d.stratum, d.cone, d.difference, ""});
  }
  return false;
}

void window_note(AxiomReport& r, const CohFTSpec& spec) {
  if (spec.finite_basis()) {
    r.notes.push_back("finite basis: every pairing sum is finite");
  } else {
    std::string w;
    for (long x : spec.window) w += (w.empty() ? "" : ",") + std::to_string(x);
    r.notes.push_back("finiteness of the pairing sums is certified on the window {" + w + "} only");
  }
}

// The DR rule without user L, P: Omega_{g,n}(a) is non-zero whenever sum a = 0
// and either g = 0 or some a_i is non-zero.
bool standard_dr(const CohFTSpec& spec, int g, int n) {
  return spec.rule == CohFTSpec::Rule::DR && !spec.dr_L.count({g, n}) && !spec.dr_P.count({g, n});
}

}  // namespace

CohFTSpec CohFTSpec::constant_spec(const Rational& c, int max_g, int max_n) {
  CohFTSpec s;
  s.rule = Rule::Constant;
  s.window = {0};
  s.eta[{0, 0}] = 1;
  s.eta_inverse[{0, 0}] = 1;
  s.unit = 0;
  s.constant = c;
  s.max_g = max_g;
  s.max_n = max_n;
  return s;
}

CohFTSpec CohFTSpec::dr_spec(long window, int max_g, int max_n) {
  if (window < 0) throw Error("InvalidWindow", "window must be non-negative");
  CohFTSpec s;
  s.rule = Rule::DR;
  for (long a = -window; a <= window; ++a) {
    s.window.push_back(a);
    s.eta[{a, -a}] = 1;
    s.eta_inverse[{a, -a}] = 1;
  }
  s.unit = 0;
  s.max_g = max_g;
  s.max_n = max_n;
  return s;
}

CohFTSpec CohFTSpec::table_spec(std::vector<long> basis, std::map<std::pair<long, long>, Rational> eta,
                                std::optional<long> unit, int max_g, int max_n) {
  CohFTSpec s;
  s.rule = Rule::Table;
  std::sort(basis.begin(), basis.end());
  s.window = std::move(basis);
  s.eta = std::move(eta);
  s.unit = unit;
  s.max_g = max_g;
  s.max_n = max_n;
  const std::size_t k = s.window.size();
  RatMatrix m(k, RatVector(2 * k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = s.pairing(s.window[i], s.window[j]);
    m[i][k + i] = 1;
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && m[p][c] == 0) ++p;
    if (p == k) throw Error("BadPairing", "pairing is degenerate");
    std::swap(m[p], m[c]);
    const Rational piv = m[c][c];
    for (auto& x : m[c]) x /= piv;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t t = 0; t < 2 * k; ++t) m[r][t] -= f * m[c][t];
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (m[i][k + j] != 0) s.eta_inverse[{s.window[i], s.window[j]}] = m[i][k + j];
  return s;
}

void CohFTSpec::require_envelope(int g, int n) const {
  if (!in_envelope(g, n))
    throw Error("EnvelopeExceeded", sig(g, n) + " is outside the envelope g<=" + std::to_string(max_g) +
                                        ", n<=" + std::to_string(max_n));
}

Rational CohFTSpec::pairing(long i, long j) const {
  if (rule == Rule::DR) return i + j == 0 ? 1 : 0;
  auto it = eta.find({i, j});
  return it == eta.end() ? Rational(0) : it->second;
}

Rational CohFTSpec::inverse_pairing(long i, long j) const {
  if (rule == Rule::DR) return i + j == 0 ? 1 : 0;
  auto it = eta_inverse.find({i, j});
  return it == eta_inverse.end() ? Rational(0) : it->second;
}

void CohFTSpec::validate() const {
  for (long i : window)
    for (long j : window) {
      if (pairing(i, j) != pairing(j, i)) throw Error("BadPairing", "eta is not symmetric");
      Rational s = 0;
      for (long k : window) s += pairing(i, k) * inverse_pairing(k, j);
      if (s != (i == j ? 1 : 0)) throw Error("BadPairing", "eta * eta^-1 is not the identity on the window");
    }
  if (unit && finite_basis() && !in_window(*this, *unit)) throw Error("BadPairing", "unit is not a basis label");
}

PPClass CohFTSpec::omega(int g, int n, const Labels& v) const {
  require_envelope(g, n);
  if (v.size() != static_cast<std::size_t>(n))
    throw Error("DimensionMismatch", "expected " + std::to_string(n) + " labels");
  if (finite_basis())
    for (long x : v)
      if (!in_window(*this, x)) throw Error("UnknownLabel", std::to_string(x) + " is not a basis label");
  auto stack = build_moduli(g, n, true);
  switch (rule) {
    case Rule::Constant:
      return PPClass::constant(stack, constant);
    case Rule::DR: {
      std::optional<PPClass> L, P;
      if (auto it = dr_L.find({g, n}); it != dr_L.end()) L = it->second;
      if (auto it = dr_P.find({g, n}); it != dr_P.end()) P = it->second;
      return dr_polynomial(g, n, to_ints(v), L, P).value;
    }
    case Rule::Table: {
      auto it = table.find({g, n, v});
      return it == table.end() ? PPClass::constant(stack, 0) : it->second;
    }
  }
  return PPClass::constant(stack, 0);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::WindowTooSmall:
      return "window-too-small";
  }
  return "?";
}

std::vector<Labels> window_inputs(const CohFTSpec& spec, int n, std::size_t limit) {
  std::vector<Labels> out;
  Labels v(n);
  std::function<void(int)> walk = [&](int i) {
    if (out.size() >= limit) return;
    if (i == n) {
      out.push_back(v);
      return;
    }
    for (long x : spec.window) {
      v[i] = x;
      walk(i + 1);
    }
  };
  if (!spec.window.empty() || n == 0) walk(0);
  return out;
}

AxiomReport check_sn_equivariance(const CohFTSpec& spec, int g, int n, const std::vector<Labels>& inputs) {
  spec.require_envelope(g, n);
  AxiomReport r{"sn", g, n, "S_" + std::to_string(n), inputs, Verdict::Pass, {}, {}, 0};
  r.notes.push_back("generating set: adjacent transpositions");
  for (int k = 0; k + 1 < n; ++k) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::swap(perm[k], perm[k + 1]);
    const StackMorphism sigma = relabel_morphism(g, n, perm);
    for (const auto& v : inputs) {
      Labels w(n);
      for (int i = 0; i < n; ++i) w[i] = v[perm[i]];
      compare(r, v, pullback(sigma, spec.omega(g, n, v)), spec.omega(g, n, w),
              "swap " + std::to_string(k + 1) + "," + std::to_string(k + 2) + ": ");
    }
  }
  return r;
}

AxiomReport check_separating_gluing(const CohFTSpec& spec, int g1, int n1, int g2, int n2,
                                    const std::vector<Labels>& inputs) {
  const int g = g1 + g2, n = n1 + n2;
  spec.require_envelope(g1, n1 + 1);
  spec.require_envelope(g2, n2 + 1);
  spec.require_envelope(g, n);
  const StackMorphism gl = gluing_morphism(g1, n1, g2, n2);
  AxiomReport r{"sep", g, n, gl.name, inputs, Verdict::Pass, {}, {}, 0};
  window_note(r, spec);
  bool window_short = false;
  for (const auto& v : inputs) {
    if (v.size() != static_cast<std::size_t>(n)) throw Error("DimensionMismatch", "input " + labels_string(v));
    const Labels v1(v.begin(), v.begin() + n1), v2(v.begin() + n1, v.end());
    PPClass lhs = pullback(gl, spec.omega(g, n, v));
    PPClass rhs = PPClass::constant(gl.source, 0);
    std::vector<std::pair<long, long>> pairs;
    if (spec.finite_basis()) {
      for (long i : spec.window)
        for (long j : spec.window)
          if (spec.inverse_pairing(i, j) != 0) pairs.emplace_back(i, j);
    } else {
      // Omega(v1, e_i) vanishes unless i = -sum(v1).
      const long i = -sum(v1);
      if (!in_window(spec, i) || !in_window(spec, -i)) {
        window_short = true;
        r.witnesses.push_back({v, "", "", "", "summand label " + std::to_string(i) + " lies outside the window"});
        continue;
      }
      pairs.emplace_back(i, -i);
    }
    std::size_t nonzero = 0;
    for (auto [i, j] : pairs) {
      PPClass a = spec.omega(g1, n1 + 1, concat(v1, {i}));
      PPClass b = spec.omega(g2, n2 + 1, concat(v2, {j}));
      if (a.is_zero() || b.is_zero()) continue;
      ++nonzero;
      rhs = rhs + exterior_product(a, b).scaled(spec.inverse_pairing(i, j));
    }
    r.max_summands = std::max(r.max_summands, nonzero);
    compare(r, v, lhs, rhs, "");
  }
  if (window_short && r.verdict == Verdict::Pass) r.verdict = Verdict::WindowTooSmall;
  return r;
}

AxiomReport check_loop_axiom(const CohFTSpec& spec, int g, int n, const std::vector<Labels>& inputs) {
  if (g < 1) throw Error("SignatureMismatch", "loop axiom needs g >= 1");
  spec.require_envelope(g, n);
  spec.require_envelope(g - 1, n + 2);
  const StackMorphism lm = loop_gluing_morphism(g, n);
  AxiomReport r{"loop", g, n, lm.name, inputs, Verdict::Pass, {}, {}, 0};
  window_note(r, spec);
  bool window_short = false;
  bool infinite = false;
  for (const auto& v : inputs) {
    if (v.size() != static_cast<std::size_t>(n)) throw Error("DimensionMismatch", "input " + labels_string(v));
    PPClass lhs = pullback(lm, spec.omega(g, n, v));
    PPClass rhs = PPClass::constant(lm.source, 0);
    std::vector<std::pair<long, long>> pairs;
    if (spec.finite_basis() || sum(v) != 0) {
      for (long i : spec.window)
        for (long j : spec.window)
          if (spec.inverse_pairing(i, j) != 0) pairs.emplace_back(i, j);
    } else {
      // Every label i contributes Omega(v, e_i, e_-i).
      for (long i : spec.window)
        if (in_window(spec, -i)) pairs.emplace_back(i, -i);
      if (standard_dr(spec, g - 1, n + 2)) {
        infinite = true;
        r.witnesses.push_back({v, "", "", "",
                               "InfiniteSum: Omega_" + sig(g - 1, n + 2) + "(v, e_i, e_-i) is non-zero for every label i" +
                                   (g - 1 == 0 ? "" : " other than 0") + "; the sum is not finite"});
      } else {
        window_short = true;
        r.witnesses.push_back({v, "", "", "", "summands for labels outside the window cannot be excluded"});
      }
    }
    std::size_t nonzero = 0;
    for (auto [i, j] : pairs) {
      PPClass a = spec.omega(g - 1, n + 2, concat(v, {i, j}));
      if (a.is_zero()) continue;
      ++nonzero;
      rhs = rhs + a.scaled(spec.inverse_pairing(i, j));
    }
    r.max_summands = std::max(r.max_summands, nonzero);
    compare(r, v, lhs, rhs, infinite ? "window partial sum: " : "");
  }
  if (infinite)
    r.verdict = Verdict::Fail;
  else if (window_short && r.verdict == Verdict::Pass)
    r.verdict = Verdict::WindowTooSmall;
  return r;
}

AxiomReport check_unit_axioms(const CohFTSpec& spec) {
  if (!spec.unit) throw Error("NoUnitDeclared", "no unit label is declared");
  const long u = *spec.unit;
  AxiomReport r{"unit", spec.max_g, spec.max_n, "envelope", {}, Verdict::Pass, {}, {}, 0};
  window_note(r, spec);
  for (int g = 0; g <= spec.max_g; ++g)
    for (int n = 0; n + 1 <= spec.max_n; ++n) {
      if (!spec.in_envelope(g, n) || !spec.in_envelope(g, n + 1)) continue;
      const StackMorphism pi = forgetful_morphism(g, n, true);
      for (const auto& v : window_inputs(spec, n)) {
        r.inputs.push_back(v);
        compare(r, v, spec.omega(g, n + 1, concat(v, {u})), pullback(pi, spec.omega(g, n, v)),
                "forget " + sig(g, n + 1) + "->" + sig(g, n) + ": ");
      }
    }
  if (spec.in_envelope(0, 3)) {
    auto stack = build_moduli(0, 3, true);
    for (long a : spec.window)
      for (long b : spec.window) {
        Labels v{a, b, u};
        r.inputs.push_back(v);
        compare(r, v, spec.omega(0, 3, v), PPClass::constant(stack, spec.pairing(a, b)), "normalisation (0,3): ");
      }
  }
  return r;
}

AxiomReport check_minimality(const PPClass& gamma) {
  const auto& stack = gamma.base();
  if (stack->factors().size() != 1 || !stack->factors()[0].pointed)
    throw Error("SignatureMismatch", "minimality needs a class on a pointed M(g,n)");
  const int g = stack->factors()[0].g, n = stack->factors()[0].n;
  AxiomReport r{"minimality", g, n, stack->name(), {}, Verdict::Pass, {}, {}, 0};
  std::size_t maps = 0;
  auto record = [&](const StackMorphism& m, const std::string& label) {
    ++maps;
    PPClass pulled = pullback(m, gamma);
    compare(r, {}, pulled, PPClass::constant(m.source, 0), label + ": ");
  };
  for (int g1 = 0; g1 <= g; ++g1)
    for (int n1 = 0; n1 <= n; ++n1) {
      const int g2 = g - g1, n2 = n - n1;
      if (2 * g1 - 2 + n1 + 1 <= 0 || 2 * g2 - 2 + n2 + 1 <= 0) continue;
      const StackMorphism gl = gluing_morphism(g1, n1, g2, n2);
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != n1) continue;
        std::vector<int> perm;
        std::string side;
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1) {
            perm.push_back(i);
            side += (side.empty() ? "" : ",") + std::to_string(i + 1);
          }
        for (int i = 0; i < n; ++i)
          if (!(mask >> i & 1)) perm.push_back(i);
        record(compose(gl, relabel_morphism(g, n, perm)), gl.name + " legs {" + side + "}");
      }
    }
  if (g >= 1) record(loop_gluing_morphism(g, n), "loop");
  r.notes.push_back(std::to_string(maps) + " gluing maps checked");
  if (maps == 0) r.notes.push_back("no gluing maps have this target");
  return r;
}

std::vector<AxiomReport> check_axioms(const CohFTSpec& spec, const std::vector<std::string>& axioms, int max_g,
                                      int max_n) {
  if (max_g > spec.max_g || max_n > spec.max_n)
    throw Error("EnvelopeExceeded", "requested envelope g<=" + std::to_string(max_g) + ", n<=" + std::to_string(max_n) +
                                        " exceeds the declared g<=" + std::to_string(spec.max_g) +
                                        ", n<=" + std::to_string(spec.max_n));
  auto inside = [&](int g, int n) { return spec.in_envelope(g, n) && g <= max_g && n <= max_n; };
  std::vector<AxiomReport> out;
  for (const auto& ax : axioms) {
    if (ax == "sn") {
      for (int g = 0; g <= max_g; ++g)
        for (int n = 2; n <= max_n; ++n)
          if (inside(g, n)) out.push_back(check_sn_equivariance(spec, g, n, window_inputs(spec, n)));
    } else if (ax == "sep") {
      for (int g = 0; g <= max_g; ++g)
        for (int n = 0; n <= max_n; ++n)
          for (int g1 = 0; g1 <= g; ++g1)
            for (int n1 = 0; n1 <= n; ++n1)
              if (inside(g, n) && inside(g1, n1 + 1) && inside(g - g1, n - n1 + 1))
                out.push_back(check_separating_gluing(spec, g1, n1, g - g1, n - n1, window_inputs(spec, n)));
    } else if (ax == "loop") {
      for (int g = 1; g <= max_g; ++g)
        for (int n = 0; n <= max_n; ++n)
          if (inside(g, n) && inside(g - 1, n + 2)) out.push_back(check_loop_axiom(spec, g, n, window_inputs(spec, n)));
    } else if (ax == "unit") {
      out.push_back(check_unit_axioms(spec));
    } else {
      throw Error("UnknownAxiom", ax);
    }
  }
  return out;
}

}  // namespace logtrop
