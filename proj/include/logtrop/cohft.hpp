#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "logtrop/pp.hpp"

namespace logtrop {

using Labels = std::vector<long>;

/// Data of a (partial) log CohFT with values in piecewise-polynomial classes.
///
/// Basis vectors are indexed by integer labels. A finite basis is the whole
/// index set; the DR rule has basis Z, of which `window` is the declared
/// finite part.
struct CohFTSpec {
  enum class Rule { Constant, DR, Table };

  Rule rule = Rule::Constant;
  std::vector<long> window;
  std::map<std::pair<long, long>, Rational> eta;
  std::map<std::pair<long, long>, Rational> eta_inverse;
  std::optional<long> unit;
  int max_g = 1;
  int max_n = 4;

  Rational constant = 1;
  /// Table entries keyed by (g, n, labels); missing entries are the zero class.
  std::map<std::tuple<int, int, Labels>, PPClass> table;
  /// Optional L and P inputs of the DR rule, per (g, n).
  std::map<std::pair<int, int>, PPClass> dr_L;
  std::map<std::pair<int, int>, PPClass> dr_P;

  /// One-dimensional basis {0}, eta = 1, Omega = c.
  static CohFTSpec constant_spec(const Rational& c = 1, int max_g = 1, int max_n = 4);
  /// Omega(a) = dr_polynomial(g, n, a); eta(e_a, e_b) = [a + b = 0]; unit e_0.
  static CohFTSpec dr_spec(long window, int max_g = 1, int max_n = 4);
  /// Finite basis table spec with the given pairing (inverse computed).
  static CohFTSpec table_spec(std::vector<long> basis, std::map<std::pair<long, long>, Rational> eta,
                              std::optional<long> unit, int max_g, int max_n);

  bool finite_basis() const { return rule != Rule::DR; }
  bool in_envelope(int g, int n) const { return g >= 0 && n >= 0 && g <= max_g && n <= max_n && 2 * g - 2 + n > 0; }
  /// Throws EnvelopeExceeded.
  void require_envelope(int g, int n) const;
  /// Checks symmetry of eta and eta * eta_inverse = 1 on the window; throws BadPairing.
  void validate() const;
  Rational pairing(long i, long j) const;
  Rational inverse_pairing(long i, long j) const;

  PPClass omega(int g, int n, const Labels& v) const;
};

enum class Verdict { Pass, Fail, WindowTooSmall };
std::string to_string(Verdict v);

struct Witness {
  Labels input;
  std::string stratum;
  std::string cone;
  std::string difference;
  std::string detail;
};

struct AxiomReport {
  std::string axiom;  // sn, sep, loop, unit, minimality
  int g = 0;
  int n = 0;
  std::string instance;
  std::vector<Labels> inputs;
  Verdict verdict = Verdict::Pass;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;
  /// Largest number of non-zero pairing summands over the inputs.
  std::size_t max_summands = 0;

  bool passed() const { return verdict == Verdict::Pass; }
};

/// All label tuples of length n from the window, capped at `limit` tuples.
std::vector<Labels> window_inputs(const CohFTSpec& spec, int n, std::size_t limit = 256);

AxiomReport check_sn_equivariance(const CohFTSpec& spec, int g, int n, const std::vector<Labels>& inputs);
AxiomReport check_separating_gluing(const CohFTSpec& spec, int g1, int n1, int g2, int n2,
                                    const std::vector<Labels>& inputs);
AxiomReport check_loop_axiom(const CohFTSpec& spec, int g, int n, const std::vector<Labels>& inputs);
/// Forgetful compatibility on the envelope and the (0,3) normalisation.
AxiomReport check_unit_axioms(const CohFTSpec& spec);
AxiomReport check_minimality(const PPClass& gamma);

/// Runs the named axioms over every instance of the envelope (g <= max_g, n <= max_n).
std::vector<AxiomReport> check_axioms(const CohFTSpec& spec, const std::vector<std::string>& axioms, int max_g,
                                      int max_n);

}  // namespace logtrop
