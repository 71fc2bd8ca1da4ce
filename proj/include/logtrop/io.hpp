#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "logtrop/cohft.hpp"
#include "logtrop/cones.hpp"
#include "logtrop/fan.hpp"
#include "logtrop/graphs.hpp"
#include "logtrop/moduli.hpp"
#include "logtrop/pp.hpp"
#include "logtrop/tropdiv.hpp"

/// JSON forms of the library values. Every integer is written as a decimal
/// string; readers also accept JSON numbers. Keys are emitted sorted, so
/// `dump` output is byte-stable.
namespace logtrop::io {

using Json = nlohmann::json;

Json to_json(const Integer& v);
Json to_json(const Rational& v);
Json to_json(const IntVector& v);
Json to_json(const RatVector& v);
Integer integer_from(const Json& j);
Rational rational_from(const Json& j);
long long_from(const Json& j);
IntVector int_vector_from(const Json& j);

/// {"genus", "vertices": [{"id", "genus"}], "edges": [[u, v]], "legs": [vertex], "digest"}
Json to_json(const StableGraph& g);
RawGraph raw_graph_from(const Json& j);
/// Throws InvalidGraph listing the validation issues.
StableGraph graph_from(const Json& j);
Json to_json(const ValidationResult& r);

Json to_json(const Cone& c);
Cone cone_from(const Json& j, std::size_t rank);
/// {"rank", "cones": [{"rays"}]}
Json to_json(const ConeComplex& fan);
ConeComplex fan_from(const Json& j);
/// {"target", "refined", "assignment": [{"rays"}]}
Json to_json(const Subdivision& s);
Subdivision subdivision_from(const Json& j);

/// {"text", "terms": [{"coeff", "powers": [[var, exp]]}]}; variables are indices.
Json to_json(const Polynomial& p, const std::vector<std::string>& labels);
Polynomial polynomial_from(const Json& j);

/// Parses "M(g,n)", "Mbar(g,n)" and products joined by " x ".
StackPtr stack_from_name(const std::string& name);
/// Strata with coordinate labels, automorphisms and face tables.
Json to_json(const ConeStack& s);
StackPtr stack_from(const Json& j);

/// {"stack", "strata": [{"graph_digest", "labels", "cones": [{"rays", "poly"}]}]}
Json to_json(const PPClass& c);
PPClass class_from(const Json& j);
Json to_json(const ValidationReport& r);
Json to_json(const StackMorphism& m);

Json to_json(const CohFTSpec& s);
CohFTSpec spec_from(const Json& j);
Json to_json(const AxiomReport& r);

Json to_json(const SlopeEnumeration& e);
Json to_json(const DivCone& c);
Json to_json(const SquareReport& r);
Json to_json(const SharpMonoid& m);

Json to_json(const FanChowPresentation& p);
Json to_json(const ProbeResult& p);

/// Emitted text: two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace logtrop::io
