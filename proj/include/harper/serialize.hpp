#pragma once

#include <json.hpp>

#include "harper/algebra.hpp"

namespace harper {

using Json = nlohmann::json;

// JSON codecs for the declarable kinds (trivial, magnetic_z2, symplectic and
// pullbacks/tables thereof are re-derivable from config; function-backed
// multipliers are not serialized). Rational phases round-trip exactly as
// integer pairs, coefficients as shortest-round-trip doubles.
Json to_json(const GroupModel& m);
GroupModel group_from_json(const Json& j);

Json to_json(const GroupElement& e);
GroupElement element_from_json(const Json& j, const GroupModel& model);

Json to_json(const Multiplier& s);
Multiplier multiplier_from_json(const Json& j);

Json to_json(const AlgebraElement& a);
AlgebraElement operator_from_json(const Json& j);

}  // namespace harper
