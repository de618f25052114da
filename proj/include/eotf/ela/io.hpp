#pragma once

#include "json.hpp"

#include "eotf/ela/features.hpp"
#include "eotf/ela/normalize.hpp"

namespace eotf::ela {

using Json = nlohmann::ordered_json;

/// {"<feature name>": value | null, ...} in slot order.
Json to_json(const ElaVector& v);
/// Unknown keys are ignored; missing or null keys become UNDEFINED.
ElaVector ela_vector_from_json(const Json& j);

/// Feature-vector JSON plus "normalized": true.
Json to_json(const NormalizedVector& v);

Json to_json(const Bounds& b);
Bounds bounds_from_json(const Json& j);

}  // namespace eotf::ela
