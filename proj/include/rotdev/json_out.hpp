#pragma once

#include <string>

#include <json.hpp>

namespace rotdev {

using Json = nlohmann::ordered_json;

/// Serialises with insertion-ordered keys, two-space indentation and every
/// floating-point number printed with 17 significant digits. Non-finite
/// numbers become null.
std::string dump_json(const Json& value);

/// %.17g
std::string format_double(double v);

} // namespace rotdev
