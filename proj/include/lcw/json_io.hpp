#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace lcw {

using Json = nlohmann::ordered_json;

/// Serializes with every floating-point value printed to 17 significant
/// digits, so identical inputs give byte-identical files.
std::string dump_json(const Json &j, int indent = 2);

/// "%.17g"
std::string format_double17(double v);

} // namespace lcw
