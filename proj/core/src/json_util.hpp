#pragma once

// Field access helpers shared by the JSON readers.

#include <string>

#include "json.hpp"
#include "rideshare/instance_io.hpp"

namespace rideshare::detail {

using json = nlohmann::json;

inline const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing field '" + key + "'");
  return *it;
}

inline double number(const json& obj, const char* key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number()) throw ParseError(path + "." + key + ": expected a number");
  return v.get<double>();
}

inline int integer(const json& obj, const char* key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

inline std::string text(const json& obj, const char* key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_string()) throw ParseError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline const json& array(const json& obj, const char* key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_array()) throw ParseError(path + "." + key + ": expected an array");
  return v;
}

/// Parses text, converting byte offsets in syntax errors into line numbers.
inline json parse_document(const std::string& source) {
  try {
    return json::parse(source);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < source.size(); ++i) {
      if (source[i] == '\n') ++line;
    }
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace rideshare::detail
