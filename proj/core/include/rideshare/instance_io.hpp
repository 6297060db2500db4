#pragma once

#include <string>
#include <vector>

#include "rideshare/errors.hpp"
#include "rideshare/model.hpp"

namespace rideshare {

/// Syntax or schema problem in an input document. The message names the
/// line (for syntax errors) or the JSON path of the offending field.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Parses an instance document. A rider whose alternative cost exceeds its
/// trip value is clamped to the trip value and a warning is appended.
Instance parse_instance(const std::string& text, std::vector<std::string>* warnings = nullptr);
Instance load_instance(const std::string& path, std::vector<std::string>* warnings = nullptr);

std::string dump_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::string& path);

/// Reads a whole file; throws std::runtime_error if it cannot be opened.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rideshare
