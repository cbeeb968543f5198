#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "chiplet/model.hpp"

namespace chiplet {

/// Parses and validates a spec document (JSON, schema in docs/spec-format.md).
/// Ports come back in normalized, symmetric form.
/// Throws ParseError on malformed JSON, ValidationError naming the field otherwise.
SpecDocument load_spec(std::string_view json_text);
SpecDocument load_spec_file(const std::filesystem::path& path);

/// Serializes the normalized form; load_spec(dump_spec(d)) == d for any loaded d.
std::string dump_spec(const SpecDocument& doc);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace chiplet
