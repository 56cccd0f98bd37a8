#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dc/model.hpp"

namespace dc {

inline constexpr const char *model_format_version = "1.0.0";

// Canonical JSON (sorted keys, two-space indent, LF, trailing newline).
std::string model_to_json_text(const ConceptualModel &model);
// Rejects unknown fields with a path-precise SchemaError; a formatVersion
// with a different major number is a VersionMismatch.
ConceptualModel model_from_json_text(const std::string &text);

ConceptualModel read_model(const std::string &path);
void write_model(const ConceptualModel &model, const std::string &path);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

// Full command-line surface (encode / validate / convert / reason /
// roundtrip). Returns the process exit code: 0 success, 1 check failed,
// 2 usage or I/O error.
int cli_run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace dc
