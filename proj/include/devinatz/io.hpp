#pragma once

// JSON interchange: moment tables, atomic measures (and solutions), complex
// matrices. Output is deterministic: keys sorted, doubles with 17 significant
// digits.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "devinatz/linalg.hpp"
#include "devinatz/moments.hpp"

namespace devinatz::io {

using json = nlohmann::json;

json to_json(const MomentTable& table);
/// Throws DomainError on missing fields, duplicate or missing (m, n) entries.
MomentTable moment_table_from_json(const json& j);

json to_json(const AtomicMeasure& measure);
/// Ingests (wraps and merges) the atoms; throws DomainError on bad atoms.
AtomicMeasure measure_from_json(const json& j);

/// Row-major array of rows of [re, im] pairs.
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

std::string dump(const json& j);

/// Throws DomainError when the file cannot be read or parsed.
json read_file(const std::filesystem::path& path);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace devinatz::io
