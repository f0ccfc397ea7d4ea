#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scrap/quad.h"

namespace scrap {

using Record = nlohmann::json;

// Parses the bracketed quad-literal side of a dataset line, e.g.
//   [['fried dumplings', 'food quality', 'positive', 'GREAT']]
// Inner lists hold exactly four strings in file order [at, ac, sp, ot].
// Strings may be single- or double-quoted, with backslash escapes.
// Throws std::runtime_error on malformed input.
std::vector<std::array<std::string, 4>> parse_quad_literal(std::string_view literal);

// Renders quads back into the file literal form, in file element order.
// Values containing a single quote are double-quoted, mirroring the corpus.
std::string render_quad_literal(const std::vector<Quad>& quads);

// Reads a distribution file: one record per line, sentence and quad literal
// separated by "####". Quads are reordered from file order [at, ac, sp, ot]
// into Quad field order and validated. Blank lines are skipped; any
// malformed line or invalid quad fails fast with the line number.
std::vector<Example> load_dataset(const std::filesystem::path& path);

// Line-delimited JSON record files (reasoning caches, training pairs,
// prediction dumps). write/read are exact inverses.
size_t write_records(const std::filesystem::path& path, const std::vector<Record>& records);
std::vector<Record> read_records(const std::filesystem::path& path);

// Appends records to an existing file (creating it if absent).
void append_records(const std::filesystem::path& path, const std::vector<Record>& records);

}  // namespace scrap
