#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "pradius/markov.hpp"

namespace pradius {

/// Parsed problem file: a matrix family, an optional transition matrix, the
/// moment order p, and free-form string labels. The on-disk format is UTF-8
/// JSON with row-major nested arrays.
struct ProblemFile {
    std::vector<Matrix> matrices;
    std::optional<Matrix> transition;
    int p = 1;
    std::map<std::string, std::string> metadata;

    bool is_markov() const { return transition.has_value(); }
    MatrixFamily family() const { return MatrixFamily(matrices); }
    MarkovModel model() const;
};

/// Parses problem JSON; throws std::invalid_argument with a field-level
/// diagnostic (byte offset for syntax errors) on malformed input.
ProblemFile parse_problem(const std::string& text);

ProblemFile load_problem(const std::filesystem::path& path);

/// Canonical JSON serialization; parse(serialize(parse(x))) is semantically
/// identical to parse(x) with bit-equal matrices.
std::string serialize_problem(const ProblemFile& problem);

}  // namespace pradius
