#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "qgate/complex_matrix.hpp"

namespace qgate {

/// {"rows": r, "cols": c, "re": [...], "im": [...]} in row-major order.
nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Accepts the split re/im form and the interleaved
/// {"rows", "cols", "data": [re0, im0, re1, im1, ...]} form. `field` names
/// the value in error messages.
ComplexMatrix matrix_from_json(const nlohmann::json& j, std::string_view field = "matrix");

nlohmann::json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const nlohmann::json& j, std::string_view field = "vector");

/// Parses a whole file; throws ParseError on malformed JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);
/// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

ComplexMatrix load_matrix(const std::filesystem::path& path, std::string_view field = "matrix");
/// Loads a matrix and rejects it unless it is square and unitary within tol.
ComplexMatrix load_unitary(const std::filesystem::path& path, std::string_view field,
                           double tol = 1e-10);

}  // namespace qgate
