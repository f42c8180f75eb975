#pragma once

#include <filesystem>
#include <string>

#include "l1codec/linalg.hpp"

namespace l1codec {

// Text format shared by all CLI subcommands: first line "rows cols", then
// rows lines of cols space-separated reals, printed with 17 significant
// digits so values round-trip exactly.

Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

// Vectors are stored as n x 1 matrices; a 1 x n file is accepted and
// flattened on read.
Vector read_vector(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, const Vector& v);

// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_real(double value);

}  // namespace l1codec
