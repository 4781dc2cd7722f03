#pragma once

#include <iosfwd>
#include <string>

#include "odeim/linalg.hpp"

namespace odeim {

// Text format: first line "rows cols", then rows lines of cols decimal floats.
// Binary format: magic "DMAT", rows and cols as 64-bit little-endian unsigned
// integers, then row-major 64-bit little-endian IEEE-754 floats.
// read_matrix sniffs the magic bytes and accepts either format.
// All entries are validated to be finite.

Matrix read_matrix(const std::string& path);
Matrix read_matrix_text(std::istream& in);
Matrix read_matrix_binary(std::istream& in);

void write_matrix_text(const Matrix& m, const std::string& path);
void write_matrix_text(const Matrix& m, std::ostream& out);
void write_matrix_binary(const Matrix& m, const std::string& path);
void write_matrix_binary(const Matrix& m, std::ostream& out);

}  // namespace odeim
