#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvmr/types.hpp"

namespace mvmr {

/// Locale-independent double formatting with 17 significant digits, enough
/// to reload the exact bit pattern.
std::string format_double(double value);
double parse_double(const std::string& token, const std::string& context);
long parse_long(const std::string& token, const std::string& context);

/// Matrix files are plain text: a "rows cols" header line followed by one
/// whitespace-separated line per row.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in, const std::string& context);

void write_matrix_file(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_file(const std::filesystem::path& path);

/// Writes to <path>.tmp and renames, so the target is never half-written.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::vector<std::string> split_tokens(const std::string& line);

}  // namespace mvmr
