#include "mvmr/text_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mvmr {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                    std::chars_format::general, 17);
  if (result.ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, result.ptr);
}

double parse_double(const std::string& token, const std::string& context) {
  double value = 0.0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    throw DataError(context + ": cannot parse number '" + token + "'");
  }
  return value;
}

long parse_long(const std::string& token, const std::string& context) {
  long value = 0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    throw DataError(context + ": cannot parse integer '" + token + "'");
  }
  return value;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in, const std::string& context) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(context + ": missing matrix header");
  const auto header = split_tokens(line);
  if (header.size() != 2) throw DataError(context + ": matrix header must be 'rows cols'");
  const long rows = parse_long(header[0], context);
  const long cols = parse_long(header[1], context);
  if (rows < 0 || cols < 0) throw DataError(context + ": negative matrix shape");

  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw DataError(context + ": matrix row " + std::to_string(i) + " is missing");
    }
    const auto tokens = split_tokens(line);
    if (static_cast<long>(tokens.size()) != cols) {
      throw DataError(context + ": row " + std::to_string(i) + " has " +
                      std::to_string(tokens.size()) + " entries, expected " +
                      std::to_string(cols));
    }
    for (long j = 0; j < cols; ++j) {
      m(i, j) = parse_double(tokens[static_cast<size_t>(j)],
                             context + " row " + std::to_string(i));
    }
  }
  return m;
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& m) {
  std::ostringstream out;
  write_matrix(out, m);
  atomic_write_file(path, out.str());
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_matrix(in, path.string());
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw DataError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mvmr
