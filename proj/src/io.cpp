#include "proxflow/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "proxflow/errors.hpp"

namespace proxflow::io {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  return out;
}

bool is_blank_or_comment(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

}  // namespace

double parse_double(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || token.empty()) {
    throw ParseError("not a number: '" + std::string(token) + "'");
  }
  return value;
}

long long parse_integer(std::string_view token) {
  long long value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || token.empty()) {
    throw ParseError("not an integer: '" + std::string(token) + "'");
  }
  return value;
}

std::string format_double(double x) {
  // %g never consults the global locale as long as nobody calls setlocale.
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<double> read_vector(std::istream& in) {
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    if (is_blank_or_comment(line)) continue;
    for (auto tok : split_whitespace(line)) v.push_back(parse_double(tok));
  }
  return v;
}

std::vector<double> read_vector_file(const std::string& path) {
  auto in = open_input(path);
  return read_vector(in);
}

void write_vector(std::ostream& out, const std::vector<double>& v) {
  for (double x : v) out << format_double(x) << '\n';
}

void write_vector_file(const std::string& path, const std::vector<double>& v) {
  auto out = open_output(path);
  write_vector(out, v);
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  std::string line;
  std::vector<std::string_view> head;
  while (std::getline(in, line)) {
    if (is_blank_or_comment(line)) continue;
    head = split_whitespace(line);
    break;
  }
  if (head.size() != 2) throw ParseError("matrix header must be `n p`");
  const long long n = parse_integer(head[0]);
  const long long p = parse_integer(head[1]);
  if (n <= 0 || p <= 0) throw ParseError("matrix dimensions must be positive");
  Eigen::MatrixXd m(n, p);
  long long row = 0;
  while (row < n && std::getline(in, line)) {
    if (is_blank_or_comment(line)) continue;
    auto toks = split_whitespace(line);
    if (static_cast<long long>(toks.size()) != p) {
      throw ParseError("matrix row " + std::to_string(row + 1) + " has " + std::to_string(toks.size()) +
                       " entries, expected " + std::to_string(p));
    }
    for (long long c = 0; c < p; ++c) m(row, c) = parse_double(toks[c]);
    ++row;
  }
  if (row != n) throw ParseError("matrix has fewer rows than declared");
  return m;
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
  auto in = open_input(path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m) {
  auto out = open_output(path);
  write_matrix(out, m);
}

std::string file_digest(const std::string& path) {
  auto in = open_input(path);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace proxflow::io
