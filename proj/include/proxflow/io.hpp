#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace proxflow::io {

/// Locale-independent float parse; throws ParseError on garbage.
double parse_double(std::string_view token);
long long parse_integer(std::string_view token);

/// 12 significant digits, independent of the global locale.
std::string format_double(double x);

/// One float per line (any whitespace separates values); blank lines and `#`
/// comments are skipped.
std::vector<double> read_vector(std::istream& in);
std::vector<double> read_vector_file(const std::string& path);
void write_vector(std::ostream& out, const std::vector<double>& v);
void write_vector_file(const std::string& path, const std::vector<double>& v);

/// First line `n p`, then n whitespace-separated rows.
Eigen::MatrixXd read_matrix(std::istream& in);
Eigen::MatrixXd read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m);

/// Splits on ASCII whitespace.
std::vector<std::string_view> split_whitespace(std::string_view line);

/// 64-bit FNV-1a of a file's bytes, hex encoded.
std::string file_digest(const std::string& path);

}  // namespace proxflow::io
