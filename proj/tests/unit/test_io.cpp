#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "proxflow/errors.hpp"
#include "proxflow/io.hpp"

using namespace proxflow;

TEST_CASE("number parsing and formatting") {
  CHECK(io::parse_double("0.25") == 0.25);
  CHECK(io::parse_double("+1e-3") == 1e-3);
  CHECK_THROWS_AS(io::parse_double("1,5"), ParseError);
  CHECK_THROWS_AS(io::parse_double(""), ParseError);
  CHECK(io::parse_integer("42") == 42);
  CHECK_THROWS_AS(io::parse_integer("4.2"), ParseError);
  CHECK(io::format_double(2.0 / 3.0) == "0.666666666667");
  CHECK(io::format_double(0.1) == "0.1");
}

TEST_CASE("vector and matrix text formats") {
  std::istringstream in("# header\n0.5\n\n-1\n");
  auto v = io::read_vector(in);
  CHECK(v == std::vector<double>{0.5, -1.0});
  std::istringstream two("0.5 0.6\n");
  CHECK(io::read_vector(two).size() == 2);
  std::istringstream bad("0.5\nx\n");
  CHECK_THROWS_AS(io::read_vector(bad), ParseError);

  std::istringstream min("2 3\n1 2 3\n4 5 6\n");
  auto m = io::read_matrix(min);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  CHECK(m(1, 2) == 6.0);
  std::ostringstream out;
  io::write_matrix(out, m);
  std::istringstream again(out.str());
  CHECK(io::read_matrix(again) == m);
  std::istringstream short_row("2 2\n1 2\n3\n");
  CHECK_THROWS_AS(io::read_matrix(short_row), ParseError);
}

TEST_CASE("file digest is stable") {
  const auto path = std::filesystem::temp_directory_path() / "proxflow_digest_test.txt";
  io::write_vector_file(path.string(), {1.0, 2.0});
  const auto a = io::file_digest(path.string());
  const auto b = io::file_digest(path.string());
  CHECK(a == b);
  CHECK(a.size() == 16);
  io::write_vector_file(path.string(), {1.0, 3.0});
  CHECK(io::file_digest(path.string()) != a);
  std::filesystem::remove(path);
}
