#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cfm/charfn.hpp"
#include "cfm/errors.hpp"
#include "cfm/mc_oracle.hpp"
#include "cfm/moment_engine.hpp"
#include "cfm/sample_io.hpp"

using namespace cfm;

namespace {
std::vector<std::vector<double>> parse(const std::string& text) {
  std::istringstream in(text);
  return read_samples_csv(in);
}

std::size_t failing_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}
}  // namespace

TEST_CASE("reading rows") {
  const auto one = parse("0.5\n-1.25\n3e2\n");
  REQUIRE(one.size() == 3);
  CHECK(one[0].size() == 1);
  CHECK(one[1][0] == -1.25);
  CHECK(one[2][0] == 300.0);

  const auto headed = parse("x0,x1\n1,2\n3, 4\n");
  REQUIRE(headed.size() == 2);
  CHECK(headed[1] == std::vector<double>{3.0, 4.0});

  const auto commented = parse("# generated\n\n1,2\n  \n+5,-6\r\n");
  REQUIRE(commented.size() == 2);
  CHECK(commented[1] == std::vector<double>{5.0, -6.0});
}

TEST_CASE("malformed input") {
  CHECK(failing_line("1,2\n3\n") == 2);
  CHECK(failing_line("x\n1\nabc\n") == 3);
  CHECK(failing_line("1\n2\n\n4,\n") == 4);
  CHECK(failing_line("1\nnan\n") == 2);
  CHECK(failing_line("x,y\n") == 1);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_WITH(parse("1,2\n3\n"), doctest::Contains("line 2"));
  CHECK_THROWS_AS(read_samples_csv_file("/nonexistent/samples.csv"), ConfigError);
}

TEST_CASE("round trip") {
  const auto s = sample_sym_stable_1d(1.2, 500, 77);
  std::ostringstream out;
  write_samples_csv(out, s.points, {"x0"});
  CHECK(parse(out.str()) == s.points);

  const auto g = sample_gaussian(1.0, 3, 200, 78);
  const auto path = std::filesystem::temp_directory_path() / "cfm_round_trip.csv";
  {
    std::ofstream f(path);
    write_samples_csv(f, g.points);
  }
  CHECK(read_samples_csv_file(path.string()) == g.points);
  std::filesystem::remove(path);
}

TEST_CASE("ingested samples drive the moment engine") {
  const auto g = sample_gaussian(0.5, 2, 100, 79);
  std::ostringstream out;
  write_samples_csv(out, g.points, {"x0", "x1"});
  const auto rows = parse(out.str());
  REQUIRE(rows.size() == 100);
  REQUIRE(rows[0].size() == 2);
  double exact = 0.0;
  for (const auto& r : rows) exact += std::pow(std::hypot(r[0], r[1]), 0.6);
  exact /= 100.0;
  QuadratureSpec spec;
  spec.rel_tol = 1e-4;
  const double v = absolute_moment(make_empirical(rows), 0.6, spec).value;
  CHECK(std::fabs(v / exact - 1.0) < 1e-2);
}
