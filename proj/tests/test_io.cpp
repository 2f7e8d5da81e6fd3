#include <doctest.h>

#include "levprs/pgm.hpp"
#include "levprs/trace_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace levprs;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("levprs_test_" + name)).string();
}

}  // namespace

TEST_CASE("trace CSV round trip") {
  SolveTrace t;
  t.records.push_back({1, 0.5, 0.25, std::nullopt});
  t.records.push_back({2, 1.0 / 3.0, std::nullopt, 0.1});
  t.records.push_back({3, 1e-300, 2.0, 0.123456789012345678});
  const SolveTrace back = trace_from_csv(trace_to_csv(t));
  REQUIRE(back.records.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(back.records[k].iter == t.records[k].iter);
    CHECK(back.records[k].residual == t.records[k].residual);
    CHECK(back.records[k].dist_to_fixed_point == t.records[k].dist_to_fixed_point);
    CHECK(back.records[k].contraction_ratio == t.records[k].contraction_ratio);
  }
  CHECK(trace_to_csv(t).rfind("iter,residual,dist,ratio\n", 0) == 0);

  const std::string path = temp_path("trace.csv");
  write_trace(t, path);
  CHECK(read_trace(path).records.size() == 3);
  std::filesystem::remove(path);

  CHECK(trace_from_csv("iter,residual,dist,ratio\n").records.empty());
  CHECK_THROWS_AS(trace_from_csv(""), Error);
  CHECK_THROWS_AS(trace_from_csv("iter,residual,dist,ratio\n1,abc,,\n"), Error);
  CHECK_THROWS_AS(read_trace(temp_path("missing.csv")), Error);
}

TEST_CASE("bound line and plot script") {
  const std::vector<double> v = bound_line_values({"b", 0.5, 2.0, 4});
  REQUIRE(v.size() == 5);
  CHECK(v[0] == 2.0);
  CHECK(v[4] == doctest::Approx(0.125));
  SolveTrace t;
  t.initial_distance = 2.0;
  t.records.push_back({1, 0.1, 1.0, 0.5});
  const std::string script = plot_script({{"run", t, true}}, {{"b", 0.5, 1.0, 1}}, "demo");
  CHECK(script.find("demo") != std::string::npos);
  CHECK(script.find("logscale") != std::string::npos);
  CHECK(script.find("0.5") != std::string::npos);
}

TEST_CASE("PGM round trip and errors") {
  GrayImage img{3, 4, Vector(12)};
  for (Index k = 0; k < 12; ++k) img.pixels(k) = static_cast<double>(k) / 11.0;
  const std::string path = temp_path("img.pgm");
  write_pgm(img, path);
  const GrayImage back = read_pgm(path);
  CHECK(back.rows == 3);
  CHECK(back.cols == 4);
  CHECK((back.pixels - img.pixels).cwiseAbs().maxCoeff() <= 0.5 / 255.0 + 1e-12);
  std::filesystem::remove(path);

  {
    std::ofstream out(path);
    out << "P2\n# comment\n2 1\n255\n0 255\n";
  }
  const GrayImage ascii = read_pgm(path);
  CHECK(ascii.pixels(0) == 0.0);
  CHECK(ascii.pixels(1) == 1.0);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(read_pgm(temp_path("missing.pgm")), Error);
  {
    std::ofstream out(path);
    out << "P6\n1 1\n255\n";
  }
  CHECK_THROWS_AS(read_pgm(path), Error);
  std::filesystem::remove(path);
}
