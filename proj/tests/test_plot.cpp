#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "schurnorm/errors.hpp"
#include "schurnorm/plot.hpp"

using namespace schurnorm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("schurnorm_plot_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

CsvTable sweep_table() {
  CsvTable t;
  t.header = {"omega", "schur_estimate", "l2_norm_k", "truncation_norm", "iterations",
              "ref_points"};
  t.rows = {{-1, 0.7, 0.8, 0.6, 10, 5}, {0, 0.77, 0.81, 0.74, 12, 6}, {1, 0.7, 0.8, 0.6, 9, 5}};
  return t;
}

}  // namespace

TEST_CASE("sweep plot structure") {
  const BaselineLines lines{0.2442, 0.619, 0.539};
  const std::string svg = sweep_svg(sweep_table(), lines);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "class=\"series\"") == 3);
  CHECK(count(svg, "class=\"baseline\"") == 3);
  CHECK(svg == sweep_svg(sweep_table(), lines));

  // Every plotted coordinate stays inside the canvas.
  const std::regex pt(R"((-?[0-9.]+),(-?[0-9.]+))");
  const auto begin = std::sregex_iterator(svg.begin(), svg.end(), pt);
  int points = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const double x = std::stod((*it)[1]), y = std::stod((*it)[2]);
    CHECK(x >= 0.0);
    CHECK(x <= 800.0);
    CHECK(y >= 0.0);
    CHECK(y <= 480.0);
    ++points;
  }
  CHECK(points >= 9);
}

TEST_CASE("missing baselines are skipped") {
  const std::string svg = sweep_svg(sweep_table(), BaselineLines{std::nullopt, 0.6, 0.5});
  CHECK(count(svg, "class=\"baseline\"") == 2);
}

TEST_CASE("missing columns are named") {
  CsvTable t = sweep_table();
  t.header[2] = "l2";
  try {
    sweep_svg(t, {});
    FAIL("expected MissingColumn");
  } catch (const MissingColumn& e) {
    CHECK(e.column() == "l2_norm_k");
  }
}

TEST_CASE("empty input writes nothing") {
  const fs::path dir = scratch("empty");
  put(dir / "empty.csv", "");
  put(dir / "header.csv", "omega,schur_estimate,l2_norm_k,truncation_norm,iterations,ref_points\n");
  const fs::path out = dir / "out";
  CHECK_THROWS_AS(cmd_plot({dir / "empty.csv", std::nullopt, std::nullopt, std::nullopt}, out),
                  Error);
  CHECK_THROWS_AS(cmd_plot({dir / "header.csv", std::nullopt, std::nullopt, std::nullopt}, out),
                  Error);
  CHECK_FALSE(fs::exists(out / "sweep.svg"));
  fs::remove_all(dir);
}

TEST_CASE("cmd_plot writes all three figures") {
  const fs::path dir = scratch("all");
  put(dir / "sweep.csv",
      "omega,schur_estimate,l2_norm_k,truncation_norm,iterations,ref_points\n"
      "-1,0.7,0.8,0.6,10,5\n0,0.77,0.81,0.74,12,6\n1,0.7,0.8,0.6,9,5\n");
  put(dir / "baselines.json",
      R"({"lambda_inverse": 0.2442, "l2_norm_kbar": 0.619, "norm_t_kbar": 0.539})");
  put(dir / "history.csv", "iteration,t,ref_points,grid_max\n1,1.0,1,1.0\n2,0.995,2,0.99\n");
  put(dir / "profiles.csv", "omega,p_0,p_1,p_2\n-1,1,2,3\n0,1.5,2,2.5\n1,3,2,1\n");
  const auto written = cmd_plot({dir / "sweep.csv", dir / "baselines.json", dir / "history.csv",
                                 dir / "profiles.csv"},
                                dir / "out");
  CHECK(written.size() == 3);
  for (const auto& p : written) CHECK(fs::file_size(p) > 0);

  std::ifstream in(dir / "out" / "profiles.svg");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string prof = ss.str();
  CHECK(count(prof, "class=\"series\"") == 3);
  CHECK(prof.find("stroke=\"#0000ff\"") != std::string::npos);  // lowest omega
  CHECK(prof.find("stroke=\"#ff0000\"") != std::string::npos);  // highest omega
  fs::remove_all(dir);
}

TEST_CASE("read_csv rejects ragged rows") {
  const fs::path dir = scratch("ragged");
  put(dir / "r.csv", "a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(dir / "r.csv"), Error);
  put(dir / "n.csv", "a,b\n1,x\n");
  CHECK_THROWS_AS(read_csv(dir / "n.csv"), Error);
  fs::remove_all(dir);
}
