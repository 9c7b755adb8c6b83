#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "casimir/cli.hpp"

using namespace casimir::cli;

namespace {

const char* two_spheres = R"(# two spheres
[ensemble]
units = R
R = 1e-6
eps_background = 1.0

[sphere.1]
center = 0 0 10
eps = 2.6

[sphere.2]
eps = 2.6

[spectral]
lmax = 3

[scan]
x_min = 10
x_max = 20
steps = 3
)";

std::vector<std::string> lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-2.5e-30) == "-2.5e-30");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(std::nan("")) == "NaN");
}

TEST_CASE("config parsing and units") {
  const auto c = parse_config(two_spheres);
  REQUIRE(c.ensemble.spheres.size() == 2);
  CHECK(c.R == 1e-6);
  CHECK(std::abs(c.ensemble.spheres[0].center.z() - 10e-6) < 1e-20);
  CHECK(c.ensemble.spheres[1].material.eps_sphere == 2.6);
  CHECK(c.options.L_max == 3);
  CHECK(c.x.values() == std::vector<double>{10.0, 15.0, 20.0});

  const auto m = parse_config("[ensemble]\nunits = m\n[sphere.1]\nradius = 2e-6\ncenter = 0 0 3e-5\neps = 3\n"
                              "[sphere.2]\nradius = 1e-6\neps = 3\n");
  CHECK(m.R == 2e-6);
  CHECK(m.ensemble.spheres[0].center.z() == 3e-5);

  RunConfig o = c;
  apply(o, Overrides{4, 293.0});
  CHECK(o.options.L_max == 4);
  CHECK(o.ensemble.temperature == 293.0);
  CHECK_THROWS_AS(apply(o, Overrides{0, std::nullopt}), ConfigError);
}

TEST_CASE("config errors name the line and field") {
  CHECK(error_of("[ensemble]\nunits = feet\n").find("line 2: [ensemble] units") == 0);
  CHECK(error_of("[sphere.1]\neps = 2.6\ncolour = red\n").find("line 3: unknown key [sphere.1] colour") == 0);
  CHECK(error_of("[spectral]\nlmax = 2.5\n").find("line 2: [spectral] lmax: expected an integer") == 0);
  CHECK(error_of("eps = 1\n").find("line 1: key outside a section") == 0);
  CHECK(error_of("[sphere.1]\ncenter = 1 2\neps = 2\n").find("line 2: [sphere.1] center") == 0);
  CHECK(error_of("[sphere.1]\ncenter = 1 2 3\n").find("[sphere.1] eps: required") == 0);
  CHECK(error_of("[spectral]\nlmax = 0\n").find("lmax: must be >= 1") != std::string::npos);
  CHECK(error_of("[largen]\nradius = 1\ns = 1.5\n").find("[largen]") == 0);
}

TEST_CASE("force command") {
  auto c = parse_config(two_spheres);
  const auto out = cmd_force(c);
  const auto rows = lines(out.csv);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "sphere_id,Fx,Fy,Fz,conv");
  CHECK(rows[1].rfind("1,0,0,-", 0) == 0);
  CHECK(out.converged);

  // Index-matched spheres give an exact zero row.
  for (auto& s : c.ensemble.spheres) s.material.eps_sphere = 1.0;
  CHECK(lines(cmd_force(c).csv)[1] == "1,0,0,0,0");

  // Overlap names the pair.
  c.ensemble.spheres[0].center.z() = 1.5e-6;
  try {
    cmd_force(c);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("spheres 1 and 2 overlap") != std::string::npos);
  }
}

TEST_CASE("two-sphere scan") {
  auto c = parse_config(two_spheres);
  auto rows = lines(cmd_scan_two(c).csv);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "x,force_dimensionless");
  CHECK(rows[1].rfind("10,-", 0) == 0);
  c.x.steps = 1;
  CHECK(lines(cmd_scan_two(c).csv).size() == 2);
  c.x.min = 1.5;
  CHECK_THROWS_AS(cmd_scan_two(c), ConfigError);
}

TEST_CASE("three-sphere scan: mirror symmetry and overlap rows") {
  auto c = parse_config(two_spheres);
  c.x = ScanRange{3.0, 9.0, 3};
  c.theta = ScanRange{-0.6, 0.6, 5};
  c.options.L_max = 1;
  const auto out = cmd_scan_three(c);
  auto rows = lines(out.csv);
  CHECK(rows[0] == "x,theta,potential_dimensionless");
  REQUIRE(rows.size() == 16);
  // Row (x, theta) and (x, -theta) carry the same potential text.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto a = rows[1 + 5 * i + j], b = rows[1 + 5 * i + 4 - j];
      CHECK(a.substr(a.rfind(',')) == b.substr(b.rfind(',')));
    }
  }
  // x = 9 at theta = 0 overlaps sphere 2.
  CHECK(rows[1 + 5 * 2 + 2] == "9,0,NaN");
  CHECK(out.diagnostics.size() >= 1);

  // L_max > 1 goes through the general pipeline.
  c.options.L_max = 2;
  c.x = ScanRange{4.0, 4.0, 1};
  c.theta = ScanRange{0.5, 0.5, 1};
  CHECK(lines(cmd_scan_three(c).csv)[1].find("NaN") == std::string::npos);
}

TEST_CASE("large-N command") {
  auto c = parse_config("[largen]\nn_min = 3\nn_max = 12\nlambda = 0.1\nradius = 1\ns = 10\n");
  const auto rows = lines(cmd_large_n(c).csv);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "N,V_dimensionless,sign,ratio");
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) {
    std::istringstream in(rows[i]);
    std::string n, val, sign, ratio;
    std::getline(in, n, ',');
    std::getline(in, val, ',');
    std::getline(in, sign, ',');
    std::getline(in, ratio, ',');
    const int N = std::stoi(n);
    CHECK(N == i + 2);
    CHECK(sign == (N % 2 == 0 ? "-1" : "1"));
    v.push_back(std::stod(val));
    // V_N / V_{N-1} = -lambda (R/s)^3 / (e N)
    CHECK(std::abs(std::stod(ratio) + 0.1 * 1e-3 / (std::exp(1.0) * N)) < 1e-11 * 0.1 * 1e-3 / N);  // 12 printed digits
    if (i > 1) CHECK(std::abs(v[i - 1] / v[i - 2] / std::stod(ratio) - 1.0) < 1e-10);
  }
  c.lambda = 0.0;
  const auto zero = lines(cmd_large_n(c).csv);
  CHECK(zero[1] == "3,0,0,0");
}

TEST_CASE("CSV is byte-identical across runs and thread counts") {
  auto c = parse_config(two_spheres);
  c.options.threads = 1;
  const std::string one = cmd_scan_two(c).csv + cmd_force(c).csv;
  for (int t : {1, 3, 8}) {
    c.options.threads = t;
    CHECK(cmd_scan_two(c).csv + cmd_force(c).csv == one);
  }
}
