#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "snumbers/cli.hpp"

using namespace snumbers;
using doctest::Approx;
using Json = nlohmann::json;

namespace {
const double pi = std::numbers::pi;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::vector<std::string>* header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!seen_header) {
      *header = cells;
      seen_header = true;
    } else {
      rows.push_back(cells);
    }
  }
  return rows;
}

std::filesystem::path scratch_dir() {
  auto d = std::filesystem::temp_directory_path() / "snumbers_cli_test";
  std::filesystem::create_directories(d);
  return d;
}
}  // namespace

TEST_CASE("flag parsers") {
  CHECK(parse_interval("0,1") == Interval(0, 1));
  CHECK(parse_interval("-0.5,2.25") == Interval(-0.5, 2.25));
  CHECK_THROWS_AS(parse_interval("1,0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_interval("0;1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_interval("0,x"), std::invalid_argument);
  CHECK(parse_range("2..20") == std::pair{2, 20});
  CHECK(parse_range("7") == std::pair{7, 7});
  CHECK_THROWS_AS(parse_range("5..2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("a..b"), std::invalid_argument);
}

TEST_CASE("constant") {
  const auto r = run({"constant", "--p", "2", "--interval", "0,1", "--m", "1025"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["command"] == "constant");
  CHECK(j.contains("version"));
  CHECK(j["grid_nodes"] == 1025);
  CHECK(j["converged"] == true);
  REQUIRE(j["constants"].size() == 6);
  double b = 0;
  for (const auto& c : j["constants"])
    if (c["name"] == "B") b = c["value"];
  CHECK(std::abs(b - 1 / (pi * pi)) < 1e-4);

  const auto r2 = run({"constant", "--p", "2", "--interval", "0,2", "--m", "1025"});
  REQUIRE(r2.code == 0);
  const auto j2 = Json::parse(r2.out);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(j2["constants"][i]["value"].get<double>() ==
          Approx(4 * j["constants"][i]["value"].get<double>()).epsilon(1e-6));

  CHECK(run({"constant", "--p", "0.5"}).code == 2);
  CHECK(run({"constant", "--p", "2", "--interval", "1,0"}).code == 2);
}

TEST_CASE("constant CSV") {
  const auto r = run({"constant", "--p", "3", "--m", "257", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::vector<std::string> header;
  const auto rows = csv_rows(r.out, &header);
  CHECK(header == std::vector<std::string>{"name", "value", "eigenvalue", "residual", "iterations", "converged"});
  CHECK(rows.size() == 6);
  CHECK(r.out.find("# version=") != std::string::npos);
  CHECK(r.out.find("# tolerance=") != std::string::npos);
}

TEST_CASE("table with oracle") {
  const auto r = run({"table", "--target", "t2", "--p", "2", "--n", "2..20", "--oracle", "svd", "--m", "1025"});
  REQUIRE(r.code == 0);
  std::vector<std::string> header;
  const auto rows = csv_rows(r.out, &header);
  CHECK(header == std::vector<std::string>{"n", "lower", "upper", "oracle", "n2_oracle"});
  REQUIRE(rows.size() == 19);
  for (const auto& row : rows) {
    const double lo = std::stod(row[1]), hi = std::stod(row[2]), o = std::stod(row[3]);
    CHECK(lo <= o);
    CHECK(o <= hi);
    const int n = std::stoi(row[0]);
    CHECK(std::stod(row[4]) == Approx(n * n * o));
  }
  CHECK(r.out.find("# oracle_inside_bracket=true") != std::string::npos);
}

TEST_CASE("table without oracle and plot semantics") {
  const auto dir = scratch_dir();
  const auto plot = dir / "table.svg";
  std::filesystem::remove(plot);
  const auto r = run({"table", "--target", "e", "--p", "3", "--n", "2..12", "--m", "257"});
  REQUIRE(r.code == 0);
  std::vector<std::string> header;
  const auto rows = csv_rows(r.out, &header);
  REQUIRE(rows.size() == 11);
  for (const auto& row : rows) CHECK(row[3].empty());
  CHECK_FALSE(std::filesystem::exists(plot));

  const auto r2 = run({"table", "--target", "e", "--p", "3", "--n", "2..12", "--m", "257", "--plot", plot.string(),
                       "--format", "json"});
  REQUIRE(r2.code == 0);
  CHECK(std::filesystem::exists(plot));
  const auto j = Json::parse(r2.out);
  CHECK(j["rows"].size() == 11);
  CHECK(j["rows"][0]["oracle"].is_null());

  CHECK(run({"table", "--target", "e", "--p", "3", "--oracle", "svd"}).code == 2);
  CHECK(run({"table", "--target", "x"}).code == 2);
  CHECK(run({"table", "--n", "1..5"}).code == 2);
  CHECK(run({"table", "--n", "9..5"}).code == 2);
}

TEST_CASE("certify is deterministic and reports both sides") {
  const std::vector<std::string> args{"certify", "--target", "e", "--p", "2", "--n", "5", "--trials", "500", "--seed", "42",
                                      "--m", "1025"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = Json::parse(a.out);
  CHECK(j["passed"] == true);
  REQUIRE(j["certificates"].size() == 2);
  for (const auto& c : j["certificates"]) {
    for (const char* key : {"target", "side", "n", "p", "bound_value", "trials", "seed", "worst_ratio", "margin",
                            "tolerance", "passed"})
      CHECK(c.contains(key));
    CHECK(c["passed"] == true);
  }
  CHECK(j["witnesses"]["upper_tightness_ratio"].get<double>() >= 0.99);

  CHECK(run({"certify", "--target", "e", "--n", "5", "--trials", "0"}).code == 2);
  CHECK(run({"certify", "--target", "e", "--n", "2..5"}).code == 2);
  CHECK(run({"certify", "--target", "e"}).code == 2);
}

TEST_CASE("oracle") {
  const auto r = run({"oracle", "--target", "t1", "--p", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  REQUIRE(j["spectrum"].size() == 20);
  for (const auto& row : j["spectrum"]) {
    const int n = row["n"];
    CHECK(std::abs(row["s_n"].get<double>() * (n - 0.5) * pi - 1) <= 0.005);
  }
  const auto refused = run({"oracle", "--target", "t1", "--p", "3"});
  CHECK(refused.code == 2);
  CHECK(refused.err.find("refusing") != std::string::npos);
  CHECK(run({"oracle", "--target", "q"}).code == 2);
}

TEST_CASE("asymptote") {
  const auto r = run({"asymptote", "--target", "t2", "--p", "2", "--n", "40", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["sequence"].size() == 40);
  CHECK(std::abs(j["final_deviation"].get<double>()) <= 0.05);
  CHECK(j["limit"].get<double>() == Approx(1 / (pi * pi)).epsilon(1e-5));
  CHECK(run({"asymptote", "--p", "1.5"}).code == 2);
}

TEST_CASE("factor-check") {
  const auto r = run({"factor-check", "--p", "2", "--trials", "20", "--seed", "7", "--m", "1025"});
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["exponents"] == Json::array({2.0}));
  CHECK(run({"factor-check", "--trials", "0"}).code == 2);
}

TEST_CASE("output file, help and usage errors") {
  const auto dir = scratch_dir();
  const auto path = dir / "constant.json";
  std::filesystem::remove(path);
  const auto r = run({"constant", "--p", "2", "--m", "257", "--output", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  CHECK(Json::parse(f)["command"] == "constant");

  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"constant", "--format", "xml"}).code == 2);
  CHECK(run({"constant", "--m", "3"}).code == 2);
  std::filesystem::remove_all(dir);
}
