#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"

using namespace mpnormal;
using nlohmann::json;

namespace {

const std::filesystem::path kData = MPNORMAL_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mpnormal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return (kData / name).string(); }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_CASE("spectrum: csv for the trivial block") {
  const auto r = invoke({"spectrum", data("trivial.json"), "--k-max", "1", "--format", "csv"});
  CHECK(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"block", "m", "k", "re", "im", "delta"});
  CHECK(rows[1] == std::vector<std::string>{"1", "1", "0", "1", "0", "0"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][3]) == 1.0);
    CHECK(std::abs(std::stod(rows[i][4])) == doctest::Approx(i == 1 ? 0.0 : 2 * std::numbers::pi));
  }
}

TEST_CASE("spectrum: csv and json agree") {
  const auto c = invoke({"spectrum", data("identity_family.json"), "--k-max", "3", "--format", "csv"});
  const auto j = invoke({"spectrum", data("identity_family.json"), "--k-max", "3"});
  REQUIRE(c.code == 0);
  REQUIRE(j.code == 0);
  const auto rows = csv_rows(c.out);
  const auto recs = json::parse(j.out)["results"]["records"];
  REQUIRE(rows.size() == recs.size() + 1);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(std::stoul(rows[i + 1][0]) == recs[i]["block"].get<std::size_t>());
    CHECK(std::stol(rows[i + 1][2]) == recs[i]["k"].get<long>());
    CHECK(std::stod(rows[i + 1][3]) == recs[i]["re"].get<double>());
    CHECK(std::stod(rows[i + 1][4]) == recs[i]["im"].get<double>());
  }
}

TEST_CASE("verify: characteristic oracle on golden files") {
  for (const char* name : {"trivial.json", "antiperiodic.json", "identity_family.json"}) {
    CAPTURE(name);
    const auto r = invoke({"verify", data(name), "--oracle", "char"});
    CHECK(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["results"]["pass"].get<bool>());
    CHECK(doc["results"]["max_set_distance"].get<double>() <= 1e-10);
  }
}

TEST_CASE("verify: finite-difference oracle") {
  const auto r = invoke({"verify", data("antiperiodic.json"), "--oracle", "both"});
  CHECK(r.code == 0);
  const auto tight = invoke({"verify", data("trivial.json"), "--oracle", "fd", "--tol", "fd_match=1e-12"});
  CHECK(tight.code == 2);
  CHECK_FALSE(json::parse(tight.out)["results"]["pass"].get<bool>());
}

TEST_CASE("schatten: verdicts") {
  const auto p1 = invoke({"schatten", data("trivial.json"), "--p", "1"});
  CHECK(p1.code == 0);
  CHECK(json::parse(p1.out)["results"]["verdict"] == "diverges");
  const auto p2 = invoke({"schatten", data("trivial.json"), "--p", "2"});
  CHECK(json::parse(p2.out)["results"]["verdict"] == "converges");
  const auto fam = invoke({"schatten", data("identity_family.json"), "--p", "4"});
  CHECK(json::parse(fam.out)["results"]["verdict"] == "diverges");
}

TEST_CASE("exit codes") {
  SUBCASE("validation failure") {
    const auto bad = temp_file("mpnormal_bad.json",
                               R"({"version":"1.0","blocks":[{"interval":[0,1],"A":[[[1,0],[0,0]],[[0,0],[2,0]]],)"
                               R"("W":[[[2,0],[0,0]],[[0,0],[1,0]]]}]})");
    const auto v = invoke({"validate", bad.string()});
    CHECK(v.code == 1);
    const auto doc = json::parse(v.out);
    CHECK(doc["results"]["blocks"][0]["verdict"] == "invalid");
    CHECK(doc["results"]["blocks"][0]["unitarity_defect"].get<double>() == doctest::Approx(3.0));
    CHECK(invoke({"spectrum", bad.string()}).code == 1);
    std::filesystem::remove(bad);
  }
  SUBCASE("order failure") {
    const auto bad = temp_file("mpnormal_overlap.json",
                               R"({"version":"1.0","blocks":[{"interval":[0,2],"A":[[[1,0]]],"W":[[[1,0]]]},)"
                               R"({"interval":[1,3],"A":[[[1,0]]],"W":[[[1,0]]]}]})");
    CHECK(invoke({"validate", bad.string()}).code == 1);
    CHECK(invoke({"verify", bad.string()}).code == 1);
    std::filesystem::remove(bad);
  }
  SUBCASE("usage errors") {
    CHECK(invoke({}).code == 3);
    CHECK(invoke({"frobnicate", data("trivial.json")}).code == 3);
    CHECK(invoke({"spectrum"}).code == 3);
    CHECK(invoke({"spectrum", data("trivial.json"), "--format", "xml"}).code == 3);
    CHECK(invoke({"report", data("trivial.json"), "--format", "csv"}).code == 3);
    CHECK(invoke({"spectrum", (kData / "missing.json").string()}).code == 3);
    CHECK(invoke({"spectrum", data("trivial.json"), "--tol", "nonsense=1"}).code == 3);
    const auto malformed = temp_file("mpnormal_malformed.json", "{\"version\": ");
    CHECK(invoke({"validate", malformed.string()}).code == 3);
    std::filesystem::remove(malformed);
  }
  SUBCASE("success") { CHECK(invoke({"validate", data("identity_family.json")}).code == 0); }
}

TEST_CASE("reports are deterministic") {
  for (const char* cmd : {"validate", "spectrum", "schatten", "verify", "report"}) {
    CAPTURE(cmd);
    const auto a = invoke({cmd, data("identity_family.json"), "--k-max", "4"});
    const auto b = invoke({cmd, data("identity_family.json"), "--k-max", "4"});
    CHECK(a.code == 0);
    CHECK(cli::strip_wall_time(a.out) == cli::strip_wall_time(b.out));
    const auto doc = json::parse(a.out);
    for (const char* key : {"tool", "tool_version", "command", "flags", "instance_digest", "results", "wall_time_ms"}) {
      CHECK(doc.contains(key));
    }
  }
  const auto c1 = invoke({"spectrum", data("antiperiodic.json"), "--format", "csv"});
  const auto c2 = invoke({"spectrum", data("antiperiodic.json"), "--format", "csv"});
  CHECK(c1.out == c2.out);
}

TEST_CASE("tolerance overrides are recorded") {
  const auto r = invoke({"validate", data("trivial.json"), "--tol", "validation=1e-6", "--tol", "cluster=1e-5"});
  CHECK(r.code == 0);
  const auto tol = json::parse(r.out)["flags"]["tolerances"];
  CHECK(tol["validation"].get<double>() == 1e-6);
  CHECK(tol["cluster"].get<double>() == 1e-5);
}

TEST_CASE("tolerance profile from the environment") {
  ::setenv("MPNORMAL_TOL_PROFILE", "strict", 1);
  const auto strict = invoke({"validate", data("trivial.json")});
  ::setenv("MPNORMAL_TOL_PROFILE", "loose", 1);
  const auto loose = invoke({"validate", data("trivial.json")});
  ::unsetenv("MPNORMAL_TOL_PROFILE");
  const auto plain = invoke({"validate", data("trivial.json")});
  const double s = json::parse(strict.out)["flags"]["tolerances"]["validation"];
  const double l = json::parse(loose.out)["flags"]["tolerances"]["validation"];
  const double d = json::parse(plain.out)["flags"]["tolerances"]["validation"];
  CHECK(s == doctest::Approx(0.1 * d));
  CHECK(l == doctest::Approx(10 * d));
}

TEST_CASE("--out writes the report to a file") {
  const auto path = std::filesystem::temp_directory_path() / "mpnormal_out.csv";
  const auto r = invoke({"spectrum", data("trivial.json"), "--k-max", "0", "--format", "csv", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(csv_rows(ss.str()).size() == 2);
  std::filesystem::remove(path);
}
