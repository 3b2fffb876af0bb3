#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "tailcalc/errors.hpp"
#include "tailcalc/palm_identities.hpp"
#include "tailcalc/serialize.hpp"

namespace tc = tailcalc;
using tc::Json;

namespace {

std::string tmpDir() {
  static std::string dir = []() {
    std::string d = "/tmp/tailcalc_test_XXXXXX";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s", d.c_str());
    REQUIRE(mkdtemp(buf) != nullptr);
    return std::string(buf);
  }();
  return dir;
}

std::string writeFile(const std::string& name, const std::string& content) {
  std::string path = tmpDir() + "/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int runCli(const std::string& args) {
  std::string cmd = std::string(TAILCALC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

const char* kE1Scenario = R"({
  "group": {"kind": "cyclic", "moduli": [2]},
  "alpha": 1.0,
  "cone": {"kind": "scalar"},
  "rayMeasure": {"rays": [
    {"w": 0.6666666666666666, "lower": 0, "field": [1.0, 0.5]},
    {"w": 0.6666666666666666, "lower": 0, "field": [0.5, 1.0]}
  ]},
  "anchor": {"kind": "argmax"},
  "mecke7Grid": [0.5, 1.0, 2.0, 4.0],
  "seed": 1
})";

const char* kNegativeScenario = R"({
  "group": {"kind": "cyclic", "moduli": [2]},
  "alpha": 1.0,
  "cone": {"kind": "scalar"},
  "spectralLaw": {"atoms": [{"p": 1.0, "field": [1.0, 0.5]}]},
  "seed": 1
})";

const char* kSpectralScenario = R"({
  "group": {"kind": "cyclic", "moduli": [2]},
  "alpha": 1.0,
  "cone": {"kind": "scalar"},
  "spectralLaw": {"atoms": [
    {"p": 0.6666666666666666, "field": [1.0, 0.5]},
    {"p": 0.3333333333333333, "field": [1.0, 2.0]}
  ]},
  "anchor": {"kind": "argmax"},
  "seed": 1
})";

}  // namespace

TEST_CASE("scenario parsing round-trips the E1 objects") {
  tc::Scenario sc = tc::parseScenario(Json::parse(kE1Scenario));
  REQUIRE(sc.rayMeasure);
  fixtures::E1 e1;
  CHECK(sc.group->isCyclic());
  CHECK(sc.alpha == 1.0);
  CHECK(tc::RayMeasure::equal(*sc.rayMeasure, e1.nu, 1e-12));
  // serialize back and reparse
  Json again = tc::rayMeasureToJson(*sc.rayMeasure);
  tc::RayMeasure reparsed =
      tc::rayMeasureFromJson(again, sc.group, sc.alpha, sc.cone, sc.coneDim);
  CHECK(tc::RayMeasure::equal(reparsed, *sc.rayMeasure, 0.0));
}

TEST_CASE("scenario validation errors") {
  CHECK_THROWS_AS(tc::parseScenario(Json::parse(R"({"alpha": 1.0})")), tc::ConfigError);
  CHECK_THROWS_AS(tc::parseScenario(Json::parse(
                      R"({"group": {"kind": "cyclic", "moduli": [2]}, "alpha": 1.0})")),
                  tc::ConfigError);
  // two sources at once
  CHECK_THROWS_AS(
      tc::parseScenario(Json::parse(
          R"({"group": {"kind":"cyclic","moduli":[2]}, "alpha": 1,
              "rayMeasure": {"rays": []},
              "spectralLaw": {"atoms": [{"p": 1.0, "field": [1.0, 0.5]}]}})")),
      tc::ConfigError);
  // weight function must cover the group
  CHECK_THROWS_AS(
      tc::parseScenario(Json::parse(
          R"({"group": {"kind":"cyclic","moduli":[2]}, "alpha": 1,
              "rayMeasure": {"rays": []}, "weightG": [1.0]})")),
      tc::ConfigError);
  // field entries must match the group size
  CHECK_THROWS_AS(
      tc::parseScenario(Json::parse(
          R"({"group": {"kind":"cyclic","moduli":[2]}, "alpha": 1,
              "rayMeasure": {"rays": [{"w": 1.0, "field": [1.0]}]}})")),
      tc::ConfigError);
}

TEST_CASE("vector cone fields serialize as arrays of tuples") {
  tc::GroupPtr g = tc::makeCyclic({2});
  tc::Field f(g, tc::ConeKind::Vector, 2, {3.0, 4.0, 0.0, 1.0});
  Json j = tc::fieldToJson(f);
  tc::Field back = tc::fieldFromJson(j, g, tc::ConeKind::Vector, 2);
  CHECK(back.approxEquals(f, 0.0));
}

TEST_CASE("cli verify: E1 exact suite exits 0") {
  std::string scenario = writeFile("e1.json", kE1Scenario);
  std::string report = tmpDir() + "/e1_report.json";
  CHECK(runCli("verify " + scenario + " --suite all --mode exact --out " + report) == 0);
  Json r = Json::parse(readFile(report));
  CHECK(r["summary"]["failed"].get<int>() == 0);
  CHECK(r["summary"]["passed"].get<int>() > 100);
  CHECK(r["mode"] == "exact");
}

TEST_CASE("cli verify: negative control exits 1 and names the counterexample") {
  std::string scenario = writeFile("negative.json", kNegativeScenario);
  std::string report = tmpDir() + "/neg_report.json";
  CHECK(runCli("verify " + scenario + " --suite spectral --mode exact --out " + report) == 1);
  Json r = Json::parse(readFile(report));
  CHECK(r["summary"]["failed"].get<int>() > 0);
  bool sawMecke7 = false, sawShift = false, sawCounterexample = false;
  for (const Json& item : r["identities"]) {
    if (!item["pass"].get<bool>()) {
      std::string id = item["identity"].get<std::string>();
      if (id == "mecke7") sawMecke7 = true;
      if (id == "space_shift") {
        sawShift = true;
        if (item["test"].get<std::string>() == "g=1{W=(0.5,1)} @ s=1" &&
            item["lhs"].get<double>() == 1.0 && item["rhs"].get<double>() == 0.0)
          sawCounterexample = true;
      }
    }
  }
  CHECK(sawShift);
  CHECK(sawMecke7);
  CHECK(sawCounterexample);
}

TEST_CASE("cli verify: mecke failure on the negative control via the palm suite") {
  // the palm suite needs nu, which the negative control cannot construct;
  // the spectral suite carries the mecke content through mecke7/space_shift,
  // and the mecke checker itself is exercised directly here
  tc::Scenario sc = tc::parseScenario(Json::parse(kNegativeScenario));
  REQUIRE(sc.spectralLaw);
  auto reports =
      tc::checkMecke(tc::buildQ(*sc.spectralLaw), tc::defaultCanaryFamily(*sc.group));
  bool anyFail = false;
  for (const auto& r : reports)
    if (!r.pass) anyFail = true;
  CHECK(anyFail);
}

TEST_CASE("cli verify: malformed scenario exits 2") {
  std::string bad = writeFile("bad.json", "{ not json");
  CHECK(runCli("verify " + bad) == 2);
  std::string missing = writeFile("missing.json", R"({"alpha": 1.0})");
  CHECK(runCli("verify " + missing) == 2);
  CHECK(runCli("verify " + tmpDir() + "/does_not_exist.json") == 2);
}

TEST_CASE("cli verify: byte-identical reports for identical scenario and seed") {
  std::string scenario = writeFile("e1_det.json", kE1Scenario);
  std::string r1 = tmpDir() + "/det1.json", r2 = tmpDir() + "/det2.json";
  CHECK(runCli("verify " + scenario + " --suite all --mode exact --out " + r1) == 0);
  CHECK(runCli("verify " + scenario + " --suite all --mode exact --out " + r2) == 0);
  CHECK(readFile(r1) == readFile(r2));
  // the Monte Carlo path is deterministic per seed as well
  std::string m1 = tmpDir() + "/mc1.json", m2 = tmpDir() + "/mc2.json";
  std::string mcScenario = writeFile("e1_mc.json", std::string(kSpectralScenario));
  CHECK(runCli("verify " + mcScenario + " --suite spectral --mode mc --out " + m1) == 0);
  CHECK(runCli("verify " + mcScenario + " --suite spectral --mode mc --out " + m2) == 0);
  CHECK(readFile(m1) == readFile(m2));
}

TEST_CASE("cli construct: anchor and weight routes emit identical canonical sections") {
  std::string scenario = writeFile("spectral.json", kSpectralScenario);
  std::string a = tmpDir() + "/via_anchor.json", w = tmpDir() + "/via_weight.json",
              h = tmpDir() + "/via_h.json";
  CHECK(runCli("construct " + scenario + " --via anchor --out " + a) == 0);
  CHECK(runCli("construct " + scenario + " --via weight --out " + w) == 0);
  CHECK(runCli("construct " + scenario + " --via H --out " + h) == 0);
  Json ja = Json::parse(readFile(a)), jw = Json::parse(readFile(w)),
       jh = Json::parse(readFile(h));
  CHECK(ja["canonical"].dump() == jw["canonical"].dump());
  CHECK(ja["canonical"].dump() == jh["canonical"].dump());
  CHECK(ja["validation"]["palm_round_trip"].get<bool>());
  CHECK(ja["validation"]["stationary"].get<bool>());
  CHECK(ja["validation"]["nu_norm"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  // non-admissible spectral law fails with the space-shift error
  std::string neg = writeFile("neg_construct.json", kNegativeScenario);
  CHECK(runCli("construct " + neg + " --via weight") == 1);
}

TEST_CASE("cli index: all theta routes agree on E1") {
  std::string scenario = writeFile("e1_index.json", kE1Scenario);
  CHECK(runCli("index " + scenario) == 0);
}

TEST_CASE("cli sample: reproducible by seed and supported on |Y_0| > 1") {
  std::string scenario = writeFile("spectral_sample.json", kSpectralScenario);
  std::string s1 = tmpDir() + "/s1.json", s2 = tmpDir() + "/s2.json";
  CHECK(runCli("sample " + scenario + " -n 3 --seed 9 --out " + s1) == 0);
  CHECK(runCli("sample " + scenario + " -n 3 --seed 9 --out " + s2) == 0);
  CHECK(readFile(s1) == readFile(s2));
  Json j = Json::parse(readFile(s1));
  REQUIRE(j["fields"].size() == 3);
  for (const Json& f : j["fields"]) CHECK(f[0].get<double>() > 1.0);
  // atom frequencies over a larger draw approximate (2/3, 1/3)
  std::string big = tmpDir() + "/big.json";
  CHECK(runCli("sample " + scenario + " -n 10000 --seed 4 --out " + big) == 0);
  Json jb = Json::parse(readFile(big));
  long long atomB = 0;
  for (const Json& f : jb["fields"])
    if (f[1].get<double>() > f[0].get<double>()) ++atomB;  // W = (1,2) atom
  double freq = static_cast<double>(atomB) / 10000.0;
  CHECK(std::abs(freq - 1.0 / 3.0) <= 3.0 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / 10000.0));
}

TEST_CASE("report files round-trip through the json reader") {
  std::string scenario = writeFile("e1_rt.json", kE1Scenario);
  std::string report = tmpDir() + "/rt_report.json";
  CHECK(runCli("verify " + scenario + " --suite palm --mode exact --out " + report) == 0);
  Json r = tc::readJsonFile(report);
  CHECK(r.contains("identities"));
  CHECK(r.contains("version"));
  // the scenario echo reparses to the same objects
  tc::Scenario sc = tc::parseScenario(r["scenario"]);
  fixtures::E1 e1;
  CHECK(tc::RayMeasure::equal(*sc.rayMeasure, e1.nu, 1e-12));
  // identity rows are sorted canonically
  std::string prev;
  for (const Json& item : r["identities"]) {
    std::string key =
        item["identity"].get<std::string>() + "|" + item["test"].get<std::string>();
    CHECK(prev <= key);
    prev = key;
  }
}
