#include "tailcalc/serialize.hpp"

#include <cmath>
#include <fstream>

#include "tailcalc/errors.hpp"
#include "tailcalc/version.hpp"

namespace tailcalc {

namespace {

double requireNumber(const Json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError("missing or non-numeric field '" + key + "'");
  return j[key].get<double>();
}

}  // namespace

Json groupToJson(const Group& g) {
  Json j;
  if (g.isCyclic()) {
    j["kind"] = "cyclic";
    j["moduli"] = g.cyclicModuli();
  } else {
    j["kind"] = "window";
    Json bounds = Json::array();
    for (auto [lo, hi] : g.windowBounds()) bounds.push_back(Json::array({lo, hi}));
    j["bounds"] = bounds;
  }
  return j;
}

GroupPtr groupFromJson(const Json& j) {
  if (!j.contains("kind")) throw ConfigError("group needs a 'kind'");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "cyclic") {
    if (!j.contains("moduli")) throw ConfigError("cyclic group needs 'moduli'");
    return makeCyclic(j["moduli"].get<std::vector<int>>());
  }
  if (kind == "window") {
    if (!j.contains("bounds")) throw ConfigError("window group needs 'bounds'");
    std::vector<std::pair<int, int>> bounds;
    for (const Json& b : j["bounds"]) {
      if (!b.is_array() || b.size() != 2) throw ConfigError("window bounds are [lo, hi] pairs");
      bounds.emplace_back(b[0].get<int>(), b[1].get<int>());
    }
    return makeWindow(std::move(bounds));
  }
  throw ConfigError("unknown group kind '" + kind + "'");
}

Json fieldToJson(const Field& f) {
  Json arr = Json::array();
  for (std::size_t s = 0; s < f.group().size(); ++s) {
    if (f.coneKind() == ConeKind::Scalar) {
      arr.push_back(f.components()[s]);
    } else {
      Json v = Json::array();
      for (std::size_t k = 0; k < f.coneDim(); ++k)
        v.push_back(f.components()[s * f.coneDim() + k]);
      arr.push_back(v);
    }
  }
  return arr;
}

Field fieldFromJson(const Json& j, const GroupPtr& group, ConeKind cone,
                    std::size_t coneDim) {
  if (!j.is_array() || j.size() != group->size())
    throw ConfigError("field must be an array in row-major group-element order");
  std::vector<double> comps;
  comps.reserve(group->size() * coneDim);
  for (const Json& v : j) {
    if (v.is_number()) {
      if (coneDim != 1) throw ConfigError("vector cone values must be arrays");
      comps.push_back(v.get<double>());
    } else if (v.is_array()) {
      if (v.size() != coneDim) throw ConfigError("cone value arity mismatch");
      for (const Json& c : v) comps.push_back(c.get<double>());
    } else {
      throw ConfigError("field entries must be numbers or arrays");
    }
  }
  return Field(group, cone, coneDim, std::move(comps));
}

Json rayMeasureToJson(const RayMeasure& m) {
  Json j;
  j["alpha"] = m.alpha();
  j["group"] = groupToJson(m.group());
  Json rays = Json::array();
  for (const Ray& r : m.rays()) {
    Json rj;
    rj["w"] = r.weight;
    rj["lower"] = r.lower;
    if (!std::isinf(r.upper)) rj["upper"] = r.upper;
    rj["field"] = fieldToJson(r.rep);
    rays.push_back(rj);
  }
  j["rays"] = rays;
  return j;
}

RayMeasure rayMeasureFromJson(const Json& j, const GroupPtr& group, double alpha,
                              ConeKind cone, std::size_t coneDim) {
  if (!j.contains("rays")) throw ConfigError("ray measure needs 'rays'");
  std::vector<Ray> rays;
  for (const Json& rj : j["rays"]) {
    Ray r{requireNumber(rj, "w"),
          fieldFromJson(rj.at("field"), group, cone, coneDim),
          rj.contains("lower") ? requireNumber(rj, "lower") : 0.0,
          rj.contains("upper") ? requireNumber(rj, "upper") : kInf};
    rays.push_back(std::move(r));
  }
  return RayMeasure(alpha, group, std::move(rays));
}

Json spectralLawToJson(const SpectralLaw& law) {
  Json j;
  j["alpha"] = law.alpha();
  j["group"] = groupToJson(law.group());
  Json atoms = Json::array();
  for (const SpectralAtom& a : law.atoms()) {
    Json aj;
    aj["p"] = a.prob;
    aj["field"] = fieldToJson(a.w);
    atoms.push_back(aj);
  }
  j["atoms"] = atoms;
  return j;
}

SpectralLaw spectralLawFromJson(const Json& j, const GroupPtr& group, double alpha,
                                ConeKind cone, std::size_t coneDim) {
  if (!j.contains("atoms")) throw ConfigError("spectral law needs 'atoms'");
  std::vector<SpectralAtom> atoms;
  for (const Json& aj : j["atoms"])
    atoms.push_back(
        SpectralAtom{requireNumber(aj, "p"), fieldFromJson(aj.at("field"), group, cone, coneDim)});
  return SpectralLaw(alpha, group, std::move(atoms));
}

Json truncatedLawToJson(const TruncatedRayLaw& law) {
  Json j;
  j["alpha"] = law.alpha();
  j["group"] = groupToJson(law.group());
  Json atoms = Json::array();
  for (const LawAtom& a : law.atoms()) {
    Json aj;
    aj["p"] = a.prob;
    aj["lower"] = a.lower;
    aj["field"] = fieldToJson(a.rep);
    atoms.push_back(aj);
  }
  j["atoms"] = atoms;
  return j;
}

Json identityReportToJson(const IdentityReport& r) {
  Json j;
  j["identity"] = r.identity;
  j["test"] = r.testFunctionId;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["tol"] = r.tol;
  j["pass"] = r.pass;
  j["mode"] = toString(r.mode);
  if (r.seLhs) j["se_lhs"] = *r.seLhs;
  if (r.seRhs) j["se_rhs"] = *r.seRhs;
  if (r.sampleCount) j["n"] = *r.sampleCount;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json reportToJson(const Json& scenarioEcho, const std::string& suite,
                  const std::string& mode, const std::vector<IdentityReport>& reports,
                  int skipped) {
  Json j;
  j["version"] = kVersion;
  j["suite"] = suite;
  j["mode"] = mode;
  j["scenario"] = scenarioEcho;
  Json items = Json::array();
  std::vector<IdentityReport> sorted(reports);
  sortReports(sorted);
  for (const IdentityReport& r : sorted) items.push_back(identityReportToJson(r));
  j["identities"] = items;
  ReportSummary s = summarize(sorted);
  j["summary"] = Json{{"passed", s.passed}, {"failed", s.failed}, {"skipped", skipped}};
  return j;
}

Scenario parseScenario(const Json& j) {
  Scenario sc;
  sc.echo = j;
  if (!j.contains("group")) throw ConfigError("scenario needs a 'group'");
  sc.group = groupFromJson(j["group"]);
  sc.alpha = requireNumber(j, "alpha");
  if (!(sc.alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (j.contains("cone")) {
    std::string kind = j["cone"].value("kind", "scalar");
    if (kind == "scalar") {
      sc.cone = ConeKind::Scalar;
      sc.coneDim = 1;
    } else if (kind == "vector") {
      sc.cone = ConeKind::Vector;
      sc.coneDim = j["cone"].value("dim", 2);
      if (sc.coneDim < 1) throw ConfigError("vector cone needs dim >= 1");
    } else {
      throw ConfigError("unknown cone kind '" + kind + "'");
    }
  }
  int sources = (j.contains("rayMeasure") ? 1 : 0) + (j.contains("spectralLaw") ? 1 : 0) +
                (j.contains("sampler") ? 1 : 0);
  if (sources != 1)
    throw ConfigError("scenario needs exactly one of rayMeasure | spectralLaw | sampler");
  if (j.contains("rayMeasure"))
    sc.rayMeasure =
        rayMeasureFromJson(j["rayMeasure"], sc.group, sc.alpha, sc.cone, sc.coneDim);
  if (j.contains("spectralLaw"))
    sc.spectralLaw =
        spectralLawFromJson(j["spectralLaw"], sc.group, sc.alpha, sc.cone, sc.coneDim);
  if (j.contains("sampler")) {
    const Json& s = j["sampler"];
    SamplerScenario ss;
    ss.kind = s.value("kind", "");
    if (ss.kind != "atomicSpectral" && ss.kind != "tiltedStationarization")
      throw ConfigError("unknown sampler kind '" + ss.kind + "'");
    if (ss.kind == "atomicSpectral") {
      if (!s.contains("spectralLaw")) throw ConfigError("atomicSpectral needs 'spectralLaw'");
      sc.spectralLaw =
          spectralLawFromJson(s["spectralLaw"], sc.group, sc.alpha, sc.cone, sc.coneDim);
    } else {
      ss.base.low = s.value("low", 0.5);
      ss.base.high = s.value("high", 1.5);
      ss.tilted = s.value("tilted", true);
    }
    sc.sampler = ss;
  }
  sc.anchorKind = j.value("anchor", Json::object()).value("kind", "argmax");
  auto readWeights = [&](const char* key) -> std::optional<std::vector<double>> {
    if (!j.contains(key)) return std::nullopt;
    auto w = j[key].get<std::vector<double>>();
    if (w.size() != sc.group->size())
      throw ConfigError(std::string(key) + " must have one entry per group element");
    return w;
  };
  sc.weightG = readWeights("weightG");
  sc.weightG2 = readWeights("weightG2");
  sc.tolerance = j.value("tolerance", 1e-12);
  sc.seed = j.value("seed", std::uint64_t{1});
  sc.mcSamples = j.value("mcSamples", static_cast<long long>(100000));
  if (j.contains("mecke7Grid")) sc.mecke7Grid = j["mecke7Grid"].get<std::vector<double>>();
  if (j.contains("exchangeLevels")) {
    auto levels = j["exchangeLevels"].get<std::vector<double>>();
    if (levels.size() != 2) throw ConfigError("exchangeLevels must be [c1, c2]");
    sc.exchangeLevels = {levels[0], levels[1]};
  }
  return sc;
}

Scenario loadScenario(const std::string& path) { return parseScenario(readJsonFile(path)); }

Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
  return j;
}

void writeJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace tailcalc
