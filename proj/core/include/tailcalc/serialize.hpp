#ifndef TAILCALC_SERIALIZE_HPP
#define TAILCALC_SERIALIZE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tailcalc/law.hpp"
#include "tailcalc/montecarlo.hpp"
#include "tailcalc/ray_measure.hpp"
#include "tailcalc/report.hpp"

namespace tailcalc {

using Json = nlohmann::ordered_json;

// --- building blocks ---

Json groupToJson(const Group& g);
GroupPtr groupFromJson(const Json& j);

Json fieldToJson(const Field& f);
Field fieldFromJson(const Json& j, const GroupPtr& group, ConeKind cone, std::size_t coneDim);

Json rayMeasureToJson(const RayMeasure& m);
RayMeasure rayMeasureFromJson(const Json& j, const GroupPtr& group, double alpha,
                              ConeKind cone, std::size_t coneDim);

Json spectralLawToJson(const SpectralLaw& law);
SpectralLaw spectralLawFromJson(const Json& j, const GroupPtr& group, double alpha,
                                ConeKind cone, std::size_t coneDim);

Json truncatedLawToJson(const TruncatedRayLaw& law);

Json identityReportToJson(const IdentityReport& r);
Json reportToJson(const Json& scenarioEcho, const std::string& suite,
                  const std::string& mode, const std::vector<IdentityReport>& reports,
                  int skipped = 0);

// --- scenarios ---

struct SamplerScenario {
  std::string kind;  // "atomicSpectral" | "tiltedStationarization"
  BaseFieldSampler base;
  bool tilted = true;
};

struct Scenario {
  GroupPtr group;
  double alpha = 1.0;
  ConeKind cone = ConeKind::Scalar;
  std::size_t coneDim = 1;
  std::optional<RayMeasure> rayMeasure;
  std::optional<SpectralLaw> spectralLaw;
  std::optional<SamplerScenario> sampler;
  std::string anchorKind = "argmax";
  std::optional<std::vector<double>> weightG;
  std::optional<std::vector<double>> weightG2;
  double tolerance = 1e-12;
  std::uint64_t seed = 1;
  long long mcSamples = 100000;
  std::vector<double> mecke7Grid = {0.5, 1.0, 2.0, 4.0};
  std::pair<double, double> exchangeLevels = {1.0, 2.0};
  Json echo;
};

Scenario parseScenario(const Json& j);
Scenario loadScenario(const std::string& path);
void writeJsonFile(const std::string& path, const Json& j);
Json readJsonFile(const std::string& path);

}  // namespace tailcalc

#endif  // TAILCALC_SERIALIZE_HPP
