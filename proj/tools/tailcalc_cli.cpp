// Command-line front end: scenario loading, suite execution, structured
// reports. Exit codes: 0 all pass, 1 identity failure, 2 configuration error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tailcalc/anchoring.hpp"
#include "tailcalc/errors.hpp"
#include "tailcalc/montecarlo.hpp"
#include "tailcalc/palm_identities.hpp"
#include "tailcalc/serialize.hpp"
#include "tailcalc/spectral.hpp"
#include "tailcalc/version.hpp"

namespace tc = tailcalc;
using tc::Json;

namespace {

tc::AnchorFunction anchorFromKind(const std::string& kind) {
  if (kind == "argmax") return tc::AnchorFunction::argmax();
  if (kind == "firstExceedance") return tc::AnchorFunction::firstExceedance();
  throw tc::ConfigError("unknown anchor kind '" + kind + "'");
}

struct DerivedObjects {
  std::optional<tc::RayMeasure> nu;
  std::optional<tc::TruncatedRayLaw> Q;
  std::optional<tc::SpectralLaw> spectral;
};

// Exact-path objects: whichever of (nu, Q, spectral) the scenario does not
// provide directly is derived through the cited constructions.
DerivedObjects derive(const tc::Scenario& sc) {
  DerivedObjects d;
  if (sc.rayMeasure) {
    d.nu = sc.rayMeasure->canonical(sc.tolerance);
    d.Q = d.nu->palmOfExceedance(sc.tolerance);
    d.spectral = tc::extractSpectralDecomposition(*d.nu, sc.tolerance);
  } else if (sc.spectralLaw) {
    d.spectral = sc.spectralLaw->canonical();
    d.Q = tc::buildQ(*d.spectral);
    std::vector<double> uniform(sc.group->size(),
                                1.0 / static_cast<double>(sc.group->size()));
    d.nu = tc::tailFromWeight(*d.spectral, sc.weightG ? *sc.weightG : uniform, sc.tolerance);
  }
  return d;
}

void append(std::vector<tc::IdentityReport>& into, std::vector<tc::IdentityReport> from) {
  for (auto& r : from) into.push_back(std::move(r));
}

std::vector<tc::IdentityReport> runExactSuite(const tc::Scenario& sc,
                                              const std::string& suite, int& skipped) {
  DerivedObjects d = derive(sc);
  if (!d.nu || !d.Q || !d.spectral)
    throw tc::ConfigError("exact suites need a rayMeasure or spectralLaw source");
  const tc::Group& G = *sc.group;
  const double tol = sc.tolerance;
  tc::TestFamily canary = tc::defaultCanaryFamily(G);
  std::vector<tc::IdentityReport> reports;

  bool wantPalm = suite == "palm" || suite == "all";
  bool wantSpectral = suite == "spectral" || suite == "all";
  bool wantTail = suite == "tail" || suite == "all";
  bool wantAnchor = suite == "anchor" || suite == "all";

  if (wantPalm) {
    append(reports, tc::checkRefinedCampbell(*d.nu, *d.Q, canary, tol));
    append(reports, tc::checkMecke(*d.Q, canary, tol));
    append(reports, tc::checkExchange(*d.nu, sc.exchangeLevels.first,
                                      sc.exchangeLevels.second, canary, tol));
    bool roundTrip = tc::RayMeasure::equal(tc::invertPalm(*d.Q, tol),
                                           d.nu->restrictedToExceedance(1.0), tol);
    reports.push_back(tc::IdentityReport::exact(
        "inversion_roundtrip", "invert_palm(Q) = nu on {xi(G)>0}", roundTrip ? 1.0 : 0.0,
        1.0, 0.0));
    tc::AnchorFunction anchor = anchorFromKind(sc.anchorKind);
    append(reports,
           tc::checkAllocation(*d.nu,
                               tc::constantTargetAllocation(sc.anchorKind, anchor),
                               1.0, 1.0, tc::defaultPairFamily(G), tol));
    append(reports, tc::checkAllocation(*d.nu, tc::identityAllocation(), 1.0, 1.0,
                                        tc::defaultPairFamily(G), tol));
  }
  if (wantSpectral) {
    append(reports,
           tc::checkSpaceShift(*d.spectral, tc::spaceShiftCanaryFamily(*d.spectral), tol));
    append(reports, tc::checkMecke7(*d.spectral, sc.mecke7Grid, canary, tol));
    append(reports, tc::spectralRepresentation(*d.nu, tol).validation);
    append(reports, tc::movingShiftRepresentation(*d.nu, tol).validation);
  }
  if (wantTail) {
    tc::AnchorFunction anchor = anchorFromKind(sc.anchorKind);
    std::vector<double> uniform(G.size(), 1.0 / static_cast<double>(G.size()));
    tc::RayMeasure viaAnchor = tc::tailFromAnchor(*d.spectral, anchor, tol);
    tc::RayMeasure viaWeight =
        tc::tailFromWeight(*d.spectral, sc.weightG ? *sc.weightG : uniform, tol);
    tc::RayMeasure viaH = tc::tailFromH(*d.spectral, tol);
    reports.push_back(tc::IdentityReport::exact(
        "construction_agreement", "anchor=weight",
        tc::RayMeasure::equal(viaAnchor, viaWeight, tol) ? 1.0 : 0.0, 1.0, 0.0));
    reports.push_back(tc::IdentityReport::exact(
        "construction_agreement", "anchor=H",
        tc::RayMeasure::equal(viaAnchor, viaH, tol) ? 1.0 : 0.0, 1.0, 0.0));
    if (sc.weightG2) {
      tc::RayMeasure viaWeight2 = tc::tailFromWeight(*d.spectral, *sc.weightG2, tol);
      reports.push_back(tc::IdentityReport::exact(
          "construction_agreement", "weight=weight2",
          tc::RayMeasure::equal(viaWeight, viaWeight2, tol) ? 1.0 : 0.0, 1.0, 0.0));
    }
    reports.push_back(tc::IdentityReport::exact("tail_normalization", "nu(|Y_0|>1)=1",
                                                viaWeight.palmNormalization(), 1.0, tol));
    for (double u : {0.5, 2.0, 5.0}) {
      tc::RayMeasure scaled = viaWeight.scalePushforward(u).canonical(tol);
      tc::RayMeasure base = viaWeight.canonical(tol);
      bool ok = scaled.rays().size() == base.rays().size();
      if (ok)
        for (std::size_t i = 0; i < base.rays().size(); ++i) {
          double expect = base.rays()[i].weight * std::pow(u, sc.alpha);
          if (std::abs(scaled.rays()[i].weight - expect) > tol ||
              !scaled.rays()[i].rep.approxEquals(base.rays()[i].rep, tol))
            ok = false;
        }
      reports.push_back(tc::IdentityReport::exact(
          "tail_homogeneity", "u=" + std::to_string(u), ok ? 1.0 : 0.0, 1.0, 0.0));
    }
    reports.push_back(tc::IdentityReport::exact("tail_stationarity", "all shifts",
                                                viaWeight.isStationary(tol) ? 1.0 : 0.0,
                                                1.0, 0.0));
    reports.push_back(tc::IdentityReport::exact(
        "palm_round_trip", "palm(nu^G) = Q",
        tc::TruncatedRayLaw::equal(viaWeight.palmOfExceedance(tol), *d.Q, tol) ? 1.0 : 0.0,
        1.0, 0.0));
  }
  if (wantAnchor) {
    tc::AnchorFunction anchor = anchorFromKind(sc.anchorKind);
    reports.push_back(tc::IdentityReport::exact(
        "anchor_covariance", sc.anchorKind,
        tc::checkAnchorCovariance(anchor, *d.spectral) ? 1.0 : 0.0, 1.0, 0.0));
    tc::TestFamily palmFam;
    palmFam.push_back(tc::TestFunction::product("g=1", std::nullopt, {}));
    palmFam.push_back(
        tc::TestFunction::product("g=1{|Y_0|>2}", std::nullopt, {{G.zero(), 2.0, true}}));
    append(reports, tc::checkAnchoredPalm(*d.Q, anchor, palmFam, tol));
    tc::AnchorDensity density = tc::anchorDensity(*d.nu, anchor, tol);
    double total = 0.0;
    for (std::size_t s = 0; s < G.size(); ++s) {
      total += density.direct[s];
      reports.push_back(tc::IdentityReport::exact("anchor_density",
                                                  "f_tau(" + G.elementLabel(s) + ")",
                                                  density.direct[s], density.movingShift[s],
                                                  tol));
    }
    reports.push_back(
        tc::IdentityReport::exact("anchor_density", "sum=1", total, 1.0, tol));
  }
  (void)skipped;
  return reports;
}

std::vector<tc::IdentityReport> runMonteCarloSuite(const tc::Scenario& sc,
                                                   const std::string& suite, int& skipped) {
  tc::Sampler sampler = [&]() {
    if (sc.sampler && sc.sampler->kind == "tiltedStationarization")
      return tc::Sampler::tiltedStationarization(sc.group, sc.alpha, sc.sampler->base,
                                                 sc.sampler->tilted, sc.seed);
    if (sc.spectralLaw) return tc::Sampler::atomicSpectral(*sc.spectralLaw, sc.seed);
    if (sc.rayMeasure)
      return tc::Sampler::atomicSpectral(
          tc::extractSpectralDecomposition(sc.rayMeasure->canonical(sc.tolerance),
                                           sc.tolerance),
          sc.seed);
    throw tc::ConfigError("monte carlo mode needs a sampler, spectralLaw or rayMeasure");
  }();

  std::vector<tc::IdentityReport> reports;
  long long n = sc.mcSamples;
  bool wantPalm = suite == "palm" || suite == "all";
  bool wantSpectral = suite == "spectral" || suite == "all";
  bool wantAnchor = suite == "anchor" || suite == "all";
  if (wantPalm) append(reports, tc::estimateIdentity("mecke", sampler, n));
  if (wantSpectral) {
    append(reports, tc::estimateIdentity("space_shift", sampler, n));
    if (sampler.kind() == tc::Sampler::Kind::AtomicSpectral)
      append(reports, tc::estimateIdentity("mecke7", sampler, n));
  }
  if (wantAnchor) {
    append(reports, tc::estimateIdentity("palm1", sampler, n));
    auto [direct, kappa] = tc::estimateTheta(sampler, n);
    reports.push_back(tc::IdentityReport::monteCarlo(
        "index", "theta_direct=theta_kappa", direct.mean, kappa.mean, direct.standardError,
        kappa.standardError, direct.sampleCount));
  }
  (void)skipped;
  return reports;
}

int cmdVerify(const std::string& scenarioPath, const std::string& suite,
              const std::string& mode, const std::string& outPath) {
  tc::Scenario sc = tc::loadScenario(scenarioPath);
  int skipped = 0;
  std::vector<tc::IdentityReport> reports = (mode == "mc")
                                                ? runMonteCarloSuite(sc, suite, skipped)
                                                : runExactSuite(sc, suite, skipped);
  Json report = tc::reportToJson(sc.echo, suite, mode, reports, skipped);
  if (!outPath.empty()) tc::writeJsonFile(outPath, report);
  tc::ReportSummary s = tc::summarize(reports);
  std::cout << "verify: " << s.passed << " passed, " << s.failed << " failed\n";
  for (const tc::IdentityReport& r : reports)
    if (!r.pass)
      std::cout << "  FAIL " << r.identity << " [" << r.testFunctionId
                << "] lhs=" << r.lhs << " rhs=" << r.rhs << "\n";
  return s.failed == 0 ? 0 : 1;
}

// canonical ray section with display rounding (12 significant digits), so
// that equal-within-tolerance constructions print identically
Json displayCanonical(const tc::RayMeasure& nu) {
  auto rounded = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return Json::parse(buf);
  };
  Json rays = Json::array();
  tc::RayMeasure canon = nu.canonical();
  for (const tc::Ray& r : canon.rays()) {
    Json rj;
    rj["w"] = rounded(r.weight);
    rj["lower"] = rounded(r.lower);
    if (!std::isinf(r.upper)) rj["upper"] = rounded(r.upper);
    Json field = Json::array();
    for (double c : r.rep.components()) field.push_back(rounded(c));
    rj["field"] = field;
    rays.push_back(rj);
  }
  return rays;
}

int cmdConstruct(const std::string& scenarioPath, const std::string& via,
                 const std::string& outPath) {
  tc::Scenario sc = tc::loadScenario(scenarioPath);
  if (!sc.spectralLaw)
    throw tc::ConfigError("construct needs a spectralLaw source");
  tc::SpectralLaw spectral = sc.spectralLaw->canonical();
  std::vector<double> uniform(sc.group->size(), 1.0 / static_cast<double>(sc.group->size()));
  tc::RayMeasure nu = [&]() {
    if (via == "anchor")
      return tc::tailFromAnchor(spectral, anchorFromKind(sc.anchorKind), sc.tolerance);
    if (via == "weight")
      return tc::tailFromWeight(spectral, sc.weightG ? *sc.weightG : uniform, sc.tolerance);
    if (via == "H") return tc::tailFromH(spectral, sc.tolerance);
    throw tc::ConfigError("--via must be anchor | weight | H");
  }();

  Json out;
  out["version"] = tc::kVersion;
  out["via"] = via;
  out["alpha"] = sc.alpha;
  out["group"] = tc::groupToJson(*sc.group);
  out["canonical"] = displayCanonical(nu);
  out["rays"] = tc::rayMeasureToJson(nu)["rays"];
  Json validation;
  validation["stationary"] = nu.isStationary(sc.tolerance);
  validation["nu_norm"] = nu.palmNormalization();
  validation["palm_round_trip"] = tc::TruncatedRayLaw::equal(
      nu.palmOfExceedance(sc.tolerance), tc::buildQ(spectral), sc.tolerance);
  bool homogeneous = true;
  tc::RayMeasure canon = nu.canonical();
  for (const tc::Ray& r : canon.rays())
    if (r.lower != 0.0 || !std::isinf(r.upper)) homogeneous = false;
  validation["homogeneous"] = homogeneous;
  out["validation"] = validation;
  if (!outPath.empty())
    tc::writeJsonFile(outPath, out);
  else
    std::cout << out.dump(2) << "\n";
  bool ok = validation["stationary"].get<bool>() && validation["palm_round_trip"].get<bool>() &&
            homogeneous && std::abs(validation["nu_norm"].get<double>() - 1.0) <= sc.tolerance;
  std::cout << "construct via " << via << ": " << (ok ? "valid" : "INVALID") << ", "
            << nu.canonical().rays().size() << " canonical rays\n";
  return ok ? 0 : 1;
}

int cmdIndex(const std::string& scenarioPath) {
  tc::Scenario sc = tc::loadScenario(scenarioPath);
  if (sc.sampler && sc.sampler->kind == "tiltedStationarization") {
    tc::Sampler sampler = tc::Sampler::tiltedStationarization(
        sc.group, sc.alpha, sc.sampler->base, sc.sampler->tilted, sc.seed);
    auto [direct, kappa] = tc::estimateTheta(sampler, sc.mcSamples);
    bool consistent = std::abs(direct.mean - kappa.mean) <=
                      3.0 * (direct.standardError + kappa.standardError) + 1e-3;
    Json out;
    out["mode"] = "montecarlo";
    out["n"] = direct.sampleCount;
    out["seed"] = sc.seed;
    out["theta_direct"] = Json{{"mean", direct.mean}, {"se", direct.standardError}};
    out["theta_kappa"] = Json{{"mean", kappa.mean}, {"se", kappa.standardError}};
    out["verdict"] = consistent ? "consistent" : "inconsistent";
    std::cout << out.dump(2) << "\n";
    return consistent ? 0 : 1;
  }
  DerivedObjects d = derive(sc);
  if (!d.Q) throw tc::ConfigError("index needs a source yielding Q");
  tc::AnchorFunction anchor = anchorFromKind(sc.anchorKind);
  tc::AnchoredLaw anchored = tc::anchoredPalm(*d.Q, anchor, sc.tolerance);
  double thetaDirect = tc::extremalIndexDirect(*d.Q);
  double thetaKappa = tc::extremalIndexKappa(*d.Q, sc.tolerance);
  double meanXi = 0.0;
  {
    tc::TestFamily one;
    one.push_back(tc::TestFunction::product("xi", std::nullopt, {}));
    // E_{Q_T} xi(G) = sum_s Q_T(|Y_s| > 1)
    for (std::size_t s = 0; s < sc.group->size(); ++s) {
      tc::TestFunction g = tc::TestFunction::product("xi_s", std::nullopt, {{s, 1.0, true}});
      meanXi += anchored.base.expect(g, std::nullopt);
    }
  }
  double thetaConditional = 1.0 / meanXi;
  bool agree = std::abs(thetaDirect - thetaKappa) <= sc.tolerance &&
               std::abs(thetaDirect - anchored.theta) <= sc.tolerance &&
               std::abs(thetaDirect - thetaConditional) <= sc.tolerance;
  Json out;
  out["mode"] = "exact";
  out["anchor_kind"] = sc.anchorKind;
  out["theta_direct"] = thetaDirect;
  out["theta_kappa"] = thetaKappa;
  out["theta_anchor"] = anchored.theta;
  out["theta_conditional"] = thetaConditional;
  out["verdict"] = agree ? "agree" : "disagree";
  std::cout << out.dump(2) << "\n";
  return agree ? 0 : 1;
}

int cmdSample(const std::string& scenarioPath, long long n, std::optional<std::uint64_t> seed,
              const std::string& outPath) {
  tc::Scenario sc = tc::loadScenario(scenarioPath);
  std::uint64_t rootSeed = seed ? *seed : sc.seed;
  tc::Sampler sampler = [&]() {
    if (sc.sampler && sc.sampler->kind == "tiltedStationarization")
      return tc::Sampler::tiltedStationarization(sc.group, sc.alpha, sc.sampler->base,
                                                 sc.sampler->tilted, rootSeed);
    if (sc.spectralLaw) return tc::Sampler::atomicSpectral(*sc.spectralLaw, rootSeed);
    throw tc::ConfigError("sample needs a sampler or spectralLaw source");
  }();
  Json out;
  out["version"] = tc::kVersion;
  out["seed"] = rootSeed;
  out["n"] = n;
  out["alpha"] = sc.alpha;
  out["group"] = tc::groupToJson(*sc.group);
  Json fields = Json::array();
  for (long long i = 0; i < n; ++i)
    fields.push_back(tc::fieldToJson(sampler.sample(static_cast<std::uint64_t>(i))));
  out["fields"] = fields;
  if (!outPath.empty())
    tc::writeJsonFile(outPath, out);
  else
    std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo verification of Palm-calculus identities for "
               "exceedance measures and tail measures on finite Abelian groups"};
  app.set_version_flag("--version", tc::kVersion);
  app.require_subcommand(1);

  std::string scenarioPath, outPath, suite = "all", mode = "exact", via = "weight";
  long long n = 3;
  std::optional<std::uint64_t> seed;

  CLI::App* verify = app.add_subcommand("verify", "run identity checkers on a scenario");
  verify->add_option("scenario", scenarioPath, "scenario file")->required();
  verify->add_option("--suite", suite, "palm | spectral | tail | anchor | all")
      ->check(CLI::IsMember({"palm", "spectral", "tail", "anchor", "all"}));
  verify->add_option("--mode", mode, "exact | mc")->check(CLI::IsMember({"exact", "mc"}));
  verify->add_option("--out", outPath, "report file");

  CLI::App* construct = app.add_subcommand("construct", "build the stationary tail measure");
  construct->add_option("scenario", scenarioPath, "scenario file")->required();
  construct->add_option("--via", via, "anchor | weight | H")
      ->check(CLI::IsMember({"anchor", "weight", "H"}));
  construct->add_option("--out", outPath, "output file");

  CLI::App* index = app.add_subcommand("index", "candidate extremal index by all routes");
  index->add_option("scenario", scenarioPath, "scenario file")->required();

  CLI::App* sample = app.add_subcommand("sample", "draw fields from the scenario's law");
  sample->add_option("scenario", scenarioPath, "scenario file")->required();
  sample->add_option("-n", n, "number of samples");
  sample->add_option("--seed", seed, "root seed (defaults to the scenario's)");
  sample->add_option("--out", outPath, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmdVerify(scenarioPath, suite, mode, outPath);
    if (construct->parsed()) return cmdConstruct(scenarioPath, via, outPath);
    if (index->parsed()) return cmdIndex(scenarioPath);
    if (sample->parsed()) return cmdSample(scenarioPath, n, seed, outPath);
  } catch (const tc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const tc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
