#include "tailcalc/spectral.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "tailcalc/errors.hpp"

namespace tailcalc {

namespace {

constexpr double kFieldEqTol = 1e-9;

std::string fieldLabel(const Field& f) {
  std::ostringstream os;
  os << "(";
  for (std::size_t s = 0; s < f.group().size(); ++s) {
    if (s) os << ",";
    if (f.coneDim() == 1) {
      os << f.components()[s];
    } else {
      os << "[";
      for (std::size_t k = 0; k < f.coneDim(); ++k)
        os << (k ? "," : "") << f.components()[s * f.coneDim() + k];
      os << "]";
    }
  }
  os << ")";
  return os.str();
}

void requireCyclic(const Group& g, const char* what) {
  if (!g.isCyclic()) throw InvalidArgument(std::string(what) + " needs a cyclic group");
}

}  // namespace

FieldFamily spaceShiftCanaryFamily(const SpectralLaw& spectral) {
  const Group& G = spectral.group();
  FieldFamily fam;
  fam.push_back({"g=1", [](const Field&) { return 1.0; }});
  // equality indicators over every shifted atom field
  std::vector<Field> targets;
  for (const SpectralAtom& a : spectral.atoms())
    for (std::size_t t = 0; t < G.size(); ++t) {
      Field cand = a.w.shifted(t);
      bool dup = false;
      for (const Field& f : targets)
        if (f.approxEquals(cand, kFieldEqTol)) {
          dup = true;
          break;
        }
      if (!dup) targets.push_back(std::move(cand));
    }
  for (const Field& target : targets) {
    fam.push_back({"g=1{W=" + fieldLabel(target) + "}", [target](const Field& f) {
                     return f.approxEquals(target, kFieldEqTol) ? 1.0 : 0.0;
                   }});
  }
  for (std::size_t l = 0; l < G.size(); ++l)
    for (double c : {0.5, 1.0, 2.0}) {
      std::ostringstream id;
      id << "g=1{|W_" << G.elementLabel(l) << "|>" << c << "}";
      fam.push_back({id.str(), [l, c](const Field& f) { return f.norm(l) > c ? 1.0 : 0.0; }});
    }
  return fam;
}

FieldFamily spaceShiftThresholdFamily(const Group& group) {
  FieldFamily fam;
  fam.push_back({"g=1", [](const Field&) { return 1.0; }});
  std::size_t maxLag = std::min<std::size_t>(group.size(), 4);
  for (std::size_t l = 0; l < maxLag; ++l)
    for (double c : {0.25, 0.5, 0.75, 1.5}) {
      std::ostringstream id;
      id << "g=1{|W_" << group.elementLabel(l) << "|>" << c << "}";
      fam.push_back({id.str(), [l, c](const Field& f) { return f.norm(l) > c ? 1.0 : 0.0; }});
    }
  return fam;
}

TruncatedRayLaw buildQ(const SpectralLaw& spectral) {
  std::vector<LawAtom> atoms;
  for (const SpectralAtom& a : spectral.atoms()) {
    if (std::abs(a.w.norm(spectral.group().zero()) - 1.0) > 1e-12)
      throw InvalidArgument("spectral atom must have |W_0| = 1");
    atoms.push_back(LawAtom{a.prob, a.w, 1.0});
  }
  return TruncatedRayLaw(spectral.alpha(), spectral.groupPtr(), std::move(atoms));
}

std::vector<IdentityReport> checkSpaceShift(const SpectralLaw& spectral,
                                            const FieldFamily& fam, double tol) {
  requireCyclic(spectral.group(), "space-shift check");
  const Group& G = spectral.group();
  const double alpha = spectral.alpha();
  std::vector<IdentityReport> reports;
  for (std::size_t s = 0; s < G.size(); ++s) {
    std::size_t minusS = *G.neg(s);
    for (const FieldFunction& g : fam) {
      double lhs = 0.0, rhs = 0.0;
      for (const SpectralAtom& a : spectral.atoms()) {
        if (a.w.norm(minusS) > 0.0) lhs += a.prob * g.fn(a.w.shifted(minusS));
        double ns = a.w.norm(s);
        if (ns > 0.0) rhs += a.prob * g.fn(a.w.scaled(1.0 / ns)) * std::pow(ns, alpha);
      }
      reports.push_back(IdentityReport::exact(
          "space_shift", g.id + " @ s=" + G.elementLabel(s), lhs, rhs, tol));
    }
  }
  return reports;
}

bool spaceShiftHolds(const SpectralLaw& spectral, double tol) {
  for (const IdentityReport& r :
       checkSpaceShift(spectral, spaceShiftCanaryFamily(spectral), tol))
    if (!r.pass) return false;
  return true;
}

std::vector<IdentityReport> checkMecke7(const SpectralLaw& spectral,
                                        const std::vector<double>& rGrid,
                                        const TestFamily& fam, double tol) {
  requireCyclic(spectral.group(), "mecke7 check");
  const Group& G = spectral.group();
  const double alpha = spectral.alpha();
  TruncatedRayLaw Q = buildQ(spectral);
  std::vector<IdentityReport> reports;
  for (double r : rGrid) {
    if (!(r > 0.0)) throw InvalidArgument("mecke7 levels must be positive");
    for (const TestFunction& g : fam) {
      double lhs = 0.0, rhs = 0.0;
      for (const LawAtom& atom : Q.atoms()) {
        double density = atom.prob * std::pow(atom.lower, alpha);
        for (std::size_t s = 0; s < G.size(); ++s) {
          lhs += integrateTestFunction(alpha, g, s, atom.rep, 1.0,
                                       {{atom.rep.norm(s), r}}, density, atom.lower, kInf);
          std::size_t minusS = *G.neg(s);
          rhs += integrateTestFunction(alpha, g, s, atom.rep.shifted(minusS), r,
                                       {{r * atom.rep.norm(minusS), 1.0}}, density,
                                       atom.lower, kInf);
        }
      }
      rhs *= std::pow(r, -alpha);
      std::ostringstream id;
      id << g.id << " @ r=" << r;
      reports.push_back(IdentityReport::exact("mecke7", id.str(), lhs, rhs, tol));
    }
  }
  return reports;
}

AnchorFunction AnchorFunction::argmax() { return AnchorFunction{}; }

AnchorFunction AnchorFunction::firstExceedance() {
  AnchorFunction a;
  a.kind = Kind::FirstExceedance;
  a.zeroHomogeneous = false;
  a.name = "first_exceedance";
  return a;
}

AnchorFunction AnchorFunction::customFn(
    std::string name, bool zeroHomogeneous,
    std::function<std::optional<std::size_t>(const Field&)> fn) {
  AnchorFunction a;
  a.kind = Kind::Custom;
  a.zeroHomogeneous = zeroHomogeneous;
  a.name = std::move(name);
  a.custom = std::move(fn);
  return a;
}

std::optional<std::size_t> AnchorFunction::operator()(const Field& f) const {
  switch (kind) {
    case Kind::ArgMax: {
      double best = 0.0;
      std::optional<std::size_t> site;
      bool tie = false;
      for (std::size_t s = 0; s < f.group().size(); ++s) {
        double n = f.norm(s);
        if (!site || n > best) {
          best = n;
          site = s;
          tie = false;
        } else if (n == best) {
          tie = true;
        }
      }
      if (!(best > 0.0)) return std::nullopt;
      if (tie)
        throw TieDetected("argmax anchor hit a non-unique maximum on " + fieldLabel(f));
      return site;
    }
    case Kind::FirstExceedance: {
      for (std::size_t s = 0; s < f.group().size(); ++s)
        if (f.norm(s) > 1.0) return s;
      return std::nullopt;
    }
    case Kind::Custom:
      return custom(f);
  }
  return std::nullopt;
}

namespace {

void requireZeroHomogeneous(const AnchorFunction& T, const SpectralLaw& spectral) {
  if (!T.zeroHomogeneous)
    throw AnchorInvalid("anchor '" + T.name + "' is not 0-homogeneous");
  const Group& G = spectral.group();
  for (const SpectralAtom& a : spectral.atoms())
    for (std::size_t t = 0; t < G.size(); ++t) {
      Field f = a.w.shifted(t);
      auto base = T(f);
      for (double u : {0.5, 3.0})
        if (T(f.scaled(u)) != base)
          throw AnchorInvalid("anchor '" + T.name + "' is not 0-homogeneous on " +
                              fieldLabel(f));
    }
}

// anchor validity for the nu^T construction: the anchor of every shifted
// atom field must exist and land on a positive-norm site
void requireAnchorValidity(const AnchorFunction& T, const SpectralLaw& spectral) {
  const Group& G = spectral.group();
  for (const SpectralAtom& a : spectral.atoms())
    for (std::size_t t = 0; t < G.size(); ++t) {
      Field f = a.w.shifted(t);
      auto site = T(f);
      if (!site)
        throw AnchorInvalid("anchor '" + T.name + "' undefined on " + fieldLabel(f));
      if (!(f.norm(*site) > 0.0))
        throw AnchorInvalid("anchor '" + T.name + "' lands on a zero-norm site of " +
                            fieldLabel(f));
    }
}

void verifyTailConstruction(const RayMeasure& nu, const SpectralLaw& spectral,
                            const char* what, double tol) {
  if (!nu.isStationary(tol)) throw Error(std::string(what) + ": result not stationary");
  TruncatedRayLaw expected = buildQ(spectral);
  if (!TruncatedRayLaw::equal(nu.palmOfExceedance(tol), expected, tol))
    throw Error(std::string(what) + ": palm round trip does not reproduce Q");
}

}  // namespace

RayMeasure tailFromAnchor(const SpectralLaw& spectral, const AnchorFunction& T, double tol) {
  requireCyclic(spectral.group(), "anchored tail construction");
  if (!spaceShiftHolds(spectral, tol))
    throw SpaceShiftFailed("spectral law is not mass-stationary");
  requireZeroHomogeneous(T, spectral);
  requireAnchorValidity(T, spectral);

  const Group& G = spectral.group();
  std::vector<Ray> rays;
  for (const SpectralAtom& a : spectral.atoms())
    for (std::size_t s = 0; s < G.size(); ++s) {
      Field shifted = a.w.shifted(*G.neg(s));
      if (T(shifted) == std::optional<std::size_t>(s))
        rays.push_back(Ray{a.prob, std::move(shifted), 0.0, kInf});
    }
  RayMeasure nu =
      RayMeasure(spectral.alpha(), spectral.groupPtr(), std::move(rays)).canonical(tol);
  verifyTailConstruction(nu, spectral, "tailFromAnchor", tol);
  return nu;
}

SpectralLaw tiltedLaw(const SpectralLaw& spectral, const std::vector<double>& weightG) {
  const Group& G = spectral.group();
  if (weightG.size() != G.size())
    throw WeightInvalid("weight function size does not match the group");
  double total = 0.0;
  for (double w : weightG) {
    if (!(w > 0.0)) throw WeightInvalid("weight function must be strictly positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw WeightInvalid("weight function must sum to 1");

  const double alpha = spectral.alpha();
  std::vector<SpectralAtom> atoms;
  for (const SpectralAtom& a : spectral.atoms()) {
    if (!(a.w.maxNorm() > 0.0)) throw ZeroField("spectral atom with all norms zero");
    for (std::size_t s = 0; s < G.size(); ++s) {
      Field shifted = a.w.shifted(*G.neg(s));
      double J = 0.0;
      for (std::size_t t = 0; t < G.size(); ++t) {
        double n = shifted.norm(t);
        if (n > 0.0) J += std::pow(n, alpha) * weightG[t];
      }
      if (!(J > 0.0)) throw ZeroField("tilting functional vanished");
      atoms.push_back(
          SpectralAtom{a.prob * weightG[s], shifted.scaled(std::pow(J, -1.0 / alpha))});
    }
  }
  return SpectralLaw(alpha, spectral.groupPtr(), std::move(atoms)).canonical();
}

RayMeasure tailFromWeight(const SpectralLaw& spectral, const std::vector<double>& weightG,
                          double tol) {
  requireCyclic(spectral.group(), "weighted tail construction");
  if (!spaceShiftHolds(spectral, tol))
    throw SpaceShiftFailed("spectral law is not mass-stationary");
  SpectralLaw QG = tiltedLaw(spectral, weightG);
  std::vector<Ray> rays;
  for (const SpectralAtom& a : QG.atoms()) rays.push_back(Ray{a.prob, a.w, 0.0, kInf});
  RayMeasure nu =
      RayMeasure(spectral.alpha(), spectral.groupPtr(), std::move(rays)).canonical(tol);
  verifyTailConstruction(nu, spectral, "tailFromWeight", tol);
  return nu;
}

HKernel defaultHKernel(const Group& group) {
  const std::size_t n = group.size();
  HKernel H;
  H.name = "default(singleton partition)";
  H.fn = [n](const Field& f, std::size_t s) {
    double S = 0.0;
    for (std::size_t m = 0; m < n; ++m)
      if (f.norm(m) > 0.0) S += std::pow(2.0, -static_cast<double>(m + 1)) / 2.0;
    if (!(S > 0.0)) return 0.0;
    double ht = std::pow(2.0, -static_cast<double>(s + 1)) /
                (f.norm(s) > 0.0 ? 2.0 : 1.0);
    return ht / S;
  };
  return H;
}

HKernel weightHKernel(const Group& group, double alpha, std::vector<double> weightG) {
  if (weightG.size() != group.size())
    throw WeightInvalid("weight function size does not match the group");
  HKernel H;
  H.name = "weight-induced";
  H.fn = [alpha, weightG = std::move(weightG)](const Field& f, std::size_t s) {
    double J = 0.0;
    for (std::size_t t = 0; t < f.group().size(); ++t) {
      double n = f.norm(t);
      if (n > 0.0) J += std::pow(n, alpha) * weightG[t];
    }
    if (!(J > 0.0)) return 0.0;
    double n = f.norm(s);
    return n > 0.0 ? std::pow(n, alpha) * weightG[s] / J : 0.0;
  };
  return H;
}

RayMeasure tailFromH(const SpectralLaw& spectral, const HKernel& H, double tol) {
  requireCyclic(spectral.group(), "kernel tail construction");
  if (!spaceShiftHolds(spectral, tol))
    throw SpaceShiftFailed("spectral law is not mass-stationary");
  const Group& G = spectral.group();
  // normalization identity: sum_s H(theta_t W, s - t) 1{|W_s| > 0} = 1 for all t
  for (const SpectralAtom& a : spectral.atoms())
    for (std::size_t t = 0; t < G.size(); ++t) {
      Field shifted = a.w.shifted(t);
      double total = 0.0;
      for (std::size_t s = 0; s < G.size(); ++s)
        if (a.w.norm(s) > 0.0) total += H.fn(shifted, *G.sub(s, t));
      if (std::abs(total - 1.0) > tol)
        throw HInvalid("kernel '" + H.name + "' sums to " + std::to_string(total) +
                       " on " + fieldLabel(a.w));
    }
  std::vector<Ray> rays;
  for (const SpectralAtom& a : spectral.atoms())
    for (std::size_t s = 0; s < G.size(); ++s) {
      Field shifted = a.w.shifted(*G.neg(s));
      double h = H.fn(shifted, s);
      if (h > 0.0) rays.push_back(Ray{a.prob * h, std::move(shifted), 0.0, kInf});
    }
  RayMeasure nu =
      RayMeasure(spectral.alpha(), spectral.groupPtr(), std::move(rays)).canonical(tol);
  verifyTailConstruction(nu, spectral, "tailFromH", tol);
  return nu;
}

RayMeasure tailFromH(const SpectralLaw& spectral, double tol) {
  return tailFromH(spectral, defaultHKernel(spectral.group()), tol);
}

SpectralLaw extractSpectralDecomposition(const RayMeasure& nu, double tol) {
  if (!nu.isStationary(tol))
    throw NotStationary("spectral decomposition needs a stationary measure");
  double norm = nu.palmNormalization();
  if (std::abs(norm - 1.0) > tol)
    throw NotNormalized("nu(|Y_0|>1) = " + std::to_string(norm));
  const std::size_t zero = nu.group().zero();
  std::vector<SpectralAtom> atoms;
  for (const Ray& r : nu.rays()) {
    double n0 = r.rep.norm(zero);
    if (!(n0 > 0.0)) continue;
    double lo = std::max(r.lower, 1.0 / n0);
    double p = r.weight * powerMass(nu.alpha(), 0.0, lo, r.upper);
    if (p > 0.0) atoms.push_back(SpectralAtom{p, r.rep.normalizedToW()});
  }
  SpectralLaw QP = SpectralLaw(nu.alpha(), nu.groupPtr(), std::move(atoms)).canonical(tol);

  // angular decomposition of nu on {|Y_0| > 0} against Q' (threshold family)
  const Group& G = nu.group();
  std::vector<TestFunction> fam;
  for (std::size_t l = 0; l < std::min<std::size_t>(G.size(), 2); ++l)
    for (double c : {0.5, 1.0, 2.0})
      fam.push_back(TestFunction::product("decomp", std::nullopt, {{l, c, true}}));
  for (const TestFunction& g : fam) {
    double lhs = 0.0;
    for (const Ray& r : nu.rays())
      if (r.rep.norm(zero) > 0.0)
        lhs += integrateTestFunction(nu.alpha(), g, std::nullopt, r.rep, 1.0, {}, r.weight,
                                     r.lower, r.upper);
    double rhs = 0.0;
    for (const SpectralAtom& a : QP.atoms())
      rhs += integrateTestFunction(nu.alpha(), g, std::nullopt, a.w, 1.0, {}, a.prob, 0.0,
                                   kInf);
    if (!IdentityReport::compareValues(lhs, rhs, tol))
      throw Error("angular decomposition mismatch: " + std::to_string(lhs) + " vs " +
                  std::to_string(rhs));
  }
  return QP;
}

namespace {

// 0-homogeneous payload family used by the stationarity validation
std::vector<std::pair<std::string, std::function<double(const Field&)>>>
zeroHomogeneousPayloads(const RayMeasure& nu) {
  std::vector<std::pair<std::string, std::function<double(const Field&)>>> out;
  out.emplace_back("payload=1", [](const Field&) { return 1.0; });
  std::vector<Field> targets;
  RayMeasure canon = nu.canonical();
  for (const Ray& r : canon.rays())
    for (std::size_t t = 0; t < nu.group().size(); ++t) {
      Field cand = r.rep.shifted(t);
      double m = cand.maxNorm();
      if (!(m > 0.0)) continue;
      cand = cand.scaled(1.0 / m);
      bool dup = false;
      for (const Field& f : targets)
        if (f.approxEquals(cand, kFieldEqTol)) {
          dup = true;
          break;
        }
      if (!dup) targets.push_back(std::move(cand));
    }
  for (const Field& target : targets)
    out.emplace_back("payload=1{maxnormalized=" + fieldLabel(target) + "}",
                     [target](const Field& f) {
                       double m = f.maxNorm();
                       if (!(m > 0.0)) return 0.0;
                       return f.scaled(1.0 / m).approxEquals(target, kFieldEqTol) ? 1.0
                                                                                  : 0.0;
                     });
  return out;
}

}  // namespace

SpectralRepresentation spectralRepresentation(const RayMeasure& nu, double tol) {
  requireCyclic(nu.group(), "spectral representation");
  if (!nu.isStationary(tol))
    throw NotStationary("spectral representation needs a stationary measure");
  RayMeasure canon = nu.canonical(tol);
  for (const Ray& r : canon.rays())
    if (r.lower != 0.0 || !std::isinf(r.upper))
      throw InvalidArgument("not a tail measure: rays must cover (0, infinity)");

  const double alpha = nu.alpha();
  const double N = static_cast<double>(canon.rays().size());
  SpectralRepresentation rep{alpha, nu.groupPtr(), {}, {}};
  for (const Ray& r : canon.rays())
    rep.atoms.push_back(
        SpectralAtom{1.0 / N, r.rep.scaled(std::pow(r.weight * N, 1.0 / alpha))});

  const Group& G = nu.group();
  // (i) finiteness: E_{Q*} sum_s |Y_s|^alpha, which must equal |G| once the
  // per-site normalization holds
  double energy = 0.0;
  for (const SpectralAtom& a : rep.atoms) energy += a.prob * a.w.powerSum(alpha);
  rep.validation.push_back(IdentityReport::exact("spectral_representation", "total energy",
                                                 energy, static_cast<double>(G.size()),
                                                 tol));
  // (ii) stationarity in spectral form, on a 0-homogeneous family
  for (auto& [pid, payload] : zeroHomogeneousPayloads(canon)) {
    double lhs = 0.0, rhs = 0.0;
    for (const SpectralAtom& a : rep.atoms)
      for (std::size_t s = 0; s < G.size(); ++s) {
        double ns = a.w.norm(s);
        if (ns > 0.0) lhs += a.prob * payload(a.w) * std::pow(ns, alpha);
        double n0 = a.w.norm(G.zero());
        if (n0 > 0.0)
          rhs += a.prob * payload(a.w.shifted(*G.neg(s))) * std::pow(n0, alpha);
      }
    rep.validation.push_back(
        IdentityReport::exact("spectral_representation", "stationarity " + pid, lhs, rhs, tol));
  }
  // (iii) per-site normalization E_{Q*} |Y_s|^alpha = 1
  for (std::size_t s = 0; s < G.size(); ++s) {
    double v = 0.0;
    for (const SpectralAtom& a : rep.atoms) {
      double ns = a.w.norm(s);
      if (ns > 0.0) v += a.prob * std::pow(ns, alpha);
    }
    rep.validation.push_back(IdentityReport::exact(
        "spectral_representation", "E|Y_" + G.elementLabel(s) + "|^alpha", v, 1.0, tol));
  }
  // reconstruction
  bool recon = RayMeasure::equal(spectralReconstruction(rep), canon, tol);
  rep.validation.push_back(IdentityReport::exact("spectral_representation", "reconstruction",
                                                 recon ? 1.0 : 0.0, 1.0, 0.0));
  return rep;
}

SpectralRepresentation movingShiftRepresentation(const RayMeasure& nu, double tol) {
  requireCyclic(nu.group(), "moving shift representation");
  TruncatedRayLaw Q = nu.palmOfExceedance(tol).canonical(tol);
  const double alpha = nu.alpha();
  SpectralRepresentation rep{alpha, nu.groupPtr(), {}, {}};
  for (std::size_t i = 0; i < Q.atoms().size(); ++i) {
    LawAtom a = Q.spectralAtom(i);
    double Z = a.rep.powerSum(alpha);
    if (!std::isfinite(Z) || !(Z > 0.0))
      throw DivergentEnergy("sum_s |W_s|^alpha must be positive and finite");
    rep.atoms.push_back(SpectralAtom{a.prob, a.rep.scaled(std::pow(Z, -1.0 / alpha))});
  }
  const Group& G = nu.group();
  double intensity = 0.0;
  for (const SpectralAtom& a : rep.atoms) intensity += a.prob * a.w.powerSum(alpha);
  rep.validation.push_back(
      IdentityReport::exact("moving_shift", "total intensity", intensity, 1.0, tol));
  bool recon = RayMeasure::equal(movingShiftReconstruction(rep), nu.canonical(tol), tol);
  rep.validation.push_back(
      IdentityReport::exact("moving_shift", "reconstruction", recon ? 1.0 : 0.0, 1.0, 0.0));
  (void)G;
  return rep;
}

RayMeasure spectralReconstruction(const SpectralRepresentation& rep) {
  std::vector<Ray> rays;
  for (const SpectralAtom& a : rep.atoms) rays.push_back(Ray{a.prob, a.w, 0.0, kInf});
  return RayMeasure(rep.alpha, rep.group, std::move(rays)).canonical();
}

RayMeasure movingShiftReconstruction(const SpectralRepresentation& rep) {
  const Group& G = *rep.group;
  std::vector<Ray> rays;
  for (const SpectralAtom& a : rep.atoms)
    for (std::size_t s = 0; s < G.size(); ++s)
      rays.push_back(Ray{a.prob, a.w.shifted(s), 0.0, kInf});
  return RayMeasure(rep.alpha, rep.group, std::move(rays)).canonical();
}

}  // namespace tailcalc
