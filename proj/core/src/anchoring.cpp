#include "tailcalc/anchoring.hpp"

#include <cmath>
#include <sstream>

#include "tailcalc/errors.hpp"

namespace tailcalc {

namespace {

struct AtomSegment {
  double lo;
  double hi;
  double prob;        // truncated-Pareto mass of the segment
  std::size_t count;  // exceedance count of u * rep on the segment
  Field field;        // representative field inside the segment
};

std::vector<AtomSegment> atomSegments(const LawAtom& atom, double alpha) {
  std::vector<AtomSegment> out;
  auto bps = radialBreakpoints(atom.rep, 1.0, atom.lower, kInf);
  for (const RadialSegment& seg : radialSegments(atom.lower, kInf, bps)) {
    double u = segmentRepresentative(seg);
    Field f = atom.rep.scaled(u);
    out.push_back(AtomSegment{seg.lo, seg.hi, truncatedParetoMass(alpha, atom.lower, seg),
                              f.exceedanceCount(1.0), std::move(f)});
  }
  return out;
}

void checkCovarianceOnFields(const AnchorFunction& T, const Group& G,
                             const std::vector<Field>& fields) {
  if (!G.isCyclic()) throw InvalidArgument("anchor covariance check needs a cyclic group");
  for (const Field& f : fields) {
    auto base = T(f);
    for (std::size_t s = 0; s < G.size(); ++s) {
      auto lhs = T(f.shifted(s));
      std::optional<std::size_t> rhs = base ? G.sub(*base, s) : std::optional<std::size_t>();
      if (lhs != rhs)
        throw NotCovariant("anchor '" + T.name + "' fails covariance at s=" +
                           G.elementLabel(s));
    }
  }
}

std::vector<Field> reachableFields(const TruncatedRayLaw& Q) {
  std::vector<Field> out;
  for (const LawAtom& atom : Q.atoms())
    for (AtomSegment& seg : atomSegments(atom, Q.alpha()))
      if (seg.count > 0) out.push_back(std::move(seg.field));
  return out;
}

// field-only test family used for the palm2 cross-check
TestFamily fieldOnlyFamily(const Group& G) {
  TestFamily fam;
  fam.push_back(TestFunction::product("g=1", std::nullopt, {}));
  std::vector<std::size_t> lags = {G.zero()};
  if (G.size() > 1)
    for (std::size_t i = 0; i < G.size(); ++i)
      if (i != G.zero()) {
        lags.push_back(i);
        break;
      }
  for (std::size_t l : lags)
    for (double c : {1.0, 2.0}) {
      std::ostringstream id;
      id << "g=1{|Y_" << G.elementLabel(l) << "|>" << c << "}";
      fam.push_back(TestFunction::product(id.str(), std::nullopt, {{l, c, true}}));
    }
  for (std::size_t k = 1; k <= std::min<std::size_t>(G.size(), 2); ++k)
    fam.push_back(countIndicator(G, 1.0, k));
  return fam;
}

}  // namespace

bool checkAnchorCovariance(const AnchorFunction& T, const SpectralLaw& spectral) {
  try {
    checkCovarianceOnFields(T, spectral.group(), reachableFields(buildQ(spectral)));
    return true;
  } catch (const NotCovariant&) {
    return false;
  }
}

double extremalIndexDirect(const TruncatedRayLaw& Q) {
  double theta = 0.0;
  for (const LawAtom& atom : Q.atoms())
    for (const AtomSegment& seg : atomSegments(atom, Q.alpha())) {
      if (seg.prob <= 0.0) continue;
      if (seg.count == 0)
        throw Error("xi(G) = 0 with positive probability under Q");
      theta += atom.prob * seg.prob / static_cast<double>(seg.count);
    }
  return theta;
}

double extremalIndexKappa(const TruncatedRayLaw& Q, double tol) {
  double theta = 0.0;
  for (const LawAtom& atom : Q.atoms()) {
    double Z = atom.rep.powerSum(Q.alpha());
    if (!std::isfinite(Z) || !(Z > 0.0))
      throw ZeroField("atom energy must be positive and finite");
    // kappa = min_s Z^{1/alpha} / |W_s|; kappa^{-alpha} = max_s |W_s|^alpha / Z
    theta += atom.prob * std::pow(atom.rep.maxNorm(), Q.alpha()) / Z;
  }
  double direct = extremalIndexDirect(Q);
  if (std::abs(theta - direct) > tol)
    throw Error("kappa route disagrees with the direct extremal index: " +
                std::to_string(theta) + " vs " + std::to_string(direct));
  return theta;
}

AnchoredLaw anchoredPalm(const TruncatedRayLaw& Q, const AnchorFunction& T, double tol) {
  const Group& G = Q.group();
  if (Q.probNoExceedance(1.0) > tol)
    throw InvalidArgument("anchored palm needs Q(0 < xi(G)) = 1");
  checkCovarianceOnFields(T, G, reachableFields(Q));

  // the anchor must be radius-independent per atom and must sit above level 1
  std::vector<std::optional<std::size_t>> anchorSite(Q.atoms().size());
  double thetaAnchor = 0.0;
  for (std::size_t i = 0; i < Q.atoms().size(); ++i) {
    const LawAtom& atom = Q.atoms()[i];
    bool first = true;
    for (const AtomSegment& seg : atomSegments(atom, Q.alpha())) {
      auto site = T(seg.field);
      if (!site) throw AnchorInvalid("anchor '" + T.name + "' undefined under Q");
      if (first) {
        anchorSite[i] = site;
        first = false;
      } else if (anchorSite[i] != site) {
        throw AnchorInvalid("anchor '" + T.name +
                            "' varies with the radius; Q_T is not atomic");
      }
      // |Y_T| > 1 on the whole segment
      if (!(seg.lo * atom.rep.norm(*site) >= 1.0 - tol))
        throw AnchorInvalid("anchor '" + T.name + "' sits at |Y_T| <= 1 under Q");
    }
    if (anchorSite[i] == std::optional<std::size_t>(G.zero())) thetaAnchor += atom.prob;
  }
  if (!(thetaAnchor > 0.0)) throw AnchorInvalid("Q(T = 0) = 0");

  std::vector<LawAtom> conditioned;
  for (std::size_t i = 0; i < Q.atoms().size(); ++i)
    if (anchorSite[i] == std::optional<std::size_t>(G.zero())) {
      const LawAtom& atom = Q.atoms()[i];
      conditioned.push_back(LawAtom{atom.prob / thetaAnchor, atom.rep, atom.lower});
    }
  TruncatedRayLaw QT(Q.alpha(), Q.groupPtr(), std::move(conditioned));

  double theta = extremalIndexDirect(Q);
  if (std::abs(theta - thetaAnchor) > tol)
    throw Error("Q(T=0) disagrees with E_Q xi(G)^{-1}: " + std::to_string(thetaAnchor) +
                " vs " + std::to_string(theta));

  // cross-check against the defining form theta^{-1} E_Q xi(G)^{-1} 1{theta_T Y in .}
  for (const TestFunction& g : fieldOnlyFamily(G)) {
    double viaDefinition = 0.0;
    for (std::size_t i = 0; i < Q.atoms().size(); ++i) {
      const LawAtom& atom = Q.atoms()[i];
      double density = atom.prob * std::pow(atom.lower, Q.alpha());
      for (const AtomSegment& seg : atomSegments(atom, Q.alpha())) {
        if (seg.count == 0) throw Error("xi(G) = 0 under Q");
        viaDefinition += integrateTestFunction(
            Q.alpha(), g, std::nullopt, atom.rep.shifted(*anchorSite[i]), 1.0, {},
            density / static_cast<double>(seg.count), seg.lo, seg.hi);
      }
    }
    viaDefinition /= theta;
    double viaConditioning = QT.expect(g, std::nullopt);
    if (!IdentityReport::compareValues(viaDefinition, viaConditioning, tol))
      throw Error("Q_T definition and conditioning disagree on " + g.id);
  }
  return AnchoredLaw{std::move(QT), theta};
}

std::vector<IdentityReport> checkAnchoredPalm(const TruncatedRayLaw& Q,
                                              const AnchorFunction& T,
                                              const TestFamily& fam, double tol) {
  const Group& G = Q.group();
  AnchoredLaw anchored = anchoredPalm(Q, T, tol);
  const TruncatedRayLaw& QT = anchored.base;
  double theta = anchored.theta;

  std::vector<IdentityReport> reports;
  reports.push_back(IdentityReport::exact("index", "theta_direct=theta_kappa",
                                          extremalIndexDirect(Q), extremalIndexKappa(Q, tol),
                                          tol));
  double thetaAnchor = 0.0;
  for (std::size_t i = 0; i < Q.atoms().size(); ++i) {
    const LawAtom& atom = Q.atoms()[i];
    auto site = T(atomSegments(atom, Q.alpha()).front().field);
    if (site == std::optional<std::size_t>(G.zero())) thetaAnchor += atom.prob;
  }
  reports.push_back(
      IdentityReport::exact("index", "theta_direct=Q(T=0)", theta, thetaAnchor, tol));

  // conditional mean: E_{Q_T} xi(G) = 1/theta
  double meanXi = 0.0;
  for (const LawAtom& atom : QT.atoms())
    for (const AtomSegment& seg : atomSegments(atom, QT.alpha()))
      meanXi += atom.prob * seg.prob * static_cast<double>(seg.count);
  reports.push_back(
      IdentityReport::exact("index", "E_{Q_T}xi(G)=1/theta", meanXi, 1.0 / theta, tol));

  // palm1: E_Q g = theta E_{Q_T} sum_s g(theta_s Y) 1{|Y_s| > 1}
  for (const TestFunction& g : fam) {
    if (g.siteMask) continue;  // palm1 takes functions of the field alone
    double lhs = Q.expect(g, std::nullopt);
    double rhs = 0.0;
    for (const LawAtom& atom : QT.atoms()) {
      double density = atom.prob * std::pow(atom.lower, QT.alpha());
      for (std::size_t s = 0; s < G.size(); ++s)
        rhs += integrateTestFunction(QT.alpha(), g, std::nullopt, atom.rep.shifted(s), 1.0,
                                     {{atom.rep.norm(s), 1.0}}, density, atom.lower, kInf);
    }
    rhs *= theta;
    reports.push_back(IdentityReport::exact("palm1", g.id, lhs, rhs, tol));
  }
  return reports;
}

AnchorDensity anchorDensity(const RayMeasure& nu, const AnchorFunction& T, double tol) {
  const Group& G = nu.group();
  TruncatedRayLaw Q = nu.palmOfExceedance(tol);
  checkCovarianceOnFields(T, G, reachableFields(Q));

  AnchorDensity out;
  out.direct.assign(G.size(), 0.0);
  out.movingShift.assign(G.size(), 0.0);

  for (const LawAtom& atom : Q.atoms())
    for (const AtomSegment& seg : atomSegments(atom, Q.alpha())) {
      auto site = T(seg.field);
      if (!site)
        throw AnchorInvalid("anchor '" + T.name + "' undefined on a reachable field");
      out.direct[*site] += atom.prob * seg.prob;
    }

  SpectralRepresentation rep = movingShiftRepresentation(nu, tol);
  const double alpha = nu.alpha();
  for (const SpectralAtom& a : rep.atoms) {
    double maxN = a.w.maxNorm();
    if (!(maxN > 0.0)) throw ZeroField("moving-shift atom with all norms zero");
    double kappa = 1.0 / maxN;  // inf{u : xi(u Y, G) > 0}
    auto bps = radialBreakpoints(a.w, 1.0, kappa, kInf);
    for (const RadialSegment& seg : radialSegments(kappa, kInf, bps)) {
      Field f = a.w.scaled(segmentRepresentative(seg));
      auto tauSite = T(f);
      if (!tauSite) continue;
      for (std::size_t s = 0; s < G.size(); ++s) {
        auto site = G.sub(*tauSite, s);
        if (!site) continue;
        double n = a.w.norm(*site);
        if (!(n > 0.0)) continue;
        double lo = std::max(seg.lo, 1.0 / n);
        if (lo >= seg.hi) continue;
        out.movingShift[s] += a.prob * powerMass(alpha, 0.0, lo, seg.hi);
      }
    }
  }

  double total = 0.0;
  for (std::size_t s = 0; s < G.size(); ++s) {
    total += out.direct[s];
    if (std::abs(out.direct[s] - out.movingShift[s]) > tol)
      throw Error("anchor density routes disagree at s=" + G.elementLabel(s) + ": " +
                  std::to_string(out.direct[s]) + " vs " +
                  std::to_string(out.movingShift[s]));
  }
  if (std::abs(total - 1.0) > tol)
    throw Error("anchor density does not sum to 1: " + std::to_string(total));
  return out;
}

}  // namespace tailcalc
