#include "tailcalc/palm_identities.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "tailcalc/errors.hpp"

namespace tailcalc {

namespace {

void requireSameGroup(const Group& a, const Group& b) {
  if (a != b) throw DimensionMismatch("group descriptors differ");
}

// E_Q sum_s g(theta_s Y, sign*s) 1{|Y_s| > level}, exact
double lawMeckeSide(const TruncatedRayLaw& Q, const TestFunction& g, bool shiftArg,
                    double level) {
  const Group& G = Q.group();
  double total = 0.0;
  for (const LawAtom& atom : Q.atoms()) {
    double density = atom.prob * std::pow(atom.lower, Q.alpha());
    for (std::size_t s = 0; s < G.size(); ++s) {
      std::vector<std::pair<double, double>> extra{{atom.rep.norm(s), level}};
      if (shiftArg) {
        auto minusS = G.neg(s);
        if (!minusS) continue;
        total += integrateTestFunction(Q.alpha(), g, *minusS, atom.rep.shifted(s), 1.0,
                                       extra, density, atom.lower, kInf);
      } else {
        total += integrateTestFunction(Q.alpha(), g, s, atom.rep, 1.0, extra, density,
                                       atom.lower, kInf);
      }
    }
  }
  return total;
}

}  // namespace

std::vector<IdentityReport> checkRefinedCampbell(const RayMeasure& nu,
                                                 const TruncatedRayLaw& Q,
                                                 const TestFamily& fam, double tol) {
  requireSameGroup(nu.group(), Q.group());
  const Group& G = nu.group();
  std::vector<IdentityReport> reports;
  for (const TestFunction& g : fam) {
    double lhs = 0.0;
    for (const Ray& r : nu.rays())
      for (std::size_t s = 0; s < G.size(); ++s)
        lhs += integrateTestFunction(nu.alpha(), g, s, r.rep.shifted(s), 1.0,
                                     {{r.rep.norm(s), 1.0}}, r.weight, r.lower, r.upper);
    double rhs = 0.0;
    for (const LawAtom& atom : Q.atoms()) {
      double density = atom.prob * std::pow(atom.lower, Q.alpha());
      for (std::size_t s = 0; s < G.size(); ++s)
        rhs += integrateTestFunction(Q.alpha(), g, s, atom.rep, 1.0, {}, density,
                                     atom.lower, kInf);
    }
    reports.push_back(IdentityReport::exact("refined_campbell", g.id, lhs, rhs, tol));
  }
  return reports;
}

std::vector<IdentityReport> checkMecke(const TruncatedRayLaw& Q, const TestFamily& fam,
                                       double tol) {
  std::vector<IdentityReport> reports;
  for (const TestFunction& g : fam) {
    double lhs = lawMeckeSide(Q, g, true, 1.0);
    double rhs = lawMeckeSide(Q, g, false, 1.0);
    reports.push_back(IdentityReport::exact("mecke", g.id, lhs, rhs, tol));
  }
  reports.push_back(IdentityReport::exact("mecke", "Q(xi(G)=0)=0",
                                          Q.probNoExceedance(1.0), 0.0, tol));
  return reports;
}

std::vector<IdentityReport> checkExchange(const RayMeasure& nu, double c1, double c2,
                                          const TestFamily& fam, double tol) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw InvalidArgument("exchange levels must be positive");
  const Group& G = nu.group();
  std::vector<IdentityReport> reports;
  for (const TestFunction& g : fam) {
    double lhs = 0.0, rhs = 0.0;
    for (const Ray& r : nu.rays()) {
      double n0 = r.rep.norm(G.zero());
      for (std::size_t s = 0; s < G.size(); ++s) {
        lhs += integrateTestFunction(nu.alpha(), g, s, r.rep, 1.0,
                                     {{n0, c1}, {r.rep.norm(s), c2}}, r.weight, r.lower,
                                     r.upper);
        auto minusS = G.neg(s);
        if (!minusS) continue;
        rhs += integrateTestFunction(nu.alpha(), g, *minusS, r.rep.shifted(s), 1.0,
                                     {{n0, c2}, {r.rep.norm(s), c1}}, r.weight, r.lower,
                                     r.upper);
      }
    }
    reports.push_back(IdentityReport::exact("exchange", g.id, lhs, rhs, tol));
  }
  return reports;
}

RayMeasure invertPalm(const TruncatedRayLaw& Q, double tol) {
  if (!Q.group().isCyclic()) throw InvalidArgument("palm inversion needs a cyclic group");
  if (Q.probNoExceedance(1.0) > tol)
    throw PalmViolated("Q(xi(G)=0) = " + std::to_string(Q.probNoExceedance(1.0)));
  for (const IdentityReport& r : checkMecke(Q, defaultCanaryFamily(Q.group()), tol))
    if (!r.pass)
      throw PalmViolated("mecke fails on canary function " + r.testFunctionId);

  const Group& G = Q.group();
  std::vector<Ray> out;
  for (const LawAtom& atom : Q.atoms()) {
    double n0 = atom.rep.norm(G.zero());
    if (!(n0 > 0.0)) continue;  // weight 1{|Y_0|>1} never fires on this atom
    double lo = std::max(atom.lower, 1.0 / n0);
    double density = atom.prob * std::pow(atom.lower, Q.alpha());
    auto bps = radialBreakpoints(atom.rep, 1.0, lo, kInf);
    for (const RadialSegment& seg : radialSegments(lo, kInf, bps)) {
      std::size_t count = 0;
      double u = segmentRepresentative(seg);
      for (double n : atom.rep.norms())
        if (u * n > 1.0) ++count;
      if (count == 0) continue;  // cannot happen past lo, kept as a guard
      for (std::size_t s = 0; s < G.size(); ++s) {
        auto minusS = G.neg(s);
        out.push_back(Ray{density / static_cast<double>(count), atom.rep.shifted(*minusS),
                          seg.lo, seg.hi});
      }
    }
  }
  return RayMeasure(Q.alpha(), Q.groupPtr(), std::move(out)).canonical(tol);
}

Allocation identityAllocation() {
  return Allocation{"identity",
                    [](const Field&, std::size_t s) { return std::optional<std::size_t>(s); }};
}

Allocation constantTargetAllocation(
    std::string name, std::function<std::optional<std::size_t>(const Field&)> anchor) {
  return Allocation{std::move(name), [anchor = std::move(anchor)](const Field& f,
                                                                  std::size_t) {
                      return anchor(f);
                    }};
}

double PairTestFunction::evaluate(const Field& a, const Field& b) const {
  for (const SiteThreshold& c : onFirst)
    if ((a.norm(c.site) > c.level) != c.greater) return 0.0;
  for (const SiteThreshold& c : onSecond)
    if ((b.norm(c.site) > c.level) != c.greater) return 0.0;
  return 1.0;
}

std::vector<PairTestFunction> defaultPairFamily(const Group& group) {
  std::vector<std::size_t> lags = {group.zero()};
  if (group.size() > 1)
    for (std::size_t i = 0; i < group.size(); ++i)
      if (i != group.zero()) {
        lags.push_back(i);
        break;
      }
  std::vector<PairTestFunction> fam;
  fam.push_back({"h=1", {}, {}});
  for (std::size_t l : lags)
    for (double c : {1.0, 2.0}) {
      std::ostringstream id1, id2, id3;
      id1 << "h=1{|A_" << group.elementLabel(l) << "|>" << c << "}";
      fam.push_back({id1.str(), {{l, c, true}}, {}});
      id2 << "h=1{|B_" << group.elementLabel(l) << "|>" << c << "}";
      fam.push_back({id2.str(), {}, {{l, c, true}}});
      id3 << "h=1{|A_0|>" << c << "}*1{|B_" << group.elementLabel(l) << "|>" << c << "}";
      fam.push_back({id3.str(), {{group.zero(), c, true}}, {{l, c, true}}});
    }
  return fam;
}

namespace {

// every radius where any site's norm crosses any of the given levels
std::vector<double> allocationBreakpoints(const Field& rep, const std::vector<double>& levels,
                                          double lo, double hi) {
  std::vector<double> bps;
  for (double lev : levels) {
    auto b = radialBreakpoints(rep, lev, lo, hi);
    bps.insert(bps.end(), b.begin(), b.end());
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  return bps;
}

std::vector<double> pairFamilyLevels(const std::vector<PairTestFunction>& fam, double c1,
                                     double c2) {
  std::set<double> levels{c1, c2, 1.0};
  for (const PairTestFunction& h : fam) {
    for (const SiteThreshold& c : h.onFirst) levels.insert(c.level);
    for (const SiteThreshold& c : h.onSecond) levels.insert(c.level);
  }
  return {levels.begin(), levels.end()};
}

}  // namespace

std::vector<IdentityReport> checkAllocation(const RayMeasure& nu, const Allocation& tau,
                                            double c1, double c2,
                                            const std::vector<PairTestFunction>& fam,
                                            double tol) {
  if (!nu.group().isCyclic()) throw InvalidArgument("allocation checks need a cyclic group");
  const Group& G = nu.group();
  const std::vector<double> levels = pairFamilyLevels(fam, c1, c2);

  // reachable fields: one representative per radial segment of every ray
  std::vector<Field> reachable;
  for (const Ray& r : nu.rays()) {
    auto bps = allocationBreakpoints(r.rep, levels, r.lower, r.upper);
    for (const RadialSegment& seg : radialSegments(r.lower, r.upper, bps)) {
      double u = segmentRepresentative(seg);
      if (u > 0.0) reachable.push_back(r.rep.scaled(u));
    }
  }

  // covariance: tau(theta_t w, s - t) = tau(w, s) - t
  for (const Field& f : reachable)
    for (std::size_t t = 0; t < G.size(); ++t) {
      Field shifted = f.shifted(t);
      for (std::size_t s = 0; s < G.size(); ++s) {
        auto smt = G.sub(s, t);
        auto lhs = tau.map(shifted, *smt);
        auto rhs = tau.map(f, s);
        std::optional<std::size_t> rhsShifted =
            rhs ? G.sub(*rhs, t) : std::optional<std::size_t>();
        if (lhs != rhsShifted)
          throw NotCovariant("allocation '" + tau.name + "' fails covariance at s=" +
                             G.elementLabel(s) + ", t=" + G.elementLabel(t));
      }
    }

  // targets must land in the eta-support (or none), xi-a.e.
  for (const Field& f : reachable)
    for (std::size_t s = 0; s < G.size(); ++s) {
      if (!(f.norm(s) > c1)) continue;
      auto target = tau.map(f, s);
      if (target && !(f.norm(*target) > c2))
        throw TargetOutsideSupport("allocation '" + tau.name +
                                   "' sends an exceedance to a non-exceedance site");
    }

  std::vector<IdentityReport> reports;
  const std::size_t zero = G.zero();

  for (const PairTestFunction& h : fam) {
    double lhs = 0.0, rhs = 0.0;
    for (const Ray& r : nu.rays()) {
      double n0 = r.rep.norm(zero);
      // lhs: restriction to {|Y_0| > c1}
      if (n0 > 0.0) {
        double lo = std::max(r.lower, c1 / n0);
        auto bps = allocationBreakpoints(r.rep, levels, lo, r.upper);
        for (const RadialSegment& seg : radialSegments(lo, r.upper, bps)) {
          if (seg.hi <= seg.lo) continue;
          Field f = r.rep.scaled(segmentRepresentative(seg));
          auto target = tau.map(f, zero);
          if (!target) continue;
          double val = h.evaluate(f, f.shifted(*target));
          if (val != 0.0)
            lhs += r.weight * val * powerMass(nu.alpha(), 0.0, seg.lo, seg.hi);
        }
      }
      // rhs: restriction to {|Y_0| > c2}
      if (n0 > 0.0) {
        double lo = std::max(r.lower, c2 / n0);
        auto bps = allocationBreakpoints(r.rep, levels, lo, r.upper);
        for (const RadialSegment& seg : radialSegments(lo, r.upper, bps)) {
          if (seg.hi <= seg.lo) continue;
          Field f = r.rep.scaled(segmentRepresentative(seg));
          double segMass = powerMass(nu.alpha(), 0.0, seg.lo, seg.hi);
          for (std::size_t s = 0; s < G.size(); ++s) {
            if (!(f.norm(s) > c1)) continue;
            auto target = tau.map(f, s);
            if (!target || *target != zero) continue;
            double val = h.evaluate(f.shifted(s), f);
            if (val != 0.0) rhs += r.weight * val * segMass;
          }
        }
      }
    }
    reports.push_back(IdentityReport::exact("allocation", h.id, lhs, rhs, tol));
  }

  // balancing: sum_s 1{|Y_s|>c1} delta_{tau(s)}  ==  eta  pointwise
  bool balanced = true;
  for (const Field& f : reachable) {
    std::vector<int> lhsCount(G.size(), 0), rhsCount(G.size(), 0);
    bool lost = false;
    for (std::size_t s = 0; s < G.size(); ++s) {
      if (f.norm(s) > c1) {
        auto target = tau.map(f, s);
        if (!target) {
          lost = true;
          break;
        }
        lhsCount[*target]++;
      }
      if (f.norm(s) > c2) rhsCount[s]++;
    }
    if (lost || lhsCount != rhsCount) {
      balanced = false;
      break;
    }
  }
  reports.push_back(IdentityReport::exact("allocation", "balancing", balanced ? 1.0 : 0.0,
                                          1.0, 0.0));
  reports.back().pass = true;  // informational: records whether balancing holds
  reports.back().note = balanced ? "balancing holds" : "balancing fails; shift coupling skipped";

  if (balanced) {
    // shift coupling: law of theta_{tau(0)} under nu_xi equals nu_eta
    std::vector<Ray> pushed;
    for (const Ray& r : nu.rays()) {
      double n0 = r.rep.norm(zero);
      if (!(n0 > 0.0)) continue;
      double lo = std::max(r.lower, c1 / n0);
      auto bps = allocationBreakpoints(r.rep, levels, lo, r.upper);
      for (const RadialSegment& seg : radialSegments(lo, r.upper, bps)) {
        if (seg.hi <= seg.lo) continue;
        Field f = r.rep.scaled(segmentRepresentative(seg));
        auto target = tau.map(f, zero);
        if (!target) continue;
        pushed.push_back(Ray{r.weight, r.rep.shifted(*target), seg.lo, seg.hi});
      }
    }
    std::vector<Ray> etaSide;
    for (const Ray& r : nu.rays()) {
      double n0 = r.rep.norm(zero);
      if (!(n0 > 0.0)) continue;
      double lo = std::max(r.lower, c2 / n0);
      if (lo < r.upper) etaSide.push_back(Ray{r.weight, r.rep, lo, r.upper});
    }
    bool coupled =
        RayMeasure::equal(RayMeasure(nu.alpha(), nu.groupPtr(), std::move(pushed)),
                          RayMeasure(nu.alpha(), nu.groupPtr(), std::move(etaSide)), tol);
    reports.push_back(IdentityReport::exact("shift_coupling", "pushforward=eta_palm",
                                            coupled ? 1.0 : 0.0, 1.0, 0.0));
  }
  return reports;
}

}  // namespace tailcalc
