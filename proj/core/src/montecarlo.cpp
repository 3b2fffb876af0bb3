#include "tailcalc/montecarlo.hpp"

#include <cmath>

#include "tailcalc/errors.hpp"

namespace tailcalc {

Sampler Sampler::atomicSpectral(SpectralLaw law, std::uint64_t rootSeed) {
  Sampler s;
  s.kind_ = Kind::AtomicSpectral;
  s.alpha_ = law.alpha();
  s.group_ = law.groupPtr();
  s.rootSeed_ = rootSeed;
  s.spectral_ = std::move(law);
  return s;
}

Sampler Sampler::tiltedStationarization(GroupPtr group, double alpha, BaseFieldSampler base,
                                        bool tilted, std::uint64_t rootSeed) {
  if (!(alpha > 0.0)) throw InvalidSpec("alpha must be positive");
  if (!(base.low > 0.0) || !(base.high >= base.low))
    throw InvalidSpec("base sampler needs 0 < low <= high");
  Sampler s;
  s.kind_ = Kind::TiltedStationarization;
  s.alpha_ = alpha;
  s.group_ = std::move(group);
  s.rootSeed_ = rootSeed;
  s.base_ = base;
  s.tilted_ = tilted;
  return s;
}

Field Sampler::sample(std::uint64_t index) const {
  SplitMix64 rng(mixSeed(rootSeed_, index));
  double paretoU = std::pow(rng.u01(), -1.0 / alpha_);  // Pareto(alpha) on (1, inf)
  if (kind_ == Kind::AtomicSpectral) {
    double v = rng.u01();
    double acc = 0.0;
    const auto& atoms = spectral_->atoms();
    std::size_t pick = atoms.size() - 1;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      acc += atoms[i].prob;
      if (v <= acc) {
        pick = i;
        break;
      }
    }
    return atoms[pick].w.scaled(paretoU);
  }
  // tilted stationarization of an i.i.d. base field
  const std::size_t n = group_->size();
  std::vector<double> comps(n);
  for (std::size_t s = 0; s < n; ++s)
    comps[s] = base_.low + (base_.high - base_.low) * rng.u01();
  Field x(group_, ConeKind::Scalar, 1, std::move(comps));
  std::size_t shift = 0;
  if (tilted_) {
    double z = x.powerSum(alpha_);
    if (!std::isfinite(z) || !(z > 0.0))
      throw DivergentEnergy("base field energy not finite at sample " +
                            std::to_string(index));
    double v = rng.u01() * z;
    double acc = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      acc += std::pow(x.norm(s), alpha_);
      if (v <= acc) {
        shift = s;
        break;
      }
    }
  }
  return x.shifted(shift).normalizedToW().scaled(paretoU);
}

namespace {

struct Accumulator {
  double sum = 0.0;
  double sumSq = 0.0;
  long long n = 0;
  void add(double x) {
    sum += x;
    sumSq += x * x;
    ++n;
  }
  Estimate estimate() const {
    Estimate e;
    e.sampleCount = n;
    if (n == 0) return e;
    e.mean = sum / static_cast<double>(n);
    double var = std::max(0.0, sumSq / static_cast<double>(n) - e.mean * e.mean);
    if (n > 1) var *= static_cast<double>(n) / static_cast<double>(n - 1);
    e.standardError = std::sqrt(var / static_cast<double>(n));
    return e;
  }
};

struct TwoSidedAcc {
  std::string id;
  Accumulator lhs;
  Accumulator rhs;
};

std::vector<IdentityReport> finish(const std::string& identity,
                                   const std::vector<TwoSidedAcc>& accs, double ciFloor) {
  std::vector<IdentityReport> reports;
  reports.reserve(accs.size());
  for (const TwoSidedAcc& a : accs) {
    Estimate l = a.lhs.estimate(), r = a.rhs.estimate();
    reports.push_back(IdentityReport::monteCarlo(identity, a.id, l.mean, r.mean,
                                                 l.standardError, r.standardError, l.sampleCount,
                                                 ciFloor));
  }
  return reports;
}

void requireCyclic(const Group& g, const char* what) {
  if (!g.isCyclic()) throw InvalidSpec(std::string(what) + " needs a cyclic group");
}

}  // namespace

std::vector<IdentityReport> estimateIdentity(const std::string& identityName,
                                             const Sampler& sampler, long long n,
                                             double ciFloor) {
  if (n < 1) throw InvalidSpec("sample count must be at least 1");
  const Group& G = sampler.group();
  const double alpha = sampler.alpha();

  if (identityName == "mecke") {
    requireCyclic(G, "mecke estimation");
    TestFamily fam = defaultCanaryFamily(G);
    std::vector<TwoSidedAcc> accs(fam.size());
    for (std::size_t k = 0; k < fam.size(); ++k) accs[k].id = fam[k].id;
    for (long long i = 0; i < n; ++i) {
      Field y = sampler.sample(static_cast<std::uint64_t>(i));
      for (std::size_t k = 0; k < fam.size(); ++k) {
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t s = 0; s < G.size(); ++s) {
          if (!(y.norm(s) > 1.0)) continue;
          lhs += fam[k].evaluate(y.shifted(s), *G.neg(s));
          rhs += fam[k].evaluate(y, s);
        }
        accs[k].lhs.add(lhs);
        accs[k].rhs.add(rhs);
      }
    }
    return finish("mecke", accs, ciFloor);
  }

  if (identityName == "space_shift") {
    requireCyclic(G, "space-shift estimation");
    FieldFamily fam = spaceShiftThresholdFamily(G);
    std::vector<TwoSidedAcc> accs;
    for (std::size_t s = 0; s < G.size(); ++s)
      for (const FieldFunction& g : fam)
        accs.push_back(TwoSidedAcc{g.id + " @ s=" + G.elementLabel(s), {}, {}});
    for (long long i = 0; i < n; ++i) {
      Field w = sampler.sample(static_cast<std::uint64_t>(i)).normalizedToW();
      std::size_t k = 0;
      for (std::size_t s = 0; s < G.size(); ++s) {
        std::size_t minusS = *G.neg(s);
        Field shifted = w.shifted(minusS);
        double ns = w.norm(s);
        for (const FieldFunction& g : fam) {
          double lhs = w.norm(minusS) > 0.0 ? g.fn(shifted) : 0.0;
          double rhs = ns > 0.0 ? g.fn(w.scaled(1.0 / ns)) * std::pow(ns, alpha) : 0.0;
          accs[k].lhs.add(lhs);
          accs[k].rhs.add(rhs);
          ++k;
        }
      }
    }
    return finish("space_shift", accs, ciFloor);
  }

  if (identityName == "mecke7") {
    requireCyclic(G, "mecke7 estimation");
    const std::vector<double> rGrid = {0.5, 1.0, 2.0};
    TestFamily fam = defaultCanaryFamily(G);
    std::vector<TwoSidedAcc> accs;
    for (double r : rGrid)
      for (const TestFunction& g : fam)
        accs.push_back(TwoSidedAcc{g.id + " @ r=" + std::to_string(r), {}, {}});
    for (long long i = 0; i < n; ++i) {
      Field y = sampler.sample(static_cast<std::uint64_t>(i));
      std::size_t k = 0;
      for (double r : rGrid) {
        double rPow = std::pow(r, -alpha);
        for (const TestFunction& g : fam) {
          double lhs = 0.0, rhs = 0.0;
          for (std::size_t s = 0; s < G.size(); ++s) {
            if (y.norm(s) > r) lhs += g.evaluate(y, s);
            std::size_t minusS = *G.neg(s);
            if (r * y.norm(minusS) > 1.0) rhs += g.evaluate(y.shifted(minusS).scaled(r), s);
          }
          accs[k].lhs.add(lhs);
          accs[k].rhs.add(rPow * rhs);
          ++k;
        }
      }
    }
    return finish("mecke7", accs, ciFloor);
  }

  if (identityName == "palm1") {
    requireCyclic(G, "palm1 estimation");
    AnchorFunction T = AnchorFunction::argmax();
    TestFamily fam;
    fam.push_back(TestFunction::product("g=1", std::nullopt, {}));
    fam.push_back(TestFunction::product("g=1{|Y_0|>2}", std::nullopt, {{G.zero(), 2.0, true}}));
    for (std::size_t i = 0; i < G.size(); ++i)
      if (i != G.zero()) {
        fam.push_back(TestFunction::product("g=1{|Y_" + G.elementLabel(i) + "|>1}",
                                            std::nullopt, {{i, 1.0, true}}));
        break;
      }
    std::vector<TwoSidedAcc> accs(fam.size());
    for (std::size_t k = 0; k < fam.size(); ++k) accs[k].id = fam[k].id;
    for (long long i = 0; i < n; ++i) {
      Field y = sampler.sample(static_cast<std::uint64_t>(i));
      bool anchored = T(y) == std::optional<std::size_t>(G.zero());
      for (std::size_t k = 0; k < fam.size(); ++k) {
        accs[k].lhs.add(fam[k].evaluate(y, std::nullopt));
        double rhs = 0.0;
        if (anchored)
          for (std::size_t s = 0; s < G.size(); ++s)
            if (y.norm(s) > 1.0) rhs += fam[k].evaluate(y.shifted(s), std::nullopt);
        accs[k].rhs.add(rhs);
      }
    }
    return finish("palm1", accs, ciFloor);
  }

  throw UnknownIdentity(identityName);
}

std::pair<Estimate, Estimate> estimateTheta(const Sampler& sampler, long long n) {
  if (n < 1) throw InvalidSpec("sample count must be at least 1");
  const double alpha = sampler.alpha();
  Accumulator direct, kappa;
  for (long long i = 0; i < n; ++i) {
    Field y = sampler.sample(static_cast<std::uint64_t>(i));
    std::size_t xi = y.exceedanceCount(1.0);
    if (xi == 0) throw DivergentEnergy("sampled field with xi(G) = 0 under Q");
    direct.add(1.0 / static_cast<double>(xi));
    Field w = y.normalizedToW();
    double z = w.powerSum(alpha);
    if (!std::isfinite(z) || !(z > 0.0))
      throw DivergentEnergy("sampled field with non-finite energy");
    kappa.add(std::pow(w.maxNorm(), alpha) / z);
  }
  return {direct.estimate(), kappa.estimate()};
}

}  // namespace tailcalc
