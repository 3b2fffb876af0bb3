#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "tailcalc/errors.hpp"
#include "tailcalc/montecarlo.hpp"
#include "tailcalc/ray_measure.hpp"

namespace tc = tailcalc;
using fixtures::scalarField;

namespace {

tc::ThresholdFunctional originAbove(double level) {
  return tc::ThresholdFunctional::thresholds({{0, level, true}});
}

// small random ray measures for the property tests
tc::RayMeasure randomMeasure(std::uint64_t seed, const tc::GroupPtr& g, double alpha) {
  tc::SplitMix64 rng(seed);
  std::vector<tc::Ray> rays;
  std::size_t count = 1 + rng.next() % 3;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> vals(g->size());
    for (double& v : vals) v = 0.25 + 3.0 * rng.u01();
    rays.push_back(tc::Ray{0.1 + rng.u01(), scalarField(g, std::move(vals)),
                           rng.u01() < 0.5 ? 0.0 : 0.2 + rng.u01(), tc::kInf});
  }
  return tc::RayMeasure(alpha, g, std::move(rays));
}

tc::ThresholdFunctional randomFunctional(tc::SplitMix64& rng, const tc::GroupPtr& g,
                                         double alpha) {
  tc::ThresholdFunctional f;
  std::size_t count = 1 + rng.next() % 2;
  for (std::size_t i = 0; i < count; ++i)
    f.constraints.push_back({rng.next() % g->size(), 0.5 + 2.0 * rng.u01(), true});
  if (rng.u01() < 0.4) f.powerExponent = (rng.u01() - 0.6) * alpha;  // beta < alpha
  return f;
}

}  // namespace

TEST_CASE("mass matches the normalization and tail examples on E1") {
  fixtures::E1 e1;
  CHECK(e1.nu.mass(originAbove(1.0)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(e1.nu.mass(originAbove(2.0)) == doctest::Approx(0.5).epsilon(1e-13));
  // a homogeneous measure has infinite total mass
  tc::ThresholdFunctional total;
  CHECK(std::isinf(e1.nu.mass(total)));
  // oracle agreement
  double viaOracle = oracle::measureExpect(e1.nu, {1.0}, [](const tc::Field& f) {
    return f.norm(0) > 1.0 ? 1.0 : 0.0;
  });
  CHECK(e1.nu.mass(originAbove(1.0)) == doctest::Approx(viaOracle).epsilon(1e-13));
}

TEST_CASE("mass zeroes rays whose constrained site has norm zero") {
  tc::GroupPtr g = tc::makeCyclic({2});
  tc::RayMeasure m(1.0, g, {tc::Ray{1.0, scalarField(g, {0.0, 1.0}), 0.0, tc::kInf}});
  CHECK(m.mass(originAbove(1.0)) == 0.0);
}

TEST_CASE("mass rejects beta >= alpha") {
  fixtures::E1 e1;
  tc::ThresholdFunctional f = originAbove(1.0);
  f.powerExponent = 1.0;
  CHECK_THROWS_AS(e1.nu.mass(f), tc::InvalidArgument);
}

TEST_CASE("canonicalize rescales to max-norm 1 and preserves mass") {
  tc::GroupPtr g = tc::makeCyclic({2});
  tc::RayMeasure m(1.0, g,
                   {tc::Ray{1.0, scalarField(g, {2.0 / 3.0, 1.0 / 3.0}), 0.0, tc::kInf}});
  tc::RayMeasure canon = m.canonical();
  REQUIRE(canon.rays().size() == 1);
  CHECK(canon.rays()[0].weight == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(canon.rays()[0].rep.approxEquals(scalarField(g, {1.0, 0.5}), 1e-13));
  for (double level : {0.5, 1.0, 2.0})
    CHECK(m.mass(originAbove(level)) ==
          doctest::Approx(canon.mass(originAbove(level))).epsilon(1e-13));
}

TEST_CASE("canonicalize is idempotent, merges duplicates, rejects zero fields") {
  fixtures::E1 e1;
  tc::RayMeasure canon = e1.nu.canonical();
  CHECK(tc::RayMeasure::equal(canon, canon.canonical()));
  tc::RayMeasure doubled(1.0, e1.group,
                         {tc::Ray{1.0, e1.omegaA, 0.0, tc::kInf},
                          tc::Ray{1.0, e1.omegaA, 0.0, tc::kInf}});
  REQUIRE(doubled.canonical().rays().size() == 1);
  CHECK(doubled.canonical().rays()[0].weight == doctest::Approx(2.0));
  CHECK_THROWS_AS(tc::RayMeasure(1.0, e1.group,
                                 {tc::Ray{1.0, scalarField(e1.group, {0.0, 0.0}), 0.0,
                                          tc::kInf}}),
                  tc::ZeroField);
}

TEST_CASE("canonical-form soundness: mass is invariant under canonicalize") {
  tc::GroupPtr g = tc::makeCyclic({3});
  tc::SplitMix64 rng(2024);
  int checked = 0;
  for (int rep = 0; rep < 10; ++rep) {
    tc::RayMeasure m = randomMeasure(rng.next(), g, 1.0);
    tc::RayMeasure canon = m.canonical();
    for (int k = 0; k < 10; ++k) {
      tc::ThresholdFunctional f = randomFunctional(rng, g, 1.0);
      CHECK(m.mass(f) == doctest::Approx(canon.mass(f)).epsilon(1e-12));
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("scale pushforward realizes the u^alpha homogeneity law") {
  fixtures::E1 e1;
  // mass(scale_pushforward(nu,2), |Y_0|>1) = 2^alpha * nu(|Y_0|>1)
  CHECK(e1.nu.scalePushforward(2.0).mass(originAbove(1.0)) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(tc::RayMeasure::equal(e1.nu.scalePushforward(1.0), e1.nu));
  CHECK(tc::RayMeasure::equal(e1.nu.scalePushforward(2.0).scalePushforward(3.0),
                              e1.nu.scalePushforward(6.0)));
  CHECK_THROWS_AS(e1.nu.scalePushforward(0.0), tc::InvalidArgument);
  // canonical weights scale by u^alpha, matched per representative
  for (double alpha : {0.5, 1.0, 2.0}) {
    fixtures::RandomFixture fx = fixtures::makeRandomFixture(alpha == 0.5 ? 4 : alpha == 1.0 ? 0 : 8);
    tc::RayMeasure base = fx.nu.canonical();
    for (double u : {0.5, 2.0}) {
      tc::RayMeasure scaled = fx.nu.scalePushforward(u).canonical();
      REQUIRE(scaled.rays().size() == base.rays().size());
      for (std::size_t i = 0; i < base.rays().size(); ++i) {
        CHECK(scaled.rays()[i].rep.approxEquals(base.rays()[i].rep, 1e-12));
        CHECK(scaled.rays()[i].weight ==
              doctest::Approx(base.rays()[i].weight * std::pow(u, fx.alpha)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("shift pushforward: stationarity of E1 and a moving single ray") {
  fixtures::E1 e1;
  CHECK(tc::RayMeasure::equal(e1.nu.shiftPushforward(1), e1.nu));
  CHECK(e1.nu.isStationary());
  tc::RayMeasure single(1.0, e1.group, {tc::Ray{1.0, e1.omegaA, 0.0, tc::kInf}});
  tc::RayMeasure shifted = single.shiftPushforward(1);
  CHECK_FALSE(tc::RayMeasure::equal(shifted, single));
  CHECK(shifted.rays()[0].rep.approxEquals(e1.omegaB, 0.0));
  CHECK(tc::RayMeasure::equal(single.shiftPushforward(0), single));
  tc::GroupPtr w = tc::makeWindow({{0, 1}});
  tc::RayMeasure onWindow(1.0, w, {tc::Ray{1.0, scalarField(w, {1.0, 0.5}), 0.0, tc::kInf}});
  CHECK_THROWS_AS(onWindow.shiftPushforward(1), tc::InvalidArgument);
}

TEST_CASE("stationarize builds E1 from a single ray") {
  fixtures::E1 e1;
  tc::RayMeasure single(1.0, e1.group, {tc::Ray{2.0 / 3.0, e1.omegaA, 0.0, tc::kInf}});
  CHECK(tc::RayMeasure::equal(single.stationarized(), e1.nu));
  // a group-symmetric measure stationarizes to |G| times itself
  tc::Field symmetric = scalarField(e1.group, {1.0, 1.0});
  tc::RayMeasure sym(1.0, e1.group, {tc::Ray{1.0, symmetric, 0.0, tc::kInf}});
  tc::RayMeasure st = sym.stationarized().canonical();
  REQUIRE(st.rays().size() == 1);
  CHECK(st.rays()[0].weight == doctest::Approx(2.0));
  CHECK(tc::RayMeasure::equal(sym.stationarized().shiftPushforward(1), sym.stationarized()));
}

TEST_CASE("palm of exceedance matches the E1 atoms") {
  fixtures::E1 e1;
  tc::TruncatedRayLaw Q = e1.nu.palmOfExceedance();
  REQUIRE(Q.atoms().size() == 2);
  // representatives kept as-is, truncations at max(a, 1/|rep(0)|)
  double pA = 0.0, pB = 0.0, truncA = 0.0, truncB = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    tc::LawAtom atom = Q.atoms()[i];
    if (atom.rep.norm(0) == 1.0) {
      pA = atom.prob;
      truncA = atom.lower;
    } else {
      pB = atom.prob;
      truncB = atom.lower;
    }
  }
  CHECK(pA == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(truncA == doctest::Approx(1.0));
  CHECK(pB == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(truncB == doctest::Approx(2.0));
  // the W-normalized views realize Q' = Q(W in .)
  tc::TruncatedRayLaw canon = Q.canonical();
  CHECK(canon.atoms()[0].rep.approxEquals(scalarField(e1.group, {1.0, 0.5}), 1e-13));
  CHECK(canon.atoms()[1].rep.approxEquals(scalarField(e1.group, {1.0, 2.0}), 1e-13));
  // probabilities sum to one
  double total = 0.0;
  for (const tc::LawAtom& a : Q.atoms()) total += a.prob;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  // no atom is supported on xi'(G) = 0 fields
  for (const tc::LawAtom& a : Q.atoms()) CHECK(a.rep.maxNorm() > 0.0);
}

TEST_CASE("palm of exceedance guards") {
  fixtures::E1 e1;
  tc::RayMeasure scaled = e1.nu.scalePushforward(2.0);  // nu(|Y_0|>1) = 2
  CHECK_THROWS_AS(scaled.palmOfExceedance(), tc::NotNormalized);
  tc::RayMeasure single(1.0, e1.group, {tc::Ray{1.0, e1.omegaA, 0.0, tc::kInf}});
  CHECK_THROWS_AS(single.palmOfExceedance(), tc::NotStationary);
  // rays with |rep(0)| = 0 are dropped from the palm atoms
  tc::RayMeasure withZero = fixtures::zeroSiteTail();
  double norm = withZero.palmNormalization();
  std::vector<tc::Ray> rays;
  for (const tc::Ray& r : withZero.rays())
    rays.push_back(tc::Ray{r.weight / norm, r.rep, r.lower, r.upper});
  tc::TruncatedRayLaw Q = tc::RayMeasure(1.0, e1.group, rays).palmOfExceedance();
  CHECK(Q.atoms().size() == 1);
  CHECK(Q.atoms()[0].rep.norm(0) > 0.0);
}

TEST_CASE("sigma-finiteness layers") {
  fixtures::E1 e1;
  auto layers = e1.nu.sigmaFiniteLayers(2);
  REQUIRE(layers.size() == 2);
  CHECK(layers[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  CHECK(layers[1] == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
  // nondecreasing and finite out to k = 1000
  auto deep = e1.nu.sigmaFiniteLayers(1000);
  for (std::size_t k = 1; k < deep.size(); ++k) {
    CHECK(deep[k] >= deep[k - 1]);
    CHECK(std::isfinite(deep[k]));
  }
  tc::RayMeasure empty(1.0, e1.group, {});
  for (double v : empty.sigmaFiniteLayers(3)) CHECK(v == 0.0);
}

TEST_CASE("campbell functional") {
  fixtures::E1 e1;
  auto constant = [](std::size_t) { return tc::ThresholdFunctional{}; };
  CHECK(e1.nu.campbellFunctional(constant) == doctest::Approx(2.0).epsilon(1e-13));
  auto onlyOrigin = [](std::size_t s) {
    tc::ThresholdFunctional f;
    if (s != 0) f.constraints.push_back({0, tc::kInf, true});  // kill non-origin slices
    return f;
  };
  CHECK(e1.nu.campbellFunctional(onlyOrigin) == doctest::Approx(1.0).epsilon(1e-13));
  auto zero = [](std::size_t) {
    tc::ThresholdFunctional f;
    f.constraints.push_back({0, tc::kInf, true});
    return f;
  };
  CHECK(e1.nu.campbellFunctional(zero) == 0.0);
}
