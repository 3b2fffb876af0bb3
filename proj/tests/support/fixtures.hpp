#ifndef TAILCALC_TESTS_FIXTURES_HPP
#define TAILCALC_TESTS_FIXTURES_HPP

#include <cstdint>
#include <vector>

#include "tailcalc/law.hpp"
#include "tailcalc/montecarlo.hpp"
#include "tailcalc/ray_measure.hpp"
#include "tailcalc/spectral.hpp"

namespace fixtures {

namespace tc = tailcalc;

inline tc::Field scalarField(const tc::GroupPtr& g, std::vector<double> norms) {
  return tc::Field(g, tc::ConeKind::Scalar, 1, std::move(norms));
}

// The running fixture: group Z_2, alpha = 1, scalar cone,
// nu = (2/3) Ray((1, 1/2)) + (2/3) Ray((1/2, 1)).
struct E1 {
  tc::GroupPtr group = tc::makeCyclic({2});
  double alpha = 1.0;
  tc::Field omegaA = scalarField(group, {1.0, 0.5});
  tc::Field omegaB = scalarField(group, {0.5, 1.0});
  tc::RayMeasure nu{alpha, group,
                    {tc::Ray{2.0 / 3.0, omegaA, 0.0, tc::kInf},
                     tc::Ray{2.0 / 3.0, omegaB, 0.0, tc::kInf}}};
  tc::SpectralLaw spectral{alpha, group,
                           {tc::SpectralAtom{2.0 / 3.0, scalarField(group, {1.0, 0.5})},
                            tc::SpectralAtom{1.0 / 3.0, scalarField(group, {1.0, 2.0})}}};
  double theta = 2.0 / 3.0;
};

// Single-atom non-mass-stationary law on Z_2 (negative control).
inline tc::SpectralLaw negativeControl() {
  tc::GroupPtr g = tc::makeCyclic({2});
  return tc::SpectralLaw(1.0, g, {tc::SpectralAtom{1.0, scalarField(g, {1.0, 0.5})}});
}

// A mass-stationary law whose single atom has a zero-norm site:
// stationarize of Ray(1, (1, 0)) on Z_2, normalized.
inline tc::RayMeasure zeroSiteTail() {
  tc::GroupPtr g = tc::makeCyclic({2});
  tc::RayMeasure base(1.0, g, {tc::Ray{1.0, scalarField(g, {1.0, 0.0}), 0.0, tc::kInf}});
  return base.stationarized();
}

// Randomized admissible fixtures: stationarized random rays on Z_n,
// normalized to nu(|Y_0| > 1) = 1. Index selects (n, alpha) from the grids
// n in {2, 3, 4, 6}, alpha in {1/2, 1, 2}; the seed drives the field values.
struct RandomFixture {
  tc::GroupPtr group;
  double alpha;
  tc::RayMeasure nu;
  tc::SpectralLaw spectral;
};

inline RandomFixture makeRandomFixture(std::uint64_t index) {
  static const int ns[] = {2, 3, 4, 6};
  static const double alphas[] = {0.5, 1.0, 2.0};
  const int n = ns[index % 4];
  const double alpha = alphas[(index / 4) % 3];
  tc::GroupPtr g = tc::makeCyclic({n});
  tc::SplitMix64 rng(tc::mixSeed(0x7a1fc0deULL, index));

  // distinct positive values keep every argmax unique and tie-free
  const std::vector<double> grid = {0.35, 0.45, 0.6,  0.8, 0.95, 1.2,
                                    1.45, 1.7,  2.15, 2.6, 3.2,  3.9};
  const std::size_t rayCount = 1 + (rng.next() % 2);
  std::vector<tc::Ray> rays;
  for (std::size_t k = 0; k < rayCount; ++k) {
    std::vector<double> pool = grid;
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
      std::size_t pick = rng.next() % pool.size();
      values[static_cast<std::size_t>(s)] = pool[pick];
      pool.erase(pool.begin() + static_cast<long>(pick));
    }
    // occasionally zero out one non-maximal site to exercise xi' paths
    if (n > 2 && rng.u01() < 0.3) {
      std::size_t site = rng.next() % static_cast<std::size_t>(n);
      double mx = 0.0;
      for (double v : values) mx = std::max(mx, v);
      if (values[site] != mx) values[site] = 0.0;
    }
    rays.push_back(tc::Ray{1.0, scalarField(g, std::move(values)), 0.0, tc::kInf});
  }
  tc::RayMeasure stationary = tc::RayMeasure(alpha, g, std::move(rays)).stationarized();
  double norm = stationary.palmNormalization();
  std::vector<tc::Ray> scaled;
  for (const tc::Ray& r : stationary.rays())
    scaled.push_back(tc::Ray{r.weight / norm, r.rep, r.lower, r.upper});
  tc::RayMeasure nu = tc::RayMeasure(alpha, g, std::move(scaled)).canonical();
  tc::SpectralLaw spectral = tc::extractSpectralDecomposition(nu);
  return RandomFixture{g, alpha, nu, spectral};
}

}  // namespace fixtures

#endif  // TAILCALC_TESTS_FIXTURES_HPP
