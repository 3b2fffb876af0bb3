#ifndef TAILCALC_MONTECARLO_HPP
#define TAILCALC_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tailcalc/law.hpp"
#include "tailcalc/report.hpp"
#include "tailcalc/spectral.hpp"

namespace tailcalc {

// Counter-based splittable RNG: every (rootSeed, stream) pair yields an
// independent deterministic stream, so parallel evaluation order cannot
// change results.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform on (0, 1), never exactly 0 or 1
  double u01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
};

inline std::uint64_t mixSeed(std::uint64_t root, std::uint64_t stream) {
  SplitMix64 m(root ^ (0x5851f42d4c957f2dULL * (stream + 1)));
  return m.next();
}

// i.i.d. base-field entries, uniform on [low, high]; strictly positive lows
// keep the tilting weights finite.
struct BaseFieldSampler {
  double low = 0.5;
  double high = 1.5;
};

// Seeded samplers for spectrally decomposable laws. Identical
// (spec, rootSeed) reproduce identical streams regardless of scheduling:
// sample i depends only on mixSeed(rootSeed, i).
class Sampler {
 public:
  enum class Kind { AtomicSpectral, TiltedStationarization };

  static Sampler atomicSpectral(SpectralLaw law, std::uint64_t rootSeed);
  // The Q^G recipe with uniform G: draw the base field X, pick the shift t
  // with probability |X_t|^alpha / sum_s |X_s|^alpha, normalize, and attach
  // an independent Pareto(alpha) radius. `tilted = false` drops the shift
  // tilting and serves as the negative control.
  static Sampler tiltedStationarization(GroupPtr group, double alpha, BaseFieldSampler base,
                                        bool tilted, std::uint64_t rootSeed);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const Group& group() const { return *group_; }
  const GroupPtr& groupPtr() const { return group_; }
  std::uint64_t rootSeed() const { return rootSeed_; }

  // one draw Y = U * W with U Pareto(alpha) on (1, inf) by inverse transform
  Field sample(std::uint64_t index) const;

 private:
  Kind kind_ = Kind::AtomicSpectral;
  double alpha_ = 1.0;
  GroupPtr group_;
  std::uint64_t rootSeed_ = 1;
  std::optional<SpectralLaw> spectral_;
  BaseFieldSampler base_;
  bool tilted_ = true;
};

// Two-sided Monte Carlo check of an identity under the sampled law with
// common random numbers. identityName is one of "mecke", "space_shift",
// "mecke7", "palm1". Pass rule: |lhs - rhs| <= 3 (SE_lhs + SE_rhs) + floor.
std::vector<IdentityReport> estimateIdentity(const std::string& identityName,
                                             const Sampler& sampler, long long n,
                                             double ciFloor = 1e-3);

// MC estimates of E xi(G)^{-1} and E kappa^{-alpha}
std::pair<Estimate, Estimate> estimateTheta(const Sampler& sampler, long long n);

}  // namespace tailcalc

#endif  // TAILCALC_MONTECARLO_HPP
