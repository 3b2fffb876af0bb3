#ifndef TAILCALC_SPECTRAL_HPP
#define TAILCALC_SPECTRAL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tailcalc/law.hpp"
#include "tailcalc/ray_measure.hpp"
#include "tailcalc/report.hpp"

namespace tailcalc {

// A test function of the normalized field alone, used by the space-shift
// checker where both sides are finite sums over spectral atoms.
struct FieldFunction {
  std::string id;
  std::function<double(const Field&)> fn;
};

using FieldFamily = std::vector<FieldFunction>;

// Equality indicators for every shifted atom field, plus threshold products;
// this family contains the functions that certify non-mass-stationarity of
// atomic laws.
FieldFamily spaceShiftCanaryFamily(const SpectralLaw& spectral);

// Threshold-only family for Monte Carlo use (equality events have
// probability zero under continuous samplers).
FieldFamily spaceShiftThresholdFamily(const Group& group);

// Q from the spectral law: radius Pareto(alpha) on (1, infinity) independent
// of W. Rejects atoms with |W_0| != 1.
TruncatedRayLaw buildQ(const SpectralLaw& spectral);

// Space-shift formula, discrete form: for every group element s and every g,
//   E[g(theta_{-s} W) 1{|W_{-s}| > 0}]  ==  E[g(|W_s|^{-1} W) |W_s|^alpha].
std::vector<IdentityReport> checkSpaceShift(const SpectralLaw& spectral,
                                            const FieldFamily& fam, double tol = 1e-12);
bool spaceShiftHolds(const SpectralLaw& spectral, double tol = 1e-12);

// Radial form of the space-shift formula: for each r > 0 and g,
//   E_Q sum_s g(Y,s) 1{|Y_s| > r}
//     ==  r^{-alpha} E_Q sum_s g(r theta_{-s} Y, s) 1{r |Y_{-s}| > 1}.
std::vector<IdentityReport> checkMecke7(const SpectralLaw& spectral,
                                        const std::vector<double>& rGrid,
                                        const TestFamily& fam, double tol = 1e-12);

// Anchoring maps T: fields -> group element (or none on unreachable input).
struct AnchorFunction {
  enum class Kind { ArgMax, FirstExceedance, Custom };
  Kind kind = Kind::ArgMax;
  bool zeroHomogeneous = true;
  std::string name = "argmax";
  std::function<std::optional<std::size_t>(const Field&)> custom;

  static AnchorFunction argmax();
  static AnchorFunction firstExceedance();
  static AnchorFunction customFn(std::string name, bool zeroHomogeneous,
                                 std::function<std::optional<std::size_t>(const Field&)> fn);

  // site of the anchor; ArgMax throws TieDetected on a non-unique maximum
  std::optional<std::size_t> operator()(const Field& f) const;
};

// nu^T: anchored construction of the stationary tail measure. Requires the
// space-shift check to pass on the canary family, a 0-homogeneous anchor,
// and the anchor-validity condition (the anchor of every shifted field must
// land on a positive-norm site).
RayMeasure tailFromAnchor(const SpectralLaw& spectral, const AnchorFunction& T,
                          double tol = 1e-12);

// nu^G: weighted construction via the tilted law Q^G; G is a positive
// probability weight on the group (entries indexed like group elements).
RayMeasure tailFromWeight(const SpectralLaw& spectral, const std::vector<double>& weightG,
                          double tol = 1e-12);
// the intermediate tilted law Q^G itself
SpectralLaw tiltedLaw(const SpectralLaw& spectral, const std::vector<double>& weightG);

// A normalized 0-homogeneous kernel H(field, s) for the general construction.
struct HKernel {
  std::string name;
  std::function<double(const Field&, std::size_t)> fn;
};

// the default kernel built from the singleton partition with geometric
// weights 2^{-n}
HKernel defaultHKernel(const Group& group);
// the kernel induced by a positive weight function: H = J_G^{-1} |w(s)|^alpha G(s)
HKernel weightHKernel(const Group& group, double alpha, std::vector<double> weightG);

// nu^H for a kernel satisfying the normalization identity (brute-checked).
RayMeasure tailFromH(const SpectralLaw& spectral, const HKernel& H, double tol = 1e-12);
RayMeasure tailFromH(const SpectralLaw& spectral, double tol = 1e-12);  // default kernel

// The angular part Q' of a stationary tail measure:
// Q' = nu({|Y_0| > 1, |Y_0|^{-1} Y in .}).
SpectralLaw extractSpectralDecomposition(const RayMeasure& nu, double tol = 1e-12);

// Spectral representation nu = E_{Q*} int 1{u Y in .} alpha u^{-alpha-1} du
// with per-ray weights turned into probabilities. Atoms need not satisfy
// |W_0| = 1, so the result is returned as plain atoms.
struct SpectralRepresentation {
  double alpha;
  GroupPtr group;
  std::vector<SpectralAtom> atoms;
  std::vector<IdentityReport> validation;  // finiteness, stationarity, normalization
};

SpectralRepresentation spectralRepresentation(const RayMeasure& nu, double tol = 1e-12);

// Moving shift representation Q* = Q(Z^{-1/alpha} W in .), Z = sum_s |W_s|^alpha.
SpectralRepresentation movingShiftRepresentation(const RayMeasure& nu, double tol = 1e-12);

// reconstructions used by the validations (and the acceptance suite)
RayMeasure spectralReconstruction(const SpectralRepresentation& rep);
RayMeasure movingShiftReconstruction(const SpectralRepresentation& rep);

}  // namespace tailcalc

#endif  // TAILCALC_SPECTRAL_HPP
