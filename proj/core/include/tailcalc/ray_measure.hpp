#ifndef TAILCALC_RAY_MEASURE_HPP
#define TAILCALC_RAY_MEASURE_HPP

#include <functional>
#include <vector>

#include "tailcalc/field.hpp"
#include "tailcalc/functionals.hpp"
#include "tailcalc/law.hpp"

namespace tailcalc {

// One weighted ray {u * rep : lower < u < upper} carrying the radial density
// weight * alpha * u^{-alpha-1}. upper is +infinity for full rays; finite
// upper bounds represent radial segments, which arise as intermediate pieces
// of Palm inversion and of restricted measures. The identity
//   Ray(w, c*rep, a, b) = Ray(w*c^alpha, rep, a*c, b*c)
// is used to put representatives into canonical scale.
struct Ray {
  double weight;
  Field rep;
  double lower = 0.0;
  double upper = kInf;
};

// An exact alpha-homogeneous-by-rays sigma-finite measure on fields.
class RayMeasure {
 public:
  RayMeasure(double alpha, GroupPtr group, std::vector<Ray> rays);

  double alpha() const { return alpha_; }
  const Group& group() const { return *group_; }
  const GroupPtr& groupPtr() const { return group_; }
  const std::vector<Ray>& rays() const { return rays_; }

  // total mass of a threshold functional; may be +infinity
  double mass(const ThresholdFunctional& f) const;
  // E[g(Y, sArg)] against this measure (exact, may be +infinity)
  double expect(const TestFunction& g, std::optional<std::size_t> sArg) const;

  // unique-up-to-order canonical form: representatives rescaled to maximum
  // norm 1, segments coalesced, identical rays merged, rays sorted
  RayMeasure canonical(double tol = 1e-12) const;
  static bool equal(const RayMeasure& a, const RayMeasure& b, double tol = 1e-12);

  // image measure under Y -> u * Y
  RayMeasure scalePushforward(double u) const;
  // image measure under Y -> theta_t Y (cyclic groups only)
  RayMeasure shiftPushforward(std::size_t t) const;
  // sum of shift pushforwards over the whole group (cyclic groups only)
  RayMeasure stationarized() const;
  // restriction to {some |Y_s| > level}
  RayMeasure restrictedToExceedance(double level = 1.0) const;

  bool isStationary(double tol = 1e-12) const;
  // nu(|Y_0| > 1)
  double palmNormalization() const;

  // Palm measure of the exceedance process: the restriction to {|Y_0| > 1},
  // expressed as a truncated-ray probability law. Requires a stationary
  // measure with palmNormalization() == 1.
  TruncatedRayLaw palmOfExceedance(double tol = 1e-12) const;

  // nu(U_k), k = 1..K, for the sigma-finiteness layers
  // U_k = {some |Y_s| >= 1/k}
  std::vector<double> sigmaFiniteLayers(int K) const;

  // sum_s mass(g(s) with the added exceedance constraint at s), i.e.
  // the Campbell functional E int g(Y, s) xi(ds)
  double campbellFunctional(
      const std::function<ThresholdFunctional(std::size_t)>& kernel) const;

 private:
  double alpha_;
  GroupPtr group_;
  std::vector<Ray> rays_;
};

}  // namespace tailcalc

#endif  // TAILCALC_RAY_MEASURE_HPP
