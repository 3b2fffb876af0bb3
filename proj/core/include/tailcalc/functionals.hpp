#ifndef TAILCALC_FUNCTIONALS_HPP
#define TAILCALC_FUNCTIONALS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tailcalc/field.hpp"
#include "tailcalc/radial.hpp"

namespace tailcalc {

// One threshold constraint on a field: |field(site)| > level (greater) or
// |field(site)| <= level (!greater). Strict ">", matching the exceedance
// convention: values exactly at a level never count.
struct SiteThreshold {
  std::size_t site;
  double level;
  bool greater = true;
};

// A radially integrable functional on fields of the form u * rep:
//   payload(rep) * |field(0)|^powerExponent * prod 1{|field(site)| > level}
// restricted to u > extraLower. The payload must be 0-homogeneous; the
// power exponent must stay below the homogeneity index alpha so the radial
// integral converges at infinity.
struct ThresholdFunctional {
  std::vector<SiteThreshold> constraints;
  double powerExponent = 0.0;
  double extraLower = 0.0;
  std::function<double(const Field&)> payload;  // optional, 0-homogeneous

  static ThresholdFunctional thresholds(std::vector<SiteThreshold> cs) {
    ThresholdFunctional f;
    f.constraints = std::move(cs);
    return f;
  }
};

// One product term of a structured test function.
struct TestTerm {
  double coeff = 1.0;
  std::vector<SiteThreshold> constraints;
  double beta = 0.0;                            // factor |field(0)|^beta
  std::function<double(const Field&)> payload;  // optional, 0-homogeneous
};

// A test function g(field, s) = 1{s in S} * sum of terms. When siteMask is
// absent the function ignores the group argument. Term indicators and the
// beta power are linear in the radius along a ray, so expectations under
// ray measures and truncated-ray laws are exact.
struct TestFunction {
  std::string id;
  std::optional<std::vector<bool>> siteMask;
  std::vector<TestTerm> terms;

  static TestFunction product(std::string id, std::optional<std::vector<bool>> mask,
                              std::vector<SiteThreshold> cs, double beta = 0.0);

  // pointwise evaluation (Monte Carlo path)
  double evaluate(const Field& field, std::optional<std::size_t> s) const;
};

using TestFamily = std::vector<TestFunction>;

// Exact integral of g(fieldScale * u * argRep, sArg) over u in (lo, hi)
// against the density w * alpha * u^{-alpha-1}, subject to the additional
// requirements u * extraGreater[i].first > extraGreater[i].second.
double integrateTestFunction(double alpha, const TestFunction& g,
                             std::optional<std::size_t> sArg, const Field& argRep,
                             double fieldScale,
                             const std::vector<std::pair<double, double>>& extraGreater,
                             double w, double lo, double hi);

// Same machinery for a ThresholdFunctional (adds its extraLower to lo).
double integrateThresholdFunctional(double alpha, const ThresholdFunctional& f,
                                    const Field& rep, double w, double lo, double hi);

// --- family builders ---

// The default canary family: products of two threshold indicators at lags
// {0, e1} with levels {1, 2}, crossed with four s-indicator sets
// ({0}, {e1}, {0, e1}, all). 64 functions on groups with more than one
// element. Deterministically ordered and named.
TestFamily defaultCanaryFamily(const Group& group);

// 1{exceedance count of the field at `level` equals `count`}, expanded into
// threshold products.
TestFunction countIndicator(const Group& group, double level, std::size_t count);

}  // namespace tailcalc

#endif  // TAILCALC_FUNCTIONALS_HPP
