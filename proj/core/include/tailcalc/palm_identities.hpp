#ifndef TAILCALC_PALM_IDENTITIES_HPP
#define TAILCALC_PALM_IDENTITIES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tailcalc/law.hpp"
#include "tailcalc/ray_measure.hpp"
#include "tailcalc/report.hpp"

namespace tailcalc {

// Refined Campbell theorem: for every f in the family,
//   E_nu sum_s f(theta_s Y, s) 1{|Y_s| > 1}  ==  E_Q sum_s f(Y, s)
// where Q must be the Palm measure of the exceedance process of nu.
std::vector<IdentityReport> checkRefinedCampbell(const RayMeasure& nu,
                                                 const TruncatedRayLaw& Q,
                                                 const TestFamily& fam,
                                                 double tol = 1e-12);

// Mecke's intrinsic characterization: for every g,
//   E_Q sum_s g(theta_s Y, -s) 1{|Y_s| > 1}  ==  E_Q sum_s g(Y, s) 1{|Y_s| > 1},
// plus the side condition Q(xi(G) = 0) = 0.
std::vector<IdentityReport> checkMecke(const TruncatedRayLaw& Q, const TestFamily& fam,
                                       double tol = 1e-12);

// Exchange formula between the exceedance processes at levels c1, c2:
//   E_{nu_xi} sum_s g(Y, s) 1{|Y_s| > c2}  ==  E_{nu_eta} sum_s g(theta_s Y, -s) 1{|Y_s| > c1}
std::vector<IdentityReport> checkExchange(const RayMeasure& nu, double c1, double c2,
                                          const TestFamily& fam, double tol = 1e-12);

// Palm inversion with the default weight 1{|Y_s|>1} / xi(G): reconstructs the
// stationary measure restricted to {xi(G) > 0}. Refuses laws that fail the
// Mecke check on the canary family.
RayMeasure invertPalm(const TruncatedRayLaw& Q, double tol = 1e-12);

// Allocations: shift-covariant site maps tau(field, s) -> site or none.
struct Allocation {
  std::string name;
  // fields passed in are concrete (already scaled) field values
  std::function<std::optional<std::size_t>(const Field&, std::size_t)> map;
};

Allocation identityAllocation();
// tau(field, s) = anchor(field) for every s; covariant exactly when the
// anchor is
Allocation constantTargetAllocation(
    std::string name, std::function<std::optional<std::size_t>(const Field&)> anchor);

// Test functions h(field, field) for the allocation formula: products of
// threshold indicators on each argument.
struct PairTestFunction {
  std::string id;
  std::vector<SiteThreshold> onFirst;
  std::vector<SiteThreshold> onSecond;
  double evaluate(const Field& a, const Field& b) const;
};

std::vector<PairTestFunction> defaultPairFamily(const Group& group);

// Allocation formula at Palm levels (c1 for xi, c2 for eta):
//   E_{nu_xi} 1{tau(0) != none} h(theta_0, theta_tau(0))
//     ==  E_{nu_eta} sum_{s : tau(s) = 0} h(theta_s, theta_0) 1{|Y_s| > c1},
// plus the balancing property and, when balancing holds, the shift-coupling
// conclusion. Verifies covariance and target-support preconditions by brute
// force over the reachable fields first.
std::vector<IdentityReport> checkAllocation(const RayMeasure& nu, const Allocation& tau,
                                            double c1, double c2,
                                            const std::vector<PairTestFunction>& fam,
                                            double tol = 1e-12);

}  // namespace tailcalc

#endif  // TAILCALC_PALM_IDENTITIES_HPP
