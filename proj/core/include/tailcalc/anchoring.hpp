#ifndef TAILCALC_ANCHORING_HPP
#define TAILCALC_ANCHORING_HPP

#include <vector>

#include "tailcalc/law.hpp"
#include "tailcalc/ray_measure.hpp"
#include "tailcalc/report.hpp"
#include "tailcalc/spectral.hpp"

namespace tailcalc {

// Brute-force check of T(theta_s w) = T(w) - s over all shifts and all
// reachable fields (atom representatives per radial exceedance segment).
// Throws TieDetected when the argmax anchor hits a tie.
bool checkAnchorCovariance(const AnchorFunction& T, const SpectralLaw& spectral);

// theta = E_Q xi(G)^{-1}, exact via radial segment enumeration.
double extremalIndexDirect(const TruncatedRayLaw& Q);

// theta via kappa: per atom kappa = min_s Z^{1/alpha} / |W_s| with
// Z = sum |W_s|^alpha; returns E_Q kappa^{-alpha} and asserts agreement
// with the direct formula.
double extremalIndexKappa(const TruncatedRayLaw& Q, double tol = 1e-12);

// The anchored law Q_T together with theta.
struct AnchoredLaw {
  TruncatedRayLaw base;  // realizes Q_T
  double theta;
};

// Q_T = theta^{-1} E_Q xi(G)^{-1} 1{theta_T Y in .}. Requires a covariant
// anchor whose site always exceeds level 1 under Q (|Y_T| > 1), in which
// case Q_T = Q(. | T = 0) and theta = Q(T = 0); both routes are computed and
// cross-checked, and the palm1 identity is verified on the canary family.
AnchoredLaw anchoredPalm(const TruncatedRayLaw& Q, const AnchorFunction& T,
                         double tol = 1e-12);

// verification reports behind anchoredPalm, exposed for suites:
// palm1 on the family, theta = Q(T=0), and E_{Q_T} xi(G) = 1/theta.
std::vector<IdentityReport> checkAnchoredPalm(const TruncatedRayLaw& Q,
                                              const AnchorFunction& T,
                                              const TestFamily& fam, double tol = 1e-12);

// The anchor-hit density f_tau(s) = Q(tau(0) = s), computed directly under Q
// and independently through the moving-shift law; both must agree and sum
// to 1. nu must be the stationary tail measure with palm Q.
struct AnchorDensity {
  std::vector<double> direct;      // per group element
  std::vector<double> movingShift; // per group element
};

AnchorDensity anchorDensity(const RayMeasure& nu, const AnchorFunction& T,
                            double tol = 1e-12);

}  // namespace tailcalc

#endif  // TAILCALC_ANCHORING_HPP
