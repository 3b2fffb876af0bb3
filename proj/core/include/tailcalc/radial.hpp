#ifndef TAILCALC_RADIAL_HPP
#define TAILCALC_RADIAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tailcalc/field.hpp"

namespace tailcalc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed form of  int_{u0}^{u1} u^beta alpha u^{-alpha-1} du  (beta < alpha).
// u0 = 0 gives +infinity; u1 = infinity contributes 0.
inline double powerMass(double alpha, double beta, double u0, double u1) {
  if (u1 <= u0) return 0.0;
  double p = beta - alpha;  // p < 0
  double hi = std::isinf(u1) ? 0.0 : std::pow(u1, p);
  double lo = (u0 <= 0.0) ? kInf : std::pow(u0, p);
  return (alpha / (alpha - beta)) * (lo - hi);
}

// Radii in (lo, hi) where the exceedance pattern of u * rep at the given
// level changes: {level / |rep(s)| : |rep(s)| > 0}, sorted, deduplicated.
inline std::vector<double> radialBreakpoints(const Field& rep, double level,
                                             double lo, double hi) {
  std::vector<double> bp;
  for (double n : rep.norms())
    if (n > 0.0) {
      double b = level / n;
      if (b > lo && b < hi) bp.push_back(b);
    }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

struct RadialSegment {
  double lo;
  double hi;
};

// Partition (lo, hi) at the given breakpoints (assumed sorted, inside (lo,hi)).
inline std::vector<RadialSegment> radialSegments(double lo, double hi,
                                                 const std::vector<double>& breakpoints) {
  std::vector<RadialSegment> segs;
  double prev = lo;
  for (double b : breakpoints) {
    if (b > prev && b < hi) {
      segs.push_back({prev, b});
      prev = b;
    }
  }
  segs.push_back({prev, hi});
  return segs;
}

// An interior point of the segment, used to evaluate quantities that are
// constant on it (exceedance counts, anchors, allocations).
inline double segmentRepresentative(const RadialSegment& s) {
  if (std::isinf(s.hi)) return s.lo * 2.0;
  return 0.5 * (s.lo + s.hi);
}

// P(u in (lo,hi) segment) for the Pareto(alpha) density alpha a^alpha u^{-alpha-1}
// truncated below at a.
inline double truncatedParetoMass(double alpha, double a, const RadialSegment& s) {
  double hi = std::isinf(s.hi) ? 0.0 : std::pow(a / s.hi, alpha);
  return std::pow(a / s.lo, alpha) - hi;
}

}  // namespace tailcalc

#endif  // TAILCALC_RADIAL_HPP
