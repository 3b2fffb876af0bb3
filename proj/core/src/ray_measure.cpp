#include "tailcalc/ray_measure.hpp"

#include <algorithm>
#include <cmath>

#include "tailcalc/errors.hpp"

namespace tailcalc {

RayMeasure::RayMeasure(double alpha, GroupPtr group, std::vector<Ray> rays)
    : alpha_(alpha), group_(std::move(group)), rays_(std::move(rays)) {
  if (!(alpha_ > 0.0)) throw InvalidArgument("alpha must be positive");
  for (const Ray& r : rays_) {
    if (!(r.weight > 0.0)) throw InvalidArgument("ray weights must be positive");
    if (!(r.lower >= 0.0) || !(r.upper > r.lower))
      throw InvalidArgument("ray radial bounds must satisfy 0 <= lower < upper");
    if (r.rep.group() != *group_) throw DimensionMismatch("ray group");
    if (!(r.rep.maxNorm() > 0.0))
      throw ZeroField("ray representative has all norms zero");
  }
}

double RayMeasure::mass(const ThresholdFunctional& f) const {
  double total = 0.0;
  for (const Ray& r : rays_)
    total += integrateThresholdFunctional(alpha_, f, r.rep, r.weight, r.lower, r.upper);
  return total;
}

double RayMeasure::expect(const TestFunction& g, std::optional<std::size_t> sArg) const {
  double total = 0.0;
  for (const Ray& r : rays_)
    total += integrateTestFunction(alpha_, g, sArg, r.rep, 1.0, {}, r.weight, r.lower,
                                   r.upper);
  return total;
}

RayMeasure RayMeasure::canonical(double tol) const {
  std::vector<Ray> out;
  out.reserve(rays_.size());
  for (const Ray& r : rays_) {
    double m = r.rep.maxNorm();
    // Ray(w, m*rep', a, b) = Ray(w*m^alpha, rep', a*m, b*m)
    out.push_back(Ray{r.weight * std::pow(m, alpha_), r.rep.scaled(1.0 / m), r.lower * m,
                      std::isinf(r.upper) ? kInf : r.upper * m});
  }
  // merge equal segments by adding weights; greedy pairwise clustering keeps
  // the merge robust to float noise that could reorder a lexicographic sort
  auto upperEq = [tol](double x, double y) {
    if (std::isinf(x) || std::isinf(y)) return std::isinf(x) && std::isinf(y);
    return std::abs(x - y) <= tol;
  };
  std::vector<Ray> merged;
  for (Ray& r : out) {
    bool found = false;
    for (Ray& m : merged)
      if (m.rep.approxEquals(r.rep, tol) && std::abs(m.lower - r.lower) <= tol &&
          upperEq(m.upper, r.upper)) {
        m.weight += r.weight;
        found = true;
        break;
      }
    if (!found) merged.push_back(std::move(r));
  }
  // coalesce radially adjacent segments of the same orbit with equal density
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < merged.size() && !changed; ++i)
      for (std::size_t j = 0; j < merged.size() && !changed; ++j) {
        if (i == j || std::isinf(merged[i].upper)) continue;
        if (merged[i].rep.approxEquals(merged[j].rep, tol) &&
            std::abs(merged[i].upper - merged[j].lower) <= tol &&
            std::abs(merged[i].weight - merged[j].weight) <= tol) {
          merged[i].upper = merged[j].upper;
          merged.erase(merged.begin() + static_cast<long>(j));
          changed = true;
        }
      }
  }
  std::sort(merged.begin(), merged.end(), [](const Ray& x, const Ray& y) {
    if (fieldLess(x.rep, y.rep)) return true;
    if (fieldLess(y.rep, x.rep)) return false;
    if (x.lower != y.lower) return x.lower < y.lower;
    return x.upper < y.upper;
  });
  return RayMeasure(alpha_, group_, std::move(merged));
}

bool RayMeasure::equal(const RayMeasure& a, const RayMeasure& b, double tol) {
  if (a.group() != b.group() || std::abs(a.alpha() - b.alpha()) > tol) return false;
  RayMeasure ca = a.canonical(tol), cb = b.canonical(tol);
  if (ca.rays().size() != cb.rays().size()) return false;
  // one-to-one matching up to ray order
  std::vector<bool> used(cb.rays().size(), false);
  for (const Ray& x : ca.rays()) {
    bool matched = false;
    for (std::size_t j = 0; j < cb.rays().size(); ++j) {
      if (used[j]) continue;
      const Ray& y = cb.rays()[j];
      bool infx = std::isinf(x.upper), infy = std::isinf(y.upper);
      if (infx != infy) continue;
      if (std::abs(x.weight - y.weight) > tol) continue;
      if (std::abs(x.lower - y.lower) > tol) continue;
      if (!infx && std::abs(x.upper - y.upper) > tol) continue;
      if (!x.rep.approxEquals(y.rep, tol)) continue;
      used[j] = true;
      matched = true;
      break;
    }
    if (!matched) return false;
  }
  return true;
}

RayMeasure RayMeasure::scalePushforward(double u) const {
  if (!(u > 0.0) || !std::isfinite(u))
    throw InvalidArgument("scale pushforward needs a positive finite factor");
  std::vector<Ray> out;
  out.reserve(rays_.size());
  for (const Ray& r : rays_)
    out.push_back(Ray{r.weight * std::pow(u, alpha_), r.rep, r.lower * u,
                      std::isinf(r.upper) ? kInf : r.upper * u});
  return RayMeasure(alpha_, group_, std::move(out));
}

RayMeasure RayMeasure::shiftPushforward(std::size_t t) const {
  if (!group_->isCyclic())
    throw InvalidArgument("shift pushforward needs a cyclic group (bijective shifts)");
  std::vector<Ray> out;
  out.reserve(rays_.size());
  for (const Ray& r : rays_) out.push_back(Ray{r.weight, r.rep.shifted(t), r.lower, r.upper});
  return RayMeasure(alpha_, group_, std::move(out));
}

RayMeasure RayMeasure::stationarized() const {
  if (!group_->isCyclic())
    throw InvalidArgument("stationarization needs a cyclic group (bijective shifts)");
  std::vector<Ray> out;
  out.reserve(rays_.size() * group_->size());
  for (std::size_t t = 0; t < group_->size(); ++t)
    for (const Ray& r : rays_) out.push_back(Ray{r.weight, r.rep.shifted(t), r.lower, r.upper});
  return RayMeasure(alpha_, group_, std::move(out));
}

RayMeasure RayMeasure::restrictedToExceedance(double level) const {
  std::vector<Ray> out;
  for (const Ray& r : rays_) {
    double m = r.rep.maxNorm();
    double lo = std::max(r.lower, level / m);
    if (lo < r.upper) out.push_back(Ray{r.weight, r.rep, lo, r.upper});
  }
  return RayMeasure(alpha_, group_, std::move(out));
}

bool RayMeasure::isStationary(double tol) const {
  if (!group_->isCyclic()) return false;
  for (std::size_t t = 0; t < group_->size(); ++t)
    if (!equal(*this, shiftPushforward(t), tol)) return false;
  return true;
}

double RayMeasure::palmNormalization() const {
  return mass(ThresholdFunctional::thresholds({{group_->zero(), 1.0, true}}));
}

TruncatedRayLaw RayMeasure::palmOfExceedance(double tol) const {
  if (!isStationary(tol)) throw NotStationary("palm extraction needs a stationary measure");
  double norm = palmNormalization();
  if (std::abs(norm - 1.0) > tol)
    throw NotNormalized("nu(|Y_0|>1) = " + std::to_string(norm) + ", expected 1");
  std::vector<LawAtom> atoms;
  for (const Ray& r : rays_) {
    if (!std::isinf(r.upper))
      throw InvalidArgument("palm extraction expects full rays (no finite upper bound)");
    double n0 = r.rep.norm(group_->zero());
    if (!(n0 > 0.0)) continue;  // |Y_0| > 1 is impossible on this ray
    double a = std::max(r.lower, 1.0 / n0);
    double p = r.weight * std::pow(a, -alpha_);
    if (p > 0.0) atoms.push_back(LawAtom{p, r.rep, a});
  }
  return TruncatedRayLaw(alpha_, group_, std::move(atoms));
}

std::vector<double> RayMeasure::sigmaFiniteLayers(int K) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    double total = 0.0;
    for (const Ray& r : rays_) {
      double m = r.rep.maxNorm();
      double lo = std::max(r.lower, 1.0 / (k * m));
      total += r.weight * powerMass(alpha_, 0.0, lo, r.upper);
    }
    out.push_back(total);
  }
  return out;
}

double RayMeasure::campbellFunctional(
    const std::function<ThresholdFunctional(std::size_t)>& kernel) const {
  double total = 0.0;
  for (std::size_t s = 0; s < group_->size(); ++s) {
    ThresholdFunctional f = kernel(s);
    f.constraints.push_back({s, 1.0, true});
    total += mass(f);
  }
  return total;
}

}  // namespace tailcalc
