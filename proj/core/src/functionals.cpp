#include "tailcalc/functionals.hpp"

#include <cmath>
#include <sstream>

#include "tailcalc/errors.hpp"

namespace tailcalc {

TestFunction TestFunction::product(std::string id, std::optional<std::vector<bool>> mask,
                                   std::vector<SiteThreshold> cs, double beta) {
  TestFunction g;
  g.id = std::move(id);
  g.siteMask = std::move(mask);
  TestTerm t;
  t.constraints = std::move(cs);
  t.beta = beta;
  g.terms.push_back(std::move(t));
  return g;
}

double TestFunction::evaluate(const Field& field, std::optional<std::size_t> s) const {
  if (siteMask) {
    if (!s) throw InvalidArgument("test function expects a group argument");
    if (!(*siteMask)[*s]) return 0.0;
  }
  double total = 0.0;
  for (const TestTerm& t : terms) {
    bool live = true;
    for (const SiteThreshold& c : t.constraints) {
      bool gt = field.norm(c.site) > c.level;
      if (gt != c.greater) {
        live = false;
        break;
      }
    }
    if (!live) continue;
    double v = t.coeff;
    if (t.beta != 0.0) v *= std::pow(field.norm(field.group().zero()), t.beta);
    if (t.payload) v *= t.payload(field);
    total += v;
  }
  return total;
}

double integrateTestFunction(double alpha, const TestFunction& g,
                             std::optional<std::size_t> sArg, const Field& argRep,
                             double fieldScale,
                             const std::vector<std::pair<double, double>>& extraGreater,
                             double w, double lo, double hi) {
  if (w == 0.0 || hi <= lo) return 0.0;
  if (g.siteMask) {
    if (!sArg) throw InvalidArgument("test function expects a group argument");
    if (!(*g.siteMask)[*sArg]) return 0.0;
  }
  double u0base = lo;
  for (auto [nrm, lev] : extraGreater) {
    if (!(nrm > 0.0)) return 0.0;  // u * 0 > level is impossible
    u0base = std::max(u0base, lev / nrm);
  }
  double total = 0.0;
  std::size_t origin = argRep.group().zero();
  for (const TestTerm& t : g.terms) {
    if (t.beta >= alpha) throw InvalidArgument("radial power must stay below alpha");
    double u0 = u0base, u1 = hi;
    bool dead = false;
    for (const SiteThreshold& c : t.constraints) {
      double nrm = fieldScale * argRep.norm(c.site);
      if (c.greater) {
        if (!(nrm > 0.0)) {
          dead = true;
          break;
        }
        u0 = std::max(u0, c.level / nrm);
      } else if (nrm > 0.0) {
        u1 = std::min(u1, c.level / nrm);
      }
    }
    if (dead || u1 <= u0) continue;
    double factor = t.coeff * w;
    if (t.beta != 0.0) factor *= std::pow(fieldScale * argRep.norm(origin), t.beta);
    if (t.payload) factor *= t.payload(argRep);
    if (factor == 0.0) continue;
    total += factor * powerMass(alpha, t.beta, u0, u1);
  }
  return total;
}

double integrateThresholdFunctional(double alpha, const ThresholdFunctional& f,
                                    const Field& rep, double w, double lo, double hi) {
  if (f.powerExponent >= alpha) throw InvalidArgument("powerExponent must be below alpha");
  TestFunction g;
  g.id = "functional";
  TestTerm t;
  t.constraints = f.constraints;
  t.beta = f.powerExponent;
  t.payload = f.payload;
  g.terms.push_back(std::move(t));
  return integrateTestFunction(alpha, g, std::nullopt, rep, 1.0, {}, w,
                               std::max(lo, f.extraLower), hi);
}

namespace {

std::string thresholdLabel(const Group& group, const SiteThreshold& c) {
  std::ostringstream os;
  os << "|Y_" << group.elementLabel(c.site) << "|" << (c.greater ? ">" : "<=") << c.level;
  return os.str();
}

}  // namespace

TestFamily defaultCanaryFamily(const Group& group) {
  std::vector<std::size_t> lags = {group.zero()};
  if (group.size() > 1) {
    // the lag-1 element: first non-zero element in enumeration order
    for (std::size_t i = 0; i < group.size(); ++i)
      if (i != group.zero()) {
        lags.push_back(i);
        break;
      }
  }
  std::vector<SiteThreshold> atoms;
  for (std::size_t l : lags)
    for (double c : {1.0, 2.0}) atoms.push_back({l, c, true});

  struct MaskSpec {
    std::string label;
    std::vector<std::size_t> sites;
    bool all = false;
  };
  std::vector<MaskSpec> masks;
  masks.push_back({"s=0", {group.zero()}});
  if (lags.size() > 1) {
    masks.push_back({"s=" + group.elementLabel(lags[1]), {lags[1]}});
    masks.push_back({"s in {0," + group.elementLabel(lags[1]) + "}", {group.zero(), lags[1]}});
  } else {
    masks.push_back({"s=0 (b)", {group.zero()}});
    masks.push_back({"s=0 (c)", {group.zero()}});
  }
  masks.push_back({"s in G", {}, true});

  TestFamily fam;
  for (const MaskSpec& m : masks) {
    std::vector<bool> mask(group.size(), m.all);
    for (std::size_t s : m.sites) mask[s] = true;
    for (const SiteThreshold& a : atoms)
      for (const SiteThreshold& b : atoms) {
        std::ostringstream id;
        id << "1{" << m.label << "}*1{" << thresholdLabel(group, a) << "}*1{"
           << thresholdLabel(group, b) << "}";
        fam.push_back(TestFunction::product(id.str(), mask, {a, b}));
      }
  }
  return fam;
}

TestFunction countIndicator(const Group& group, double level, std::size_t count) {
  const std::size_t n = group.size();
  if (count > n) throw InvalidArgument("count exceeds group size");
  TestFunction g;
  std::ostringstream id;
  id << "1{xi_" << level << "(G)=" << count << "}";
  g.id = id.str();
  // one term per subset of exactly `count` exceeding sites
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(count), true);
  std::sort(pick.begin(), pick.end());
  do {
    TestTerm t;
    for (std::size_t s = 0; s < n; ++s) t.constraints.push_back({s, level, pick[s]});
    g.terms.push_back(std::move(t));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return g;
}

}  // namespace tailcalc
