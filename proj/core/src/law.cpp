#include "tailcalc/law.hpp"

#include <algorithm>
#include <cmath>

#include "tailcalc/errors.hpp"

namespace tailcalc {

namespace {
constexpr double kProbTol = 1e-12;
}

bool fieldLess(const Field& a, const Field& b) {
  return std::lexicographical_compare(a.components().begin(), a.components().end(),
                                      b.components().begin(), b.components().end());
}

TruncatedRayLaw::TruncatedRayLaw(double alpha, GroupPtr group, std::vector<LawAtom> atoms)
    : alpha_(alpha), group_(std::move(group)), atoms_(std::move(atoms)) {
  if (!(alpha_ > 0.0)) throw InvalidArgument("alpha must be positive");
  double total = 0.0;
  for (const LawAtom& a : atoms_) {
    if (!(a.prob > 0.0)) throw InvalidArgument("atom probabilities must be positive");
    if (!(a.lower > 0.0)) throw InvalidArgument("atom truncation must be positive");
    if (a.rep.group() != *group_) throw DimensionMismatch("atom group");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > kProbTol)
    throw InvalidArgument("atom probabilities must sum to 1");
}

LawAtom TruncatedRayLaw::spectralAtom(std::size_t i) const {
  const LawAtom& a = atoms_[i];
  double n0 = a.rep.norm(group_->zero());
  if (!(n0 > 0.0)) throw ZeroField("atom representative has norm 0 at the origin");
  return LawAtom{a.prob, a.rep.scaled(1.0 / n0), a.lower * n0};
}

double TruncatedRayLaw::expect(const TestFunction& g, std::optional<std::size_t> sArg) const {
  double total = 0.0;
  for (const LawAtom& a : atoms_) {
    double density = a.prob * std::pow(a.lower, alpha_);
    total += integrateTestFunction(alpha_, g, sArg, a.rep, 1.0, {}, density, a.lower, kInf);
  }
  return total;
}

double TruncatedRayLaw::probNoExceedance(double level) const {
  double total = 0.0;
  for (const LawAtom& a : atoms_) {
    double m = a.rep.maxNorm();
    if (m <= 0.0) {
      total += a.prob;  // no site can ever exceed
      continue;
    }
    double cutoff = level / m;  // u <= cutoff keeps every site at or below level
    if (cutoff > a.lower) total += a.prob * (1.0 - std::pow(a.lower / cutoff, alpha_));
  }
  return total;
}

TruncatedRayLaw TruncatedRayLaw::canonical(double tol) const {
  std::vector<LawAtom> out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) out.push_back(spectralAtom(i));
  std::vector<LawAtom> merged;
  for (LawAtom& a : out) {
    bool found = false;
    for (LawAtom& m : merged)
      if (m.rep.approxEquals(a.rep, tol) && std::abs(m.lower - a.lower) <= tol) {
        m.prob += a.prob;
        found = true;
        break;
      }
    if (!found) merged.push_back(std::move(a));
  }
  std::sort(merged.begin(), merged.end(), [](const LawAtom& x, const LawAtom& y) {
    if (fieldLess(x.rep, y.rep)) return true;
    if (fieldLess(y.rep, x.rep)) return false;
    return x.lower < y.lower;
  });
  return TruncatedRayLaw(alpha_, group_, std::move(merged));
}

bool TruncatedRayLaw::equal(const TruncatedRayLaw& a, const TruncatedRayLaw& b, double tol) {
  if (a.group() != b.group() || std::abs(a.alpha() - b.alpha()) > tol) return false;
  TruncatedRayLaw ca = a.canonical(tol), cb = b.canonical(tol);
  if (ca.atoms().size() != cb.atoms().size()) return false;
  std::vector<bool> used(cb.atoms().size(), false);
  for (const LawAtom& x : ca.atoms()) {
    bool matched = false;
    for (std::size_t j = 0; j < cb.atoms().size(); ++j) {
      if (used[j]) continue;
      const LawAtom& y = cb.atoms()[j];
      if (std::abs(x.prob - y.prob) > tol) continue;
      if (std::abs(x.lower - y.lower) > tol) continue;
      if (!x.rep.approxEquals(y.rep, tol)) continue;
      used[j] = true;
      matched = true;
      break;
    }
    if (!matched) return false;
  }
  return true;
}

SpectralLaw::SpectralLaw(double alpha, GroupPtr group, std::vector<SpectralAtom> atoms)
    : alpha_(alpha), group_(std::move(group)), atoms_(std::move(atoms)) {
  if (!(alpha_ > 0.0)) throw InvalidArgument("alpha must be positive");
  double total = 0.0;
  for (const SpectralAtom& a : atoms_) {
    if (!(a.prob > 0.0)) throw InvalidArgument("atom probabilities must be positive");
    if (a.w.group() != *group_) throw DimensionMismatch("atom group");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > kProbTol)
    throw InvalidArgument("atom probabilities must sum to 1");
}

double SpectralLaw::expect(const std::function<double(const Field&)>& f) const {
  double total = 0.0;
  for (const SpectralAtom& a : atoms_) total += a.prob * f(a.w);
  return total;
}

SpectralLaw SpectralLaw::canonical(double tol) const {
  std::vector<SpectralAtom> out(atoms_);
  std::vector<SpectralAtom> merged;
  for (SpectralAtom& a : out) {
    bool found = false;
    for (SpectralAtom& m : merged)
      if (m.w.approxEquals(a.w, tol)) {
        m.prob += a.prob;
        found = true;
        break;
      }
    if (!found) merged.push_back(std::move(a));
  }
  std::sort(merged.begin(), merged.end(),
            [](const SpectralAtom& x, const SpectralAtom& y) { return fieldLess(x.w, y.w); });
  return SpectralLaw(alpha_, group_, std::move(merged));
}

bool SpectralLaw::equal(const SpectralLaw& a, const SpectralLaw& b, double tol) {
  if (a.group() != b.group() || std::abs(a.alpha() - b.alpha()) > tol) return false;
  SpectralLaw ca = a.canonical(tol), cb = b.canonical(tol);
  if (ca.atoms().size() != cb.atoms().size()) return false;
  std::vector<bool> used(cb.atoms().size(), false);
  for (const SpectralAtom& x : ca.atoms()) {
    bool matched = false;
    for (std::size_t j = 0; j < cb.atoms().size(); ++j) {
      if (used[j]) continue;
      if (std::abs(x.prob - cb.atoms()[j].prob) > tol) continue;
      if (!x.w.approxEquals(cb.atoms()[j].w, tol)) continue;
      used[j] = true;
      matched = true;
      break;
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace tailcalc
