#ifndef TAILCALC_LAW_HPP
#define TAILCALC_LAW_HPP

#include <optional>
#include <vector>

#include "tailcalc/field.hpp"
#include "tailcalc/functionals.hpp"

namespace tailcalc {

// One atom of a truncated-ray law: with probability `prob` the field is
// u * rep, where u has the Pareto(alpha) density alpha a^alpha u^{-alpha-1}
// on (a, infinity), a = lower. The representative is kept at whatever scale
// it came in; the W-normalized view is available through spectralAtom().
struct LawAtom {
  double prob;
  Field rep;
  double lower;
};

// A probability law given by finitely many truncated-Pareto ray atoms: the
// exact form of Q (Palm measures of exceedance) and of anchored laws Q_T.
class TruncatedRayLaw {
 public:
  TruncatedRayLaw(double alpha, GroupPtr group, std::vector<LawAtom> atoms);

  double alpha() const { return alpha_; }
  const Group& group() const { return *group_; }
  const GroupPtr& groupPtr() const { return group_; }
  const std::vector<LawAtom>& atoms() const { return atoms_; }

  // (W, a') with |W_0| = 1 describing the same atom: W = rep / |rep(0)|
  // and a' = lower * |rep(0)|. Throws ZeroField when |rep(0)| = 0.
  LawAtom spectralAtom(std::size_t i) const;

  // E[g(Y, sArg)] for a structured test function (exact)
  double expect(const TestFunction& g, std::optional<std::size_t> sArg) const;
  // P(no site of Y exceeds `level`), exact
  double probNoExceedance(double level) const;

  // canonical form: W-normalized representatives, merged and sorted
  TruncatedRayLaw canonical(double tol = 1e-12) const;
  static bool equal(const TruncatedRayLaw& a, const TruncatedRayLaw& b, double tol = 1e-12);

 private:
  double alpha_;
  GroupPtr group_;
  std::vector<LawAtom> atoms_;
};

// A spectrally decomposable law's angular part: atoms (p, W) with |W_0| = 1.
struct SpectralAtom {
  double prob;
  Field w;
};

class SpectralLaw {
 public:
  SpectralLaw(double alpha, GroupPtr group, std::vector<SpectralAtom> atoms);

  double alpha() const { return alpha_; }
  const Group& group() const { return *group_; }
  const GroupPtr& groupPtr() const { return group_; }
  const std::vector<SpectralAtom>& atoms() const { return atoms_; }

  // E[f(W)] over the atoms
  double expect(const std::function<double(const Field&)>& f) const;

  SpectralLaw canonical(double tol = 1e-12) const;
  static bool equal(const SpectralLaw& a, const SpectralLaw& b, double tol = 1e-12);

 private:
  double alpha_;
  GroupPtr group_;
  std::vector<SpectralAtom> atoms_;
};

// lexicographic comparison of field components, used for canonical ordering
bool fieldLess(const Field& a, const Field& b);

}  // namespace tailcalc

#endif  // TAILCALC_LAW_HPP
