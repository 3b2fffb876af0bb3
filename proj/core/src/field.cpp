#include "tailcalc/field.hpp"

#include <cmath>

#include "tailcalc/errors.hpp"

namespace tailcalc {

ConeValue ConeValue::scalar(double x) {
  if (!(x >= 0.0)) throw InvalidArgument("scalar cone values are nonnegative");
  return ConeValue(ConeKind::Scalar, {x});
}

ConeValue ConeValue::vector(std::vector<double> comps) {
  if (comps.empty()) throw InvalidArgument("vector cone values need at least one component");
  return ConeValue(ConeKind::Vector, std::move(comps));
}

ConeValue ConeValue::unit(ConeKind kind, std::size_t dim) {
  if (kind == ConeKind::Scalar) return scalar(1.0);
  std::vector<double> c(dim, 0.0);
  c[0] = 1.0;
  return vector(std::move(c));
}

ConeValue ConeValue::padding(ConeKind kind, std::size_t dim) {
  if (kind == ConeKind::Scalar) return scalar(0.0);
  return vector(std::vector<double>(dim, 0.0));
}

double ConeValue::norm() const {
  if (kind_ == ConeKind::Scalar) return comps_[0];
  double s = 0.0;
  for (double c : comps_) s += c * c;
  return std::sqrt(s);
}

ConeValue ConeValue::scaled(double u) const {
  std::vector<double> c(comps_);
  for (double& x : c) x *= u;
  return ConeValue(kind_, std::move(c));
}

Field::Field(GroupPtr group, ConeKind cone, std::size_t coneDim, std::vector<double> comps)
    : group_(std::move(group)), cone_(cone), coneDim_(coneDim), comps_(std::move(comps)) {
  if (!group_) throw InvalidArgument("field needs a group");
  if (cone_ == ConeKind::Scalar && coneDim_ != 1)
    throw InvalidArgument("scalar cone has dimension 1");
  if (coneDim_ == 0) throw InvalidArgument("cone dimension must be positive");
  if (comps_.size() != group_->size() * coneDim_)
    throw DimensionMismatch("field component count does not match group size");
  norms_.resize(group_->size());
  for (std::size_t s = 0; s < group_->size(); ++s) {
    if (cone_ == ConeKind::Scalar) {
      if (!(comps_[s] >= 0.0)) throw InvalidArgument("scalar cone values are nonnegative");
      norms_[s] = comps_[s];
    } else {
      double acc = 0.0;
      for (std::size_t k = 0; k < coneDim_; ++k) {
        double c = comps_[s * coneDim_ + k];
        acc += c * c;
      }
      norms_[s] = std::sqrt(acc);
    }
  }
}

Field Field::constant(GroupPtr group, const ConeValue& v) {
  std::vector<double> comps;
  comps.reserve(group->size() * v.dim());
  for (std::size_t s = 0; s < group->size(); ++s)
    comps.insert(comps.end(), v.components().begin(), v.components().end());
  return Field(std::move(group), v.kind(), v.dim(), std::move(comps));
}

ConeValue Field::value(std::size_t site) const {
  std::vector<double> c(comps_.begin() + static_cast<long>(site * coneDim_),
                        comps_.begin() + static_cast<long>((site + 1) * coneDim_));
  return cone_ == ConeKind::Scalar ? ConeValue::scalar(c[0]) : ConeValue::vector(std::move(c));
}

Field Field::shifted(std::size_t t) const {
  std::vector<double> comps(comps_.size(), 0.0);
  for (std::size_t s = 0; s < group_->size(); ++s) {
    auto src = group_->add(s, t);
    if (!src) continue;  // zero-norm padding outside a window box
    for (std::size_t k = 0; k < coneDim_; ++k)
      comps[s * coneDim_ + k] = comps_[*src * coneDim_ + k];
  }
  return Field(group_, cone_, coneDim_, std::move(comps));
}

Field Field::scaled(double u) const {
  if (!(u > 0.0) || !std::isfinite(u))
    throw InvalidArgument("scaling factor must be positive and finite");
  std::vector<double> comps(comps_);
  for (double& c : comps) c *= u;
  return Field(group_, cone_, coneDim_, std::move(comps));
}

Field Field::normalizedToW() const {
  double n0 = norm(group_->zero());
  if (n0 > 0.0) return scaled(1.0 / n0);
  return constant(group_, ConeValue::unit(cone_, coneDim_));
}

std::vector<std::size_t> Field::exceedanceSupport(double level) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < group_->size(); ++s)
    if (norms_[s] > level) out.push_back(s);
  return out;
}

std::size_t Field::exceedanceCount(double level) const {
  std::size_t n = 0;
  for (double v : norms_)
    if (v > level) ++n;
  return n;
}

double Field::maxNorm() const {
  double m = 0.0;
  for (double v : norms_)
    if (v > m) m = v;
  return m;
}

double Field::powerSum(double alpha) const {
  double s = 0.0;
  for (double v : norms_)
    if (v > 0.0) s += std::pow(v, alpha);
  return s;
}

bool Field::sameShapeAs(const Field& other) const {
  return group() == other.group() && cone_ == other.cone_ && coneDim_ == other.coneDim_;
}

bool Field::approxEquals(const Field& other, double tol) const {
  if (!sameShapeAs(other)) return false;
  for (std::size_t i = 0; i < comps_.size(); ++i)
    if (std::abs(comps_[i] - other.comps_[i]) > tol) return false;
  return true;
}

}  // namespace tailcalc
