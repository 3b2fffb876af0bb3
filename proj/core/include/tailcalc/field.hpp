#ifndef TAILCALC_FIELD_HPP
#define TAILCALC_FIELD_HPP

#include <cstddef>
#include <vector>

#include "tailcalc/group.hpp"

namespace tailcalc {

enum class ConeKind { Scalar, Vector };

// A cone value: either a nonnegative scalar with |x| = x, or a real tuple
// with the Euclidean norm. The pseudo norm is homogeneous: |u*x| = u*|x|.
// The designated unit element x0 has norm 1 (scalar 1, or (1,0,...,0)).
class ConeValue {
 public:
  static ConeValue scalar(double x);
  static ConeValue vector(std::vector<double> comps);
  static ConeValue unit(ConeKind kind, std::size_t dim);
  static ConeValue padding(ConeKind kind, std::size_t dim);  // norm 0

  ConeKind kind() const { return kind_; }
  std::size_t dim() const { return comps_.size(); }
  const std::vector<double>& components() const { return comps_; }
  double norm() const;
  ConeValue scaled(double u) const;

  bool operator==(const ConeValue& other) const {
    return kind_ == other.kind_ && comps_ == other.comps_;
  }

 private:
  ConeValue(ConeKind kind, std::vector<double> comps)
      : kind_(kind), comps_(std::move(comps)) {}
  ConeKind kind_;
  std::vector<double> comps_;
};

// A total mapping from group elements to cone values. Values are stored as a
// flat component array in row-major group-element order (stride = cone dim),
// with the norms cached. Fields are immutable after construction: all
// operations return new fields.
class Field {
 public:
  Field(GroupPtr group, ConeKind cone, std::size_t coneDim, std::vector<double> comps);
  static Field constant(GroupPtr group, const ConeValue& v);

  const Group& group() const { return *group_; }
  const GroupPtr& groupPtr() const { return group_; }
  ConeKind coneKind() const { return cone_; }
  std::size_t coneDim() const { return coneDim_; }

  double norm(std::size_t site) const { return norms_[site]; }
  const std::vector<double>& norms() const { return norms_; }
  ConeValue value(std::size_t site) const;
  const std::vector<double>& components() const { return comps_; }

  // result(s) = this(s + t); out-of-box reads on window groups give the
  // zero-norm padding value
  Field shifted(std::size_t t) const;
  // result(s) = u * this(s); u must be positive and finite
  Field scaled(double u) const;
  // W-normalization: scale by 1/|Y_0| when |Y_0| > 0, else the constant-x0 field
  Field normalizedToW() const;

  std::vector<std::size_t> exceedanceSupport(double level) const;
  std::vector<std::size_t> positiveSupport() const { return exceedanceSupport(0.0); }
  std::size_t exceedanceCount(double level) const;
  double maxNorm() const;
  double powerSum(double alpha) const;  // sum_s |Y_s|^alpha

  bool sameShapeAs(const Field& other) const;
  // componentwise comparison within an absolute tolerance
  bool approxEquals(const Field& other, double tol) const;

 private:
  GroupPtr group_;
  ConeKind cone_;
  std::size_t coneDim_;
  std::vector<double> comps_;
  std::vector<double> norms_;
};

}  // namespace tailcalc

#endif  // TAILCALC_FIELD_HPP
