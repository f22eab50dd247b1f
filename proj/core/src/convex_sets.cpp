#include "msvi/convex_sets.hpp"

#include <cmath>
#include <utility>

namespace msvi {

ConvexSet ConvexSet::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() != upper.size()) throw ShapeError("ConvexSet::box: bound sizes differ");
  if (lower.size() == 0) throw ValidationError("ConvexSet::box: empty bounds");
  if ((lower.array() > upper.array()).any()) {
    throw ValidationError("ConvexSet::box: lower bound exceeds upper bound");
  }
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::ball(Eigen::VectorXd center, double radius) {
  if (center.size() == 0) throw ValidationError("ConvexSet::ball: empty center");
  if (!(radius > 0)) throw ValidationError("ConvexSet::ball: radius must be positive");
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::halfspace(Eigen::VectorXd normal, double offset) {
  if (normal.size() == 0) throw ValidationError("ConvexSet::halfspace: empty normal");
  if (normal.norm() == 0.0) throw ValidationError("ConvexSet::halfspace: zero normal");
  return ConvexSet(Halfspace{std::move(normal), offset});
}

ConvexSet ConvexSet::whole_space(int dim) {
  if (dim <= 0) throw ValidationError("ConvexSet::whole_space: dimension must be positive");
  return ConvexSet(WholeSpace{dim});
}

int ConvexSet::dim() const {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) return static_cast<int>(s.lower.size());
        if constexpr (std::is_same_v<T, Ball>) return static_cast<int>(s.center.size());
        if constexpr (std::is_same_v<T, Halfspace>) return static_cast<int>(s.normal.size());
        if constexpr (std::is_same_v<T, WholeSpace>) return s.dim;
      },
      data_);
}

Eigen::VectorXd ConvexSet::project(const Eigen::VectorXd& v) const {
  if (v.size() != dim()) {
    throw ShapeError("ConvexSet::project: point dimension " + std::to_string(v.size()) +
                     " does not match set dimension " + std::to_string(dim()));
  }
  return std::visit(
      [&](const auto& s) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return v.cwiseMax(s.lower).cwiseMin(s.upper);
        } else if constexpr (std::is_same_v<T, Ball>) {
          Eigen::VectorXd delta = v - s.center;
          const double dist = delta.norm();
          if (dist <= s.radius) return v;
          return s.center + (s.radius / dist) * delta;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          const double excess = s.normal.dot(v) - s.offset;
          if (excess <= 0) return v;
          return v - (excess / s.normal.squaredNorm()) * s.normal;
        } else {
          return v;
        }
      },
      data_);
}

double ConvexSet::distance(const Eigen::VectorXd& v) const { return (v - project(v)).norm(); }

bool ConvexSet::contains(const Eigen::VectorXd& v, double tol) const {
  return distance(v) <= tol;
}

Eigen::VectorXd project_point(const ConvexSet& s, const Eigen::VectorXd& v) {
  return s.project(v);
}

PointwiseSet::PointwiseSet(SampleSpacePtr space, std::vector<std::vector<ConvexSet>> per_atom)
    : space_(std::move(space)), per_atom_(std::move(per_atom)) {
  if (!space_) throw ValidationError("PointwiseSet: null space");
  if (static_cast<int>(per_atom_.size()) != space_->atom_count()) {
    throw ShapeError("PointwiseSet: " + std::to_string(per_atom_.size()) +
                     " atom entries, space has " + std::to_string(space_->atom_count()));
  }
  for (std::size_t i = 0; i < per_atom_.size(); ++i) {
    if (per_atom_[i].empty()) {
      throw ValidationError("PointwiseSet: atom " + std::to_string(i) + " has no factors");
    }
    int d = 0;
    for (const auto& s : per_atom_[i]) d += s.dim();
    if (i == 0) {
      dim_ = d;
    } else if (d != dim_) {
      throw ShapeError("PointwiseSet: atom " + std::to_string(i) + " has dimension " +
                       std::to_string(d) + ", expected " + std::to_string(dim_));
    }
  }
}

PointwiseSet PointwiseSet::constant(SampleSpacePtr space, std::vector<ConvexSet> factors) {
  const int m = space->atom_count();
  std::vector<std::vector<ConvexSet>> per_atom(m, factors);
  return PointwiseSet(std::move(space), std::move(per_atom));
}

Eigen::VectorXd PointwiseSet::project_atom(int atom, const Eigen::VectorXd& v) const {
  if (v.size() != dim_) {
    throw ShapeError("PointwiseSet::project_atom: dimension mismatch");
  }
  Eigen::VectorXd out(dim_);
  int off = 0;
  for (const auto& s : per_atom_[atom]) {
    const int d = s.dim();
    out.segment(off, d) = s.project(v.segment(off, d));
    off += d;
  }
  return out;
}

Eigen::MatrixXd PointwiseSet::project_values(const Eigen::MatrixXd& values) const {
  if (values.rows() != atom_count() || values.cols() != dim_) {
    throw ShapeError("PointwiseSet::project_values: shape mismatch");
  }
  Eigen::MatrixXd out(values.rows(), values.cols());
  for (int i = 0; i < atom_count(); ++i) {
    out.row(i) = project_atom(i, values.row(i).transpose()).transpose();
  }
  return out;
}

double PointwiseSet::max_atom_distance(const Eigen::MatrixXd& values) const {
  double worst = 0.0;
  for (int i = 0; i < atom_count(); ++i) {
    const Eigen::VectorXd v = values.row(i).transpose();
    worst = std::max(worst, (v - project_atom(i, v)).norm());
  }
  return worst;
}

RandomVector project_random_vector(const PointwiseSet& cs, const RandomVector& x) {
  if (!same_space(cs.space(), x.space())) {
    throw ShapeError("project_random_vector: vector and set live on different spaces");
  }
  if (x.dim() != cs.dim()) {
    throw ShapeError("project_random_vector: dimension mismatch");
  }
  return x.with_values(cs.project_values(x.values()));
}

}  // namespace msvi
