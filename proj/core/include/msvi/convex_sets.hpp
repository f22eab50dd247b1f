#pragma once

#include <Eigen/Core>
#include <variant>
#include <vector>

#include "msvi/filtration.hpp"
#include "msvi/sample_space.hpp"

namespace msvi {

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct Ball {
  Eigen::VectorXd center;
  double radius;
};

/// { x : <normal, x> <= offset }
struct Halfspace {
  Eigen::VectorXd normal;
  double offset;
};

struct WholeSpace {
  int dim;
};

/// Closed convex set with a closed-form metric projection. Only such sets
/// are supported; anything needing an inner solve is out of scope.
class ConvexSet {
 public:
  using Data = std::variant<Box, Ball, Halfspace, WholeSpace>;

  /// lower <= upper componentwise; lower == upper degenerates to a point.
  static ConvexSet box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static ConvexSet ball(Eigen::VectorXd center, double radius);
  static ConvexSet halfspace(Eigen::VectorXd normal, double offset);
  static ConvexSet whole_space(int dim);

  int dim() const;
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;
  double distance(const Eigen::VectorXd& v) const;
  bool contains(const Eigen::VectorXd& v, double tol = 0.0) const;
  const Data& data() const { return data_; }

 private:
  explicit ConvexSet(Data data) : data_(std::move(data)) {}
  Data data_;
};

/// Nearest point of s to v.
Eigen::VectorXd project_point(const ConvexSet& s, const Eigen::VectorXd& v);

/// Per-atom product constraint set C(w) = C_0(w) x ... x C_{k-1}(w); the
/// factor dimensions must sum to the same total for every atom.
class PointwiseSet {
 public:
  PointwiseSet(SampleSpacePtr space, std::vector<std::vector<ConvexSet>> per_atom);

  /// Same product of factors at every atom.
  static PointwiseSet constant(SampleSpacePtr space, std::vector<ConvexSet> factors);

  const SampleSpacePtr& space() const { return space_; }
  int dim() const { return dim_; }
  int atom_count() const { return static_cast<int>(per_atom_.size()); }
  const std::vector<ConvexSet>& factors(int atom) const { return per_atom_[atom]; }

  Eigen::VectorXd project_atom(int atom, const Eigen::VectorXd& v) const;
  Eigen::MatrixXd project_values(const Eigen::MatrixXd& values) const;

  /// max over atoms of the Euclidean distance from row i to C(w_i).
  double max_atom_distance(const Eigen::MatrixXd& values) const;

 private:
  SampleSpacePtr space_;
  std::vector<std::vector<ConvexSet>> per_atom_;
  int dim_ = 0;
};

/// Atom-by-atom blockwise projection; valid because membership and nearest
/// points of an integrable-selection set decompose over atoms on a finite
/// space.
RandomVector project_random_vector(const PointwiseSet& cs, const RandomVector& x);

}  // namespace msvi
