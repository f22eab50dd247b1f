#pragma once

#include <Eigen/Core>
#include <vector>

#include "msvi/sample_space.hpp"

namespace msvi {

/// Stage structure: an increasing chain of partitions, one per decision
/// stage, together with the per-stage dimensions (n_0,...,n_{N-1}).
///
/// Stage 0 is always the trivial partition (nothing has been observed yet)
/// and each later stage refines the previous one. Refinement is validated
/// eagerly at construction.
class Filtration {
 public:
  Filtration(SampleSpacePtr space, std::vector<Partition> stages,
             std::vector<int> stage_dims);

  /// Builds the chain generated by discrete per-stage observations: stage i
  /// groups atoms by equality of the observation prefix (signals[0..i-1]).
  /// `signals` holds N-1 matrices, one per observation, each with one row
  /// per atom. Cells are ordered by first occurrence, so the construction is
  /// deterministic.
  static Filtration from_signals(SampleSpacePtr space,
                                 const std::vector<Eigen::MatrixXd>& signals,
                                 std::vector<int> stage_dims);

  const SampleSpacePtr& space() const { return space_; }
  int stage_count() const { return static_cast<int>(stages_.size()); }
  const Partition& stage(int i) const { return stages_[i]; }
  const std::vector<Partition>& stages() const { return stages_; }
  const std::vector<int>& stage_dims() const { return stage_dims_; }
  int dim() const { return dim_; }
  int stage_offset(int i) const { return offsets_[i]; }

  /// Blockwise conditional expectation on raw values: block i is averaged
  /// over the cells of stage i.
  Eigen::MatrixXd project_n_values(const Eigen::MatrixXd& values) const;
  Eigen::MatrixXd project_m_values(const Eigen::MatrixXd& values) const;

 private:
  SampleSpacePtr space_;
  std::vector<Partition> stages_;
  std::vector<int> stage_dims_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

/// Projection onto the nonanticipativity subspace: stage-i block becomes its
/// conditional expectation with respect to the stage-i partition.
RandomVector project_nonanticipativity(const RandomVector& x, const Filtration& f);

/// Projection onto the orthogonal complement: x - project_nonanticipativity(x).
/// Each block of the result has zero conditional expectation on its stage.
RandomVector project_complement(const RandomVector& x, const Filtration& f);

}  // namespace msvi
