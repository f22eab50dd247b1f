#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "msvi/errors.hpp"

namespace msvi {

class SampleSpace;
using SampleSpacePtr = std::shared_ptr<const SampleSpace>;

/// Finite probability space: atoms {0,...,m-1} carrying strictly positive
/// probabilities that sum to one.
class SampleSpace {
 public:
  /// Probabilities below this are rejected at construction; they would make
  /// per-cell averages ill-conditioned.
  static constexpr double min_probability = 1e-15;
  static constexpr double sum_tolerance = 1e-12;

  explicit SampleSpace(Eigen::VectorXd probabilities);

  static SampleSpacePtr create(Eigen::VectorXd probabilities) {
    return std::make_shared<SampleSpace>(std::move(probabilities));
  }
  /// Equal-probability space on `atom_count` atoms.
  static SampleSpacePtr uniform(int atom_count);

  int atom_count() const { return static_cast<int>(p_.size()); }
  double probability(int atom) const { return p_[atom]; }
  const Eigen::VectorXd& probabilities() const { return p_; }

 private:
  Eigen::VectorXd p_;
};

/// True when the two spaces are the same object or carry identical
/// probability vectors.
bool same_space(const SampleSpacePtr& a, const SampleSpacePtr& b);

/// Square-integrable random vector on a finite space, stored densely: row i
/// is the value at atom i. Columns are split into per-stage blocks
/// (n_0,...,n_{N-1}); a vector with no natural stage structure has a single
/// block spanning all columns.
class RandomVector {
 public:
  RandomVector(SampleSpacePtr space, Eigen::MatrixXd values,
               std::vector<int> blocks = {});

  static RandomVector zero(SampleSpacePtr space, int dim,
                           std::vector<int> blocks = {});
  static RandomVector constant(SampleSpacePtr space, const Eigen::VectorXd& value,
                               std::vector<int> blocks = {});

  const SampleSpacePtr& space() const { return space_; }
  const Eigen::MatrixXd& values() const { return values_; }
  int dim() const { return static_cast<int>(values_.cols()); }
  int atom_count() const { return static_cast<int>(values_.rows()); }
  const std::vector<int>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int block_offset(int block) const;

  Eigen::VectorXd atom(int i) const { return values_.row(i).transpose(); }

  /// New vector over the same space and block split with replaced values.
  RandomVector with_values(Eigen::MatrixXd values) const;

 private:
  SampleSpacePtr space_;
  Eigen::MatrixXd values_;
  std::vector<int> blocks_;
};

RandomVector operator+(const RandomVector& a, const RandomVector& b);
RandomVector operator-(const RandomVector& a, const RandomVector& b);
RandomVector operator*(double s, const RandomVector& a);

/// Partition of the atom set into disjoint nonempty cells. Stands in for a
/// sub-sigma-field: on a finite space every sigma-field is generated by the
/// cells of a partition.
class Partition {
 public:
  Partition(int atom_count, std::vector<std::vector<int>> cells);

  static Partition trivial(int atom_count);
  static Partition finest(int atom_count);

  int atom_count() const { return static_cast<int>(cell_of_.size()); }
  int cell_count() const { return static_cast<int>(cells_.size()); }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<int>& cell(int c) const { return cells_[c]; }
  int cell_of(int atom) const { return cell_of_[atom]; }

  /// Every cell of *this lies inside a single cell of `coarser`.
  bool refines(const Partition& coarser) const;
  bool is_trivial() const { return cells_.size() == 1; }

 private:
  std::vector<std::vector<int>> cells_;
  std::vector<int> cell_of_;
};

/// <a,b> = sum_i p_i <a(i), b(i)>. Symmetric and bilinear.
double l2_inner(const RandomVector& a, const RandomVector& b);

/// sqrt(<a,a>); zero exactly when a is zero.
double l2_norm(const RandomVector& a);

/// Per-cell probability-weighted average: the result is constant on each
/// cell of g and is the metric projection of `a` onto the subspace of
/// vectors measurable with respect to g.
RandomVector conditional_expectation(const RandomVector& a, const Partition& g);

namespace detail {

/// Weighted inner product / squared norm on raw value matrices.
double weighted_inner(const Eigen::VectorXd& p, const Eigen::MatrixXd& a,
                      const Eigen::MatrixXd& b);
double weighted_squared_norm(const Eigen::VectorXd& p, const Eigen::MatrixXd& a);

/// Matrix-level conditional expectation core.
Eigen::MatrixXd cell_average(const Eigen::VectorXd& p, const Eigen::MatrixXd& values,
                             const Partition& g);

}  // namespace detail

}  // namespace msvi
