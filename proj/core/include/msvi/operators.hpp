#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <vector>

#include "msvi/convex_sets.hpp"
#include "msvi/filtration.hpp"
#include "msvi/sample_space.hpp"

namespace msvi {

/// Monotone affine map evaluated pointwise: F(x)(w_i) = M_i x(w_i) + b_i.
///
/// Monotonicity of an affine map depends only on the symmetric part of its
/// matrix, so construction checks that sym(M_i) is positive semidefinite
/// within `psd_tolerance`; nonsymmetric monotone matrices are accepted.
class AffineOperator {
 public:
  static constexpr double psd_tolerance = 1e-10;

  AffineOperator(SampleSpacePtr space, std::vector<Eigen::MatrixXd> matrices,
                 std::vector<Eigen::VectorXd> offsets);

  const SampleSpacePtr& space() const { return space_; }
  int dim() const { return dim_; }
  const std::vector<Eigen::MatrixXd>& matrices() const { return matrices_; }
  const std::vector<Eigen::VectorXd>& offsets() const { return offsets_; }
  const Eigen::MatrixXd& matrix(int atom) const { return matrices_[atom]; }
  const Eigen::VectorXd& offset(int atom) const { return offsets_[atom]; }

  Eigen::VectorXd apply_atom(int atom, const Eigen::VectorXd& v) const {
    return matrices_[atom] * v + offsets_[atom];
  }
  Eigen::MatrixXd apply_values(const Eigen::MatrixXd& values) const;

 private:
  SampleSpacePtr space_;
  std::vector<Eigen::MatrixXd> matrices_;
  std::vector<Eigen::VectorXd> offsets_;
  int dim_ = 0;
};

/// Largest eigenvalue of a symmetric PSD matrix by power iteration with a
/// deterministic all-ones start, relative tolerance `rel_tol` and a hard
/// step cap. The fixed start keeps results reproducible run to run.
double power_iteration_max_eigenvalue(const Eigen::MatrixXd& sym, double rel_tol = 1e-10,
                                      int max_steps = 10000);

/// max over atoms of the largest eigenvalue of sym(M_i); an exact Lipschitz
/// constant for the affine map in the probability-weighted norm.
double lipschitz_estimate(const AffineOperator& op);

/// Type-erased pointwise monotone map together with its declared Lipschitz
/// constant. Evaluation preserves the space and dimension; per-atom
/// Lipschitz bounds default to the global constant when not supplied.
class OperatorHandle {
 public:
  using AtomMap = std::function<Eigen::VectorXd(int atom, const Eigen::VectorXd&)>;
  using BatchMap = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

  OperatorHandle(SampleSpacePtr space, int dim, AtomMap atom_map, double lipschitz,
                 std::vector<double> atom_lipschitz = {});

  /// Handle over an affine operator; shares the operator's data.
  static OperatorHandle affine(std::shared_ptr<const AffineOperator> op);

  const SampleSpacePtr& space() const { return space_; }
  int dim() const { return dim_; }
  double lipschitz() const { return lipschitz_; }
  double atom_lipschitz(int atom) const {
    return atom_lipschitz_.empty() ? lipschitz_ : atom_lipschitz_[atom];
  }

  Eigen::VectorXd evaluate_atom(int atom, const Eigen::VectorXd& v) const {
    return atom_map_(atom, v);
  }
  Eigen::MatrixXd evaluate_values(const Eigen::MatrixXd& values) const;

 private:
  SampleSpacePtr space_;
  int dim_;
  AtomMap atom_map_;
  BatchMap batch_map_;  // optional fast path
  double lipschitz_;
  std::vector<double> atom_lipschitz_;
};

/// Pointwise application of F; rows map to rows.
RandomVector evaluate(const OperatorHandle& F, const RandomVector& x);

/// Stopping functional for a candidate triplet (x, y, lam):
///
///   max_i |x(w_i) - Pi_{C(w_i)}(x(w_i) - F(x)(w_i) + lam(w_i))|
///   + sum_i |x(w_i) - y(w_i)|^2 p_i.
///
/// The first term is the pointwise natural residual of the constrained map,
/// the second the squared weighted gap between x and its nonanticipative
/// copy. Zero exactly when (x, y, lam) certifies a solution.
double msvi_residual(const OperatorHandle& F, const PointwiseSet& cs, const Filtration& f,
                     const RandomVector& x, const RandomVector& y, const RandomVector& lam);

namespace detail {

/// Residual core on raw values with F(x) already evaluated.
double residual_values(const Eigen::MatrixXd& fx, const Eigen::MatrixXd& x,
                       const Eigen::MatrixXd& y, const Eigen::MatrixXd& lam,
                       const PointwiseSet& cs, const Eigen::VectorXd& p);

}  // namespace detail

}  // namespace msvi
