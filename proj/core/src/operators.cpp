#include "msvi/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <utility>

namespace msvi {

AffineOperator::AffineOperator(SampleSpacePtr space, std::vector<Eigen::MatrixXd> matrices,
                               std::vector<Eigen::VectorXd> offsets)
    : space_(std::move(space)), matrices_(std::move(matrices)), offsets_(std::move(offsets)) {
  if (!space_) throw ValidationError("AffineOperator: null space");
  const int m = space_->atom_count();
  if (static_cast<int>(matrices_.size()) != m || static_cast<int>(offsets_.size()) != m) {
    throw ShapeError("AffineOperator: needs one matrix and one offset per atom");
  }
  dim_ = static_cast<int>(matrices_.front().rows());
  for (int i = 0; i < m; ++i) {
    const auto& M = matrices_[i];
    if (M.rows() != dim_ || M.cols() != dim_) {
      throw ShapeError("AffineOperator: matrix at atom " + std::to_string(i) +
                       " is not " + std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    if (offsets_[i].size() != dim_) {
      throw ShapeError("AffineOperator: offset at atom " + std::to_string(i) +
                       " has wrong dimension");
    }
    // Monotonicity check on the symmetric part.
    Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tolerance) {
      throw ValidationError("AffineOperator: matrix at atom " + std::to_string(i) +
                            " is not positive semidefinite (min eigenvalue " +
                            std::to_string(es.eigenvalues().minCoeff()) + ")");
    }
  }
}

Eigen::MatrixXd AffineOperator::apply_values(const Eigen::MatrixXd& values) const {
  if (values.rows() != space_->atom_count() || values.cols() != dim_) {
    throw ShapeError("AffineOperator::apply_values: shape mismatch");
  }
  Eigen::MatrixXd out(values.rows(), values.cols());
  for (int i = 0; i < values.rows(); ++i) {
    out.row(i) = (matrices_[i] * values.row(i).transpose() + offsets_[i]).transpose();
  }
  return out;
}

double power_iteration_max_eigenvalue(const Eigen::MatrixXd& sym, double rel_tol,
                                      int max_steps) {
  const Eigen::Index n = sym.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  double lambda = 0.0;
  for (int step = 0; step < max_steps; ++step) {
    Eigen::VectorXd w = sym * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;  // start vector annihilated; spectrum seen is 0
    const double next = v.dot(w);
    v = w / norm;
    if (step > 0 && std::abs(next - lambda) <= rel_tol * std::max(1.0, std::abs(next))) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

double lipschitz_estimate(const AffineOperator& op) {
  double worst = 0.0;
  for (const auto& M : op.matrices()) {
    Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
    worst = std::max(worst, power_iteration_max_eigenvalue(sym));
  }
  return worst;
}

OperatorHandle::OperatorHandle(SampleSpacePtr space, int dim, AtomMap atom_map,
                               double lipschitz, std::vector<double> atom_lipschitz)
    : space_(std::move(space)),
      dim_(dim),
      atom_map_(std::move(atom_map)),
      lipschitz_(lipschitz),
      atom_lipschitz_(std::move(atom_lipschitz)) {
  if (!space_) throw ValidationError("OperatorHandle: null space");
  if (dim_ <= 0) throw ValidationError("OperatorHandle: dimension must be positive");
  if (!atom_map_) throw ValidationError("OperatorHandle: missing evaluation map");
  if (!(lipschitz_ >= 0)) throw ValidationError("OperatorHandle: Lipschitz constant must be nonnegative");
  if (!atom_lipschitz_.empty() &&
      static_cast<int>(atom_lipschitz_.size()) != space_->atom_count()) {
    throw ShapeError("OperatorHandle: atom Lipschitz list length mismatch");
  }
}

OperatorHandle OperatorHandle::affine(std::shared_ptr<const AffineOperator> op) {
  if (!op) throw ValidationError("OperatorHandle::affine: null operator");
  std::vector<double> per_atom;
  per_atom.reserve(op->matrices().size());
  for (const auto& M : op->matrices()) {
    Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
    per_atom.push_back(power_iteration_max_eigenvalue(sym));
  }
  const double global = *std::max_element(per_atom.begin(), per_atom.end());
  OperatorHandle h(
      op->space(), op->dim(),
      [op](int atom, const Eigen::VectorXd& v) { return op->apply_atom(atom, v); }, global,
      std::move(per_atom));
  h.batch_map_ = [op](const Eigen::MatrixXd& values) { return op->apply_values(values); };
  return h;
}

Eigen::MatrixXd OperatorHandle::evaluate_values(const Eigen::MatrixXd& values) const {
  if (values.rows() != space_->atom_count() || values.cols() != dim_) {
    throw ShapeError("OperatorHandle::evaluate_values: shape mismatch");
  }
  if (batch_map_) return batch_map_(values);
  Eigen::MatrixXd out(values.rows(), values.cols());
  for (int i = 0; i < values.rows(); ++i) {
    Eigen::VectorXd fi = atom_map_(i, values.row(i).transpose());
    if (fi.size() != dim_) {
      throw ShapeError("OperatorHandle: atom map changed the dimension at atom " +
                       std::to_string(i));
    }
    out.row(i) = fi.transpose();
  }
  return out;
}

RandomVector evaluate(const OperatorHandle& F, const RandomVector& x) {
  if (!same_space(F.space(), x.space())) {
    throw ShapeError("evaluate: operator and vector live on different spaces");
  }
  if (x.dim() != F.dim()) throw ShapeError("evaluate: dimension mismatch");
  return x.with_values(F.evaluate_values(x.values()));
}

namespace detail {

double residual_values(const Eigen::MatrixXd& fx, const Eigen::MatrixXd& x,
                       const Eigen::MatrixXd& y, const Eigen::MatrixXd& lam,
                       const PointwiseSet& cs, const Eigen::VectorXd& p) {
  const Eigen::MatrixXd trial = x - fx + lam;
  double natural = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    const Eigen::VectorXd proj = cs.project_atom(i, trial.row(i).transpose());
    natural = std::max(natural, (x.row(i).transpose() - proj).norm());
  }
  const double gap = weighted_squared_norm(p, x - y);
  return natural + gap;
}

}  // namespace detail

double msvi_residual(const OperatorHandle& F, const PointwiseSet& cs, const Filtration& f,
                     const RandomVector& x, const RandomVector& y, const RandomVector& lam) {
  if (!same_space(x.space(), F.space()) || !same_space(x.space(), cs.space()) ||
      !same_space(x.space(), f.space())) {
    throw ShapeError("msvi_residual: mismatched sample spaces");
  }
  if (x.dim() != F.dim() || x.dim() != cs.dim() || x.dim() != f.dim() ||
      y.dim() != x.dim() || lam.dim() != x.dim()) {
    throw ShapeError("msvi_residual: dimension mismatch");
  }
  if (x.blocks() != f.stage_dims()) {
    throw ShapeError("msvi_residual: vector blocks do not match stage dimensions");
  }
  const Eigen::MatrixXd fx = F.evaluate_values(x.values());
  return detail::residual_values(fx, x.values(), y.values(), lam.values(), cs,
                                 x.space()->probabilities());
}

}  // namespace msvi
