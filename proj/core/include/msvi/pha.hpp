#pragma once

#include <functional>
#include <span>

#include "msvi/convex_sets.hpp"
#include "msvi/filtration.hpp"
#include "msvi/operators.hpp"
#include "msvi/triplet.hpp"

namespace msvi {

/// Parameters of the implicit progressive hedging solver. Inner solves must
/// be tighter than the outer tolerance (inner_tol < eps) or the pointwise
/// error would dominate the stopping test.
struct PhaParams {
  double beta = 1.0;
  double eps = 1e-5;
  double inner_tol = 1e-6;
  int max_iter = 100000;
  int max_inner_iter = 10000;

  static PhaParams for_lipschitz(double lipschitz, double eps, double beta_scale = 1.1);
};

struct PointwiseViResult {
  Eigen::VectorXd point;
  int iterations = 0;
  bool converged = false;
};

/// Solves the strongly monotone pointwise inclusion at one atom: find u^
/// in the product set with
///
///   -(M u^ + b) - v - beta (u^ - u)  normal to the set at u^.
///
/// Projected fixed-point iteration with constant step tau = 1/(beta + L),
/// L the largest eigenvalue of sym(M). At least one projected step is
/// always taken and the post-step point is returned, so repeated calls keep
/// making progress even when the warm start already meets the tolerance.
PointwiseViResult solve_pointwise_vi(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                                     std::span<const ConvexSet> sets,
                                     const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                     double beta, double inner_tol,
                                     int max_inner_iter = 10000);

/// Start pair for progressive hedging: u0 in C intersect N, v0 in the
/// complement subspace.
struct PhaStart {
  RandomVector u0;
  RandomVector v0;
};

/// u0 = alternating projections of 0 onto C and N (exact after one round for
/// the usual case 0 in C), v0 = 0.
PhaStart pha_default_start(const PointwiseSet& cs, const Filtration& f);

struct PhaStep {
  int iteration;
  double err;
  const RandomVector& u_hat;       // pointwise solve output
  const RandomVector& u_next;      // its nonanticipative projection
  const RandomVector& multiplier;  // v after the update
  long long inner_iterations;      // fixed-point steps spent this sweep
};
using PhaObserver = std::function<void(const PhaStep&)>;

/// Progressive hedging: per-atom implicit solves, projection onto the
/// nonanticipativity subspace, multiplier update
///
///   u^{k}  : pointwise solves at every atom
///   u^{k+1} = Pi_N(u^)
///   v^{k+1} = v^k + beta Pi_M(u^)
///
/// Stops when the residual of (x = u^, y = u^{k+1}, lam = -v^{k+1}) drops
/// below eps. The multiplier stays in the complement subspace by induction.
/// Reported wall time covers all inner iterations.
SolverReport solve_pha(const OperatorHandle& F, const PointwiseSet& cs, const Filtration& f,
                       const PhaParams& params, const PhaStart& start,
                       const PhaObserver& observer = {});

}  // namespace msvi
