#pragma once

#include <functional>

#include "msvi/convex_sets.hpp"
#include "msvi/filtration.hpp"
#include "msvi/operators.hpp"
#include "msvi/triplet.hpp"

namespace msvi {

/// Parameters of the explicit prediction-correction solver.
///
/// The defaults derive from the operator's Lipschitz constant via
/// `for_lipschitz`: alpha = 0.61, beta = beta_scale * L, r = 1.1 + L/beta,
/// which satisfies the convergence requirement r > L/beta + 1 with margin.
struct PcAdmmParams {
  double alpha = 0.61;        // step size, in (0,1)
  double beta = 1.0;          // coupling penalty
  double r = 2.1;             // x-block metric weight
  double eps = 1e-5;          // stopping tolerance on the residual
  int max_iter = 100000;
  bool assert_theory = true;  // per-iteration inequality checks (costs an extra G-norm)

  static PcAdmmParams for_lipschitz(double lipschitz, double eps,
                                    double beta_scale = 1.1);
};

/// Snapshot handed to the observer once per iteration, before the step.
struct PcAdmmStep {
  int iteration;
  double err;
  double d_gnorm;
  double phi;
  const Triplet& theta;
  const Triplet& theta_tilde;
  const Triplet& direction;
};
using PcAdmmObserver = std::function<void(const PcAdmmStep&)>;

/// Prediction: three explicit steps from theta = (x, y, lam),
///
///   x~ = Pi_C( x - [F(x) - lam + beta (x - y)] / (beta r) )
///   y~ = Pi_N( y - [lam - beta (x~ - y)] / beta )
///   lam~ = lam - beta (x~ - y~)
///
/// x~ lands in C and y~ in N by construction.
Triplet predict(const Triplet& theta, const OperatorHandle& F, const PointwiseSet& cs,
                const Filtration& f, const GMetric& g);

/// Correction direction d = theta - theta~ - G^{-1} zeta with
/// zeta = (F(x) - F(x~) + beta (x - x~), 0, 0); only the x-block feels the
/// operator curvature term.
Triplet correction_direction(const Triplet& theta, const Triplet& theta_tilde,
                             const OperatorHandle& F, const GMetric& g);

/// Step-gain functional phi = <lam - lam~, y~ - y> + <theta - theta~, G d>.
/// With r > L_F/beta + 1 it dominates ||d||_G^2 / 2 along the trajectory,
/// which is what makes the alpha-step contractive.
double phi(const Triplet& theta, const Triplet& theta_tilde, const Triplet& d,
           const GMetric& g);

/// Feasible default start: x0 = Pi_C(0), y0 = Pi_N(x0), lam0 = 0. The zero
/// multiplier lies in the complement subspace, which keeps the terminal
/// multiplier check meaningful.
Triplet pc_admm_default_start(const PointwiseSet& cs, const Filtration& f);

/// Runs predict/correct until the residual drops below params.eps or the
/// iteration cap is hit. With assert_theory on, each iteration checks the
/// step-gain lower bound and prediction feasibility, and termination checks
/// the certificate (x close to y, multiplier in the complement subspace);
/// violations raise TheoryViolation naming the inequality.
SolverReport solve_pc_admm(const OperatorHandle& F, const PointwiseSet& cs,
                           const Filtration& f, const PcAdmmParams& params,
                           const Triplet& start, const PcAdmmObserver& observer = {});

}  // namespace msvi
