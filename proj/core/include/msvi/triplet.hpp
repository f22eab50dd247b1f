#pragma once

#include <vector>

#include "msvi/errors.hpp"
#include "msvi/sample_space.hpp"

namespace msvi {

/// Solver state (x, y, lam): the constrained iterate, its nonanticipative
/// copy, and the multiplier coupling them. All three share one space,
/// dimension and block split.
struct Triplet {
  RandomVector x;
  RandomVector y;
  RandomVector lam;

  Triplet(RandomVector x_, RandomVector y_, RandomVector lam_);
};

Triplet operator+(const Triplet& a, const Triplet& b);
Triplet operator-(const Triplet& a, const Triplet& b);
Triplet operator*(double s, const Triplet& a);

/// Weights of the block-diagonal metric used by the correction step:
/// G(x, y, lam) = (beta*r*x, beta*y, lam/beta). Convergence theory wants
/// r > L_F/beta + 1; that bound involves the operator, so it is enforced at
/// solve entry, not here.
struct GMetric {
  double beta;
  double r;

  GMetric(double beta_, double r_);
};

/// sqrt(beta*r*|x|^2 + beta*|y|^2 + |lam|^2/beta), norms in the weighted L2.
double g_norm(const Triplet& theta, const GMetric& g);

/// <theta, G vartheta> = beta*r<x,u> + beta<y,v> + <lam,w>/beta.
double g_inner(const Triplet& theta, const Triplet& vartheta, const GMetric& g);

/// Per-iteration record: residual, G-norm of the correction direction, the
/// step-gain functional, and elapsed wall time since the solve started.
struct IterRecord {
  double err;
  double d_gnorm;
  double phi;
  double elapsed_ms;
};

enum class SolveStatus {
  Converged,
  IterationLimit,   // outer loop cap reached
  InnerStall,       // a pointwise solve hit its iteration cap
};

/// Outcome of a solver run. Non-convergence is a report state, not an
/// exception: benchmark sweeps need to record failed runs.
struct SolverReport {
  SolveStatus status = SolveStatus::IterationLimit;
  int iterations = 0;  // equals trace.size()
  double final_err = 0.0;
  std::vector<IterRecord> trace;
  Triplet certificate;
  long long inner_iterations = 0;  // total pointwise fixed-point steps (implicit solver only)

  bool converged() const { return status == SolveStatus::Converged; }
};

}  // namespace msvi
