#include "msvi/pc_admm.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace msvi {

namespace {

using Eigen::MatrixXd;
using detail::weighted_inner;
using detail::weighted_squared_norm;

void validate_problem_shapes(const OperatorHandle& F, const PointwiseSet& cs,
                             const Filtration& f) {
  if (!same_space(F.space(), cs.space()) || !same_space(F.space(), f.space())) {
    throw ShapeError("solve: operator, sets and filtration live on different spaces");
  }
  if (F.dim() != cs.dim() || F.dim() != f.dim()) {
    throw ShapeError("solve: operator, sets and filtration dimensions differ");
  }
}

void validate_params(const PcAdmmParams& p, double lipschitz) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) {
    throw ValidationError("PcAdmmParams: alpha must lie in (0,1)");
  }
  if (!(p.beta > 0.0)) throw ValidationError("PcAdmmParams: beta must be positive");
  if (!(p.r > lipschitz / p.beta + 1.0)) {
    throw ValidationError("PcAdmmParams: needs r > L/beta + 1, got r = " +
                          std::to_string(p.r) + " with L/beta + 1 = " +
                          std::to_string(lipschitz / p.beta + 1.0));
  }
  if (!(p.eps > 0.0)) throw ValidationError("PcAdmmParams: eps must be positive");
  if (p.max_iter < 0) throw ValidationError("PcAdmmParams: max_iter must be nonnegative");
}

double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

PcAdmmParams PcAdmmParams::for_lipschitz(double lipschitz, double eps, double beta_scale) {
  if (!(lipschitz >= 0)) throw ValidationError("for_lipschitz: negative Lipschitz constant");
  if (!(beta_scale > 0)) throw ValidationError("for_lipschitz: beta_scale must be positive");
  PcAdmmParams p;
  p.beta = lipschitz > 0 ? beta_scale * lipschitz : 1.0;
  p.r = 1.1 + lipschitz / p.beta;
  p.eps = eps;
  return p;
}

Triplet predict(const Triplet& theta, const OperatorHandle& F, const PointwiseSet& cs,
                const Filtration& f, const GMetric& g) {
  validate_problem_shapes(F, cs, f);
  const MatrixXd fx = F.evaluate_values(theta.x.values());
  const MatrixXd& x = theta.x.values();
  const MatrixXd& y = theta.y.values();
  const MatrixXd& lam = theta.lam.values();

  MatrixXd xt = cs.project_values(x - (fx - lam + g.beta * (x - y)) / (g.beta * g.r));
  MatrixXd yt = f.project_n_values(y - (lam - g.beta * (xt - y)) / g.beta);
  MatrixXd lt = lam - g.beta * (xt - yt);
  return Triplet(theta.x.with_values(std::move(xt)), theta.y.with_values(std::move(yt)),
                 theta.lam.with_values(std::move(lt)));
}

Triplet correction_direction(const Triplet& theta, const Triplet& theta_tilde,
                             const OperatorHandle& F, const GMetric& g) {
  const MatrixXd fx = F.evaluate_values(theta.x.values());
  const MatrixXd fxt = F.evaluate_values(theta_tilde.x.values());
  const MatrixXd zeta_x =
      fx - fxt + g.beta * (theta.x.values() - theta_tilde.x.values());
  MatrixXd dx = theta.x.values() - theta_tilde.x.values() - zeta_x / (g.beta * g.r);
  return Triplet(theta.x.with_values(std::move(dx)), theta.y - theta_tilde.y,
                 theta.lam - theta_tilde.lam);
}

double phi(const Triplet& theta, const Triplet& theta_tilde, const Triplet& d,
           const GMetric& g) {
  return l2_inner(theta.lam - theta_tilde.lam, theta_tilde.y - theta.y) +
         g_inner(theta - theta_tilde, d, g);
}

Triplet pc_admm_default_start(const PointwiseSet& cs, const Filtration& f) {
  auto space = cs.space();
  RandomVector zero = RandomVector::zero(space, cs.dim(), f.stage_dims());
  RandomVector x0 = project_random_vector(cs, zero);
  RandomVector y0 = project_nonanticipativity(x0, f);
  return Triplet(x0, y0, zero);
}

SolverReport solve_pc_admm(const OperatorHandle& F, const PointwiseSet& cs,
                           const Filtration& f, const PcAdmmParams& params,
                           const Triplet& start, const PcAdmmObserver& observer) {
  validate_problem_shapes(F, cs, f);
  validate_params(params, F.lipschitz());
  if (!same_space(start.x.space(), F.space()) || start.x.dim() != F.dim()) {
    throw ShapeError("solve_pc_admm: start does not match the problem");
  }
  if (start.x.blocks() != f.stage_dims()) {
    throw ShapeError("solve_pc_admm: start blocks do not match stage dimensions");
  }

  const GMetric g(params.beta, params.r);
  const double beta = params.beta;
  const double r = params.r;
  const Eigen::VectorXd& p = F.space()->probabilities();
  const std::vector<int>& blocks = f.stage_dims();
  const auto space = F.space();

  MatrixXd x = start.x.values();
  MatrixXd y = start.y.values();
  MatrixXd lam = start.lam.values();

  const auto t0 = std::chrono::steady_clock::now();
  SolverReport report{SolveStatus::IterationLimit,
                      0,
                      0.0,
                      {},
                      Triplet(start.x, start.y, start.lam),
                      0};

  auto wrap = [&](const MatrixXd& v) { return RandomVector(space, v, blocks); };

  int k = 0;
  for (;; ++k) {
    MatrixXd fx = F.evaluate_values(x);
    const double err = detail::residual_values(fx, x, y, lam, cs, p);
    if (err < params.eps) {
      report.status = SolveStatus::Converged;
      report.final_err = err;
      break;
    }
    if (k >= params.max_iter) {
      report.status = SolveStatus::IterationLimit;
      report.final_err = err;
      break;
    }

    // Prediction.
    MatrixXd xt = cs.project_values(x - (fx - lam + beta * (x - y)) / (beta * r));
    MatrixXd yt = f.project_n_values(y - (lam - beta * (xt - y)) / beta);
    MatrixXd lt = lam - beta * (xt - yt);

    // Correction direction.
    MatrixXd zeta_x = fx - F.evaluate_values(xt) + beta * (x - xt);
    MatrixXd dx = x - xt - zeta_x / (beta * r);
    MatrixXd dy = y - yt;
    MatrixXd dl = lam - lt;

    const double d_gnorm2 = beta * r * weighted_squared_norm(p, dx) +
                            beta * weighted_squared_norm(p, dy) +
                            weighted_squared_norm(p, dl) / beta;
    const double phi_k = weighted_inner(p, lam - lt, yt - y) +
                         beta * r * weighted_inner(p, x - xt, dx) +
                         beta * weighted_inner(p, y - yt, dy) +
                         weighted_inner(p, lam - lt, dl) / beta;

    if (params.assert_theory) {
      if (phi_k < 0.5 * d_gnorm2 - 1e-10) {
        throw TheoryViolation("step-gain bound violated at iteration " + std::to_string(k) +
                              ": phi = " + std::to_string(phi_k) + " < ||d||_G^2 / 2 = " +
                              std::to_string(0.5 * d_gnorm2));
      }
      if (cs.max_atom_distance(xt) > 1e-12) {
        throw TheoryViolation("prediction infeasible at iteration " + std::to_string(k) +
                              ": x~ left the constraint set");
      }
      const MatrixXd yt_proj = f.project_n_values(yt);
      if (std::sqrt(weighted_squared_norm(p, yt - yt_proj)) > 1e-12) {
        throw TheoryViolation("prediction infeasible at iteration " + std::to_string(k) +
                              ": y~ left the nonanticipativity subspace");
      }
    }

    if (observer) {
      const Triplet theta(wrap(x), wrap(y), wrap(lam));
      const Triplet theta_tilde(wrap(xt), wrap(yt), wrap(lt));
      const Triplet direction(wrap(dx), wrap(dy), wrap(dl));
      observer(PcAdmmStep{k, err, std::sqrt(d_gnorm2), phi_k, theta, theta_tilde, direction});
    }

    report.trace.push_back(IterRecord{err, std::sqrt(d_gnorm2), phi_k, ms_since(t0)});

    // Correction step.
    x -= params.alpha * dx;
    y -= params.alpha * dy;
    lam -= params.alpha * dl;
  }

  report.iterations = k;
  report.certificate = Triplet(wrap(x), wrap(y), wrap(lam));

  if (params.assert_theory && report.status == SolveStatus::Converged) {
    // Terminal certificate checks: the x/y gap is controlled by the residual
    // and the multiplier stays in the complement subspace by induction from
    // a feasible start.
    const double gap = std::sqrt(weighted_squared_norm(p, x - y));
    if (gap > std::sqrt(params.eps)) {
      throw TheoryViolation("certificate check failed: ||x - y|| = " + std::to_string(gap) +
                            " exceeds sqrt(eps)");
    }
    const double lam_n = std::sqrt(weighted_squared_norm(p, f.project_n_values(lam)));
    if (lam_n > 10 * params.eps) {
      throw TheoryViolation(
          "certificate check failed: multiplier component in the nonanticipativity "
          "subspace is " +
          std::to_string(lam_n) + ", exceeds 10*eps");
    }
  }
  return report;
}

}  // namespace msvi
