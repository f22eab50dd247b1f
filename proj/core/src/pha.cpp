#include "msvi/pha.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <utility>

namespace msvi {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using detail::weighted_squared_norm;

struct InnerResult {
  int iterations = 0;
  bool converged = false;
};

/// Projected fixed-point loop shared by the public entry point and the
/// solver: z <- project(z - tau * g(z)) until the displacement falls below
/// inner_tol. Always takes at least one step and leaves the post-step point
/// in `z`; by nonexpansiveness (beta >= L) its own residual is no larger
/// than the displacement that triggered the stop.
template <typename GradFn, typename ProjFn>
InnerResult projected_fixed_point(VectorXd& z, const GradFn& grad, const ProjFn& project,
                                  double tau, double inner_tol, int max_inner_iter) {
  for (int j = 1; j <= max_inner_iter; ++j) {
    VectorXd next = project(z - tau * grad(z));
    const double moved = (z - next).norm();
    z = std::move(next);
    if (moved <= inner_tol) return {j, true};
  }
  return {max_inner_iter, false};
}

double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

PhaParams PhaParams::for_lipschitz(double lipschitz, double eps, double beta_scale) {
  if (!(lipschitz >= 0)) throw ValidationError("for_lipschitz: negative Lipschitz constant");
  if (!(beta_scale > 0)) throw ValidationError("for_lipschitz: beta_scale must be positive");
  PhaParams p;
  p.beta = lipschitz > 0 ? beta_scale * lipschitz : 1.0;
  p.eps = eps;
  p.inner_tol = eps / 10.0;
  return p;
}

PointwiseViResult solve_pointwise_vi(const MatrixXd& M, const VectorXd& b,
                                     std::span<const ConvexSet> sets, const VectorXd& u,
                                     const VectorXd& v, double beta, double inner_tol,
                                     int max_inner_iter) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n || b.size() != n || u.size() != n || v.size() != n) {
    throw ShapeError("solve_pointwise_vi: inconsistent dimensions");
  }
  if (!(beta > 0)) throw ValidationError("solve_pointwise_vi: beta must be positive");
  int set_dim = 0;
  for (const auto& s : sets) set_dim += s.dim();
  if (set_dim != n) throw ShapeError("solve_pointwise_vi: set dimensions do not sum to n");

  const MatrixXd sym = 0.5 * (M + M.transpose());
  const double L = power_iteration_max_eigenvalue(sym);
  const double tau = 1.0 / (beta + L);

  auto grad = [&](const VectorXd& z) -> VectorXd { return M * z + b + v + beta * (z - u); };
  auto project = [&](const VectorXd& z) -> VectorXd {
    VectorXd out(n);
    int off = 0;
    for (const auto& s : sets) {
      const int d = s.dim();
      out.segment(off, d) = s.project(z.segment(off, d));
      off += d;
    }
    return out;
  };

  VectorXd z = u;
  const InnerResult res =
      projected_fixed_point(z, grad, project, tau, inner_tol, max_inner_iter);
  return PointwiseViResult{std::move(z), res.iterations, res.converged};
}

PhaStart pha_default_start(const PointwiseSet& cs, const Filtration& f) {
  auto space = cs.space();
  RandomVector zero = RandomVector::zero(space, cs.dim(), f.stage_dims());
  // Alternate projections until the nonanticipative point is also pointwise
  // feasible; one round suffices whenever 0 already lies in C.
  RandomVector u = project_nonanticipativity(project_random_vector(cs, zero), f);
  for (int round = 0; round < 100; ++round) {
    if (cs.max_atom_distance(u.values()) <= 1e-12) break;
    u = project_nonanticipativity(project_random_vector(cs, u), f);
  }
  return PhaStart{u, zero};
}

SolverReport solve_pha(const OperatorHandle& F, const PointwiseSet& cs, const Filtration& f,
                       const PhaParams& params, const PhaStart& start,
                       const PhaObserver& observer) {
  if (!same_space(F.space(), cs.space()) || !same_space(F.space(), f.space())) {
    throw ShapeError("solve_pha: operator, sets and filtration live on different spaces");
  }
  if (F.dim() != cs.dim() || F.dim() != f.dim()) {
    throw ShapeError("solve_pha: operator, sets and filtration dimensions differ");
  }
  if (!(params.beta > 0)) throw ValidationError("PhaParams: beta must be positive");
  if (!(params.eps > 0)) throw ValidationError("PhaParams: eps must be positive");
  if (!(params.inner_tol > 0) || !(params.inner_tol < params.eps)) {
    throw ValidationError("PhaParams: needs 0 < inner_tol < eps");
  }
  if (params.max_iter < 0 || params.max_inner_iter <= 0) {
    throw ValidationError("PhaParams: iteration caps must be positive");
  }
  if (!same_space(start.u0.space(), F.space()) || start.u0.dim() != F.dim() ||
      start.u0.blocks() != f.stage_dims() || start.v0.dim() != F.dim()) {
    throw ShapeError("solve_pha: start does not match the problem");
  }
  const Eigen::VectorXd& p = F.space()->probabilities();
  {
    const double dist_c = cs.max_atom_distance(start.u0.values());
    const double dist_n = std::sqrt(
        weighted_squared_norm(p, start.u0.values() - f.project_n_values(start.u0.values())));
    const double v_in_n =
        std::sqrt(weighted_squared_norm(p, f.project_n_values(start.v0.values())));
    if (dist_c > 1e-10 || dist_n > 1e-10) {
      throw ValidationError("solve_pha: u0 must lie in C and in the nonanticipativity subspace");
    }
    if (v_in_n > 1e-10) {
      throw ValidationError("solve_pha: v0 must lie in the complement subspace");
    }
  }

  const int m = F.space()->atom_count();
  const double beta = params.beta;
  const auto space = F.space();
  const std::vector<int>& blocks = f.stage_dims();
  auto wrap = [&](const MatrixXd& vals) { return RandomVector(space, vals, blocks); };

  MatrixXd u = start.u0.values();
  MatrixXd v = start.v0.values();

  const auto t0 = std::chrono::steady_clock::now();
  SolverReport report{SolveStatus::IterationLimit, 0, 0.0, {},
                      Triplet(start.u0, start.u0, -1.0 * start.v0), 0};

  // A solution-quality start needs no sweep at all.
  {
    const MatrixXd fu = F.evaluate_values(u);
    const double err0 = detail::residual_values(fu, u, u, -v, cs, p);
    report.final_err = err0;
    if (err0 < params.eps) {
      report.status = SolveStatus::Converged;
      return report;
    }
  }

  MatrixXd u_hat = u;
  int k = 0;
  for (; k < params.max_iter; ++k) {
    long long sweep_inner = 0;
    bool inner_ok = true;
    for (int i = 0; i < m; ++i) {
      const double Li = F.atom_lipschitz(i);
      const double tau = 1.0 / (beta + Li);
      const VectorXd ui = u.row(i).transpose();
      const VectorXd vi = v.row(i).transpose();
      auto grad = [&](const VectorXd& z) -> VectorXd {
        return F.evaluate_atom(i, z) + vi + beta * (z - ui);
      };
      auto project = [&](const VectorXd& z) -> VectorXd { return cs.project_atom(i, z); };
      VectorXd z = ui;
      const InnerResult res = projected_fixed_point(z, grad, project, tau, params.inner_tol,
                                                    params.max_inner_iter);
      sweep_inner += res.iterations;
      if (!res.converged) inner_ok = false;
      u_hat.row(i) = z.transpose();
    }
    report.inner_iterations += sweep_inner;

    MatrixXd u_next = f.project_n_values(u_hat);
    v += beta * (u_hat - u_next);

    const MatrixXd fu_hat = F.evaluate_values(u_hat);
    const double err = detail::residual_values(fu_hat, u_hat, u_next, -v, cs, p);
    report.trace.push_back(
        IterRecord{err, std::sqrt(weighted_squared_norm(p, u_hat - u)), 0.0, ms_since(t0)});

    if (observer) {
      const RandomVector rv_hat = wrap(u_hat);
      const RandomVector rv_next = wrap(u_next);
      const RandomVector rv_v = wrap(v);
      observer(PhaStep{k, err, rv_hat, rv_next, rv_v, sweep_inner});
    }

    u = std::move(u_next);

    if (!inner_ok) {
      report.status = SolveStatus::InnerStall;
      report.final_err = err;
      ++k;
      break;
    }
    if (err < params.eps) {
      report.status = SolveStatus::Converged;
      report.final_err = err;
      ++k;
      break;
    }
    if (k + 1 >= params.max_iter) {
      report.status = SolveStatus::IterationLimit;
      report.final_err = err;
      ++k;
      break;
    }
  }

  report.iterations = k;
  report.certificate = Triplet(wrap(u_hat), wrap(u), wrap(-v));
  return report;
}

}  // namespace msvi
