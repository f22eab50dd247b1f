#include <doctest.h>

#include "msvi/pc_admm.hpp"
#include "msvi/pha.hpp"
#include "msvi/problems.hpp"
#include "test_support.hpp"

using namespace msvi;

namespace {

/// Single-atom identity-operator problem on the box [-1,1].
struct TinyProblem {
  SampleSpacePtr space = SampleSpace::uniform(1);
  Filtration f{space, {Partition::trivial(1)}, {1}};
  PointwiseSet cs = PointwiseSet::constant(
      space, {ConvexSet::box(Eigen::VectorXd::Constant(1, -1.0),
                             Eigen::VectorXd::Constant(1, 1.0))});
  std::shared_ptr<const AffineOperator> op = std::make_shared<const AffineOperator>(
      space, std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Identity(1, 1)},
      std::vector<Eigen::VectorXd>{Eigen::VectorXd::Zero(1)});
  OperatorHandle F = OperatorHandle::affine(op);

  RandomVector rv(double v) const {
    return RandomVector(space, Eigen::MatrixXd::Constant(1, 1, v));
  }
  Triplet triplet(double x, double y, double l) const { return Triplet(rv(x), rv(y), rv(l)); }
};

}  // namespace

TEST_CASE("g-norm") {
  auto space = SampleSpace::uniform(1);
  auto rv = [&](double v) { return RandomVector(space, Eigen::MatrixXd::Constant(1, 1, v)); };

  SUBCASE("zero") {
    CHECK(g_norm(Triplet(rv(0), rv(0), rv(0)), GMetric(2.0, 3.0)) == 0.0);
  }
  SUBCASE("weighted combination: sqrt(6 + 2 + 2)") {
    CHECK(g_norm(Triplet(rv(1), rv(1), rv(2)), GMetric(2.0, 3.0)) ==
          doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
  }
  SUBCASE("unit weights reduce to the stacked norm") {
    Rng rng(1);
    auto sp = test::random_space(rng, 4);
    RandomVector x = test::random_vector(rng, sp, 2);
    RandomVector y = test::random_vector(rng, sp, 2);
    RandomVector l = test::random_vector(rng, sp, 2);
    const double stacked = std::sqrt(l2_norm(x) * l2_norm(x) + l2_norm(y) * l2_norm(y) +
                                     l2_norm(l) * l2_norm(l));
    CHECK(g_norm(Triplet(x, y, l), GMetric(1.0, 1.0)) ==
          doctest::Approx(stacked).epsilon(1e-13));
  }
  SUBCASE("invalid weights") {
    CHECK_THROWS_AS(GMetric(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(GMetric(1.0, -2.0), ValidationError);
  }
}

TEST_CASE("prediction examples") {
  TinyProblem p;
  GMetric g(1.0, 2.0);

  SUBCASE("stationary feasible point is a fixed point") {
    Triplet tilde = predict(p.triplet(0, 0, 0), p.F, p.cs, p.f, g);
    CHECK(l2_norm(tilde.x) == 0.0);
    CHECK(l2_norm(tilde.y) == 0.0);
    CHECK(l2_norm(tilde.lam) == 0.0);
  }

  SUBCASE("hand-evaluated step from (1, 0, 0)") {
    // x~ = proj(1 - (F(1) + 1)/2) = proj(0) = 0; y~ and lam~ follow as 0.
    Triplet tilde = predict(p.triplet(1, 0, 0), p.F, p.cs, p.f, g);
    CHECK(tilde.x.values()(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(tilde.y.values()(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(tilde.lam.values()(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("prediction output is always feasible") {
    Rng rng(9);
    ProblemInstance inst = gen_random_affine(6, 2, 2, 17);
    OperatorHandle F = inst.handle();
    GMetric gm(1.1 * F.lipschitz(), 2.0);
    for (int rep = 0; rep < 20; ++rep) {
      Triplet theta(test::random_vector(rng, inst.space, 4, {2, 2}),
                    test::random_vector(rng, inst.space, 4, {2, 2}),
                    test::random_vector(rng, inst.space, 4, {2, 2}));
      Triplet tilde = predict(theta, F, inst.sets, inst.filtration, gm);
      CHECK(inst.sets.max_atom_distance(tilde.x.values()) <= 1e-12);
      RandomVector adapted = project_nonanticipativity(tilde.y, inst.filtration);
      CHECK(l2_norm(adapted - tilde.y) <= 1e-12);
      // Multiplier identity is exact algebra.
      RandomVector reconstructed = theta.lam - gm.beta * (tilde.x - tilde.y);
      CHECK((reconstructed.values() - tilde.lam.values()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("correction direction examples") {
  SUBCASE("no displacement, no direction") {
    TinyProblem p;
    GMetric g(1.0, 2.0);
    Triplet theta = p.triplet(0.4, 0.1, -0.3);
    Triplet d = correction_direction(theta, theta, p.F, g);
    CHECK(g_norm(d, g) == 0.0);
  }

  SUBCASE("zero operator: the x-block shrinks by 1/r") {
    // With F = 0, zeta_x = beta (x - x~), so d_x = (x - x~)(1 - 1/r) = 0.5.
    auto space = SampleSpace::uniform(1);
    auto op = std::make_shared<const AffineOperator>(
        space, std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Zero(1, 1)},
        std::vector<Eigen::VectorXd>{Eigen::VectorXd::Zero(1)});
    OperatorHandle F = OperatorHandle::affine(op);
    auto rv = [&](double v) { return RandomVector(space, Eigen::MatrixXd::Constant(1, 1, v)); };
    GMetric g(1.0, 2.0);
    Triplet theta(rv(1.0), rv(0.5), rv(2.0));
    Triplet tilde(rv(0.0), rv(0.5), rv(2.0));
    Triplet d = correction_direction(theta, tilde, F, g);
    CHECK(d.x.values()(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.y.values()(0, 0) == 0.0);
    CHECK(d.lam.values()(0, 0) == 0.0);
  }
}

TEST_CASE("step gain examples") {
  TinyProblem p;
  GMetric g(1.0, 2.0);

  SUBCASE("vanishes with no displacement") {
    Triplet theta = p.triplet(0.2, -0.1, 0.4);
    Triplet d = correction_direction(theta, theta, p.F, g);
    CHECK(phi(theta, theta, d, g) == 0.0);
  }

  SUBCASE("reduces to the metric inner product when y and lam are fixed") {
    Rng rng(12);
    auto space = test::random_space(rng, 3);
    RandomVector y = test::random_vector(rng, space, 2);
    RandomVector lam = test::random_vector(rng, space, 2);
    Triplet theta(test::random_vector(rng, space, 2), y, lam);
    Triplet tilde(test::random_vector(rng, space, 2), y, lam);
    Triplet d(test::random_vector(rng, space, 2), test::random_vector(rng, space, 2),
              test::random_vector(rng, space, 2));
    CHECK(phi(theta, tilde, d, g) ==
          doctest::Approx(g_inner(theta - tilde, d, g)).epsilon(1e-12));
  }
}

TEST_CASE("default start is feasible") {
  ProblemInstance inst = gen_random_affine(8, 3, 2, 5);
  Triplet start = pc_admm_default_start(inst.sets, inst.filtration);
  CHECK(inst.sets.max_atom_distance(start.x.values()) <= 1e-15);
  CHECK(l2_norm(project_complement(start.y, inst.filtration)) <= 1e-15);
  CHECK(l2_norm(start.lam) == 0.0);
}

TEST_CASE("solver terminates immediately on a stationary start") {
  TinyProblem p;
  PcAdmmParams params = PcAdmmParams::for_lipschitz(p.F.lipschitz(), 1e-8);
  SolverReport report =
      solve_pc_admm(p.F, p.cs, p.f, params, p.triplet(0, 0, 0));
  CHECK(report.converged());
  CHECK(report.iterations == 0);
  CHECK(report.trace.empty());
  CHECK(report.final_err < params.eps);
}

TEST_CASE("parameter validation") {
  TinyProblem p;
  Triplet start = p.triplet(0, 0, 0);

  PcAdmmParams bad_alpha = PcAdmmParams::for_lipschitz(1.0, 1e-6);
  bad_alpha.alpha = 1.0;
  CHECK_THROWS_AS(solve_pc_admm(p.F, p.cs, p.f, bad_alpha, start), ValidationError);

  // r below the convergence threshold r > L/beta + 1 is rejected.
  PcAdmmParams bad_r = PcAdmmParams::for_lipschitz(1.0, 1e-6);
  bad_r.r = 1.0 / bad_r.beta + 1.0;
  CHECK_THROWS_AS(solve_pc_admm(p.F, p.cs, p.f, bad_r, start), ValidationError);
}

TEST_CASE("iteration cap yields a report, not a crash") {
  ProblemInstance inst = gen_random_affine(6, 2, 2, 3);
  OperatorHandle F = inst.handle();
  PcAdmmParams params = PcAdmmParams::for_lipschitz(F.lipschitz(), 1e-12);
  params.max_iter = 5;
  SolverReport report = solve_pc_admm(F, inst.sets, inst.filtration, params,
                                      pc_admm_default_start(inst.sets, inst.filtration));
  CHECK_FALSE(report.converged());
  CHECK(report.status == SolveStatus::IterationLimit);
  CHECK(report.iterations == 5);
  CHECK(report.trace.size() == 5);
  CHECK(report.final_err > 0.0);
}

TEST_CASE("random affine instance: convergence, certification, theory run") {
  ProblemInstance inst = gen_random_affine(10, 5, 5, 1);
  OperatorHandle F = inst.handle();
  const double eps = 1e-6;
  PcAdmmParams params = PcAdmmParams::for_lipschitz(F.lipschitz(), eps);
  params.assert_theory = true;  // would throw on any per-iteration violation

  std::vector<Triplet> thetas;
  std::vector<Triplet> dirs;
  std::vector<double> d_gnorms;
  SolverReport report = solve_pc_admm(
      F, inst.sets, inst.filtration, params,
      pc_admm_default_start(inst.sets, inst.filtration), [&](const PcAdmmStep& step) {
        thetas.push_back(step.theta);
        dirs.push_back(step.direction);
        d_gnorms.push_back(step.d_gnorm);
      });

  REQUIRE(report.converged());
  CHECK(report.final_err < eps);
  CHECK(static_cast<int>(report.trace.size()) == report.iterations);

  // Terminal certificate: x and y nearly equal, multiplier in the complement.
  const Triplet& cert = report.certificate;
  CHECK(l2_norm(cert.x - cert.y) <= std::sqrt(eps));
  CHECK(l2_norm(project_nonanticipativity(cert.lam, inst.filtration)) <= 10 * eps);

  // Residual at the certificate matches the reported value.
  CHECK(msvi_residual(F, inst.sets, inst.filtration, cert.x, cert.y, cert.lam) ==
        doctest::Approx(report.final_err).epsilon(1e-12));

  // The prediction at the certificate barely moves it.
  GMetric g(params.beta, params.r);
  Triplet tilde = predict(cert, F, inst.sets, inst.filtration, g);
  CHECK(g_norm(correction_direction(cert, tilde, F, g), g) < 1e-4);

  // Total squared step mass is bounded by the start-to-solution distance.
  const double alpha = params.alpha;
  double sum_d2 = 0.0;
  for (double dn : d_gnorms) sum_d2 += dn * dn;
  const Triplet start = pc_admm_default_start(inst.sets, inst.filtration);
  const double start_dist = g_norm(start - cert, g);
  CHECK(sum_d2 <= start_dist * start_dist / (alpha * (1 - alpha)) + 1e-6);
}

TEST_CASE("contraction toward a high-precision reference") {
  ProblemInstance inst = gen_random_affine(8, 3, 3, 2);
  OperatorHandle F = inst.handle();

  PcAdmmParams tight = PcAdmmParams::for_lipschitz(F.lipschitz(), 1e-11);
  tight.max_iter = 500000;
  SolverReport ref = solve_pc_admm(F, inst.sets, inst.filtration, tight,
                                   pc_admm_default_start(inst.sets, inst.filtration));
  REQUIRE(ref.converged());

  PcAdmmParams params = PcAdmmParams::for_lipschitz(F.lipschitz(), 1e-6);
  GMetric g(params.beta, params.r);
  const double alpha = params.alpha;
  const Triplet& star = ref.certificate;

  double worst = -1e300;
  SolverReport run = solve_pc_admm(
      F, inst.sets, inst.filtration, params,
      pc_admm_default_start(inst.sets, inst.filtration), [&](const PcAdmmStep& step) {
        const double pre = g_norm(step.theta - star, g);
        const Triplet next = step.theta - alpha * step.direction;
        const double post = g_norm(next - star, g);
        const double slack =
            post * post - (pre * pre - alpha * (1 - alpha) * step.d_gnorm * step.d_gnorm);
        worst = std::max(worst, slack);
      });
  REQUIRE(run.converged());
  CHECK(worst <= 1e-8);
}

TEST_CASE("explicit and implicit solvers find the same point") {
  ProblemInstance inst = gen_random_affine(10, 5, 5, 11);
  OperatorHandle F = inst.handle();
  const double eps = 1e-6;

  SolverReport admm =
      solve_pc_admm(F, inst.sets, inst.filtration, PcAdmmParams::for_lipschitz(F.lipschitz(), eps),
                    pc_admm_default_start(inst.sets, inst.filtration));
  PhaParams pha_params = PhaParams::for_lipschitz(F.lipschitz(), eps);
  SolverReport pha = solve_pha(F, inst.sets, inst.filtration, pha_params,
                               pha_default_start(inst.sets, inst.filtration));

  REQUIRE(admm.converged());
  REQUIRE(pha.converged());
  CHECK(l2_norm(admm.certificate.x - pha.certificate.x) < 1e-4);
}
