#include "msvi/problems.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "msvi/rng.hpp"

namespace msvi {

ProblemInstance gen_random_affine(int atom_count, int n0, int n1, std::uint64_t seed) {
  if (atom_count < 1 || n0 < 1 || n1 < 1) {
    throw ValidationError("gen_random_affine: sizes must be positive");
  }
  const int m = atom_count;
  const int n = n0 + n1;
  Rng rng(seed);

  Eigen::VectorXd q(m);
  const double floor = 1.0 / (10.0 * m);
  for (int i = 0; i < m; ++i) q[i] = std::max(rng.uniform01(), floor);
  q /= q.sum();
  auto space = SampleSpace::create(std::move(q));

  std::vector<Eigen::MatrixXd> matrices;
  std::vector<Eigen::VectorXd> offsets;
  matrices.reserve(m);
  offsets.reserve(m);
  for (int i = 0; i < m; ++i) {
    Eigen::MatrixXd A(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) A(r, c) = rng.uniform(-1.0, 1.0);
    }
    matrices.push_back(A.transpose() * A);
    Eigen::VectorXd b(n);
    for (int r = 0; r < n; ++r) b[r] = rng.uniform(-1.0, 1.0);
    offsets.push_back(std::move(b));
  }

  Filtration filtration(space, {Partition::trivial(m), Partition::finest(m)}, {n0, n1});
  PointwiseSet sets = PointwiseSet::constant(
      space, {ConvexSet::box(Eigen::VectorXd::Constant(n0, -1.0),
                             Eigen::VectorXd::Constant(n0, 1.0)),
              ConvexSet::box(Eigen::VectorXd::Constant(n1, -1.0),
                             Eigen::VectorXd::Constant(n1, 1.0))});
  auto op = std::make_shared<const AffineOperator>(space, std::move(matrices),
                                                   std::move(offsets));
  return ProblemInstance{space, std::move(filtration), std::move(sets), std::move(op),
                         std::nullopt, seed};
}

ProblemInstance gen_random_walk_socp(int stages, int steps_per_stage) {
  if (stages < 1 || steps_per_stage < 1) {
    throw ValidationError("gen_random_walk_socp: sizes must be positive");
  }
  const int total_steps = stages * steps_per_stage;
  if (total_steps > 22) {
    throw ValidationError("gen_random_walk_socp: stages*steps_per_stage capped at 22, got " +
                          std::to_string(total_steps));
  }
  const int N = stages;
  const int ell = steps_per_stage;
  const int m = 1 << total_steps;
  const double delta = 1.0 / N;
  const double scale = std::sqrt(static_cast<double>(total_steps));

  auto space = SampleSpace::uniform(m);

  // Normalized per-stage increments of the sign walk; integer block sums are
  // kept alongside for exact-equality grouping of the stage partitions.
  Eigen::MatrixXd increments(m, N);
  Eigen::MatrixXd block_sums(m, N);
  for (int a = 0; a < m; ++a) {
    for (int i = 0; i < N; ++i) {
      int sum = 0;
      for (int j = i * ell; j < (i + 1) * ell; ++j) sum += ((a >> j) & 1) ? 1 : -1;
      block_sums(a, i) = sum;
      increments(a, i) = sum / scale;
    }
  }

  // Discounted loadings: z_i = (1 + delta)^(N-1-i) * (-delta + increment_i).
  Eigen::MatrixXd z(m, N);
  for (int i = 0; i < N; ++i) {
    const double discount = std::pow(1.0 + delta, N - 1 - i);
    z.col(i) = discount * (increments.col(i).array() - delta).matrix();
  }
  const Eigen::VectorXd zeta = z.rowwise().sum();

  std::vector<Eigen::MatrixXd> matrices;
  std::vector<Eigen::VectorXd> offsets;
  matrices.reserve(m);
  offsets.reserve(m);
  for (int a = 0; a < m; ++a) {
    const Eigen::VectorXd za = z.row(a).transpose();
    matrices.push_back(za * za.transpose());
    offsets.push_back(-zeta[a] * za);
  }

  std::vector<Eigen::MatrixXd> signals;
  signals.reserve(N - 1);
  for (int i = 0; i < N - 1; ++i) signals.push_back(block_sums.col(i));
  Filtration filtration =
      Filtration::from_signals(space, signals, std::vector<int>(N, 1));

  PointwiseSet sets = PointwiseSet::constant(
      space, std::vector<ConvexSet>(
                 N, ConvexSet::box(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1))));

  auto op = std::make_shared<const AffineOperator>(space, std::move(matrices),
                                                   std::move(offsets));
  RandomVector ones(space, Eigen::MatrixXd::Ones(m, N), std::vector<int>(N, 1));
  return ProblemInstance{space,    std::move(filtration), std::move(sets),
                         std::move(op), std::move(ones),  0};
}

}  // namespace msvi
