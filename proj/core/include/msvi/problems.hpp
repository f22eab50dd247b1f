#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "msvi/convex_sets.hpp"
#include "msvi/filtration.hpp"
#include "msvi/operators.hpp"
#include "msvi/sample_space.hpp"

namespace msvi {

/// A complete constrained problem: space, stage structure, pointwise
/// constraint sets and the monotone operator, plus an optional known
/// solution for recovery checks. Generators are pure functions of their
/// parameters and seed.
struct ProblemInstance {
  SampleSpacePtr space;
  Filtration filtration;
  PointwiseSet sets;
  std::shared_ptr<const AffineOperator> op;
  std::optional<RandomVector> known_solution;
  std::uint64_t seed = 0;

  OperatorHandle handle() const { return OperatorHandle::affine(op); }
};

/// Two-stage random monotone affine family.
///
/// Probabilities come from one uniform draw per atom, floored at 1/(10m)
/// before normalization so no atom is nearly null. Stage 0 observes nothing,
/// stage 1 distinguishes every atom. The constraint is the box [-1,1] on
/// both stage blocks. Each atom gets M_i = A_i^T A_i with A_i entries
/// uniform in [-1,1] (so M_i is PSD by construction) and offsets uniform in
/// [-1,1].
///
/// Draw order per seed: m probabilities, then per atom the n*n matrix
/// entries row-major followed by the n offset entries.
ProblemInstance gen_random_affine(int atom_count, int n0, int n1, std::uint64_t seed);

/// Binary-tree control family: a length stages*steps_per_stage walk of fair
/// coin flips approximates the driving noise, the sample space enumerates
/// all sign sequences (2^(stages*steps_per_stage) atoms, equal probability),
/// and stage i observes the first i normalized block increments.
///
/// Atom a encodes the sign sequence in its bits, bit 0 = first step, set bit
/// = +1. The per-atom operator is rank one, F(u) = z z^T u - zeta z, with z
/// the discounted increment loadings and zeta = sum_i z_i, so the all-ones
/// control is the exact optimum; it is attached as known_solution.
///
/// The generator is deterministic; it takes no seed. Enumeration is capped
/// at stages*steps_per_stage <= 22.
ProblemInstance gen_random_walk_socp(int stages, int steps_per_stage);

}  // namespace msvi
