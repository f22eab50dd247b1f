#include "msvi/sample_space.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace msvi {

SampleSpace::SampleSpace(Eigen::VectorXd probabilities) : p_(std::move(probabilities)) {
  if (p_.size() == 0) throw ValidationError("SampleSpace: needs at least one atom");
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    if (!(p_[i] >= min_probability)) {
      throw ValidationError("SampleSpace: probability of atom " + std::to_string(i) +
                            " is below " + std::to_string(min_probability));
    }
  }
  const double sum = p_.sum();
  if (std::abs(sum - 1.0) > sum_tolerance) {
    throw ValidationError("SampleSpace: probabilities sum to " + std::to_string(sum) +
                          ", expected 1");
  }
}

SampleSpacePtr SampleSpace::uniform(int atom_count) {
  if (atom_count <= 0) throw ValidationError("SampleSpace: atom_count must be positive");
  return create(Eigen::VectorXd::Constant(atom_count, 1.0 / atom_count));
}

bool same_space(const SampleSpacePtr& a, const SampleSpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->atom_count() == b->atom_count() && a->probabilities() == b->probabilities();
}

RandomVector::RandomVector(SampleSpacePtr space, Eigen::MatrixXd values,
                           std::vector<int> blocks)
    : space_(std::move(space)), values_(std::move(values)), blocks_(std::move(blocks)) {
  if (!space_) throw ValidationError("RandomVector: null space");
  if (values_.rows() != space_->atom_count()) {
    throw ShapeError("RandomVector: row count " + std::to_string(values_.rows()) +
                     " does not match atom count " + std::to_string(space_->atom_count()));
  }
  if (blocks_.empty()) blocks_ = {static_cast<int>(values_.cols())};
  int total = 0;
  for (int b : blocks_) {
    if (b <= 0) throw ValidationError("RandomVector: block dimensions must be positive");
    total += b;
  }
  if (total != values_.cols()) {
    throw ShapeError("RandomVector: block dimensions sum to " + std::to_string(total) +
                     ", expected " + std::to_string(values_.cols()));
  }
}

RandomVector RandomVector::zero(SampleSpacePtr space, int dim, std::vector<int> blocks) {
  const int m = space->atom_count();
  return RandomVector(std::move(space), Eigen::MatrixXd::Zero(m, dim), std::move(blocks));
}

RandomVector RandomVector::constant(SampleSpacePtr space, const Eigen::VectorXd& value,
                                    std::vector<int> blocks) {
  const int m = space->atom_count();
  Eigen::MatrixXd vals = value.transpose().replicate(m, 1);
  return RandomVector(std::move(space), std::move(vals), std::move(blocks));
}

int RandomVector::block_offset(int block) const {
  int off = 0;
  for (int i = 0; i < block; ++i) off += blocks_[i];
  return off;
}

RandomVector RandomVector::with_values(Eigen::MatrixXd values) const {
  if (values.rows() != values_.rows() || values.cols() != values_.cols()) {
    throw ShapeError("RandomVector::with_values: shape mismatch");
  }
  return RandomVector(space_, std::move(values), blocks_);
}

namespace {

void require_compatible(const RandomVector& a, const RandomVector& b, const char* op) {
  if (!same_space(a.space(), b.space())) {
    throw ShapeError(std::string(op) + ": operands live on different sample spaces");
  }
  if (a.dim() != b.dim()) {
    throw ShapeError(std::string(op) + ": dimension mismatch " + std::to_string(a.dim()) +
                     " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

RandomVector operator+(const RandomVector& a, const RandomVector& b) {
  require_compatible(a, b, "RandomVector+");
  return a.with_values(a.values() + b.values());
}

RandomVector operator-(const RandomVector& a, const RandomVector& b) {
  require_compatible(a, b, "RandomVector-");
  return a.with_values(a.values() - b.values());
}

RandomVector operator*(double s, const RandomVector& a) {
  return a.with_values(s * a.values());
}

Partition::Partition(int atom_count, std::vector<std::vector<int>> cells)
    : cells_(std::move(cells)) {
  if (atom_count <= 0) throw ValidationError("Partition: atom_count must be positive");
  cell_of_.assign(atom_count, -1);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c].empty()) throw ValidationError("Partition: empty cell");
    for (int atom : cells_[c]) {
      if (atom < 0 || atom >= atom_count) {
        throw ValidationError("Partition: atom index " + std::to_string(atom) +
                              " out of range");
      }
      if (cell_of_[atom] != -1) {
        throw ValidationError("Partition: atom " + std::to_string(atom) +
                              " appears in two cells");
      }
      cell_of_[atom] = static_cast<int>(c);
    }
  }
  for (int atom = 0; atom < atom_count; ++atom) {
    if (cell_of_[atom] == -1) {
      throw ValidationError("Partition: atom " + std::to_string(atom) +
                            " not covered by any cell");
    }
  }
}

Partition Partition::trivial(int atom_count) {
  std::vector<int> all(atom_count);
  std::iota(all.begin(), all.end(), 0);
  return Partition(atom_count, {std::move(all)});
}

Partition Partition::finest(int atom_count) {
  std::vector<std::vector<int>> cells;
  cells.reserve(atom_count);
  for (int i = 0; i < atom_count; ++i) cells.push_back({i});
  return Partition(atom_count, std::move(cells));
}

bool Partition::refines(const Partition& coarser) const {
  if (atom_count() != coarser.atom_count()) return false;
  for (const auto& cell : cells_) {
    const int target = coarser.cell_of(cell.front());
    for (int atom : cell) {
      if (coarser.cell_of(atom) != target) return false;
    }
  }
  return true;
}

namespace detail {

double weighted_inner(const Eigen::VectorXd& p, const Eigen::MatrixXd& a,
                      const Eigen::MatrixXd& b) {
  return (p.array() * (a.array() * b.array()).rowwise().sum()).sum();
}

double weighted_squared_norm(const Eigen::VectorXd& p, const Eigen::MatrixXd& a) {
  return (p.array() * a.array().square().rowwise().sum()).sum();
}

Eigen::MatrixXd cell_average(const Eigen::VectorXd& p, const Eigen::MatrixXd& values,
                             const Partition& g) {
  Eigen::MatrixXd out(values.rows(), values.cols());
  Eigen::RowVectorXd acc(values.cols());
  for (const auto& cell : g.cells()) {
    if (cell.size() == 1) {  // singleton cells copy bit-exactly
      out.row(cell.front()) = values.row(cell.front());
      continue;
    }
    acc.setZero();
    double mass = 0.0;
    for (int atom : cell) {
      acc.noalias() += p[atom] * values.row(atom);
      mass += p[atom];
    }
    acc /= mass;
    for (int atom : cell) out.row(atom) = acc;
  }
  return out;
}

}  // namespace detail

double l2_inner(const RandomVector& a, const RandomVector& b) {
  require_compatible(a, b, "l2_inner");
  return detail::weighted_inner(a.space()->probabilities(), a.values(), b.values());
}

double l2_norm(const RandomVector& a) {
  return std::sqrt(detail::weighted_squared_norm(a.space()->probabilities(), a.values()));
}

RandomVector conditional_expectation(const RandomVector& a, const Partition& g) {
  if (g.atom_count() != a.atom_count()) {
    throw ShapeError("conditional_expectation: partition covers " +
                     std::to_string(g.atom_count()) + " atoms, vector has " +
                     std::to_string(a.atom_count()));
  }
  return a.with_values(detail::cell_average(a.space()->probabilities(), a.values(), g));
}

}  // namespace msvi
