#include "msvi/filtration.hpp"

#include <map>
#include <utility>

namespace msvi {

Filtration::Filtration(SampleSpacePtr space, std::vector<Partition> stages,
                       std::vector<int> stage_dims)
    : space_(std::move(space)), stages_(std::move(stages)), stage_dims_(std::move(stage_dims)) {
  if (!space_) throw ValidationError("Filtration: null space");
  if (stages_.empty()) throw ValidationError("Filtration: needs at least one stage");
  if (stages_.size() != stage_dims_.size()) {
    throw ShapeError("Filtration: " + std::to_string(stages_.size()) + " stages but " +
                     std::to_string(stage_dims_.size()) + " stage dimensions");
  }
  const int m = space_->atom_count();
  for (const auto& st : stages_) {
    if (st.atom_count() != m) {
      throw ShapeError("Filtration: stage partition covers " +
                       std::to_string(st.atom_count()) + " atoms, space has " +
                       std::to_string(m));
    }
  }
  if (!stages_.front().is_trivial()) {
    throw ValidationError("Filtration: stage 0 must be the trivial partition");
  }
  for (std::size_t i = 1; i < stages_.size(); ++i) {
    if (!stages_[i].refines(stages_[i - 1])) {
      throw ValidationError("Filtration: stage " + std::to_string(i) +
                            " does not refine stage " + std::to_string(i - 1));
    }
  }
  offsets_.reserve(stage_dims_.size());
  for (int d : stage_dims_) {
    if (d <= 0) throw ValidationError("Filtration: stage dimensions must be positive");
    offsets_.push_back(dim_);
    dim_ += d;
  }
}

Filtration Filtration::from_signals(SampleSpacePtr space,
                                    const std::vector<Eigen::MatrixXd>& signals,
                                    std::vector<int> stage_dims) {
  if (!space) throw ValidationError("Filtration: null space");
  const int m = space->atom_count();
  const std::size_t n_stages = stage_dims.size();
  if (signals.size() + 1 != n_stages) {
    throw ShapeError("Filtration::from_signals: " + std::to_string(n_stages) +
                     " stages need " + std::to_string(n_stages - 1) + " signals, got " +
                     std::to_string(signals.size()));
  }
  for (const auto& s : signals) {
    if (s.rows() != m) {
      throw ShapeError("Filtration::from_signals: signal has " + std::to_string(s.rows()) +
                       " rows, space has " + std::to_string(m) + " atoms");
    }
  }

  std::vector<Partition> stages;
  stages.reserve(n_stages);
  stages.push_back(Partition::trivial(m));
  // Group atoms by exact equality of the observation prefix. Keys grow one
  // signal at a time; cells keep first-occurrence order.
  std::vector<std::vector<double>> keys(m);
  for (std::size_t i = 1; i < n_stages; ++i) {
    const Eigen::MatrixXd& sig = signals[i - 1];
    for (int a = 0; a < m; ++a) {
      for (Eigen::Index c = 0; c < sig.cols(); ++c) keys[a].push_back(sig(a, c));
    }
    std::map<std::vector<double>, int> cell_index;
    std::vector<std::vector<int>> cells;
    for (int a = 0; a < m; ++a) {
      auto [it, inserted] = cell_index.try_emplace(keys[a], static_cast<int>(cells.size()));
      if (inserted) cells.emplace_back();
      cells[it->second].push_back(a);
    }
    stages.emplace_back(m, std::move(cells));
  }
  return Filtration(std::move(space), std::move(stages), std::move(stage_dims));
}

Eigen::MatrixXd Filtration::project_n_values(const Eigen::MatrixXd& values) const {
  if (values.cols() != dim_) {
    throw ShapeError("Filtration: value dimension " + std::to_string(values.cols()) +
                     " does not match stage dimensions sum " + std::to_string(dim_));
  }
  const Eigen::VectorXd& p = space_->probabilities();
  Eigen::MatrixXd out(values.rows(), values.cols());
  for (int i = 0; i < stage_count(); ++i) {
    const auto block = values.middleCols(offsets_[i], stage_dims_[i]);
    out.middleCols(offsets_[i], stage_dims_[i]) = detail::cell_average(p, block, stages_[i]);
  }
  return out;
}

Eigen::MatrixXd Filtration::project_m_values(const Eigen::MatrixXd& values) const {
  return values - project_n_values(values);
}

namespace {

void require_matching(const RandomVector& x, const Filtration& f, const char* op) {
  if (!same_space(x.space(), f.space())) {
    throw ShapeError(std::string(op) + ": vector and filtration live on different spaces");
  }
  if (x.blocks() != f.stage_dims()) {
    throw ShapeError(std::string(op) + ": vector blocks do not match stage dimensions");
  }
}

}  // namespace

RandomVector project_nonanticipativity(const RandomVector& x, const Filtration& f) {
  require_matching(x, f, "project_nonanticipativity");
  return x.with_values(f.project_n_values(x.values()));
}

RandomVector project_complement(const RandomVector& x, const Filtration& f) {
  require_matching(x, f, "project_complement");
  return x.with_values(f.project_m_values(x.values()));
}

}  // namespace msvi
