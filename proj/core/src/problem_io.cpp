#include "msvi/problem_io.hpp"

#include <fstream>
#include <utility>
#include <vector>

#include <json.hpp>

namespace msvi {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("problem file: missing field '") + name + "'");
  return *it;
}

Eigen::VectorXd parse_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError("problem file: field '" + field + "' must be an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ParseError("problem file: field '" + field + "' must hold numbers");
    }
    v[i] = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ParseError("problem file: field '" + field + "' must be a nonempty array of rows");
  }
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd out(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError("problem file: field '" + field + "' has ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = j[r][c].get<double>();
  }
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

ConvexSet parse_set(const json& j) {
  if (!j.is_object()) throw ParseError("problem file: entries of 'sets' must be objects");
  const json& kind = require_field(j, "kind");
  if (!kind.is_string()) throw ParseError("problem file: field 'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "box") {
    return ConvexSet::box(parse_vector(require_field(j, "lower"), "lower"),
                          parse_vector(require_field(j, "upper"), "upper"));
  }
  if (k == "ball") {
    const json& radius = require_field(j, "radius");
    if (!radius.is_number()) throw ParseError("problem file: field 'radius' must be a number");
    return ConvexSet::ball(parse_vector(require_field(j, "center"), "center"),
                           radius.get<double>());
  }
  if (k == "halfspace") {
    const json& offset = require_field(j, "offset");
    if (!offset.is_number()) throw ParseError("problem file: field 'offset' must be a number");
    return ConvexSet::halfspace(parse_vector(require_field(j, "normal"), "normal"),
                                offset.get<double>());
  }
  if (k == "whole_space") {
    const json& dim = require_field(j, "dim");
    if (!dim.is_number_integer()) throw ParseError("problem file: field 'dim' must be an integer");
    return ConvexSet::whole_space(dim.get<int>());
  }
  throw ParseError("problem file: unknown set kind '" + k + "'");
}

json set_to_json(const ConvexSet& s) {
  json out;
  std::visit(
      [&](const auto& data) {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, Box>) {
          out["kind"] = "box";
          out["lower"] = vector_to_json(data.lower);
          out["upper"] = vector_to_json(data.upper);
        } else if constexpr (std::is_same_v<T, Ball>) {
          out["kind"] = "ball";
          out["center"] = vector_to_json(data.center);
          out["radius"] = data.radius;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          out["kind"] = "halfspace";
          out["normal"] = vector_to_json(data.normal);
          out["offset"] = data.offset;
        } else {
          out["kind"] = "whole_space";
          out["dim"] = data.dim;
        }
      },
      s.data());
  return out;
}

ProblemInstance from_generator(const json& gen) {
  const json& family = require_field(gen, "family");
  if (!family.is_string()) throw ParseError("problem file: field 'family' must be a string");
  const std::string f = family.get<std::string>();
  if (f == "affine") {
    return gen_random_affine(require_field(gen, "atom_count").get<int>(),
                             require_field(gen, "n0").get<int>(),
                             require_field(gen, "n1").get<int>(),
                             require_field(gen, "seed").get<std::uint64_t>());
  }
  if (f == "random_walk_socp") {
    return gen_random_walk_socp(require_field(gen, "stages").get<int>(),
                                require_field(gen, "steps_per_stage").get<int>());
  }
  throw ParseError("problem file: unknown generator family '" + f + "'");
}

ProblemInstance from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("problem file: document must be a JSON object");
  if (doc.contains("generator")) return from_generator(doc["generator"]);

  auto space = SampleSpace::create(
      parse_vector(require_field(doc, "probabilities"), "probabilities"));
  const int m = space->atom_count();

  const json& jdims = require_field(doc, "stage_dims");
  if (!jdims.is_array() || jdims.empty()) {
    throw ParseError("problem file: field 'stage_dims' must be a nonempty array");
  }
  std::vector<int> stage_dims;
  for (const auto& d : jdims) {
    if (!d.is_number_integer()) {
      throw ParseError("problem file: field 'stage_dims' must hold integers");
    }
    stage_dims.push_back(d.get<int>());
  }

  const json& jstages = require_field(doc, "stages");
  if (!jstages.is_array()) throw ParseError("problem file: field 'stages' must be an array");
  std::vector<Partition> stages;
  for (const auto& jstage : jstages) {
    if (!jstage.is_array()) {
      throw ParseError("problem file: field 'stages' must hold arrays of cells");
    }
    std::vector<std::vector<int>> cells;
    for (const auto& jcell : jstage) {
      if (!jcell.is_array()) {
        throw ParseError("problem file: cells in 'stages' must be arrays of atom indices");
      }
      cells.push_back(jcell.get<std::vector<int>>());
    }
    stages.emplace_back(m, std::move(cells));
  }
  Filtration filtration(space, std::move(stages), std::move(stage_dims));

  const json& jsets = require_field(doc, "sets");
  if (!jsets.is_array() || static_cast<int>(jsets.size()) != m) {
    throw ParseError("problem file: field 'sets' must hold one entry per atom");
  }
  std::vector<std::vector<ConvexSet>> per_atom;
  per_atom.reserve(m);
  for (const auto& jatom : jsets) {
    if (!jatom.is_array()) {
      throw ParseError("problem file: entries of 'sets' must be arrays of factors");
    }
    std::vector<ConvexSet> factors;
    for (const auto& jf : jatom) factors.push_back(parse_set(jf));
    per_atom.push_back(std::move(factors));
  }
  PointwiseSet sets(space, std::move(per_atom));

  const json& jop = require_field(doc, "operator");
  if (!jop.is_object()) throw ParseError("problem file: field 'operator' must be an object");
  const json& jmats = require_field(jop, "matrices");
  const json& joffs = require_field(jop, "offsets");
  if (!jmats.is_array() || static_cast<int>(jmats.size()) != m) {
    throw ParseError("problem file: field 'matrices' must hold one matrix per atom");
  }
  if (!joffs.is_array() || static_cast<int>(joffs.size()) != m) {
    throw ParseError("problem file: field 'offsets' must hold one vector per atom");
  }
  std::vector<Eigen::MatrixXd> matrices;
  std::vector<Eigen::VectorXd> offsets;
  for (int i = 0; i < m; ++i) {
    matrices.push_back(parse_matrix(jmats[i], "matrices"));
    offsets.push_back(parse_vector(joffs[i], "offsets"));
  }
  auto op =
      std::make_shared<const AffineOperator>(space, std::move(matrices), std::move(offsets));

  std::optional<RandomVector> known;
  if (doc.contains("known_solution") && !doc["known_solution"].is_null()) {
    known = RandomVector(space, parse_matrix(doc["known_solution"], "known_solution"),
                         filtration.stage_dims());
  }

  std::uint64_t seed = 0;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() && !doc["seed"].is_number_unsigned()) {
      throw ParseError("problem file: field 'seed' must be an integer");
    }
    seed = doc["seed"].get<std::uint64_t>();
  }

  return ProblemInstance{space, std::move(filtration), std::move(sets), std::move(op),
                         std::move(known), seed};
}

json to_json(const ProblemInstance& inst) {
  json doc;
  doc["format"] = "msvi-problem";
  doc["version"] = 1;
  doc["probabilities"] = vector_to_json(inst.space->probabilities());
  doc["stage_dims"] = inst.filtration.stage_dims();

  json jstages = json::array();
  for (const auto& stage : inst.filtration.stages()) {
    json jstage = json::array();
    for (const auto& cell : stage.cells()) jstage.push_back(cell);
    jstages.push_back(std::move(jstage));
  }
  doc["stages"] = std::move(jstages);

  json jsets = json::array();
  for (int i = 0; i < inst.sets.atom_count(); ++i) {
    json jatom = json::array();
    for (const auto& s : inst.sets.factors(i)) jatom.push_back(set_to_json(s));
    jsets.push_back(std::move(jatom));
  }
  doc["sets"] = std::move(jsets);

  json jop;
  json jmats = json::array();
  json joffs = json::array();
  for (int i = 0; i < inst.space->atom_count(); ++i) {
    jmats.push_back(matrix_to_json(inst.op->matrix(i)));
    joffs.push_back(vector_to_json(inst.op->offset(i)));
  }
  jop["matrices"] = std::move(jmats);
  jop["offsets"] = std::move(joffs);
  doc["operator"] = std::move(jop);

  if (inst.known_solution) {
    doc["known_solution"] = matrix_to_json(inst.known_solution->values());
  }
  doc["seed"] = inst.seed;
  return doc;
}

}  // namespace

ProblemInstance problem_from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("problem file: invalid JSON: ") + e.what());
  }
  return from_json(doc);
}

std::string problem_to_json_string(const ProblemInstance& instance) {
  return to_json(instance).dump(2);
}

ProblemInstance load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("problem file: cannot open '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return problem_from_json_string(text);
}

void save_problem(const ProblemInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("problem file: cannot open '" + path.string() + "' for writing");
  out << problem_to_json_string(instance) << '\n';
}

}  // namespace msvi
