#pragma once

#include <filesystem>
#include <string>

#include "msvi/problems.hpp"

namespace msvi {

/// Problem files are single JSON documents:
///
///   {
///     "format": "msvi-problem", "version": 1,
///     "probabilities": [...],                    one entry per atom
///     "stage_dims":    [n_0, ..., n_{N-1}],
///     "stages":        [[[atom,...],...], ...],  per stage, cells of 0-based atoms
///     "sets":          [[{"kind": ...}, ...], ...],  per atom, product factors
///     "operator":      {"matrices": [...], "offsets": [...]},
///     "known_solution": [[...], ...],            optional, per atom
///     "seed": 0
///   }
///
/// Alternatively the document may hold a single "generator" object naming a
/// problem family and its parameters; loading then rebuilds the instance
/// from the recipe. Saving always writes the explicit form, and numbers
/// round-trip exactly.
ProblemInstance load_problem(const std::filesystem::path& path);
void save_problem(const ProblemInstance& instance, const std::filesystem::path& path);

ProblemInstance problem_from_json_string(const std::string& text);
std::string problem_to_json_string(const ProblemInstance& instance);

}  // namespace msvi
