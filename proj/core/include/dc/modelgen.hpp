#pragma once

#include "dc/model.hpp"

namespace dc {

// Deterministic pseudo-random model generator for property tests and
// benchmarks. `n_elements` scales every section linearly. The result always
// passes validate_model; with `core_only` it stays within the shared core
// (binary relationships, plain attributes, cardinality / mandatory / single
// identification) so that every family encoder accepts it.
ConceptualModel generate_model(Family family, int n_elements, unsigned seed,
                               bool core_only = false);

} // namespace dc
