#pragma once

#include "qdetect/ensemble.hpp"

#include <cstdint>

namespace qdetect {

enum class StateKind { pure, mixed };

/// Deterministic seeded ensemble: pure states are unit vectors drawn
/// uniformly from the complex sphere, mixed states are Wishart matrices
/// normalized to unit trace (per-state rank drawn from [1, n] when
/// random_ranks is set, full rank otherwise). Priors are drawn from the
/// flat simplex. The same seed always produces the same ensemble,
/// independent of platform.
Ensemble generate_ensemble(StateKind kind, Index n, std::size_t m,
                           std::uint64_t seed, bool random_ranks = false);

}  // namespace qdetect
