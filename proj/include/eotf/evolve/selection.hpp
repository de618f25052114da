#pragma once

#include <cstddef>
#include <vector>

#include "eotf/common/rng.hpp"
#include "eotf/llm/prompts.hpp"

namespace eotf::evolve {

/// Positions into a population of `population_size`: m distinct uniform
/// draws for E operators (all positions, in order, when the population has
/// at most m), one uniform draw for M operators, none for I1.
std::vector<std::size_t> select_parents(std::size_t population_size, llm::PromptKind kind, std::size_t m, Rng& rng);

}  // namespace eotf::evolve
