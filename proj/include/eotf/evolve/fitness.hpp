#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "eotf/dsl/typed_program.hpp"
#include "eotf/ela/normalize.hpp"

namespace eotf::evolve {

inline constexpr double kInvalidFitness = std::numeric_limits<double>::infinity();

struct FitnessResult {
    double value = kInvalidFitness;
    bool valid = false;
    std::string reason;
    /// Normalized features per search seed (empty when invalid).
    std::vector<ela::NormalizedVector> features;
};

/// Mean over seeds of the distance between the program's normalized
/// features and the target, sampled at bounds.dim. Any invalid seed gives
/// the sentinel.
FitnessResult evaluate_fitness(const dsl::TypedProgram& program, const ela::NormalizedVector& target,
                               const ela::Bounds& bounds, const std::vector<std::uint64_t>& seeds,
                               std::size_t workers = 1);

double fitness(const dsl::TypedProgram& program, const ela::NormalizedVector& target, const ela::Bounds& bounds,
               const std::vector<std::uint64_t>& seeds);

}  // namespace eotf::evolve
