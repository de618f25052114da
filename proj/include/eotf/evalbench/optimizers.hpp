#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace eotf::evalbench {

enum class OptimizerKind { RandomSearch, NelderMead, DifferentialEvolution, ParticleSwarm };

inline constexpr OptimizerKind kPortfolio[] = {OptimizerKind::RandomSearch, OptimizerKind::NelderMead,
                                               OptimizerKind::DifferentialEvolution,
                                               OptimizerKind::ParticleSwarm};

std::string optimizer_name(OptimizerKind kind);
/// Accepts random_search, nelder_mead, de, pso.
OptimizerKind optimizer_from_name(const std::string& name);

using Objective = std::function<double(std::span<const double>)>;

struct OptimizerResult {
    double best_value = 0.0;
    std::vector<double> best_point;
    /// Best-so-far after each evaluation; size == evaluations.
    std::vector<double> trace;
    std::size_t evaluations = 0;
};

struct Box {
    double lower = -5.0;
    double upper = 5.0;
};

/// Performs exactly `budget` evaluations of f inside the box. Non-finite
/// values are ranked as +inf.
OptimizerResult run_optimizer(OptimizerKind kind, const Objective& f, std::size_t dim, std::size_t budget,
                              std::uint64_t seed, Box box = {});

}  // namespace eotf::evalbench
