#include "eotf/evolve/fitness.hpp"

#include <stdexcept>

#include "eotf/common/parallel.hpp"
#include "eotf/ela/features.hpp"

namespace eotf::evolve {

FitnessResult evaluate_fitness(const dsl::TypedProgram& program, const ela::NormalizedVector& target,
                               const ela::Bounds& bounds, const std::vector<std::uint64_t>& seeds,
                               std::size_t workers) {
    if (seeds.empty()) throw std::invalid_argument("fitness needs at least one search seed");
    if (!target.fully_defined()) throw std::invalid_argument("fitness: target vector has undefined slots");
    FitnessResult out;
    if (program.dim_hint() && *program.dim_hint() > bounds.dim) {
        out.reason = "program indexes x[" + std::to_string(*program.dim_hint() - 1) + "] but the dimension is " +
                     std::to_string(bounds.dim);
        return out;
    }
    const auto objective = ela::objective_of(program);
    std::vector<ela::Landscape> ls(seeds.size());
    parallel_for(seeds.size(), workers, [&](std::size_t i) {
        ls[i] = ela::sample_landscape(objective, ela::SampleDesign::standard(bounds.dim, seeds[i]));
    });
    double sum = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        if (!ls[i].valid()) {
            out.reason = ls[i].invalid_reason() + " (seed " + std::to_string(seeds[i]) + ")";
            out.features.clear();
            return out;
        }
        out.features.push_back(ela::normalize(ls[i].features, bounds));
        sum += ela::distance(out.features.back(), target);
    }
    out.valid = true;
    out.value = sum / static_cast<double>(seeds.size());
    return out;
}

double fitness(const dsl::TypedProgram& program, const ela::NormalizedVector& target, const ela::Bounds& bounds,
               const std::vector<std::uint64_t>& seeds) {
    return evaluate_fitness(program, target, bounds, seeds).value;
}

}  // namespace eotf::evolve
