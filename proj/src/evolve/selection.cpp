#include "eotf/evolve/selection.hpp"

#include <numeric>
#include <stdexcept>

namespace eotf::evolve {

std::vector<std::size_t> select_parents(std::size_t population_size, llm::PromptKind kind, std::size_t m, Rng& rng) {
    if (kind == llm::PromptKind::I1) return {};
    if (population_size == 0) throw std::invalid_argument("select_parents: empty population");
    if (llm::is_mutation(kind)) return {static_cast<std::size_t>(rng.below(population_size))};
    std::vector<std::size_t> idx(population_size);
    std::iota(idx.begin(), idx.end(), 0);
    if (population_size <= m) return idx;
    for (std::size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.below(population_size - i)]);
    idx.resize(m);
    return idx;
}

}  // namespace eotf::evolve
