#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eotf/dsl/typed_program.hpp"
#include "eotf/ela/normalize.hpp"
#include "eotf/evolve/fitness.hpp"
#include "eotf/llm/provider.hpp"
#include "eotf/llm/query.hpp"

namespace eotf::evolve {

using Json = nlohmann::ordered_json;

enum class Method { Eotf, ZeroShot };

std::string_view method_name(Method m) noexcept;
Method method_from_name(std::string_view name);

struct SearchConfig {
    Method method = Method::Eotf;
    std::size_t budget = 250;
    std::size_t population = 20;
    std::size_t parents = 5;
    std::vector<std::uint64_t> search_seeds{0};
    std::uint64_t rng_seed = 0;
    int repair_attempts = 2;
    std::size_t workers = 1;
    bool timestamps = true;

    /// Throws std::invalid_argument: eotf needs budget >= N and N >= m >= 2;
    /// every method needs a positive budget and at least one search seed.
    void validate() const;
    Json to_json() const;
    static SearchConfig from_json(const Json& j);
};

struct Candidate {
    std::optional<dsl::TypedProgram> program;
    std::string source;  // the extracted block
    std::string hash;    // canonical hash, hex
    double fitness = kInvalidFitness;
    bool valid = false;
    std::string invalid_reason;
    llm::PromptKind op = llm::PromptKind::I1;
    std::vector<std::string> parent_hashes;
    std::size_t query_index = 0;
    std::size_t generation = 0;
    /// Normalized features per search seed, when valid.
    std::vector<ela::NormalizedVector> features;
};

struct Archive {
    std::vector<Candidate> candidates;
    /// trajectory[q - 1] = best fitness after query q.
    std::vector<double> trajectory;
    std::size_t queries_used = 0;
    std::size_t duplicates = 0;
    std::size_t failed_queries = 0;
    /// Hashes of the final population, best first.
    std::vector<std::string> population;

    const Candidate* best() const;
    const Candidate* find(const std::string& hash) const;
};

/// Receives every query record and archived candidate as they happen.
class SearchObserver {
public:
    virtual ~SearchObserver() = default;
    virtual void on_query(const Json& record) = 0;
    virtual void on_candidate(const Candidate& c) = 0;
};

Archive run_eotf(const SearchConfig& config, llm::Provider& provider, const ela::NormalizedVector& target,
                 const ela::Bounds& bounds, SearchObserver* observer = nullptr);

Archive run_zero_shot(const SearchConfig& config, llm::Provider& provider, const ela::NormalizedVector& target,
                      const ela::Bounds& bounds, SearchObserver* observer = nullptr);

/// Dispatches on config.method.
Archive run_search(const SearchConfig& config, llm::Provider& provider, const ela::NormalizedVector& target,
                   const ela::Bounds& bounds, SearchObserver* observer = nullptr);

Json candidate_meta(const Candidate& c);

}  // namespace eotf::evolve
