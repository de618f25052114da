#include "eotf/evolve/search.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <stdexcept>
#include <unordered_set>

#include "eotf/common/hash.hpp"
#include "eotf/dsl/canonical.hpp"
#include "eotf/ela/io.hpp"
#include "eotf/evolve/selection.hpp"

namespace eotf::evolve {

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

class Engine {
public:
    Engine(const SearchConfig& cfg, llm::Provider& provider, const ela::NormalizedVector& target,
           const ela::Bounds& bounds, SearchObserver* observer)
        : cfg_(cfg), provider_(provider), target_(target), bounds_(bounds), observer_(observer), rng_(cfg.rng_seed) {
        cfg_.validate();
        if (!target.fully_defined()) throw std::invalid_argument("search: the target vector has undefined slots");
    }

    std::size_t remaining() const { return cfg_.budget - archive_.queries_used; }

    /// One candidate query; returns the archive position of a new candidate.
    std::optional<std::size_t> query(llm::PromptKind kind, std::size_t generation,
                                     const std::vector<std::size_t>& parents, std::optional<llm::PromptKind> replaced) {
        std::vector<std::string> context;
        std::vector<std::string> parent_hashes;
        for (std::size_t p : parents) {
            const Candidate& c = archive_.candidates[p];
            context.push_back(dsl::render(c.program->program(), dsl::Dialect::NumpyText));
            parent_hashes.push_back(c.hash);
        }
        llm::QueryOptions opt;
        opt.repair_attempts = cfg_.repair_attempts;
        opt.max_queries = remaining();
        const llm::QueryResult r = llm::query_candidate(provider_, kind, target_, context, opt);

        std::optional<std::size_t> added;
        for (std::size_t a = 0; a < r.attempts.size(); ++a) {
            const llm::Attempt& at = r.attempts[a];
            const std::size_t qi = ++archive_.queries_used;
            Json rec = Json::object();
            rec["query_index"] = qi;
            rec["method"] = method_name(cfg_.method);
            rec["kind"] = llm::kind_name(kind);
            if (replaced) rec["replaces"] = llm::kind_name(*replaced);
            rec["generation"] = generation;
            rec["attempt"] = a;
            rec["parents"] = parent_hashes;
            rec["prompt_hash"] = to_hex(fnv1a64(at.prompt));
            rec["response"] = at.response;
            rec["outcome"] = at.outcome;
            rec["prompt_tokens"] = at.prompt_tokens ? Json(*at.prompt_tokens) : Json(nullptr);
            rec["completion_tokens"] = at.completion_tokens ? Json(*at.completion_tokens) : Json(nullptr);
            const bool last = a + 1 == r.attempts.size();
            if (last && r.candidate) {
                const std::string hash = to_hex(dsl::canonicalize(r.candidate->program.program()).hash);
                rec["candidate_hash"] = hash;
                if (seen_.count(hash)) {
                    ++archive_.duplicates;
                    rec["duplicate"] = true;
                } else {
                    rec["duplicate"] = false;
                    Candidate c;
                    c.program = r.candidate->program;
                    c.source = r.candidate->block;
                    c.hash = hash;
                    c.op = kind;
                    c.parent_hashes = parent_hashes;
                    c.query_index = qi;
                    c.generation = generation;
                    FitnessResult f = evaluate_fitness(*c.program, target_, bounds_, cfg_.search_seeds, cfg_.workers);
                    c.fitness = f.value;
                    c.valid = f.valid;
                    c.invalid_reason = f.reason;
                    c.features = std::move(f.features);
                    rec["fitness"] = number_or_null(c.fitness);
                    rec["valid"] = c.valid;
                    if (!c.valid) rec["invalid_reason"] = c.invalid_reason;
                    seen_.insert(hash);
                    if (c.valid && c.fitness < best_) best_ = c.fitness;
                    archive_.candidates.push_back(std::move(c));
                    added = archive_.candidates.size() - 1;
                    if (observer_) observer_->on_candidate(archive_.candidates.back());
                }
            } else if (last) {
                ++archive_.failed_queries;
            }
            if (cfg_.timestamps) rec["timestamp"] = utc_now();
            archive_.trajectory.push_back(best_);
            if (observer_) observer_->on_query(rec);
        }
        return added;
    }

    void truncate(std::vector<std::size_t>& pop) const {
        std::stable_sort(pop.begin(), pop.end(), [&](std::size_t a, std::size_t b) {
            const Candidate& x = archive_.candidates[a];
            const Candidate& y = archive_.candidates[b];
            if (x.fitness != y.fitness) return x.fitness < y.fitness;
            return x.query_index < y.query_index;
        });
        if (pop.size() > cfg_.population) pop.resize(cfg_.population);
    }

    Archive run_eotf() {
        std::vector<std::size_t> pop;
        for (std::size_t i = 0; i < cfg_.population && remaining() > 0; ++i) {
            const auto idx = query(llm::PromptKind::I1, 0, {}, std::nullopt);
            if (idx && archive_.candidates[*idx].valid) pop.push_back(*idx);
        }
        truncate(pop);
        for (std::size_t gen = 1; remaining() > 0; ++gen) {
            const std::vector<std::size_t> pre = pop;
            struct Planned {
                llm::PromptKind kind;
                std::vector<std::size_t> parents;
                std::optional<llm::PromptKind> replaced;
            };
            std::vector<Planned> plan;
            for (llm::PromptKind op : llm::kSweepOrder) {
                if (pre.empty()) {
                    plan.push_back({llm::PromptKind::I1, {}, op});
                    continue;
                }
                std::vector<std::size_t> parents;
                for (std::size_t k : select_parents(pre.size(), op, cfg_.parents, rng_)) parents.push_back(pre[k]);
                plan.push_back({op, parents, std::nullopt});
            }
            for (const Planned& p : plan) {
                if (remaining() == 0) break;
                const auto idx = query(p.kind, gen, p.parents, p.replaced);
                if (idx && archive_.candidates[*idx].valid) pop.push_back(*idx);
            }
            truncate(pop);
        }
        return finish(pop);
    }

    Archive run_zero_shot() {
        std::vector<std::size_t> pop;
        while (remaining() > 0) {
            const auto idx = query(llm::PromptKind::I1, 0, {}, std::nullopt);
            if (idx && archive_.candidates[*idx].valid) pop.push_back(*idx);
        }
        truncate(pop);
        return finish(pop);
    }

private:
    Archive finish(const std::vector<std::size_t>& pop) {
        for (std::size_t i : pop) archive_.population.push_back(archive_.candidates[i].hash);
        return std::move(archive_);
    }

    SearchConfig cfg_;
    llm::Provider& provider_;
    const ela::NormalizedVector& target_;
    const ela::Bounds& bounds_;
    SearchObserver* observer_;
    Rng rng_;
    Archive archive_;
    std::unordered_set<std::string> seen_;
    double best_ = kInvalidFitness;
};

}  // namespace

std::string_view method_name(Method m) noexcept { return m == Method::Eotf ? "eotf" : "zero_shot"; }

Method method_from_name(std::string_view name) {
    if (name == "eotf") return Method::Eotf;
    if (name == "zero_shot" || name == "zero-shot") return Method::ZeroShot;
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected eotf or zero_shot)");
}

void SearchConfig::validate() const {
    if (budget == 0) throw std::invalid_argument("search: budget must be positive");
    if (search_seeds.empty()) throw std::invalid_argument("search: at least one search seed is required");
    if (repair_attempts < 0) throw std::invalid_argument("search: repair attempts must be >= 0");
    if (method == Method::Eotf) {
        if (parents < 2) throw std::invalid_argument("search: parents per exploration must be >= 2");
        if (population < parents) throw std::invalid_argument("search: population must be >= parents");
        if (budget < population) throw std::invalid_argument("search: budget must be >= population size");
    }
}

Json SearchConfig::to_json() const {
    return {{"method", method_name(method)}, {"budget", budget},        {"population", population},
            {"parents", parents},            {"search_seeds", search_seeds}, {"rng_seed", rng_seed},
            {"repair_attempts", repair_attempts}, {"workers", workers}, {"timestamps", timestamps}};
}

SearchConfig SearchConfig::from_json(const Json& j) {
    SearchConfig c;
    c.method = method_from_name(j.value("method", std::string("eotf")));
    c.budget = j.value("budget", c.budget);
    c.population = j.value("population", c.population);
    c.parents = j.value("parents", c.parents);
    c.search_seeds = j.value("search_seeds", c.search_seeds);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.repair_attempts = j.value("repair_attempts", c.repair_attempts);
    c.workers = j.value("workers", c.workers);
    c.timestamps = j.value("timestamps", c.timestamps);
    return c;
}

const Candidate* Archive::best() const {
    const Candidate* b = nullptr;
    for (const auto& c : candidates)
        if (c.valid && (!b || c.fitness < b->fitness)) b = &c;
    return b;
}

const Candidate* Archive::find(const std::string& hash) const {
    for (const auto& c : candidates)
        if (c.hash == hash) return &c;
    return nullptr;
}

Archive run_eotf(const SearchConfig& config, llm::Provider& provider, const ela::NormalizedVector& target,
                 const ela::Bounds& bounds, SearchObserver* observer) {
    SearchConfig c = config;
    c.method = Method::Eotf;
    return Engine(c, provider, target, bounds, observer).run_eotf();
}

Archive run_zero_shot(const SearchConfig& config, llm::Provider& provider, const ela::NormalizedVector& target,
                      const ela::Bounds& bounds, SearchObserver* observer) {
    SearchConfig c = config;
    c.method = Method::ZeroShot;
    return Engine(c, provider, target, bounds, observer).run_zero_shot();
}

Archive run_search(const SearchConfig& config, llm::Provider& provider, const ela::NormalizedVector& target,
                   const ela::Bounds& bounds, SearchObserver* observer) {
    return config.method == Method::Eotf ? run_eotf(config, provider, target, bounds, observer)
                                         : run_zero_shot(config, provider, target, bounds, observer);
}

Json candidate_meta(const Candidate& c) {
    Json j = Json::object();
    j["query_index"] = c.query_index;
    j["operator"] = llm::kind_name(c.op);
    j["generation"] = c.generation;
    j["hash"] = c.hash;
    j["valid"] = c.valid;
    j["fitness"] = number_or_null(c.fitness);
    if (!c.valid) j["invalid_reason"] = c.invalid_reason;
    j["parent_hashes"] = c.parent_hashes;
    Json feats = Json::array();
    for (const auto& f : c.features) feats.push_back(ela::to_json(f));
    j["features"] = feats;
    return j;
}

}  // namespace eotf::evolve
