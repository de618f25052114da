#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eotf/ela/normalize.hpp"
#include "eotf/evalbench/resample.hpp"
#include "eotf/evolve/search.hpp"
#include "eotf/llm/provider.hpp"

namespace eotf::cli {

using Json = nlohmann::ordered_json;

struct ScaleProblem {
    std::string id;
    ela::NormalizedVector target;
};

struct ScaleInputs {
    std::size_t dim = 2;
    ela::Bounds bounds;
    std::vector<ScaleProblem> problems;
};

/// A fresh provider for every (dim, problem) run.
using ProviderFactory = std::function<std::unique_ptr<llm::Provider>(std::size_t dim, const std::string& problem)>;

struct ScaleOptions {
    evolve::SearchConfig search;
    std::uint64_t resample_base = evalbench::kDefaultResampleBase;
    std::size_t resample_count = 100;
    std::size_t workers = 1;
    /// When set, each run is archived under <run_root>/d<dim>/<problem>/.
    std::optional<std::filesystem::path> run_root;
};

struct ScaleRecord {
    std::size_t dim = 0;
    std::string problem;
    /// Empty when the run produced no valid candidate.
    std::optional<double> best_fitness;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::size_t invalid_count = 0;
    bool robust = false;
};

struct ScaleResult {
    std::vector<ScaleRecord> records;
    /// Per dim: mean of the finite problem medians and the number of
    /// problems that had none.
    struct Row {
        std::size_t dim;
        double avg_median;
        std::size_t problems;
        std::size_t missing;
    };
    std::vector<Row> summary;
};

ScaleResult scale_study(const std::vector<ScaleInputs>& inputs, const ProviderFactory& providers,
                        const ScaleOptions& options);

/// dim,avg_median,problems,missing
std::string scale_summary_csv(const ScaleResult& result);
/// dim,problem,best_fitness,median,q25,q75,invalid_count,robust
std::string scale_detail_csv(const ScaleResult& result);

/// Reads <dir>/d<D>/bounds.json and every <dir>/d<D>/targets/*.json (in
/// file name order; the stem is the problem id). Throws std::runtime_error
/// naming the first missing input.
std::vector<ScaleInputs> load_scale_inputs(const std::filesystem::path& dir, const std::vector<std::size_t>& dims,
                                           std::size_t workers = 1);

}  // namespace eotf::cli
