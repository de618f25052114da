#include "eotf/cli/scale_study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "eotf/common/files.hpp"
#include "eotf/ela/io.hpp"
#include "eotf/evolve/run_directory.hpp"
#include "eotf/targets/target_spec.hpp"

namespace eotf::cli {

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ScaleResult scale_study(const std::vector<ScaleInputs>& inputs, const ProviderFactory& providers,
                        const ScaleOptions& options) {
    if (inputs.empty()) throw std::invalid_argument("scale study needs at least one dimension");
    ScaleResult result;
    for (const auto& in : inputs) {
        if (in.bounds.dim != in.dim)
            throw std::invalid_argument("bounds for dim " + std::to_string(in.dim) + " were computed at dim " +
                                        std::to_string(in.bounds.dim));
        if (in.problems.empty()) throw std::invalid_argument("no problems for dim " + std::to_string(in.dim));
        double sum = 0.0;
        std::size_t counted = 0;
        for (const auto& p : in.problems) {
            auto provider = providers(in.dim, p.id);
            evolve::SearchConfig cfg = options.search;
            cfg.workers = options.workers;
            std::optional<evolve::RunDirectory> dir;
            if (options.run_root) {
                const auto root = *options.run_root / ("d" + std::to_string(in.dim)) / p.id;
                Json config = cfg.to_json();
                config["dim"] = in.dim;
                config["problem"] = p.id;
                dir.emplace(root, config, ela::to_json(p.target), ela::to_json(in.bounds));
            }
            const auto archive = evolve::run_search(cfg, *provider, p.target, in.bounds, dir ? &*dir : nullptr);
            if (dir) dir->finish(archive);

            ScaleRecord rec;
            rec.dim = in.dim;
            rec.problem = p.id;
            rec.median = rec.q25 = rec.q75 = std::nan("");
            rec.invalid_count = options.resample_count;
            if (const auto* best = archive.best()) {
                rec.best_fitness = best->fitness;
                const auto st = evalbench::resample_median(*best->program, p.target, in.bounds, options.resample_base,
                                                           options.resample_count, cfg.search_seeds, options.workers);
                rec.median = st.median;
                rec.q25 = st.q25;
                rec.q75 = st.q75;
                rec.invalid_count = st.invalid_count;
                rec.robust = st.robust;
                if (dir) write_text_file(dir->root() / ("resample_" + p.id + ".csv"), evalbench::resample_csv(st));
            }
            if (std::isfinite(rec.median)) {
                sum += rec.median;
                ++counted;
            }
            result.records.push_back(std::move(rec));
        }
        result.summary.push_back({in.dim, counted ? sum / static_cast<double>(counted) : std::nan(""),
                                  in.problems.size(), in.problems.size() - counted});
    }
    return result;
}

std::string scale_summary_csv(const ScaleResult& result) {
    std::string out = "dim,avg_median,problems,missing\n";
    for (const auto& r : result.summary)
        out += std::to_string(r.dim) + "," + num(r.avg_median) + "," + std::to_string(r.problems) + "," +
               std::to_string(r.missing) + "\n";
    return out;
}

std::string scale_detail_csv(const ScaleResult& result) {
    std::string out = "dim,problem,best_fitness,median,q25,q75,invalid_count,robust\n";
    for (const auto& r : result.records)
        out += std::to_string(r.dim) + "," + r.problem + "," + (r.best_fitness ? num(*r.best_fitness) : "inf") + "," +
               num(r.median) + "," + num(r.q25) + "," + num(r.q75) + "," + std::to_string(r.invalid_count) + "," +
               (r.robust ? "1" : "0") + "\n";
    return out;
}

std::vector<ScaleInputs> load_scale_inputs(const std::filesystem::path& dir, const std::vector<std::size_t>& dims,
                                           std::size_t workers) {
    std::vector<ScaleInputs> out;
    for (std::size_t d : dims) {
        const auto base = dir / ("d" + std::to_string(d));
        const auto bounds_path = base / "bounds.json";
        if (!std::filesystem::is_regular_file(bounds_path))
            throw std::runtime_error("missing input " + bounds_path.string());
        const auto targets_dir = base / "targets";
        if (!std::filesystem::is_directory(targets_dir))
            throw std::runtime_error("missing input " + targets_dir.string());
        ScaleInputs in;
        in.dim = d;
        in.bounds = ela::bounds_from_json(Json::parse(read_text_file(bounds_path)));
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(targets_dir))
            if (e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw std::runtime_error("missing input: no target files in " + targets_dir.string());
        for (const auto& f : files)
            in.problems.push_back({f.stem().string(), targets::load_target(f, in.bounds, workers)});
        out.push_back(std::move(in));
    }
    return out;
}

}  // namespace eotf::cli
