#include "eotf/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "eotf/cli/manifest.hpp"
#include "eotf/cli/scale_study.hpp"
#include "eotf/common/files.hpp"
#include "eotf/common/hash.hpp"
#include "eotf/common/parallel.hpp"
#include "eotf/dsl/canonical.hpp"
#include "eotf/dsl/typed_program.hpp"
#include "eotf/ela/io.hpp"
#include "eotf/evalbench/grid.hpp"
#include "eotf/evalbench/ranking.hpp"
#include "eotf/evalbench/resample.hpp"
#include "eotf/evalbench/statistics.hpp"
#include "eotf/evalbench/win_matrix.hpp"
#include "eotf/evolve/run_directory.hpp"
#include "eotf/evolve/search.hpp"
#include "eotf/llm/provider.hpp"
#include "eotf/targets/bounds.hpp"
#include "eotf/targets/target_spec.hpp"

namespace eotf::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Options whose values may also come from a config file. Keys are JSON
// pointers into the resolved config.
class Settings {
public:
    explicit Settings(CLI::App* app) : app_(app) {}

    template <class T>
    CLI::Option* add(const std::string& flag, const std::string& key, T def, const std::string& help) {
        auto store = std::make_shared<T>(def);
        defaults_[Json::json_pointer(key)] = def;
        CLI::Option* opt = app_->add_option(flag, *store, help);
        if constexpr (!std::is_same_v<T, std::string>) opt->capture_default_str();
        binds_.push_back([store, opt, key](Json& j) {
            if (opt->count() > 0) j[Json::json_pointer(key)] = *store;
        });
        keep_.push_back(store);
        return opt;
    }

    template <class T>
    CLI::Option* list(const std::string& flag, const std::string& key, std::vector<T> def, const std::string& help) {
        return add<std::vector<T>>(flag, key, std::move(def), help)->delimiter(',');
    }

    /// A presence flag that writes `value` into `key`.
    CLI::Option* flag(const std::string& flag, const std::string& key, bool def, bool value, const std::string& help) {
        defaults_[Json::json_pointer(key)] = def;
        CLI::Option* opt = app_->add_flag(flag, help);
        binds_.push_back([opt, key, value](Json& j) {
            if (opt->count() > 0) j[Json::json_pointer(key)] = value;
        });
        return opt;
    }

    void add_config_option() { app_->add_option("--config", config_path_, "JSON config file or a run manifest"); }

    Json resolve() const {
        Json r = defaults_;
        if (!config_path_.empty()) {
            const Json file = load_config_file(config_path_);
            check_known(defaults_, file, "");
            r.merge_patch(file);
        }
        for (const auto& b : binds_) b(r);
        return r;
    }

    const std::string& config_path() const noexcept { return config_path_; }

private:
    static void check_known(const Json& defaults, const Json& file, const std::string& prefix) {
        for (auto it = file.begin(); it != file.end(); ++it) {
            if (!defaults.contains(it.key())) throw UsageError("config key '" + prefix + it.key() + "' is not recognised");
            if (defaults[it.key()].is_object() && it->is_object())
                check_known(defaults[it.key()], *it, prefix + it.key() + ".");
        }
    }

    CLI::App* app_;
    Json defaults_ = Json::object();
    std::vector<std::function<void(Json&)>> binds_;
    std::vector<std::shared_ptr<void>> keep_;
    std::string config_path_;
};

struct Io {
    std::ostream& out;
    std::ostream& err;
};

struct Command {
    CLI::App* app = nullptr;
    std::unique_ptr<Settings> settings;
    std::function<int(const Json&, Io&)> run;
};

std::string str(const Json& c, const char* key) { return c.at(key).get<std::string>(); }

std::string need(const Json& c, const char* key, const char* flag) {
    std::string v = str(c, key);
    if (v.empty()) throw UsageError(std::string(flag) + " is required");
    return v;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const std::string& text, const std::string& out_path, Io& io) {
    if (out_path.empty() || out_path == "-")
        io.out << text;
    else
        write_text_file(out_path, text);
}

void add_input(RunManifest& m, const std::string& path) {
    if (!path.empty() && fs::is_regular_file(path)) m.inputs.emplace_back(path, hash_file(path));
}

std::unique_ptr<ManifestWriter> maybe_manifest(const Json& c, const std::string& sub,
                                               const std::vector<std::string>& inputs) {
    const std::string path = str(c, "manifest");
    if (path.empty()) return nullptr;
    RunManifest m;
    m.subcommand = sub;
    m.config = c;
    for (const auto& p : inputs) add_input(m, p);
    return std::make_unique<ManifestWriter>(path, std::move(m));
}

ela::Bounds read_bounds(const std::string& path) { return ela::bounds_from_json(Json::parse(read_text_file(path))); }

dsl::TypedProgram read_program(const std::string& path) { return dsl::compile(read_text_file(path)); }

std::unique_ptr<llm::Provider> make_provider(const Json& c) {
    const std::string kind = str(c, "provider");
    if (kind == "mock") {
        const std::string transcript = need(c, "transcript", "--transcript (with --provider mock)");
        return std::make_unique<llm::ScriptedProvider>(llm::ScriptedProvider::from_file(transcript));
    }
    if (kind == "http") {
        auto cfg = llm::ProviderConfig::from_json(c.at("http"));
        cfg.validate();
        return std::make_unique<llm::HttpProvider>(cfg);
    }
    throw UsageError("--provider must be mock or http");
}

evolve::SearchConfig search_config(const Json& c) {
    Json s = {{"method", c.at("method")},
              {"budget", c.at("budget")},
              {"population", c.at("population")},
              {"parents", c.at("parents")},
              {"search_seeds", c.at("search_seeds")},
              {"rng_seed", c.at("seed")},
              {"repair_attempts", c.at("repair_attempts")},
              {"workers", c.at("workers")},
              {"timestamps", c.at("timestamps")}};
    evolve::SearchConfig cfg;
    try {
        cfg = evolve::SearchConfig::from_json(s);
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

void add_search_options(Settings& s) {
    s.add<std::string>("--method", "/method", "eotf", "eotf or zero_shot");
    s.add<std::size_t>("--budget", "/budget", 250, "LLM queries");
    s.add<std::size_t>("--population", "/population", 20, "population size N");
    s.add<std::size_t>("--parents", "/parents", 5, "parents per exploration prompt");
    s.list<std::uint64_t>("--search-seeds", "/search_seeds", {0}, "sampling seeds used for fitness");
    s.add<std::uint64_t>("--seed", "/seed", 0, "seed for parent selection");
    s.add<int>("--repair-attempts", "/repair_attempts", 2, "repair prompts per failed extraction");
    s.flag("--no-timestamps", "/timestamps", true, false, "omit wall-clock timestamps from log.jsonl");
    s.add<std::string>("--provider", "/provider", "mock", "mock or http");
    s.add<std::string>("--transcript", "/transcript", "", "scripted responses for the mock provider");
    const llm::ProviderConfig d;
    s.add<std::string>("--base-url", "/http/base_url", d.base_url, "OpenAI-compatible endpoint");
    s.add<std::string>("--model", "/http/model", d.model, "model name");
    s.add<double>("--temperature", "/http/temperature", d.temperature, "sampling temperature");
    s.add<int>("--max-tokens", "/http/max_tokens", d.max_tokens, "completion token limit");
    s.add<double>("--timeout", "/http/timeout_seconds", d.timeout_seconds, "request timeout in seconds");
    s.add<int>("--retries", "/http/retries", d.retries, "transport retries per request");
    s.add<int>("--retry-backoff-ms", "/http/retry_backoff_ms", d.retry_backoff_ms, "initial retry backoff");
    s.add<std::string>("--api-key-env", "/http/api_key_env", d.api_key_env, "environment variable holding the key");
    s.add<std::size_t>("--max-in-flight", "/http/max_in_flight", d.max_in_flight, "concurrent requests");
    s.add<int>("--min-interval-ms", "/http/min_interval_ms", d.min_interval_ms, "minimum spacing between requests");
}

Command& new_command(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds, const std::string& name,
                     const std::string& help, bool workers = true, bool manifest = true) {
    auto cmd = std::make_unique<Command>();
    cmd->app = app.add_subcommand(name, help);
    cmd->settings = std::make_unique<Settings>(cmd->app);
    cmd->settings->add_config_option();
    if (workers)
        cmd->settings->add<std::size_t>("--workers", "/workers", default_workers(), "worker threads");
    if (manifest) cmd->settings->add<std::string>("--manifest", "/manifest", "", "write a run manifest here");
    cmds.push_back(std::move(cmd));
    return *cmds.back();
}

// bounds ------------------------------------------------------------------

void add_bounds(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = new_command(app, cmds, "bounds", "Per-feature min/max over a reference suite");
    auto& s = *c.settings;
    s.add<std::string>("--suite", "/suite", "classic", "classic or ring");
    s.add<std::size_t>("--dim", "/dim", 2, "dimension");
    s.add<std::size_t>("--seeds", "/seeds", 100, "samples per problem");
    s.add<std::uint64_t>("--seed", "/base_seed", 0, "first sampling seed");
    s.add<std::size_t>("--sample-size", "/sample_size", 0, "points per sample (0: 250 * dim)");
    s.add<std::string>("--out", "/out", "", "bounds JSON to write");
    c.run = [](const Json& cfg, Io& io) {
        const std::string out = need(cfg, "out", "--out");
        auto manifest = maybe_manifest(cfg, "bounds", {});
        targets::BoundsOptions o;
        o.base_seed = cfg.at("base_seed");
        o.seeds_per_problem = cfg.at("seeds");
        o.sample_size = cfg.at("sample_size");
        o.workers = cfg.at("workers");
        const std::size_t dim = cfg.at("dim");
        const std::string suite = str(cfg, "suite");
        const auto b = targets::compute_bounds(suite, targets::named_suite(suite, dim), dim, o);
        write_text_file(out, ela::to_json(b).dump(2) + "\n");
        io.out << "wrote " << out << " (" << b.samples_used << " samples)\n";
        if (manifest) manifest->finish("ok");
        return kExitOk;
    };
}

// target ------------------------------------------------------------------

void add_target(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = new_command(app, cmds, "target", "Normalized target feature vector");
    auto& s = *c.settings;
    s.add<std::string>("--spec", "/spec", "", "TargetSpec JSON");
    s.add<std::string>("--id", "/id", "", "builtin function id or name");
    s.add<std::string>("--fn", "/fn", "", "DSL program file");
    s.add<std::string>("--hybrid", "/hybrid", "", "two builtin ids, comma separated");
    s.add<double>("--alpha", "/alpha", targets::kDefaultAlpha, "hybrid mixing weight");
    s.add<std::size_t>("--dim", "/dim", 2, "dimension");
    s.add<std::uint64_t>("--seed", "/seed_base", 0, "first sampling seed");
    s.add<std::size_t>("--seeds", "/seed_count", 100, "number of samples averaged");
    s.add<std::string>("--bounds", "/bounds", "", "bounds JSON");
    s.add<std::string>("--out", "/out", "", "target JSON to write");
    c.run = [](const Json& cfg, Io& io) {
        const std::string out = need(cfg, "out", "--out");
        const std::string bounds_path = need(cfg, "bounds", "--bounds");
        targets::TargetSpec spec;
        const int sources = !str(cfg, "spec").empty() + !str(cfg, "id").empty() + !str(cfg, "fn").empty() +
                            !str(cfg, "hybrid").empty();
        if (sources != 1) throw UsageError("give exactly one of --spec, --id, --fn, --hybrid");
        if (!str(cfg, "spec").empty()) {
            spec = targets::load_target_spec(str(cfg, "spec"));
        } else {
            spec.dim = cfg.at("dim");
            spec.seeds = targets::TargetSpec::consecutive_seeds(cfg.at("seed_base"), cfg.at("seed_count"));
            spec.alpha = cfg.at("alpha");
            if (!str(cfg, "id").empty()) {
                spec.kind = targets::SourceKind::Builtin;
                spec.id = str(cfg, "id");
            } else if (!str(cfg, "fn").empty()) {
                spec.kind = targets::SourceKind::DslFile;
                spec.path = str(cfg, "fn");
                spec.id = spec.path.stem().string();
            } else {
                const std::string h = str(cfg, "hybrid");
                const auto comma = h.find(',');
                if (comma == std::string::npos) throw UsageError("--hybrid expects A,B");
                spec.kind = targets::SourceKind::Hybrid;
                spec.hybrid_a = h.substr(0, comma);
                spec.hybrid_b = h.substr(comma + 1);
            }
        }
        auto manifest = maybe_manifest(cfg, "target", {str(cfg, "spec"), str(cfg, "fn"), bounds_path});
        const auto bounds = read_bounds(bounds_path);
        spec.suite = bounds.suite;
        const auto result = targets::compute_target(spec, bounds, cfg.at("workers"));
        write_text_file(out, targets::target_file_json(spec, result).dump(2) + "\n");
        io.out << "wrote " << out << " (" << result.samples_used << " samples, " << result.samples_dropped
               << " dropped)\n";
        if (manifest) manifest->finish("ok");
        return kExitOk;
    };
}

// evolve ------------------------------------------------------------------

void add_evolve(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = new_command(app, cmds, "evolve", "Search for a program matching the target features", true, false);
    auto& s = *c.settings;
    add_search_options(s);
    s.add<std::size_t>("--dim", "/dim", 2, "dimension (must match the bounds)");
    s.add<std::string>("--target", "/target", "", "target JSON (feature file or spec)");
    s.add<std::string>("--bounds", "/bounds", "", "bounds JSON");
    s.add<std::string>("--out", "/out", "", "run directory");
    c.run = [](const Json& cfg, Io& io) {
        const std::string out = need(cfg, "out", "--out");
        const std::string target_path = need(cfg, "target", "--target");
        const std::string bounds_path = need(cfg, "bounds", "--bounds");
        const auto search = search_config(cfg);

        RunManifest m;
        m.subcommand = "evolve";
        m.config = cfg;
        add_input(m, target_path);
        add_input(m, bounds_path);
        add_input(m, str(cfg, "transcript"));
        ManifestWriter manifest(fs::path(out) / "manifest.json", std::move(m));
        try {
            const auto bounds = read_bounds(bounds_path);
            const std::size_t dim = cfg.at("dim");
            if (bounds.dim != dim)
                throw std::runtime_error("bounds were computed at dim " + std::to_string(bounds.dim) +
                                         " but --dim is " + std::to_string(dim));
            const auto target = targets::load_target(target_path, bounds, search.workers);
            auto provider = make_provider(cfg);
            evolve::RunDirectory dir(out, cfg, ela::to_json(target), ela::to_json(bounds));
            const auto archive = evolve::run_search(search, *provider, target, bounds, &dir);
            dir.finish(archive);
            if (const auto* best = archive.best()) {
                std::string src = best->source;
                if (!src.empty() && src.back() != '\n') src += '\n';
                write_text_file(fs::path(out) / "best.fn", src);
                io.out << "best fitness " << num(best->fitness) << " (query " << best->query_index << ", "
                       << best->hash << ")\n";
            } else {
                io.out << "no valid candidate\n";
            }
            io.out << archive.queries_used << " queries, " << archive.duplicates << " duplicates, "
                   << archive.failed_queries << " failed\n";
        } catch (...) {
            manifest.finish("failed");
            throw;
        }
        manifest.finish("ok");
        return kExitOk;
    };
}

// resample ----------------------------------------------------------------

void add_resample(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = new_command(app, cmds, "resample", "Median distance of one program over fresh samples");
    auto& s = *c.settings;
    s.add<std::string>("--run", "/run", "", "run directory; uses its best candidate, target and bounds");
    s.add<std::string>("--fn", "/fn", "", "DSL program file");
    s.add<std::string>("--target", "/target", "", "target JSON");
    s.add<std::string>("--bounds", "/bounds", "", "bounds JSON");
    s.add<std::size_t>("--count", "/count", 100, "number of samples");
    s.add<std::uint64_t>("--seed", "/base_seed", evalbench::kDefaultResampleBase, "first sampling seed");
    s.list<std::uint64_t>("--search-seeds", "/search_seeds", {0}, "seeds the resample must avoid");
    s.add<std::string>("--out", "/out", "", "CSV to write (default resample_<id>.csv)");
    c.run = [](const Json& cfg, Io& io) {
        std::string fn = str(cfg, "fn"), target_path = str(cfg, "target"), bounds_path = str(cfg, "bounds");
        std::vector<std::uint64_t> avoid = cfg.at("search_seeds");
        std::string id, source;
        fs::path out_dir = ".";
        if (!str(cfg, "run").empty()) {
            const fs::path run = str(cfg, "run");
            out_dir = run;
            if (target_path.empty()) target_path = (run / "target.json").string();
            if (bounds_path.empty()) bounds_path = (run / "bounds.json").string();
            const Json rc = Json::parse(read_text_file(run / "config.json"));
            if (rc.contains("search_seeds")) avoid = rc["search_seeds"].get<std::vector<std::uint64_t>>();
            if (fn.empty()) {
                const auto best = evolve::load_best(run);
                source = best.source;
                id = best.meta.value("hash", "q" + std::to_string(best.query_index));
            }
        }
        if (source.empty()) {
            if (fn.empty()) throw UsageError("give --run or --fn");
            source = read_text_file(fn);
            id = fs::path(fn).stem().string();
        }
        if (target_path.empty()) throw UsageError("--target is required without --run");
        if (bounds_path.empty()) throw UsageError("--bounds is required without --run");
        auto manifest = maybe_manifest(cfg, "resample", {fn, target_path, bounds_path});
        const std::size_t workers = cfg.at("workers");
        const auto bounds = read_bounds(bounds_path);
        const auto target = targets::load_target(target_path, bounds, workers);
        const auto program = dsl::compile(source);
        const auto st =
            evalbench::resample_median(program, target, bounds, cfg.at("base_seed"), cfg.at("count"), avoid, workers);
        std::string out = str(cfg, "out");
        if (out.empty()) out = (out_dir / ("resample_" + id + ".csv")).string();
        emit(evalbench::resample_csv(st), out, io);
        Json summary = {{"id", id},
                        {"count", st.distances.size()},
                        {"median", std::isfinite(st.median) ? Json(st.median) : Json()},
                        {"q25", std::isfinite(st.q25) ? Json(st.q25) : Json()},
                        {"q75", std::isfinite(st.q75) ? Json(st.q75) : Json()},
                        {"invalid_count", st.invalid_count},
                        {"robust", st.robust},
                        {"csv", out}};
        if (out != "-") io.out << summary.dump() << "\n";
        if (manifest) manifest->finish("ok");
        return kExitOk;
    };
}

// winmatrix ---------------------------------------------------------------

void add_winmatrix(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = new_command(app, cmds, "winmatrix", "Pairwise win percentages from per-problem medians", false);
    auto& s = *c.settings;
    s.list<std::string>("--medians", "/medians", {}, "CSV files with method,problem,median rows");
    s.add<std::string>("--out", "/out", "", "CSV to write (default stdout)");
    c.run = [](const Json& cfg, Io& io) {
        const auto files = cfg.at("medians").get<std::vector<std::string>>();
        if (files.empty()) throw UsageError("--medians is required");
        auto manifest = maybe_manifest(cfg, "winmatrix", files);
        evalbench::MethodMedians all;
        for (const auto& f : files) {
            for (auto& [method, per] : evalbench::read_medians_csv(read_text_file(f))) {
                auto it = all.begin();
                while (it != all.end() && it->first != method) ++it;
                if (it == all.end()) {
                    all.emplace_back(method, std::move(per));
                } else {
                    for (auto& [p, v] : per) it->second[p] = v;
                }
            }
        }
        const auto w = evalbench::win_matrix(all);
        const std::string out = str(cfg, "out");
        emit(evalbench::win_matrix_csv(w), out, io);
        if (!out.empty() && out != "-") {
            char buf[32];
            for (std::size_t i = 0; i < w.methods.size(); ++i) {
                io.out << w.methods[i];
                for (std::size_t j = 0; j < w.methods.size(); ++j) {
                    std::snprintf(buf, sizeof buf, "%.1f", w.percent(i, j));
                    io.out << "\t" << (i == j ? "-" : buf);
                }
                io.out << "\n";
            }
        }
        if (manifest) manifest->finish("ok");
        return kExitOk;
    };
}

// rank --------------------------------------------------------------------

void add_rank(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = new_command(app, cmds, "rank", "Fixed-budget optimizer portfolio ranking");
    auto& s = *c.settings;
    s.add<std::string>("--suite", "/suite", "classic", "classic or ring (ignored with --fn)");
    s.list<std::string>("--fn", "/fn", {}, "DSL program files forming the suite");
    s.add<std::size_t>("--dim", "/dim", 2, "dimension");
    s.add<std::size_t>("--budget-multiplier", "/budget_multiplier", 10000, "evaluations per dimension");
    s.add<std::size_t>("--repetitions", "/repetitions", 5, "runs per (problem, optimizer)");
    std::vector<std::string> names;
    for (auto k : evalbench::kPortfolio) names.push_back(evalbench::optimizer_name(k));
    s.list<std::string>("--optimizers", "/optimizers", names, "portfolio members");
    s.add<std::uint64_t>("--seed", "/seed", 0, "base seed");
    s.add<std::string>("--out", "/out", "", "ranks CSV (default stdout)");
    s.add<std::string>("--compare", "/compare", "", "another ranks CSV; prints the Spearman correlation");
    c.run = [](const Json& cfg, Io& io) {
        const auto fns = cfg.at("fn").get<std::vector<std::string>>();
        auto manifest = maybe_manifest(cfg, "rank", fns);
        const std::size_t dim = cfg.at("dim");
        std::vector<targets::TargetFunction> suite;
        if (fns.empty()) {
            suite = targets::named_suite(str(cfg, "suite"), dim);
        } else {
            for (const auto& f : fns) suite.push_back(targets::from_program(fs::path(f).stem().string(), read_program(f), dim));
        }
        evalbench::PortfolioOptions o;
        o.optimizers.clear();
        try {
            for (const auto& n : cfg.at("optimizers").get<std::vector<std::string>>())
                o.optimizers.push_back(evalbench::optimizer_from_name(n));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        o.budget_multiplier = cfg.at("budget_multiplier");
        o.repetitions = cfg.at("repetitions");
        o.seed = cfg.at("seed");
        o.workers = cfg.at("workers");
        const auto table = evalbench::rank_portfolio(suite, o);
        const std::string csv = evalbench::rank_csv(table);
        const std::string out = str(cfg, "out");
        emit(csv, out, io);
        if (!str(cfg, "compare").empty()) {
            const auto mine = evalbench::read_mean_ranks(csv);
            const auto other = evalbench::read_mean_ranks(read_text_file(str(cfg, "compare")));
            if (mine.size() != other.size()) throw std::runtime_error("rank tables cover different optimizers");
            std::vector<double> a, b;
            for (std::size_t i = 0; i < mine.size(); ++i) {
                if (mine[i].first != other[i].first) throw std::runtime_error("rank tables list optimizers differently");
                a.push_back(mine[i].second);
                b.push_back(other[i].second);
            }
            (out.empty() || out == "-" ? io.err : io.out) << "spearman " << num(evalbench::spearman(a, b)) << "\n";
        }
        if (manifest) manifest->finish("ok");
        return kExitOk;
    };
}

// grid --------------------------------------------------------------------

void add_grid(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = new_command(app, cmds, "grid", "Values on a regular 2-D grid for contour plots", false);
    auto& s = *c.settings;
    s.add<std::string>("--fn", "/fn", "", "DSL program file");
    s.add<std::string>("--id", "/id", "", "builtin function id or name");
    s.add<std::size_t>("--resolution", "/resolution", 64, "cells per axis");
    s.add<std::string>("--out", "/out", "", "CSV (default grid_<id>.csv)");
    c.run = [](const Json& cfg, Io& io) {
        const std::string fn = str(cfg, "fn"), id = str(cfg, "id");
        if (fn.empty() == id.empty()) throw UsageError("give exactly one of --fn, --id");
        auto manifest = maybe_manifest(cfg, "grid", {fn});
        const std::size_t r = cfg.at("resolution");
        const auto grid = fn.empty() ? evalbench::grid_render(targets::builtin(id, 2), r)
                                     : evalbench::grid_render(read_program(fn), r);
        std::string out = str(cfg, "out");
        if (out.empty()) {
            std::string name = fn.empty() ? id : fs::path(fn).stem().string();
            for (auto& ch : name)
                if (ch == '/') ch = '_';
            out = "grid_" + name + ".csv";
        }
        emit(evalbench::grid_csv(grid), out, io);
        if (manifest) manifest->finish("ok");
        return kExitOk;
    };
}

// export / validate -------------------------------------------------------

void add_export(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = new_command(app, cmds, "export", "Render a program in the dsl or numpy dialect", false, false);
    auto& s = *c.settings;
    s.add<std::string>("file", "/file", "", "program file")->required();
    s.add<std::string>("--dialect", "/dialect", "numpy", "numpy or dsl");
    s.add<std::string>("--out", "/out", "", "output file (default stdout)");
    c.run = [](const Json& cfg, Io& io) {
        const std::string d = str(cfg, "dialect");
        if (d != "numpy" && d != "dsl") throw UsageError("--dialect must be numpy or dsl");
        const auto program = read_program(str(cfg, "file"));
        emit(dsl::render(program.program(), d == "dsl" ? dsl::Dialect::Dsl : dsl::Dialect::NumpyText), str(cfg, "out"),
             io);
        return kExitOk;
    };
}

void add_validate(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = new_command(app, cmds, "validate", "Parse and type-check a program file", false, false);
    c.settings->add<std::string>("file", "/file", "", "program file")->required();
    c.run = [](const Json& cfg, Io& io) {
        const std::string file = str(cfg, "file");
        const std::string text = read_text_file(file);
        try {
            const auto program = dsl::compile(text);
            const auto canon = dsl::canonicalize(program.program());
            io.out << "ok " << to_hex(canon.hash) << " dim "
                   << (program.dim_hint() ? std::to_string(*program.dim_hint()) : std::string("any")) << "\n";
            return kExitOk;
        } catch (const dsl::ParseError& e) {
            io.err << file << ":" << e.location().line << ":" << e.location().column << ": error: " << e.reason()
                   << "\n";
        } catch (const dsl::TypeError& e) {
            const std::string msg = e.what();
            const auto colon = msg.find(": ");
            io.err << file << ":" << e.location().line << ":" << e.location().column
                   << ": error: " << (colon == std::string::npos ? msg : msg.substr(colon + 2)) << "\n";
        }
        return kExitRuntime;
    };
}

// scale -------------------------------------------------------------------

void add_scale(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = new_command(app, cmds, "scale", "Evolve and resample per problem across dimensions", true, false);
    auto& s = *c.settings;
    add_search_options(s);
    s.list<std::size_t>("--dims", "/dims", {2, 3, 4, 5}, "dimensions");
    s.add<std::string>("--inputs", "/inputs", "", "directory with d<D>/bounds.json and d<D>/targets/*.json");
    s.add<std::size_t>("--count", "/count", 100, "resample count");
    s.add<std::uint64_t>("--resample-seed", "/resample_base", evalbench::kDefaultResampleBase, "first resample seed");
    s.add<std::string>("--out", "/out", "", "study directory");
    c.run = [](const Json& cfg, Io& io) {
        const std::string out = need(cfg, "out", "--out");
        const std::string inputs_dir = need(cfg, "inputs", "--inputs");
        const auto dims = cfg.at("dims").get<std::vector<std::size_t>>();
        if (dims.empty()) throw UsageError("--dims is empty");
        ScaleOptions o;
        o.search = search_config(cfg);
        o.resample_base = cfg.at("resample_base");
        o.resample_count = cfg.at("count");
        o.workers = cfg.at("workers");
        o.run_root = fs::path(out);
        if (str(cfg, "provider") == "mock") need(cfg, "transcript", "--transcript (with --provider mock)");

        RunManifest m;
        m.subcommand = "scale";
        m.config = cfg;
        add_input(m, str(cfg, "transcript"));
        ManifestWriter manifest(fs::path(out) / "manifest.json", std::move(m));
        try {
            const auto inputs = load_scale_inputs(inputs_dir, dims, o.workers);
            const auto result = scale_study(inputs, [&](std::size_t, const std::string&) { return make_provider(cfg); }, o);
            write_text_file(fs::path(out) / "scale.csv", scale_summary_csv(result));
            write_text_file(fs::path(out) / "scale_detail.csv", scale_detail_csv(result));
            io.out << scale_summary_csv(result);
        } catch (...) {
            manifest.finish("failed");
            throw;
        }
        manifest.finish("ok");
        return kExitOk;
    };
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Benchmark function generation by landscape-feature matching", "eotf"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.failure_message(CLI::FailureMessage::help);

    std::vector<std::unique_ptr<Command>> cmds;
    add_bounds(app, cmds);
    add_target(app, cmds);
    add_evolve(app, cmds);
    add_resample(app, cmds);
    add_winmatrix(app, cmds);
    add_rank(app, cmds);
    add_grid(app, cmds);
    add_export(app, cmds);
    add_validate(app, cmds);
    add_scale(app, cmds);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    for (auto& c : cmds) {
        if (!c->app->parsed()) continue;
        Io io{out, err};
        try {
            return c->run(c->settings->resolve(), io);
        } catch (const UsageError& e) {
            err << "error: " << e.what() << "\n" << c->app->help();
            return kExitUsage;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return kExitRuntime;
        }
    }
    return kExitUsage;
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace eotf::cli
