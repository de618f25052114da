#include "eotf/evalbench/resample.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "eotf/common/parallel.hpp"
#include "eotf/evalbench/statistics.hpp"
#include "eotf/evolve/fitness.hpp"

namespace eotf::evalbench {

ResampleStats resample_median(const dsl::TypedProgram& program, const ela::NormalizedVector& target,
                              const ela::Bounds& bounds, std::uint64_t base_seed, std::size_t count,
                              const std::vector<std::uint64_t>& search_seeds, std::size_t workers) {
    if (count == 0) throw std::invalid_argument("resample: count must be positive");
    for (std::uint64_t s : search_seeds) {
        if (s >= base_seed && s - base_seed < count)
            throw std::invalid_argument("resample: seed " + std::to_string(s) +
                                        " is also a search seed; choose a disjoint base seed");
    }
    ResampleStats st;
    st.seeds.resize(count);
    st.distances.resize(count);
    for (std::size_t i = 0; i < count; ++i) st.seeds[i] = base_seed + i;
    parallel_for(count, workers, [&](std::size_t i) {
        const auto r = evolve::evaluate_fitness(program, target, bounds, {st.seeds[i]});
        if (r.valid) st.distances[i] = r.value;
    });
    std::vector<double> valid;
    for (const auto& d : st.distances) {
        if (d)
            valid.push_back(*d);
        else
            ++st.invalid_count;
    }
    st.robust = st.invalid_count * 2 <= count;
    if (valid.empty()) {
        st.median = st.q25 = st.q75 = std::numeric_limits<double>::quiet_NaN();
    } else {
        st.median = quantile(valid, 0.5);
        st.q25 = quantile(valid, 0.25);
        st.q75 = quantile(valid, 0.75);
    }
    return st;
}

std::string resample_csv(const ResampleStats& stats) {
    std::string out = "seed,distance,valid\n";
    char buf[64];
    for (std::size_t i = 0; i < stats.seeds.size(); ++i) {
        out += std::to_string(stats.seeds[i]) + ",";
        if (stats.distances[i]) {
            std::snprintf(buf, sizeof buf, "%.17g", *stats.distances[i]);
            out += buf;
            out += ",1\n";
        } else {
            out += "nan,0\n";
        }
    }
    return out;
}

}  // namespace eotf::evalbench
