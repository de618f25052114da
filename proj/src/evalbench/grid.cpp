#include "eotf/evalbench/grid.hpp"

#include <cstdio>
#include <stdexcept>

#include "eotf/dsl/typed_program.hpp"

namespace eotf::evalbench {

Grid grid_render(const targets::TargetFunction& f, std::size_t resolution, double lower, double upper) {
    if (f.dim() != 2) throw std::invalid_argument("grid export needs a 2-D function, got dim " + std::to_string(f.dim()));
    if (resolution == 0) throw std::invalid_argument("grid resolution must be at least 1");
    Grid g;
    g.resolution = resolution;
    const double h = (upper - lower) / static_cast<double>(resolution);
    for (std::size_t i = 0; i < resolution; ++i) g.axis.push_back(lower + (static_cast<double>(i) + 0.5) * h);
    Matrix pts(resolution * resolution, 2);
    for (std::size_t j = 0; j < resolution; ++j)
        for (std::size_t i = 0; i < resolution; ++i) {
            pts(j * resolution + i, 0) = g.axis[i];
            pts(j * resolution + i, 1) = g.axis[j];
        }
    g.values = f.evaluate(pts);
    return g;
}

Grid grid_render(const dsl::TypedProgram& program, std::size_t resolution) {
    return grid_render(targets::from_program("program", program, 2), resolution);
}

std::string grid_csv(const Grid& g) {
    std::string out = "x,y,value\n";
    char buf[96];
    const std::size_t r = g.resolution;
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.axis[i], g.axis[j], g.values[j * r + i]);
            out += buf;
        }
    return out;
}

}  // namespace eotf::evalbench
