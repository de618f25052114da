#pragma once

#include <string>
#include <vector>

#include "eotf/targets/target_function.hpp"

namespace eotf::dsl {
class TypedProgram;
}

namespace eotf::evalbench {

struct Grid {
    std::size_t resolution = 0;
    /// Cell centers along each axis.
    std::vector<double> axis;
    /// Row-major, row index over y: values[j * r + i] = f(axis[i], axis[j]).
    std::vector<double> values;
};

/// Throws std::invalid_argument unless f is two-dimensional and r >= 1.
Grid grid_render(const targets::TargetFunction& f, std::size_t resolution, double lower = -5.0,
                 double upper = 5.0);
Grid grid_render(const dsl::TypedProgram& program, std::size_t resolution);

/// x,y,value in row-major order.
std::string grid_csv(const Grid& grid);

}  // namespace eotf::evalbench
