#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace eotf::evalbench {

/// method -> (problem -> median distance), methods in caller order.
using MethodMedians = std::vector<std::pair<std::string, std::map<std::string, double>>>;

struct WinMatrix {
    std::vector<std::string> methods;
    std::vector<std::string> problems;
    /// wins[i][j]: problems where method i has the strictly lower median.
    std::vector<std::vector<std::size_t>> wins;
    std::vector<std::vector<std::size_t>> ties;

    /// 100 * wins / problems; 0 on the diagonal.
    double percent(std::size_t i, std::size_t j) const;
};

/// Throws std::invalid_argument unless every method covers the same problems.
WinMatrix win_matrix(const MethodMedians& medians);

/// Long format: method,opponent,wins,ties,losses,problems,percent.
std::string win_matrix_csv(const WinMatrix& m);

/// Reads method,problem,median rows (header required).
MethodMedians read_medians_csv(const std::string& text);

}  // namespace eotf::evalbench
