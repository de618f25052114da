#include "eotf/evalbench/win_matrix.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace eotf::evalbench {

double WinMatrix::percent(std::size_t i, std::size_t j) const {
    if (i == j || problems.empty()) return 0.0;
    return 100.0 * static_cast<double>(wins[i][j]) / static_cast<double>(problems.size());
}

WinMatrix win_matrix(const MethodMedians& medians) {
    if (medians.size() < 2) throw std::invalid_argument("win matrix needs at least two methods");
    WinMatrix m;
    for (const auto& [name, per_problem] : medians) m.methods.push_back(name);
    for (const auto& [problem, v] : medians.front().second) m.problems.push_back(problem);
    for (const auto& [name, per_problem] : medians) {
        if (per_problem.size() != m.problems.size())
            throw std::invalid_argument("method " + name + " covers a different problem list");
        for (const auto& p : m.problems)
            if (!per_problem.count(p)) throw std::invalid_argument("method " + name + " has no median for " + p);
    }
    const std::size_t k = medians.size();
    m.wins.assign(k, std::vector<std::size_t>(k, 0));
    m.ties.assign(k, std::vector<std::size_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            for (const auto& p : m.problems) {
                const double a = medians[i].second.at(p), b = medians[j].second.at(p);
                if (a < b)
                    ++m.wins[i][j];
                else if (!(b < a))
                    ++m.ties[i][j];
            }
        }
    return m;
}

std::string win_matrix_csv(const WinMatrix& m) {
    std::string out = "method,opponent,wins,ties,losses,problems,percent\n";
    char buf[32];
    for (std::size_t i = 0; i < m.methods.size(); ++i)
        for (std::size_t j = 0; j < m.methods.size(); ++j) {
            if (i == j) continue;
            std::snprintf(buf, sizeof buf, "%.1f", m.percent(i, j));
            out += m.methods[i] + "," + m.methods[j] + "," + std::to_string(m.wins[i][j]) + "," +
                   std::to_string(m.ties[i][j]) + "," + std::to_string(m.wins[j][i]) + "," +
                   std::to_string(m.problems.size()) + "," + buf + "\n";
        }
    return out;
}

MethodMedians read_medians_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("medians CSV is empty");
    MethodMedians out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto a = line.find(','), b = line.find(',', a + 1);
        if (a == std::string::npos || b == std::string::npos)
            throw std::invalid_argument("medians CSV line " + std::to_string(lineno) + ": expected method,problem,median");
        const std::string method = line.substr(0, a), problem = line.substr(a + 1, b - a - 1);
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(line.substr(b + 1), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("medians CSV line " + std::to_string(lineno) + ": bad number");
        }
        auto it = out.begin();
        while (it != out.end() && it->first != method) ++it;
        if (it == out.end()) {
            out.emplace_back(method, std::map<std::string, double>{});
            it = out.end() - 1;
        }
        it->second[problem] = v;
    }
    return out;
}

}  // namespace eotf::evalbench
