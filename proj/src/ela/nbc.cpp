#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "eotf/ela/features.hpp"
#include "eotf/simd/kernels.hpp"

namespace eotf::ela {

namespace {

std::optional<double> sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return std::nullopt;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

NbcFeatures nbc_features(const Matrix& X, std::span<const double> y) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    if (y.size() != n) throw std::invalid_argument("nbc: sample and values differ in length");
    NbcFeatures out;
    if (n < 4) return out;

    const auto& k = simd::active_kernels();
    const std::vector<double> cols = X.transposed();
    std::vector<double> acc(n);
    std::vector<double> nn, nb;
    nn.reserve(n);
    nb.reserve(n);
    std::vector<double> indegree(n, 0.0);
    constexpr double kInf = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < n; ++i) {
        k.fill(0.0, acc.data(), n);
        for (std::size_t c = 0; c < d; ++c) k.sq_dist_accumulate(cols.data() + c * n, X(i, c), acc.data(), n);
        double best_nn = kInf;
        double best_nb = kInf;
        std::size_t nb_index = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (acc[j] < best_nn) best_nn = acc[j];
            if (y[j] < y[i] && acc[j] < best_nb) {
                best_nb = acc[j];
                nb_index = j;
            }
        }
        nn.push_back(std::sqrt(best_nn));
        if (nb_index < n) {
            nb.push_back(std::sqrt(best_nb));
            indegree[nb_index] += 1.0;
        }
    }

    if (nb.size() < 3) return out;
    const auto sd_nb = sample_sd(nb);
    const auto sd_nn = sample_sd(nn);
    if (!sd_nb || !(*sd_nb > 0.0) || !sd_nn) return out;
    const auto cor = pearson(y, indegree);
    if (!cor) return out;
    out.sd_ratio = *sd_nn / *sd_nb;
    out.cor = *cor;
    return out;
}

}  // namespace eotf::ela
