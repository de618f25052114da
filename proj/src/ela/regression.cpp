#include <cmath>
#include <stdexcept>
#include <vector>

#include "eotf/ela/features.hpp"
#include "eotf/simd/kernels.hpp"

namespace eotf::ela {

namespace {

constexpr double kPivotTolerance = 1e-10;

bool has_interactions(RegressionModel m) {
    return m == RegressionModel::LinInteract || m == RegressionModel::QuadInteract;
}

bool has_squares(RegressionModel m) {
    return m == RegressionModel::QuadSimple || m == RegressionModel::QuadInteract;
}

// Row layout: 1, x_1..x_D, [x_i x_j for i < j], [x_i^2], y
void fill_design_row(std::span<const double> x, double y, RegressionModel model, double* out) {
    std::size_t c = 0;
    out[c++] = 1.0;
    for (double v : x) out[c++] = v;
    if (has_interactions(model)) {
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = i + 1; j < x.size(); ++j) out[c++] = x[i] * x[j];
    }
    if (has_squares(model)) {
        for (double v : x) out[c++] = v * v;
    }
    out[c] = y;
}

struct Fit {
    double sse = 0.0;
    double sst = 0.0;
    std::size_t n = 0;
    std::size_t p = 0;
};

std::optional<Fit> fit(const Matrix& X, std::span<const double> y, RegressionModel model) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    if (y.size() != n) throw std::invalid_argument("regression: sample and values differ in length");
    const std::size_t p = regressor_count(model, d);
    if (n <= p + 1) return std::nullopt;

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double sst = 0.0;
    bool constant = true;
    for (double v : y) {
        sst += (v - mean) * (v - mean);
        constant = constant && v == y[0];
    }
    if (constant || sst == 0.0) return std::nullopt;

    const std::size_t q = p + 1;  // with intercept
    const std::size_t w = q + 1;  // plus y
    std::vector<double> z(n * w);
    for (std::size_t i = 0; i < n; ++i) fill_design_row(X.row(i), y[i], model, z.data() + i * w);
    std::vector<double> g(w * w, 0.0);
    simd::active_kernels().gram_accumulate(z.data(), n, w, g.data());

    // Jacobi scaling then Cholesky of the q x q block.
    std::vector<double> s(q);
    for (std::size_t i = 0; i < q; ++i) {
        const double gii = g[i * w + i];
        if (!(gii > 0.0)) return std::nullopt;
        s[i] = 1.0 / std::sqrt(gii);
    }
    std::vector<double> L(q * q, 0.0);
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = g[i * w + j] * s[i] * s[j];
            for (std::size_t k = 0; k < j; ++k) acc -= L[i * q + k] * L[j * q + k];
            if (i == j) {
                if (!(acc > kPivotTolerance)) return std::nullopt;
                L[i * q + i] = std::sqrt(acc);
            } else {
                L[i * q + j] = acc / L[j * q + j];
            }
        }
    }
    std::vector<double> u(q);
    for (std::size_t i = 0; i < q; ++i) {
        double acc = g[i * w + q] * s[i];
        for (std::size_t k = 0; k < i; ++k) acc -= L[i * q + k] * u[k];
        u[i] = acc / L[i * q + i];
    }
    for (std::size_t i = q; i-- > 0;) {
        double acc = u[i];
        for (std::size_t k = i + 1; k < q; ++k) acc -= L[k * q + i] * u[k];
        u[i] = acc / L[i * q + i];
    }
    for (std::size_t i = 0; i < q; ++i) u[i] *= s[i];

    double sse = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = z.data() + r * w;
        double pred = 0.0;
        for (std::size_t k = 0; k < q; ++k) pred += row[k] * u[k];
        const double e = row[q] - pred;
        sse += e * e;
    }
    if (!std::isfinite(sse)) return std::nullopt;
    return Fit{sse, sst, n, p};
}

}  // namespace

std::size_t regressor_count(RegressionModel model, std::size_t dim) noexcept {
    std::size_t p = dim;
    if (has_interactions(model)) p += dim * (dim - (dim > 0 ? 1 : 0)) / 2;
    if (has_squares(model)) p += dim;
    return p;
}

std::optional<double> r_squared(const Matrix& X, std::span<const double> y, RegressionModel model) {
    const auto f = fit(X, y, model);
    if (!f) return std::nullopt;
    return 1.0 - f->sse / f->sst;
}

std::optional<double> adj_r2(const Matrix& X, std::span<const double> y, RegressionModel model) {
    const auto f = fit(X, y, model);
    if (!f) return std::nullopt;
    const double n = static_cast<double>(f->n);
    const double p = static_cast<double>(f->p);
    return 1.0 - (f->sse / f->sst) * (n - 1.0) / (n - p - 1.0);
}

}  // namespace eotf::ela
