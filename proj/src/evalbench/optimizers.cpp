#include "eotf/evalbench/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "eotf/common/rng.hpp"

namespace eotf::evalbench {

std::string optimizer_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::RandomSearch: return "random_search";
        case OptimizerKind::NelderMead: return "nelder_mead";
        case OptimizerKind::DifferentialEvolution: return "de";
        case OptimizerKind::ParticleSwarm: return "pso";
    }
    return "?";
}

OptimizerKind optimizer_from_name(const std::string& name) {
    for (OptimizerKind k : kPortfolio)
        if (optimizer_name(k) == name) return k;
    throw std::invalid_argument("unknown optimizer '" + name + "' (random_search, nelder_mead, de, pso)");
}

namespace {

using Point = std::vector<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Exhausted {};

class Counter {
public:
    Counter(const Objective& f, std::size_t budget, OptimizerResult& out) : f_(f), budget_(budget), out_(out) {
        out_.best_value = kInf;
        out_.trace.reserve(budget);
    }

    double operator()(const Point& x) {
        if (out_.evaluations == budget_) throw Exhausted{};
        double v = f_(std::span<const double>(x));
        if (!std::isfinite(v)) v = kInf;
        ++out_.evaluations;
        if (out_.best_point.empty() || v < out_.best_value) {
            out_.best_value = v;
            out_.best_point = x;
        }
        out_.trace.push_back(out_.best_value);
        return v;
    }

private:
    const Objective& f_;
    std::size_t budget_;
    OptimizerResult& out_;
};

Point random_point(Rng& rng, std::size_t dim, Box box) {
    Point x(dim);
    for (auto& v : x) v = rng.uniform(box.lower, box.upper);
    return x;
}

void clip(Point& x, Box box) {
    for (auto& v : x) v = std::clamp(v, box.lower, box.upper);
}

[[noreturn]] void random_search(Counter& eval, Rng& rng, std::size_t dim, Box box) {
    for (;;) eval(random_point(rng, dim, box));
}

[[noreturn]] void differential_evolution(Counter& eval, Rng& rng, std::size_t dim, Box box) {
    constexpr double F = 0.5, CR = 0.9;
    const std::size_t np = std::max<std::size_t>(10 * dim, 4);
    std::vector<Point> pop(np);
    std::vector<double> fit(np);
    for (std::size_t i = 0; i < np; ++i) {
        pop[i] = random_point(rng, dim, box);
        fit[i] = eval(pop[i]);
    }
    for (;;) {
        std::vector<Point> next = pop;
        std::vector<double> next_fit = fit;
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r[3];
            for (std::size_t t = 0; t < 3; ++t) {
                do {
                    r[t] = rng.below(np);
                } while (r[t] == i || (t > 0 && r[t] == r[0]) || (t > 1 && r[t] == r[1]));
            }
            const std::size_t jrand = rng.below(dim);
            Point trial = pop[i];
            for (std::size_t j = 0; j < dim; ++j) {
                if (j == jrand || rng.uniform01() < CR) trial[j] = pop[r[0]][j] + F * (pop[r[1]][j] - pop[r[2]][j]);
            }
            clip(trial, box);
            const double ft = eval(trial);
            if (ft <= fit[i]) {
                next[i] = std::move(trial);
                next_fit[i] = ft;
            }
        }
        pop = std::move(next);
        fit = std::move(next_fit);
    }
}

[[noreturn]] void particle_swarm(Counter& eval, Rng& rng, std::size_t dim, Box box) {
    constexpr double w = 0.729, c1 = 1.49445, c2 = 1.49445;
    const double vmax = box.upper - box.lower;
    const std::size_t n = std::max<std::size_t>(10 * dim, 4);
    std::vector<Point> x(n), v(n), pbest(n);
    std::vector<double> pfit(n);
    Point gbest;
    double gfit = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = random_point(rng, dim, box);
        v[i].resize(dim);
        for (auto& vj : v[i]) vj = rng.uniform(-vmax, vmax) * 0.5;
        pbest[i] = x[i];
        pfit[i] = eval(x[i]);
        if (gbest.empty() || pfit[i] < gfit) {
            gfit = pfit[i];
            gbest = x[i];
        }
    }
    for (;;) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                const double r1 = rng.uniform01(), r2 = rng.uniform01();
                double vj = w * v[i][j] + c1 * r1 * (pbest[i][j] - x[i][j]) + c2 * r2 * (gbest[j] - x[i][j]);
                vj = std::clamp(vj, -vmax, vmax);
                double xj = x[i][j] + vj;
                if (xj < box.lower || xj > box.upper) {
                    xj = std::clamp(xj, box.lower, box.upper);
                    vj = 0.0;
                }
                v[i][j] = vj;
                x[i][j] = xj;
            }
            const double fx = eval(x[i]);
            if (fx < pfit[i]) {
                pfit[i] = fx;
                pbest[i] = x[i];
                if (fx < gfit) {
                    gfit = fx;
                    gbest = x[i];
                }
            }
        }
    }
}

// Runs until the simplex collapses, then returns so the caller can restart.
void nelder_mead_once(Counter& eval, Rng& rng, std::size_t dim, Box box) {
    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    const double step = 0.1 * (box.upper - box.lower);
    std::vector<Point> s(dim + 1, random_point(rng, dim, box));
    for (std::size_t i = 0; i < dim; ++i) {
        double& c = s[i + 1][i];
        c = (c + step <= box.upper) ? c + step : c - step;
    }
    std::vector<double> f(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) f[i] = eval(s[i]);
    std::vector<std::size_t> order(dim + 1);

    auto along = [&](const Point& c, const Point& worst, double t) {
        Point p(dim);
        for (std::size_t j = 0; j < dim; ++j) p[j] = c[j] + t * (worst[j] - c[j]);
        clip(p, box);
        return p;
    };

    for (;;) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];

        double spread = 0.0;
        for (std::size_t i = 0; i <= dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) spread = std::max(spread, std::abs(s[i][j] - s[best][j]));
        const double fspread = f[worst] - f[best];
        if (spread < 1e-10 || (std::isfinite(fspread) && fspread <= 1e-14 * (1.0 + std::abs(f[best])))) return;

        Point c(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) c[j] += s[i][j];
        }
        for (auto& cj : c) cj /= static_cast<double>(dim);

        Point xr = along(c, s[worst], -alpha);
        const double fr = eval(xr);
        if (fr < f[best]) {
            Point xe = along(c, s[worst], -gamma);
            const double fe = eval(xe);
            if (fe < fr) {
                s[worst] = std::move(xe);
                f[worst] = fe;
            } else {
                s[worst] = std::move(xr);
                f[worst] = fr;
            }
            continue;
        }
        if (fr < f[second]) {
            s[worst] = std::move(xr);
            f[worst] = fr;
            continue;
        }
        const bool outside = fr < f[worst];
        Point xc = along(c, outside ? xr : s[worst], rho);
        const double fc = eval(xc);
        if (fc < (outside ? fr : f[worst])) {
            s[worst] = std::move(xc);
            f[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < dim; ++j) s[i][j] = s[best][j] + sigma * (s[i][j] - s[best][j]);
            f[i] = eval(s[i]);
        }
    }
}

[[noreturn]] void nelder_mead(Counter& eval, Rng& rng, std::size_t dim, Box box) {
    for (;;) nelder_mead_once(eval, rng, dim, box);
}

}  // namespace

OptimizerResult run_optimizer(OptimizerKind kind, const Objective& f, std::size_t dim, std::size_t budget,
                              std::uint64_t seed, Box box) {
    if (budget == 0) throw std::invalid_argument("optimizer budget must be at least 1");
    if (dim == 0) throw std::invalid_argument("optimizer dimension must be at least 1");
    if (!(box.lower < box.upper)) throw std::invalid_argument("optimizer box is empty");
    OptimizerResult out;
    Counter eval(f, budget, out);
    Rng rng(seed);
    try {
        switch (kind) {
            case OptimizerKind::RandomSearch: random_search(eval, rng, dim, box);
            case OptimizerKind::NelderMead: nelder_mead(eval, rng, dim, box);
            case OptimizerKind::DifferentialEvolution: differential_evolution(eval, rng, dim, box);
            case OptimizerKind::ParticleSwarm: particle_swarm(eval, rng, dim, box);
        }
    } catch (const Exhausted&) {
    }
    return out;
}

}  // namespace eotf::evalbench
