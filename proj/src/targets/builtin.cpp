#include <charconv>
#include <cmath>
#include <numbers>

#include "eotf/dsl/typed_program.hpp"
#include "eotf/targets/target_function.hpp"

namespace eotf::targets {

namespace {

using Vec = std::span<const double>;
constexpr double kPi = std::numbers::pi;

double ratio(std::size_t i, std::size_t d) {
    return d == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(d - 1);
}

double penalty(Vec x) {
    double s = 0.0;
    for (double v : x) {
        const double e = std::fabs(v) - 5.0;
        if (e > 0.0) s += e * e;
    }
    return s;
}

// Fixed Householder reflection; symmetric and orthogonal, so it is its own inverse.
std::vector<double> reflect(Vec x) {
    const std::size_t d = x.size();
    double vv = 0.0, vx = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double v = std::cos(static_cast<double>(i) + 1.0) + 0.5 * static_cast<double>(i % 3);
        vv += v * v;
        vx += v * x[i];
    }
    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double v = std::cos(static_cast<double>(i) + 1.0) + 0.5 * static_cast<double>(i % 3);
        out[i] = x[i] - 2.0 * v * vx / vv;
    }
    return out;
}

double sphere(Vec x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double ellipsoid(Vec x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(10.0, 6.0 * ratio(i, x.size())) * x[i] * x[i];
    return s;
}

double rastrigin(Vec x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * kPi * v);
    return s;
}

double buche_rastrigin(Vec x) {
    const std::size_t d = x.size();
    double c = 0.0, q = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double s = std::pow(10.0, 0.5 * ratio(i, d));
        if (x[i] > 0.0 && i % 2 == 0) s *= 10.0;
        const double z = s * x[i];
        c += std::cos(2.0 * kPi * z);
        q += z * z;
    }
    return 10.0 * (static_cast<double>(d) - c) + q + 100.0 * penalty(x);
}

double linear_slope(Vec x) {
    const std::size_t d = x.size();
    double f = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double s = std::pow(10.0, ratio(i, d));
        const double z = x[i] < 5.0 ? x[i] : 5.0;
        f += 5.0 * s - s * z;
    }
    return f;
}

double attractive_sector(Vec x) {
    double s = 0.0;
    for (double v : x) {
        const double z = v - 1.0;
        const double w = z > 0.0 ? 100.0 * z : z;
        s += w * w;
    }
    return std::pow(s, 0.9);
}

double step_ellipsoid(Vec x) {
    const std::size_t d = x.size();
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double z = std::fabs(x[i]) > 0.5 ? std::floor(0.5 + x[i]) : std::floor(0.5 + 10.0 * x[i]) / 10.0;
        s += std::pow(10.0, 2.0 * ratio(i, d)) * z * z;
    }
    return 0.1 * std::max(std::fabs(x[0]) / 1e4, s) + penalty(x);
}

double rosenbrock(Vec x) {
    if (x.size() == 1) return (x[0] - 1.0) * (x[0] - 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i] * x[i] - x[i + 1];
        s += 100.0 * a * a + (x[i] - 1.0) * (x[i] - 1.0);
    }
    return s;
}

double rosenbrock_scale(std::size_t d) { return std::max(1.0, std::sqrt(static_cast<double>(d)) / 8.0); }

double rosenbrock_rotated(Vec x) {
    std::vector<double> z = reflect(x);
    const double c = rosenbrock_scale(x.size());
    for (double& v : z) v = c * v + 0.5;
    return rosenbrock(z);
}

double ellipsoid_rotated(Vec x) { return ellipsoid(reflect(x)); }

double discus(Vec x) {
    double s = 1e6 * x[0] * x[0];
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
    return s;
}

double bent_cigar(Vec x) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
    return x[0] * x[0] + 1e6 * s;
}

double sharp_ridge(Vec x) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
    return x[0] * x[0] + 100.0 * std::sqrt(s);
}

double different_powers(Vec x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::fabs(x[i]), 2.0 + 4.0 * ratio(i, x.size()));
    return std::sqrt(s);
}

double rastrigin_rotated(Vec x) { return rastrigin(reflect(x)); }

double weierstrass(Vec x) {
    double f0 = 0.0;
    for (int k = 0; k < 12; ++k) f0 += std::pow(0.5, k) * std::cos(kPi * std::pow(3.0, k));
    double s = 0.0;
    for (double v : x)
        for (int k = 0; k < 12; ++k) s += std::pow(0.5, k) * std::cos(2.0 * kPi * std::pow(3.0, k) * (v + 0.5));
    const double m = s / static_cast<double>(x.size()) - f0;
    return 10.0 * m * m * m + 10.0 * penalty(x) / static_cast<double>(x.size());
}

double schaffers(Vec x, double cond) {
    const std::size_t d = x.size();
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = std::pow(cond, 0.5 * ratio(i, d)) * x[i];
    if (d == 1) {
        const double s = std::fabs(z[0]);
        const double t = std::sin(50.0 * std::pow(s, 0.2));
        const double v = std::sqrt(s) + std::sqrt(s) * t * t;
        return v * v + 10.0 * penalty(x);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const double s = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
        const double t = std::sin(50.0 * std::pow(s, 0.2));
        acc += std::sqrt(s) + std::sqrt(s) * t * t;
    }
    const double m = acc / static_cast<double>(d - 1);
    return m * m + 10.0 * penalty(x);
}

double schaffers_f7(Vec x) { return schaffers(x, 10.0); }
double schaffers_f7_ill(Vec x) { return schaffers(x, 1000.0); }

double griewank_rosenbrock(Vec x) {
    const std::size_t d = x.size();
    const double c = rosenbrock_scale(d);
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = c * x[i] + 0.5;
    std::vector<double> terms;
    if (d == 1) {
        terms.push_back((z[0] - 1.0) * (z[0] - 1.0));
    } else {
        for (std::size_t i = 0; i + 1 < d; ++i) {
            const double a = z[i] * z[i] - z[i + 1];
            terms.push_back(100.0 * a * a + (z[i] - 1.0) * (z[i] - 1.0));
        }
    }
    double acc = 0.0;
    for (double s : terms) acc += s / 4000.0 - std::cos(s);
    return 10.0 * acc / static_cast<double>(terms.size()) + 10.0;
}

constexpr double kSchwefelOpt = 4.209687462275036;

double schwefel(Vec x) {
    double s = 0.0;
    for (double v : x) {
        const double z = 100.0 * v;
        s += z * std::sin(std::sqrt(std::fabs(z)));
    }
    return 418.9828872724338 * static_cast<double>(x.size()) - s;
}

double ackley(Vec x) {
    const double d = static_cast<double>(x.size());
    double q = 0.0, c = 0.0;
    for (double v : x) {
        q += v * v;
        c += std::cos(2.0 * kPi * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(q / d)) - std::exp(c / d) + 20.0 + std::numbers::e;
}

double griewank(Vec x) {
    double s = 0.0, p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = 120.0 * x[i];
        s += z * z / 4000.0;
        p *= std::cos(z / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + s - p;
}

double katsuura(Vec x) {
    const std::size_t d = x.size();
    const double dd = static_cast<double>(d);
    double prod = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 1; j <= 32; ++j) {
            const double t = std::ldexp(x[i], j);
            s += std::fabs(t - std::nearbyint(t)) / std::ldexp(1.0, j);
        }
        prod *= std::pow(1.0 + static_cast<double>(i + 1) * s, 10.0 / std::pow(dd, 1.2));
    }
    return 10.0 / (dd * dd) * prod - 10.0 / (dd * dd) + penalty(x);
}

constexpr double kLunacekMu0 = 2.5;

double lunacek_bi_rastrigin(Vec x) {
    const std::size_t d = x.size();
    const double dd = static_cast<double>(d);
    const double s = 1.0 - 1.0 / (2.0 * std::sqrt(dd + 20.0) - 8.2);
    const double mu1 = -std::sqrt((kLunacekMu0 * kLunacekMu0 - 1.0) / s);
    double a = 0.0, b = 0.0, c = 0.0;
    for (double v : x) {
        a += (v - kLunacekMu0) * (v - kLunacekMu0);
        b += (v - mu1) * (v - mu1);
        c += std::cos(2.0 * kPi * (v - kLunacekMu0));
    }
    return std::min(a, dd + s * b) + 10.0 * (dd - c) + 1e4 * penalty(x);
}

struct Entry {
    const char* name;
    double (*f)(Vec);
    std::vector<double> (*optimum)(std::size_t);
};

std::vector<double> at_zero(std::size_t d) { return std::vector<double>(d, 0.0); }
std::vector<double> at_one(std::size_t d) { return std::vector<double>(d, 1.0); }
std::vector<double> at_five(std::size_t d) { return std::vector<double>(d, 5.0); }
std::vector<double> at_schwefel(std::size_t d) { return std::vector<double>(d, kSchwefelOpt); }
std::vector<double> at_lunacek(std::size_t d) { return std::vector<double>(d, kLunacekMu0); }
std::vector<double> at_griewank_rosenbrock(std::size_t d) {
    return std::vector<double>(d, 0.5 / rosenbrock_scale(d));
}
std::vector<double> at_rosenbrock_rotated(std::size_t d) {
    return reflect(std::vector<double>(d, 0.5 / rosenbrock_scale(d)));
}

const Entry kRegistry[kClassicCount] = {
    {"sphere", sphere, at_zero},
    {"ellipsoid", ellipsoid, at_zero},
    {"rastrigin", rastrigin, at_zero},
    {"buche_rastrigin", buche_rastrigin, at_zero},
    {"linear_slope", linear_slope, at_five},
    {"attractive_sector", attractive_sector, at_one},
    {"step_ellipsoid", step_ellipsoid, at_zero},
    {"rosenbrock", rosenbrock, at_one},
    {"rosenbrock_rotated", rosenbrock_rotated, at_rosenbrock_rotated},
    {"ellipsoid_rotated", ellipsoid_rotated, at_zero},
    {"discus", discus, at_zero},
    {"bent_cigar", bent_cigar, at_zero},
    {"sharp_ridge", sharp_ridge, at_zero},
    {"different_powers", different_powers, at_zero},
    {"rastrigin_rotated", rastrigin_rotated, at_zero},
    {"weierstrass", weierstrass, at_zero},
    {"schaffers_f7", schaffers_f7, at_zero},
    {"schaffers_f7_ill", schaffers_f7_ill, at_zero},
    {"griewank_rosenbrock", griewank_rosenbrock, at_griewank_rosenbrock},
    {"schwefel", schwefel, at_schwefel},
    {"ackley", ackley, at_zero},
    {"griewank", griewank, at_zero},
    {"katsuura", katsuura, at_zero},
    {"lunacek_bi_rastrigin", lunacek_bi_rastrigin, at_lunacek},
};

std::size_t lookup(const std::string& id) {
    std::string key = id;
    if (key.rfind("classic/", 0) == 0) key = key.substr(8);
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), k);
    if (ec == std::errc{} && ptr == key.data() + key.size()) {
        if (k >= 1 && k <= kClassicCount) return k - 1;
        throw UnknownTarget("unknown builtin '" + id + "' (ids run from classic/1 to classic/24)");
    }
    for (std::size_t i = 0; i < kClassicCount; ++i)
        if (key == kRegistry[i].name) return i;
    throw UnknownTarget("unknown builtin '" + id + "'");
}

}  // namespace

TargetFunction::TargetFunction(std::string id, std::size_t dim, Pointwise f, std::optional<double> known_min,
                               Json metadata, Batch batch)
    : id_(std::move(id)),
      dim_(dim),
      f_(std::move(f)),
      known_min_(known_min),
      metadata_(std::move(metadata)),
      batch_(std::move(batch)) {}

std::vector<double> TargetFunction::evaluate(const Matrix& points) const {
    if (points.cols() != dim_) throw std::invalid_argument("target " + id_ + ": point dimension mismatch");
    if (batch_) return batch_(points);
    std::vector<double> out(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) out[i] = f_(points.row(i));
    return out;
}

ela::BatchObjective TargetFunction::objective() const {
    return [self = *this](const Matrix& points) { return self.evaluate(points); };
}

const std::vector<std::string>& classic_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : kRegistry) v.emplace_back(e.name);
        return v;
    }();
    return names;
}

TargetFunction builtin(const std::string& id, std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("builtin: dim must be positive");
    const std::size_t k = lookup(id);
    const Entry& e = kRegistry[k];
    const std::vector<double> opt = e.optimum(dim);
    const std::string qualified = "classic/" + std::to_string(k + 1);
    Json meta{{"kind", "builtin"}, {"id", qualified}, {"name", e.name}, {"dim", dim}};
    auto f = e.f;
    return TargetFunction(qualified, dim, [f](std::span<const double> x) { return f(x); }, f(opt), std::move(meta));
}

std::vector<double> builtin_optimum(const std::string& id, std::size_t dim) {
    return kRegistry[lookup(id)].optimum(dim);
}

std::vector<TargetFunction> classic_suite(std::size_t dim) {
    std::vector<TargetFunction> out;
    for (std::size_t k = 1; k <= kClassicCount; ++k) out.push_back(builtin("classic/" + std::to_string(k), dim));
    return out;
}

TargetFunction from_program(const std::string& id, const dsl::TypedProgram& program, std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("target dim must be positive");
    if (program.dim_hint() && *program.dim_hint() > dim) {
        throw std::invalid_argument("program " + id + " indexes x[" + std::to_string(*program.dim_hint() - 1) +
                                    "] but the target dimension is " + std::to_string(dim));
    }
    Json meta{{"kind", "dsl"}, {"id", id}, {"dim", dim}};
    return TargetFunction(
        id, dim, [program](std::span<const double> x) { return dsl::evaluate(program, x); }, std::nullopt,
        std::move(meta), [program](const Matrix& m) { return dsl::evaluate_batch(program, m).values; });
}

std::vector<TargetFunction> named_suite(const std::string& name, std::size_t dim) {
    if (name == "classic") return classic_suite(dim);
    if (name == "ring") return ring_suite(classic_suite(dim), kDefaultAlpha);
    throw UnknownTarget("unknown suite '" + name + "' (expected classic or ring)");
}

}  // namespace eotf::targets
