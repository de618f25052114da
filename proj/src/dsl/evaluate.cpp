#include <cmath>
#include <unordered_map>

#include "eotf/dsl/typed_program.hpp"
#include "eotf/simd/kernels.hpp"

namespace eotf::dsl {

namespace {

struct Value {
    bool vector = false;
    double scalar = 0.0;
    std::vector<double> elems;
};

double apply_elementwise(Function fn, double v) {
    switch (fn) {
        case Function::Sin: return std::sin(v);
        case Function::Cos: return std::cos(v);
        case Function::Tan: return std::tan(v);
        case Function::Tanh: return std::tanh(v);
        case Function::Exp: return std::exp(v);
        case Function::Log: return std::log(v);
        case Function::Sqrt: return std::sqrt(v);
        case Function::Abs: return std::fabs(v);
        case Function::Floor: return std::floor(v);
        default: return v;
    }
}

double apply_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return a / b;
        case BinaryOp::Pow: return std::pow(a, b);
    }
    return 0.0;
}

double reduce(Function fn, const Value& v) {
    if (!v.vector) {
        return fn == Function::Norm2 ? std::fabs(v.scalar) : v.scalar;
    }
    const auto& xs = v.elems;
    switch (fn) {
        case Function::Sum: {
            double acc = 0.0;
            for (double x : xs) acc = acc + x;
            return acc;
        }
        case Function::Prod: {
            double acc = 1.0;
            for (double x : xs) acc = acc * x;
            return acc;
        }
        case Function::Mean: {
            double acc = 0.0;
            for (double x : xs) acc = acc + x;
            return acc / static_cast<double>(xs.size());
        }
        case Function::Norm2: {
            double acc = 0.0;
            for (double x : xs) acc = acc + x * x;
            return std::sqrt(acc);
        }
        case Function::Min: {
            double acc = xs[0];
            for (std::size_t k = 1; k < xs.size(); ++k) acc = simd::ops::min(acc, xs[k]);
            return acc;
        }
        case Function::Max: {
            double acc = xs[0];
            for (std::size_t k = 1; k < xs.size(); ++k) acc = simd::ops::max(acc, xs[k]);
            return acc;
        }
        default: return 0.0;
    }
}

class Interpreter {
public:
    Interpreter(const Program& p, std::span<const double> point) : program_(p), point_(point) {}

    double run() {
        for (const auto& a : program_.body) env_[a.name] = eval(*a.value);
        return eval(*program_.result).scalar;
    }

private:
    Value eval(const Expr& e) {
        using K = Expr::Kind;
        switch (e.kind) {
            case K::Literal: return {false, e.literal, {}};
            case K::VarX: return {true, 0.0, {point_.begin(), point_.end()}};
            case K::Index: {
                const Value base = eval(*e.args[0]);
                return {false, base.elems.at(e.index), {}};
            }
            case K::NameRef: return env_.at(e.name);
            case K::Negate: {
                Value v = eval(*e.args[0]);
                if (v.vector) {
                    for (double& x : v.elems) x = -x;
                } else {
                    v.scalar = -v.scalar;
                }
                return v;
            }
            case K::Binary: {
                const Value l = eval(*e.args[0]);
                const Value r = eval(*e.args[1]);
                if (!l.vector && !r.vector) return {false, apply_binary(e.op, l.scalar, r.scalar), {}};
                const std::size_t n = l.vector ? l.elems.size() : r.elems.size();
                Value out{true, 0.0, std::vector<double>(n)};
                for (std::size_t k = 0; k < n; ++k) {
                    const double a = l.vector ? l.elems[k] : l.scalar;
                    const double b = r.vector ? r.elems[k] : r.scalar;
                    out.elems[k] = apply_binary(e.op, a, b);
                }
                return out;
            }
            case K::Call: {
                if (is_elementwise(e.fn)) {
                    Value v = eval(*e.args[0]);
                    if (v.vector) {
                        for (double& x : v.elems) x = apply_elementwise(e.fn, x);
                    } else {
                        v.scalar = apply_elementwise(e.fn, v.scalar);
                    }
                    return v;
                }
                if (e.args.size() == 2) {
                    const double a = eval(*e.args[0]).scalar;
                    const double b = eval(*e.args[1]).scalar;
                    return {false, e.fn == Function::Min ? simd::ops::min(a, b) : simd::ops::max(a, b), {}};
                }
                return {false, reduce(e.fn, eval(*e.args[0])), {}};
            }
        }
        return {};
    }

    const Program& program_;
    std::span<const double> point_;
    std::unordered_map<std::string, Value> env_;
};

}  // namespace

double evaluate(const TypedProgram& program, std::span<const double> point) {
    if (point.empty()) throw EvalError("cannot evaluate at a zero-dimensional point");
    if (auto hint = program.dim_hint(); hint && point.size() < *hint) {
        throw EvalError("program indexes coordinate " + std::to_string(*hint - 1) + " but the point has dimension " +
                        std::to_string(point.size()));
    }
    return Interpreter(program.program(), point).run();
}

}  // namespace eotf::dsl
