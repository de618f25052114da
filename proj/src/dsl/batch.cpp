#include <cmath>
#include <string>

#include "batch_plan.hpp"
#include "eotf/dsl/typed_program.hpp"

namespace eotf::dsl {

namespace detail {

namespace {

class PlanBuilder {
public:
    PlanBuilder(const Program& p, const std::unordered_map<const Expr*, ValueType>& types)
        : program_(p), types_(types) {
        plan_.reg_types.push_back(ValueType::Vector);
    }

    BatchPlan run() {
        for (const auto& a : program_.body) names_[a.name] = emit(*a.value);
        plan_.result = emit(*program_.result);
        return std::move(plan_);
    }

private:
    std::uint32_t new_reg(ValueType t) {
        plan_.reg_types.push_back(t);
        return static_cast<std::uint32_t>(plan_.reg_types.size() - 1);
    }

    std::uint32_t emit(const Expr& e) {
        if (auto it = memo_.find(&e); it != memo_.end()) return it->second;
        const std::uint32_t r = emit_new(e);
        memo_.emplace(&e, r);
        return r;
    }

    std::uint32_t emit_new(const Expr& e) {
        using K = Expr::Kind;
        if (e.kind == K::VarX) return 0;
        if (e.kind == K::NameRef) return names_.at(e.name);

        Instr ins;
        std::vector<std::uint32_t> operands;
        for (const auto& a : e.args) operands.push_back(emit(*a));
        switch (e.kind) {
            case K::Literal:
                ins.code = OpCode::Fill;
                ins.imm = e.literal;
                break;
            case K::Index:
                ins.code = OpCode::Index;
                ins.index = e.index;
                break;
            case K::Negate:
                ins.code = OpCode::Negate;
                break;
            case K::Binary:
                ins.code = OpCode::Binary;
                ins.op = e.op;
                break;
            case K::Call:
                ins.fn = e.fn;
                if (is_elementwise(e.fn)) {
                    ins.code = OpCode::Elementwise;
                } else if (operands.size() == 2) {
                    ins.code = OpCode::MinMax2;
                } else {
                    ins.code = OpCode::Reduce;
                }
                break;
            default:
                break;
        }
        if (!operands.empty()) ins.a = operands[0];
        if (operands.size() > 1) ins.b = operands[1];
        ins.dst = new_reg(types_.at(&e));
        plan_.code.push_back(ins);
        return ins.dst;
    }

    const Program& program_;
    const std::unordered_map<const Expr*, ValueType>& types_;
    std::unordered_map<std::string, std::uint32_t> names_;
    std::unordered_map<const Expr*, std::uint32_t> memo_;
    BatchPlan plan_;
};

}  // namespace

BatchPlan compile_plan(const Program& program, const std::unordered_map<const Expr*, ValueType>& types) {
    return PlanBuilder(program, types).run();
}

}  // namespace detail

namespace {

using detail::Instr;
using detail::OpCode;

constexpr std::size_t kBlock = 256;

using BinaryKernel = void (*)(const double*, const double*, double*, std::size_t);

class Executor {
public:
    Executor(const detail::BatchPlan& plan, const simd::KernelTable& k, std::size_t dim)
        : plan_(plan), k_(k), dim_(dim), regs_(plan.reg_types.size()) {}

    void run_block(const Matrix& points, std::size_t first, std::size_t count, double* out) {
        block_ = count;
        for (std::size_t r = 0; r < regs_.size(); ++r) regs_[r].resize(width(r));
        double* x = regs_[0].data();
        for (std::size_t j = 0; j < count; ++j) {
            const auto row = points.row(first + j);
            for (std::size_t c = 0; c < dim_; ++c) x[c * count + j] = row[c];
        }
        for (const Instr& ins : plan_.code) step(ins);
        const auto& res = regs_[plan_.result];
        for (std::size_t j = 0; j < count; ++j) out[j] = res[j];
    }

private:
    bool is_vec(std::uint32_t r) const { return plan_.reg_types[r] == ValueType::Vector; }
    std::size_t width(std::uint32_t r) const { return is_vec(r) ? dim_ * block_ : block_; }
    std::size_t width(std::size_t r) const { return width(static_cast<std::uint32_t>(r)); }

    BinaryKernel kernel_for(BinaryOp op) const {
        switch (op) {
            case BinaryOp::Add: return k_.add;
            case BinaryOp::Sub: return k_.sub;
            case BinaryOp::Mul: return k_.mul;
            case BinaryOp::Div: return k_.div;
            case BinaryOp::Pow: return &pow_kernel;
        }
        return nullptr;
    }

    static void pow_kernel(const double* a, const double* b, double* out, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(a[i], b[i]);
    }

    void step(const Instr& ins) {
        double* dst = regs_[ins.dst].data();
        const double* a = regs_[ins.a].data();
        const double* b = regs_[ins.b].data();
        const std::size_t n = block_;
        switch (ins.code) {
            case OpCode::Fill:
                k_.fill(ins.imm, dst, n);
                break;
            case OpCode::Index:
                for (std::size_t j = 0; j < n; ++j) dst[j] = a[ins.index * n + j];
                break;
            case OpCode::Negate:
                k_.neg(a, dst, width(ins.dst));
                break;
            case OpCode::Elementwise:
                elementwise(ins.fn, a, dst, width(ins.dst));
                break;
            case OpCode::Binary:
                binary(kernel_for(ins.op), ins, a, b, dst);
                break;
            case OpCode::MinMax2:
                (ins.fn == Function::Min ? k_.min : k_.max)(a, b, dst, n);
                break;
            case OpCode::Reduce:
                reduce(ins, a, dst);
                break;
        }
    }

    void elementwise(Function fn, const double* a, double* dst, std::size_t n) {
        double (*f)(double) = nullptr;
        switch (fn) {
            case Function::Abs: k_.abs(a, dst, n); return;
            case Function::Sqrt: k_.sqrt(a, dst, n); return;
            case Function::Floor: k_.floor(a, dst, n); return;
            case Function::Sin: f = [](double v) { return std::sin(v); }; break;
            case Function::Cos: f = [](double v) { return std::cos(v); }; break;
            case Function::Tan: f = [](double v) { return std::tan(v); }; break;
            case Function::Tanh: f = [](double v) { return std::tanh(v); }; break;
            case Function::Exp: f = [](double v) { return std::exp(v); }; break;
            case Function::Log: f = [](double v) { return std::log(v); }; break;
            default: return;
        }
        for (std::size_t i = 0; i < n; ++i) dst[i] = f(a[i]);
    }

    void binary(BinaryKernel kern, const Instr& ins, const double* a, const double* b, double* dst) {
        const bool va = is_vec(ins.a);
        const bool vb = is_vec(ins.b);
        const std::size_t n = block_;
        if (va == vb) {
            kern(a, b, dst, width(ins.dst));
        } else if (va) {
            for (std::size_t c = 0; c < dim_; ++c) kern(a + c * n, b, dst + c * n, n);
        } else {
            for (std::size_t c = 0; c < dim_; ++c) kern(a, b + c * n, dst + c * n, n);
        }
    }

    void reduce(const Instr& ins, const double* a, double* dst) {
        const std::size_t n = block_;
        if (!is_vec(ins.a)) {
            if (ins.fn == Function::Norm2) {
                k_.abs(a, dst, n);
            } else {
                for (std::size_t j = 0; j < n; ++j) dst[j] = a[j];
            }
            return;
        }
        switch (ins.fn) {
            case Function::Sum:
            case Function::Mean:
                k_.fill(0.0, dst, n);
                for (std::size_t c = 0; c < dim_; ++c) k_.add(dst, a + c * n, dst, n);
                if (ins.fn == Function::Mean) {
                    scratch_.resize(n);
                    k_.fill(static_cast<double>(dim_), scratch_.data(), n);
                    k_.div(dst, scratch_.data(), dst, n);
                }
                break;
            case Function::Prod:
                k_.fill(1.0, dst, n);
                for (std::size_t c = 0; c < dim_; ++c) k_.mul(dst, a + c * n, dst, n);
                break;
            case Function::Norm2:
                scratch_.resize(n);
                k_.fill(0.0, dst, n);
                for (std::size_t c = 0; c < dim_; ++c) {
                    k_.mul(a + c * n, a + c * n, scratch_.data(), n);
                    k_.add(dst, scratch_.data(), dst, n);
                }
                k_.sqrt(dst, dst, n);
                break;
            case Function::Min:
            case Function::Max: {
                auto kern = ins.fn == Function::Min ? k_.min : k_.max;
                for (std::size_t j = 0; j < n; ++j) dst[j] = a[j];
                for (std::size_t c = 1; c < dim_; ++c) kern(dst, a + c * n, dst, n);
                break;
            }
            default:
                break;
        }
    }

    const detail::BatchPlan& plan_;
    const simd::KernelTable& k_;
    std::size_t dim_;
    std::size_t block_ = 0;
    std::vector<std::vector<double>> regs_;
    std::vector<double> scratch_;
};

}  // namespace

EvalReport evaluate_batch(const TypedProgram& program, const Matrix& points,
                          const simd::KernelTable& kernels) {
    const std::size_t dim = points.cols();
    if (dim == 0) throw EvalError("cannot evaluate at zero-dimensional points");
    if (auto hint = program.dim_hint(); hint && dim < *hint) {
        throw EvalError("program indexes coordinate " + std::to_string(*hint - 1) +
                        " but the points have dimension " + std::to_string(dim));
    }
    EvalReport report;
    report.values.resize(points.rows());
    report.finite.resize(points.rows());
    Executor exec(program.plan(), kernels, dim);
    for (std::size_t first = 0; first < points.rows(); first += kBlock) {
        const std::size_t count = std::min(kBlock, points.rows() - first);
        exec.run_block(points, first, count, report.values.data() + first);
    }
    for (std::size_t i = 0; i < points.rows(); ++i) {
        report.finite[i] = std::isfinite(report.values[i]) ? 1 : 0;
        if (!report.finite[i]) report.valid = false;
    }
    return report;
}

EvalReport evaluate_batch(const TypedProgram& program, const Matrix& points) {
    return evaluate_batch(program, points, simd::active_kernels());
}

}  // namespace eotf::dsl
