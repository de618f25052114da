#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "eotf/common/matrix.hpp"
#include "eotf/dsl/program.hpp"
#include "eotf/simd/kernels.hpp"

namespace eotf::dsl {

namespace detail {
struct BatchPlan;
}

/// A type-checked program. Immutable; evaluate and evaluate_batch may be
/// called concurrently on the same instance.
class TypedProgram {
public:
    const Program& program() const noexcept { return *program_; }
    std::optional<std::size_t> dim_hint() const noexcept { return program_->dim_hint; }

    ValueType type_of(const Expr& e) const;
    const detail::BatchPlan& plan() const noexcept { return *plan_; }

private:
    friend TypedProgram typecheck(Program program);
    TypedProgram() = default;

    std::shared_ptr<const Program> program_;
    std::shared_ptr<const std::unordered_map<const Expr*, ValueType>> types_;
    std::shared_ptr<const detail::BatchPlan> plan_;
};

/// Annotates every node, requires a scalar result and compiles the batch
/// plan. Throws TypeError naming the offending node.
TypedProgram typecheck(Program program);

/// Convenience: parse then typecheck.
TypedProgram compile(std::string_view source_text);

struct EvalReport {
    std::vector<double> values;
    std::vector<std::uint8_t> finite;
    bool valid = true;
};

/// Tree-walking evaluation at one point. Non-finite results (log of a
/// non-positive value, division by zero, ...) are returned, never thrown.
/// Throws EvalError only when point.size() < dim_hint or the point is empty.
double evaluate(const TypedProgram& program, std::span<const double> point);

/// Evaluates every row of `points` through the compiled plan using the
/// active kernel table. Bit-identical to calling evaluate per row.
EvalReport evaluate_batch(const TypedProgram& program, const Matrix& points);
EvalReport evaluate_batch(const TypedProgram& program, const Matrix& points,
                          const simd::KernelTable& kernels);

}  // namespace eotf::dsl
