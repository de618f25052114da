#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "eotf/dsl/program.hpp"

namespace eotf::dsl::detail {

enum class OpCode { Fill, Index, Negate, Elementwise, Binary, Reduce, MinMax2 };

/// One register-to-register step. Register 0 holds the input points in
/// coordinate-major order; scalar registers hold one value per point and
/// vector registers D values per point.
struct Instr {
    OpCode code = OpCode::Fill;
    std::uint32_t dst = 0;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    double imm = 0.0;
    std::size_t index = 0;
    Function fn = Function::Sin;
    BinaryOp op = BinaryOp::Add;
};

struct BatchPlan {
    std::vector<Instr> code;
    std::vector<ValueType> reg_types;
    std::uint32_t result = 0;
};

BatchPlan compile_plan(const Program& program, const std::unordered_map<const Expr*, ValueType>& types);

}  // namespace eotf::dsl::detail
