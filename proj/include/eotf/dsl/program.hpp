#pragma once

// Abstract syntax for candidate functions: a straight-line sequence of
// single assignments followed by a scalar return expression.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eotf::dsl {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

enum class Function { Sin, Cos, Tan, Tanh, Exp, Log, Sqrt, Abs, Floor, Min, Max, Sum, Prod, Mean, Norm2 };

enum class ValueType { Scalar, Vector };

struct SourceLocation {
    int line = 0;
    int column = 0;
};

/// Canonical (dsl dialect) spelling of a whitelisted function.
std::string_view function_name(Function fn) noexcept;
std::optional<Function> function_from_name(std::string_view name) noexcept;

/// Elementwise functions map scalars to scalars and vectors to vectors.
bool is_elementwise(Function fn) noexcept;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Literal, VarX, Index, NameRef, Negate, Binary, Call };

    Kind kind = Kind::Literal;
    SourceLocation loc;
    double literal = 0.0;       // Literal
    std::size_t index = 0;      // Index: coordinate
    std::string name;           // NameRef
    BinaryOp op = BinaryOp::Add;
    Function fn = Function::Sin;
    std::vector<ExprPtr> args;  // Index: {base}; Negate: {operand}; Binary: {lhs, rhs}; Call: arguments

    static ExprPtr make_literal(double v, SourceLocation loc = {});
    static ExprPtr make_var_x(SourceLocation loc = {});
    static ExprPtr make_index(ExprPtr base, std::size_t index, SourceLocation loc = {});
    static ExprPtr make_name(std::string name, SourceLocation loc = {});
    static ExprPtr make_negate(ExprPtr operand, SourceLocation loc = {});
    static ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceLocation loc = {});
    static ExprPtr make_call(Function fn, std::vector<ExprPtr> args, SourceLocation loc = {});
};

struct Assignment {
    std::string name;
    ExprPtr value;
    SourceLocation loc;
};

struct Program {
    std::string name = "problem";
    std::string parameter = "x";
    /// Highest coordinate index used + 1; absent when only whole-vector
    /// operations appear.
    std::optional<std::size_t> dim_hint;
    std::vector<Assignment> body;
    ExprPtr result;
    std::string docstring;
    std::string source_text;
};

class ParseError : public std::runtime_error {
public:
    ParseError(SourceLocation loc, std::string reason);
    SourceLocation location() const noexcept { return loc_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    SourceLocation loc_;
    std::string reason_;
};

class TypeError : public std::runtime_error {
public:
    TypeError(SourceLocation loc, std::string reason);
    SourceLocation location() const noexcept { return loc_; }

private:
    SourceLocation loc_;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the contents of one code block (numpy-text or dsl dialect).
Program parse(std::string_view source_text);

/// Recomputes dim_hint from the index nodes reachable from the program.
std::optional<std::size_t> compute_dim_hint(const Program& program);

}  // namespace eotf::dsl
