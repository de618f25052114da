#include <charconv>
#include <cmath>

#include "eotf/dsl/canonical.hpp"

namespace eotf::dsl {

namespace {

// Python precedence levels, loosest first.
enum Level { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

std::string shortest(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

class Renderer {
public:
    Renderer(Dialect d, std::string parameter) : dialect_(d), parameter_(std::move(parameter)) {}

    std::string expr(const Expr& e) { return emit(e).first; }

private:
    std::pair<std::string, int> emit(const Expr& e) {
        using K = Expr::Kind;
        switch (e.kind) {
            case K::Literal: return {shortest(e.literal), std::signbit(e.literal) ? kUnary : kAtom};
            case K::VarX: return {parameter_, kAtom};
            case K::NameRef: return {e.name, kAtom};
            case K::Index: return {emit(*e.args[0]).first + "[" + std::to_string(e.index) + "]", kAtom};
            case K::Negate: {
                auto [s, lvl] = emit(*e.args[0]);
                return {"-" + wrap(s, lvl < kUnary), kUnary};
            }
            case K::Binary: return binary(e);
            case K::Call: return {call(e), kAtom};
        }
        return {"", kAtom};
    }

    std::pair<std::string, int> binary(const Expr& e) {
        auto [l, ll] = emit(*e.args[0]);
        auto [r, rl] = emit(*e.args[1]);
        switch (e.op) {
            case BinaryOp::Add:
            case BinaryOp::Sub:
                return {wrap(l, ll < kSum) + (e.op == BinaryOp::Add ? " + " : " - ") + wrap(r, rl <= kSum), kSum};
            case BinaryOp::Mul:
            case BinaryOp::Div:
                return {wrap(l, ll < kProduct) + (e.op == BinaryOp::Mul ? " * " : " / ") + wrap(r, rl <= kProduct),
                        kProduct};
            case BinaryOp::Pow:
                // Left operand binds tighter than unary minus; right may be unary.
                return {wrap(l, ll <= kPower) + " ** " + wrap(r, rl < kUnary), kPower};
        }
        return {"", kAtom};
    }

    std::string call(const Expr& e) {
        std::string name;
        if (dialect_ == Dialect::Dsl) {
            name = std::string(function_name(e.fn));
        } else if (e.fn == Function::Norm2) {
            name = "np.linalg.norm";
        } else if ((e.fn == Function::Min || e.fn == Function::Max) && e.args.size() == 2) {
            name = std::string(function_name(e.fn));
        } else {
            name = "np." + std::string(function_name(e.fn));
        }
        name += '(';
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) name += ", ";
            name += expr(*e.args[i]);
        }
        return name + ')';
    }

    static std::string wrap(const std::string& s, bool paren) { return paren ? "(" + s + ")" : s; }

    Dialect dialect_;
    std::string parameter_;
};

std::string docstring_block(const std::string& doc) {
    std::string out = "    \"\"\"";
    for (char c : doc) {
        if (c == '\n') {
            out += "\n    ";
        } else {
            out += c;
        }
    }
    return out + "\"\"\"\n";
}

}  // namespace

std::string render(const Program& program, Dialect dialect) {
    Renderer r(dialect, program.parameter);
    std::string out;
    if (dialect == Dialect::NumpyText) {
        out += "import numpy as np\n\n\n";
        out += "def " + program.name + "(" + program.parameter + ": np.ndarray) -> float:\n";
    } else {
        out += "def " + program.name + "(" + program.parameter + "):\n";
    }
    if (!program.docstring.empty() && program.docstring.find("\"\"\"") == std::string::npos) {
        out += docstring_block(program.docstring);
    }
    for (const auto& a : program.body) out += "    " + a.name + " = " + r.expr(*a.value) + "\n";
    out += "    return " + r.expr(*program.result) + "\n";
    return out;
}

}  // namespace eotf::dsl
