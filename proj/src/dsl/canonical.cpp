#include "eotf/dsl/canonical.hpp"

#include <cstdio>
#include <unordered_map>

#include "eotf/common/hash.hpp"

namespace eotf::dsl {

namespace {

std::string literal17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

char op_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return '+';
        case BinaryOp::Sub: return '-';
        case BinaryOp::Mul: return '*';
        case BinaryOp::Div: return '/';
        case BinaryOp::Pow: return '^';
    }
    return '?';
}

class Canonicalizer {
public:
    explicit Canonicalizer(const Program& p) {
        for (const auto& a : p.body) names_[a.name] = text(*a.value);
    }

    std::string text(const Expr& e) {
        using K = Expr::Kind;
        switch (e.kind) {
            case K::Literal: return literal17(e.literal);
            case K::VarX: return "x";
            case K::NameRef: return names_.at(e.name);
            case K::Index: {
                const std::string base = text(*e.args[0]);
                return (base == "x" ? base : "(" + base + ")") + "[" + std::to_string(e.index) + "]";
            }
            case K::Negate: return "(-" + text(*e.args[0]) + ")";
            case K::Binary: {
                std::string l = text(*e.args[0]);
                std::string r = text(*e.args[1]);
                if ((e.op == BinaryOp::Add || e.op == BinaryOp::Mul) && r < l) std::swap(l, r);
                return "(" + l + op_symbol(e.op) + r + ")";
            }
            case K::Call: {
                std::string out(function_name(e.fn));
                out += '(';
                for (std::size_t i = 0; i < e.args.size(); ++i) {
                    if (i) out += ',';
                    out += text(*e.args[i]);
                }
                return out + ')';
            }
        }
        return {};
    }

private:
    std::unordered_map<std::string, std::string> names_;
};

}  // namespace

CanonicalForm canonicalize(const Program& program) {
    CanonicalForm out;
    out.text = Canonicalizer(program).text(*program.result);
    out.hash = fnv1a64(out.text);
    return out;
}

}  // namespace eotf::dsl
