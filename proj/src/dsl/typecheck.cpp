#include <unordered_map>

#include "batch_plan.hpp"
#include "eotf/dsl/typed_program.hpp"

namespace eotf::dsl {

namespace {

class Checker {
public:
    explicit Checker(const Program& p) : program_(p) {}

    std::unordered_map<const Expr*, ValueType> run() {
        for (const auto& a : program_.body) names_[a.name] = check(*a.value);
        if (!program_.result) throw TypeError({}, "missing return expression");
        if (check(*program_.result) != ValueType::Scalar) {
            throw TypeError(program_.result->loc, "result must be scalar, got a vector expression");
        }
        return std::move(types_);
    }

private:
    ValueType check(const Expr& e) {
        if (auto it = types_.find(&e); it != types_.end()) return it->second;
        const ValueType t = infer(e);
        types_.emplace(&e, t);
        return t;
    }

    ValueType infer(const Expr& e) {
        using K = Expr::Kind;
        switch (e.kind) {
            case K::Literal:
                return ValueType::Scalar;
            case K::VarX:
                return ValueType::Vector;
            case K::Index:
                if (check(*e.args[0]) != ValueType::Vector) {
                    throw TypeError(e.loc, "cannot index a scalar expression");
                }
                return ValueType::Scalar;
            case K::NameRef: {
                auto it = names_.find(e.name);
                if (it == names_.end()) throw TypeError(e.loc, "undefined name '" + e.name + "'");
                return it->second;
            }
            case K::Negate:
                return check(*e.args[0]);
            case K::Binary: {
                const ValueType l = check(*e.args[0]);
                const ValueType r = check(*e.args[1]);
                if (e.op == BinaryOp::Pow && r != ValueType::Scalar) {
                    throw TypeError(e.args[1]->loc, "exponent of '**' must be scalar");
                }
                return (l == ValueType::Vector || r == ValueType::Vector) ? ValueType::Vector
                                                                          : ValueType::Scalar;
            }
            case K::Call: {
                std::vector<ValueType> args;
                for (const auto& a : e.args) args.push_back(check(*a));
                if (is_elementwise(e.fn)) return args.at(0);
                if (args.size() == 2) {
                    if (args[0] != ValueType::Scalar || args[1] != ValueType::Scalar) {
                        throw TypeError(e.loc, "two-argument " + std::string(function_name(e.fn)) +
                                                   " requires scalar arguments; use " +
                                                   std::string(function_name(e.fn)) +
                                                   "(v) to reduce a vector");
                    }
                }
                return ValueType::Scalar;
            }
        }
        throw TypeError(e.loc, "unknown expression kind");
    }

    const Program& program_;
    std::unordered_map<std::string, ValueType> names_;
    std::unordered_map<const Expr*, ValueType> types_;
};

}  // namespace

ValueType TypedProgram::type_of(const Expr& e) const {
    auto it = types_->find(&e);
    if (it == types_->end()) throw std::out_of_range("expression does not belong to this program");
    return it->second;
}

TypedProgram typecheck(Program program) {
    program.dim_hint = compute_dim_hint(program);
    auto shared = std::make_shared<const Program>(std::move(program));
    auto types = std::make_shared<const std::unordered_map<const Expr*, ValueType>>(Checker(*shared).run());
    TypedProgram typed;
    typed.program_ = shared;
    typed.types_ = types;
    typed.plan_ = std::make_shared<const detail::BatchPlan>(detail::compile_plan(*shared, *types));
    return typed;
}

TypedProgram compile(std::string_view source_text) { return typecheck(parse(source_text)); }

}  // namespace eotf::dsl
