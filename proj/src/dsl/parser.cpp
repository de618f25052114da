#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "eotf/dsl/program.hpp"
#include "lexer.hpp"

namespace eotf::dsl {

namespace {

struct FunctionInfo {
    Function fn;
    std::string_view name;
};

constexpr std::array<FunctionInfo, 15> kFunctions{{
    {Function::Sin, "sin"},   {Function::Cos, "cos"},     {Function::Tan, "tan"},
    {Function::Tanh, "tanh"}, {Function::Exp, "exp"},     {Function::Log, "log"},
    {Function::Sqrt, "sqrt"}, {Function::Abs, "abs"},     {Function::Floor, "floor"},
    {Function::Min, "min"},   {Function::Max, "max"},     {Function::Sum, "sum"},
    {Function::Prod, "prod"}, {Function::Mean, "mean"},   {Function::Norm2, "norm2"},
}};

std::string where(SourceLocation loc) {
    return "line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column);
}

}  // namespace

std::string_view function_name(Function fn) noexcept {
    for (const auto& info : kFunctions) {
        if (info.fn == fn) return info.name;
    }
    return "?";
}

std::optional<Function> function_from_name(std::string_view name) noexcept {
    for (const auto& info : kFunctions) {
        if (info.name == name) return info.fn;
    }
    return std::nullopt;
}

bool is_elementwise(Function fn) noexcept {
    switch (fn) {
        case Function::Min:
        case Function::Max:
        case Function::Sum:
        case Function::Prod:
        case Function::Mean:
        case Function::Norm2:
            return false;
        default:
            return true;
    }
}

ParseError::ParseError(SourceLocation loc, std::string reason)
    : std::runtime_error(where(loc) + ": " + reason), loc_(loc), reason_(std::move(reason)) {}

TypeError::TypeError(SourceLocation loc, std::string reason)
    : std::runtime_error(where(loc) + ": " + reason), loc_(loc) {}

ExprPtr Expr::make_literal(double v, SourceLocation loc) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Literal;
    e->literal = v;
    e->loc = loc;
    return e;
}

ExprPtr Expr::make_var_x(SourceLocation loc) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::VarX;
    e->loc = loc;
    return e;
}

ExprPtr Expr::make_index(ExprPtr base, std::size_t index, SourceLocation loc) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Index;
    e->index = index;
    e->args = {std::move(base)};
    e->loc = loc;
    return e;
}

ExprPtr Expr::make_name(std::string name, SourceLocation loc) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::NameRef;
    e->name = std::move(name);
    e->loc = loc;
    return e;
}

ExprPtr Expr::make_negate(ExprPtr operand, SourceLocation loc) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Negate;
    e->args = {std::move(operand)};
    e->loc = loc;
    return e;
}

ExprPtr Expr::make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceLocation loc) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->op = op;
    e->args = {std::move(lhs), std::move(rhs)};
    e->loc = loc;
    return e;
}

ExprPtr Expr::make_call(Function fn, std::vector<ExprPtr> args, SourceLocation loc) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Call;
    e->fn = fn;
    e->args = std::move(args);
    e->loc = loc;
    return e;
}

namespace {

using detail::Token;
using detail::TokenKind;

const std::unordered_map<std::string_view, std::string_view> kDisallowedKeywords{
    {"for", "loops are not allowed"},
    {"while", "loops are not allowed"},
    {"if", "conditionals are not allowed"},
    {"elif", "conditionals are not allowed"},
    {"else", "conditionals are not allowed"},
    {"try", "exception handling is not allowed"},
    {"except", "exception handling is not allowed"},
    {"finally", "exception handling is not allowed"},
    {"raise", "exception handling is not allowed"},
    {"with", "'with' blocks are not allowed"},
    {"lambda", "lambdas are not allowed"},
    {"class", "class definitions are not allowed"},
    {"def", "nested function definitions are not allowed"},
    {"global", "'global' is not allowed"},
    {"nonlocal", "'nonlocal' is not allowed"},
    {"yield", "generators are not allowed"},
    {"assert", "'assert' is not allowed"},
    {"del", "'del' is not allowed"},
    {"pass", "'pass' is not allowed"},
    {"break", "'break' is not allowed"},
    {"continue", "'continue' is not allowed"},
    {"async", "'async' is not allowed"},
    {"await", "'await' is not allowed"},
    {"and", "boolean operators are not allowed"},
    {"or", "boolean operators are not allowed"},
    {"not", "boolean operators are not allowed"},
    {"in", "'in' is not allowed"},
    {"is", "'is' is not allowed"},
    {"True", "boolean literals are not allowed"},
    {"False", "boolean literals are not allowed"},
    {"None", "'None' is not allowed"},
    {"print", "calls outside the whitelist are not allowed ('print')"},
};

class Parser {
public:
    explicit Parser(std::string_view source) : tokens_(detail::tokenize(source)) {
        program_.source_text = std::string(source);
    }

    Program run() {
        parse_prelude();
        parse_def();
        parse_body();
        program_.dim_hint = compute_dim_hint(program_);
        return std::move(program_);
    }

private:
    // ---- token helpers -------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    const Token& take() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at_op(std::string_view op, std::size_t ahead = 0) const {
        return peek(ahead).kind == TokenKind::Op && peek(ahead).text == op;
    }
    bool at_name(std::string_view name) const {
        return peek().kind == TokenKind::Name && peek().text == name;
    }
    bool at_line_end() const {
        return peek().kind == TokenKind::Newline || peek().kind == TokenKind::End;
    }

    [[noreturn]] void fail(const Token& t, const std::string& reason) const {
        throw ParseError(t.loc, reason);
    }
    [[noreturn]] void fail_unexpected(const Token& t, std::string_view context) const {
        std::string what;
        switch (t.kind) {
            case TokenKind::Newline:
                what = "end of line";
                break;
            case TokenKind::End:
                what = "end of input";
                break;
            case TokenKind::String:
                what = "string literal";
                break;
            default:
                what = "'" + t.text + "'";
        }
        fail(t, "malformed expression: unexpected " + what + " " + std::string(context));
    }

    void expect_op(std::string_view op, std::string_view context) {
        if (!at_op(op)) fail_unexpected(peek(), std::string(context) + " (expected '" + std::string(op) + "')");
        take();
    }
    void expect_line_end(std::string_view context) {
        if (peek().kind == TokenKind::End) return;
        if (peek().kind != TokenKind::Newline) {
            check_disallowed(peek());
            if (at_op("=") || at_op("+=") || at_op("-=") || at_op("*=") || at_op("/=")) {
                fail(peek(), "chained or tuple assignment is not allowed");
            }
            if (at_op(",")) fail(peek(), "tuples are not allowed");
            if (at_op(";")) fail(peek(), "multiple statements per line are not allowed");
            fail_unexpected(peek(), context);
        }
        take();
    }
    void skip_newlines() {
        while (peek().kind == TokenKind::Newline) take();
    }

    void check_disallowed(const Token& t) const {
        if (t.kind == TokenKind::Name) {
            if (auto it = kDisallowedKeywords.find(t.text); it != kDisallowedKeywords.end()) {
                fail(t, std::string(it->second));
            }
            if (t.text == "import" || t.text == "from") fail(t, "imports are only allowed for numpy");
        }
        if (t.kind == TokenKind::Op) {
            static const std::set<std::string_view> comparisons{"<", ">", "<=", ">=", "==", "!="};
            if (comparisons.contains(t.text)) fail(t, "comparisons are not allowed");
            if (t.text == "//" || t.text == "%") fail(t, "operator '" + t.text + "' is not allowed");
            if (t.text == "@" || t.text == "&" || t.text == "|" || t.text == "^" || t.text == "~") {
                fail(t, "operator '" + t.text + "' is not allowed");
            }
            if (t.text == "{") fail(t, "dict and set literals are not allowed");
        }
    }

    // ---- statements ----------------------------------------------------

    /// Optional module docstring and numpy imports before the signature.
    void parse_prelude() {
        skip_newlines();
        while (true) {
            if (peek().kind == TokenKind::String) {
                while (peek().kind == TokenKind::String) take();
                expect_line_end("after module docstring");
            } else if (at_name("import") || at_name("from")) {
                parse_import();
            } else {
                break;
            }
            skip_newlines();
        }
    }

    void parse_import() {
        const Token& kw = take();
        if (kw.text == "from") {
            const Token& mod = peek();
            fail(mod, "import of '" + mod.text + "' is not allowed (only 'import numpy as np')");
        }
        const Token& mod = take();
        if (mod.kind != TokenKind::Name) fail_unexpected(mod, "in import");
        if (mod.text != "numpy") fail(mod, "import of '" + mod.text + "' is not allowed (only numpy)");
        if (at_op(".")) fail(peek(), "import of numpy submodules is not allowed");
        std::string alias = "numpy";
        if (at_name("as")) {
            take();
            const Token& a = take();
            if (a.kind != TokenKind::Name) fail_unexpected(a, "in import alias");
            alias = a.text;
        }
        numpy_aliases_.insert(alias);
        expect_line_end("after import");
    }

    void parse_def() {
        if (!at_name("def")) {
            if (peek().kind == TokenKind::End) fail(peek(), "missing function definition");
            check_disallowed(peek());
            fail(peek(), "expected a function definition 'def <name>(x):'");
        }
        take();
        const Token& name = take();
        if (name.kind != TokenKind::Name) fail_unexpected(name, "after 'def'");
        program_.name = name.text;
        expect_op("(", "in function signature");
        const Token& param = take();
        if (param.kind != TokenKind::Name) fail(param, "the function must take exactly one parameter");
        program_.parameter = param.text;
        if (at_op(":")) {
            take();
            skip_annotation();
        }
        if (at_op(",")) fail(peek(), "the function must take exactly one parameter");
        if (at_op("=")) fail(peek(), "default parameter values are not allowed");
        expect_op(")", "in function signature");
        if (at_op("->")) {
            take();
            skip_annotation();
        }
        expect_op(":", "at end of function signature");
        if (peek().kind == TokenKind::Newline) take();
    }

    /// Accepts a dotted name annotation such as np.ndarray or float.
    void skip_annotation() {
        const Token& t = take();
        if (t.kind != TokenKind::Name) fail_unexpected(t, "in type annotation");
        while (at_op(".")) {
            take();
            const Token& part = take();
            if (part.kind != TokenKind::Name) fail_unexpected(part, "in type annotation");
        }
        if (at_op("[")) fail(peek(), "subscripted type annotations are not supported");
    }

    void parse_body() {
        bool first = true;
        while (true) {
            skip_newlines();
            const Token& t = peek();
            if (t.kind == TokenKind::End) fail(t, "missing return statement");
            if (t.kind == TokenKind::String) {
                if (!first) fail(t, "string literals are not allowed outside the docstring");
                std::string doc;
                while (peek().kind == TokenKind::String) doc += take().text;
                program_.docstring = trim(doc);
                expect_line_end("after docstring");
                first = false;
                continue;
            }
            first = false;
            if (at_name("return")) {
                take();
                if (at_line_end()) fail(t, "return statement without a value");
                program_.result = parse_expression();
                expect_line_end("after return expression");
                skip_newlines();
                if (peek().kind != TokenKind::End) {
                    check_disallowed(peek());
                    fail(peek(), "statements after the return statement are not allowed");
                }
                return;
            }
            if (at_name("import")) {
                take();
                const Token& mod = peek();
                if (mod.kind == TokenKind::Name && mod.text == "numpy") {
                    --pos_;
                    parse_import();
                    continue;
                }
                fail(mod, "import of '" + mod.text + "' is not allowed (only numpy)");
            }
            if (at_name("from")) {
                take();
                fail(peek(), "import of '" + peek().text + "' is not allowed (only 'import numpy as np')");
            }
            parse_assignment();
        }
    }

    void parse_assignment() {
        const Token& target = peek();
        check_disallowed(target);
        if (target.kind != TokenKind::Name) fail_unexpected(target, "at start of statement");
        if (!at_op("=", 1)) {
            const Token& next = peek(1);
            if (next.kind == TokenKind::Op &&
                (next.text == "+=" || next.text == "-=" || next.text == "*=" || next.text == "/=" ||
                 next.text == "**=" || next.text == "//=")) {
                fail(next, "reassignment of '" + target.text + "' is not allowed");
            }
            if (next.kind == TokenKind::Op && (next.text == "," || next.text == "[" || next.text == ".")) {
                fail(next, "only simple 'name = expression' assignments are allowed");
            }
            fail(target, "expected an assignment or return statement");
        }
        take();
        take();
        if (target.text == program_.parameter) fail(target, "reassignment of '" + target.text + "' is not allowed");
        if (numpy_aliases_.contains(target.text)) fail(target, "cannot assign to the numpy alias '" + target.text + "'");
        if (assigned_.contains(target.text)) fail(target, "reassignment of '" + target.text + "' is not allowed");
        ExprPtr value = parse_expression();
        expect_line_end("after assignment");
        assigned_.insert(target.text);
        program_.body.push_back(Assignment{target.text, std::move(value), target.loc});
    }

    // ---- expressions ---------------------------------------------------

    ExprPtr parse_expression() {
        ExprPtr e = parse_sum();
        if (at_name("if")) fail(peek(), "conditional expressions are not allowed");
        return e;
    }

    ExprPtr parse_sum() {
        ExprPtr lhs = parse_product();
        while (at_op("+") || at_op("-")) {
            const Token& op = take();
            ExprPtr rhs = parse_product();
            lhs = Expr::make_binary(op.text == "+" ? BinaryOp::Add : BinaryOp::Sub, std::move(lhs),
                                    std::move(rhs), op.loc);
        }
        check_disallowed(peek());
        return lhs;
    }

    ExprPtr parse_product() {
        ExprPtr lhs = parse_unary();
        while (at_op("*") || at_op("/")) {
            const Token& op = take();
            ExprPtr rhs = parse_unary();
            lhs = Expr::make_binary(op.text == "*" ? BinaryOp::Mul : BinaryOp::Div, std::move(lhs),
                                    std::move(rhs), op.loc);
        }
        check_disallowed(peek());
        return lhs;
    }

    ExprPtr parse_unary() {
        if (at_op("-")) {
            const Token& op = take();
            return Expr::make_negate(parse_unary(), op.loc);
        }
        if (at_op("+")) {
            take();
            return parse_unary();
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_postfix();
        if (at_op("**")) {
            const Token& op = take();
            ExprPtr exponent = parse_unary();
            return Expr::make_binary(BinaryOp::Pow, std::move(base), std::move(exponent), op.loc);
        }
        return base;
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_atom();
        while (at_op("[")) {
            const Token& open = take();
            const Token& idx = peek();
            if (at_op("-")) fail(idx, "negative indices are not allowed");
            if (idx.kind != TokenKind::Number) fail(idx, "index must be a non-negative integer literal");
            take();
            if (at_op(":")) fail(peek(), "slicing is not allowed");
            if (idx.text.find_first_of(".eE") != std::string::npos) {
                fail(idx, "index must be a non-negative integer literal");
            }
            std::size_t value = 0;
            std::string digits;
            for (char c : idx.text) {
                if (c != '_') digits += c;
            }
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
            if (ec != std::errc() || ptr != digits.data() + digits.size()) fail(idx, "index out of range");
            if (at_op(",")) fail(peek(), "multi-dimensional indexing is not allowed");
            expect_op("]", "in index");
            if (e->kind != Expr::Kind::VarX && e->kind != Expr::Kind::NameRef) {
                fail(open, "only names can be indexed");
            }
            e = Expr::make_index(std::move(e), value, open.loc);
        }
        if (at_op("(")) fail(peek(), "only whitelisted functions can be called");
        if (at_op(".")) fail(peek(), "attribute access is not allowed");
        return e;
    }

    ExprPtr parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Number:
                take();
                return Expr::make_literal(parse_number(t), t.loc);
            case TokenKind::String:
                fail(t, "string literals are not allowed");
            case TokenKind::Op:
                if (t.text == "(") {
                    take();
                    ExprPtr inner = parse_expression();
                    if (at_op(",")) fail(peek(), "tuples are not allowed");
                    expect_op(")", "in parenthesized expression");
                    return inner;
                }
                if (t.text == "[") fail(t, "list literals are not allowed");
                check_disallowed(t);
                fail_unexpected(t, "in expression");
            case TokenKind::Name:
                return parse_name_atom();
            default:
                fail_unexpected(t, "in expression");
        }
    }

    double parse_number(const Token& t) const {
        std::string digits;
        for (char c : t.text) {
            if (c != '_') digits += c;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec == std::errc::result_out_of_range) fail(t, "numeric literal out of range");
        if (ec != std::errc() || ptr != digits.data() + digits.size()) fail(t, "malformed numeric literal");
        return value;
    }

    ExprPtr parse_name_atom() {
        const Token& t = take();
        check_disallowed(t);
        if (numpy_aliases_.contains(t.text)) return parse_numpy_attribute(t);
        if (at_op("(")) {
            auto fn = function_from_name(t.text);
            if (!fn) fail(t, "call to '" + t.text + "' is outside the whitelist");
            return parse_call(t, *fn, t.text, false);
        }
        if (t.text == program_.parameter) return Expr::make_var_x(t.loc);
        if (assigned_.contains(t.text)) return Expr::make_name(t.text, t.loc);
        fail(t, "undefined name '" + t.text + "'");
    }

    ExprPtr parse_numpy_attribute(const Token& alias) {
        std::string path = alias.text;
        std::vector<std::string> parts;
        while (at_op(".")) {
            take();
            const Token& part = take();
            if (part.kind != TokenKind::Name) fail_unexpected(part, "after '.'");
            parts.push_back(part.text);
            path += "." + part.text;
        }
        if (parts.empty()) fail(alias, "bare numpy module reference");
        if (!at_op("(")) {
            if (parts.size() == 1 && parts[0] == "pi") return Expr::make_literal(std::numbers::pi, alias.loc);
            if (parts.size() == 1 && parts[0] == "e") return Expr::make_literal(std::numbers::e, alias.loc);
            fail(alias, "attribute '" + path + "' is not allowed");
        }
        std::optional<Function> fn;
        if (parts.size() == 1) {
            if (parts[0] != "norm2") fn = function_from_name(parts[0]);
        } else if (parts.size() == 2 && parts[0] == "linalg" && parts[1] == "norm") {
            fn = Function::Norm2;
        }
        if (!fn) fail(alias, "call to '" + path + "' is outside the whitelist");
        return parse_call(alias, *fn, path, true);
    }

    ExprPtr parse_call(const Token& head, Function fn, const std::string& spelled, bool numpy) {
        expect_op("(", "in call");
        std::vector<ExprPtr> args;
        if (!at_op(")")) {
            while (true) {
                if (peek().kind == TokenKind::Name && at_op("=", 1)) {
                    fail(peek(), "keyword arguments are not allowed");
                }
                args.push_back(parse_expression());
                if (at_op(",")) {
                    take();
                    if (at_op(")")) break;
                    continue;
                }
                break;
            }
        }
        expect_op(")", "in call");
        const bool two_ary_ok = (fn == Function::Min || fn == Function::Max) && !numpy;
        if (args.size() == 2 && two_ary_ok) return Expr::make_call(fn, std::move(args), head.loc);
        if (args.size() != 1) {
            std::string expect = two_ary_ok ? "1 or 2 arguments" : "exactly 1 argument";
            if ((fn == Function::Min || fn == Function::Max) && numpy) {
                expect += " (use " + std::string(function_name(fn)) + "(a, b) for pairwise " +
                          std::string(function_name(fn)) + ")";
            }
            fail(head, "'" + spelled + "' takes " + expect);
        }
        return Expr::make_call(fn, std::move(args), head.loc);
    }

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    Program program_;
    // The import line is optional, so the usual spellings are always recognized.
    std::unordered_set<std::string> numpy_aliases_{"np", "numpy"};
    std::unordered_set<std::string> assigned_;
};

void collect_indices(const Expr& e, std::optional<std::size_t>& hint) {
    if (e.kind == Expr::Kind::Index) hint = std::max(hint.value_or(0), e.index + 1);
    for (const auto& a : e.args) collect_indices(*a, hint);
}

}  // namespace

std::optional<std::size_t> compute_dim_hint(const Program& program) {
    std::optional<std::size_t> hint;
    for (const auto& a : program.body) collect_indices(*a.value, hint);
    if (program.result) collect_indices(*program.result, hint);
    return hint;
}

Program parse(std::string_view source_text) { return Parser(source_text).run(); }

}  // namespace eotf::dsl
