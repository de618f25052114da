#include "lexer.hpp"

#include <array>
#include <cctype>

namespace eotf::dsl::detail {
namespace {

constexpr std::array<std::string_view, 13> kThreeOrTwoCharOps{
    "**=", "//=", "->", "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/="};

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\n') {
                newline();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
                advance();
                continue;
            }
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
                continue;
            }
            if (c == '\\') {
                std::size_t k = pos_ + 1;
                while (k < src_.size() && (src_[k] == ' ' || src_[k] == '\t' || src_[k] == '\r')) ++k;
                if (k < src_.size() && src_[k] == '\n') {
                    while (pos_ <= k) advance();
                    continue;
                }
                fail("stray backslash");
            }
            if (string_start()) {
                lex_string();
                continue;
            }
            if (is_name_start(c)) {
                lex_name();
                continue;
            }
            if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
                lex_number();
                continue;
            }
            if (static_cast<unsigned char>(c) >= 0x80) fail("non-ASCII character outside a string");
            lex_op();
        }
        if (depth_ > 0) fail("unclosed bracket at end of input");
        if (line_has_tokens_) push(TokenKind::Newline, "", here());
        push(TokenKind::End, "", here());
        return std::move(tokens_);
    }

private:
    SourceLocation here() const { return {line_, col_}; }

    [[noreturn]] void fail(const std::string& reason) const { throw ParseError(here(), reason); }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void push(TokenKind kind, std::string text, SourceLocation loc) {
        tokens_.push_back(Token{kind, std::move(text), loc});
        if (kind != TokenKind::Newline && kind != TokenKind::End) line_has_tokens_ = true;
    }

    void newline() {
        if (depth_ == 0 && line_has_tokens_) {
            push(TokenKind::Newline, "", here());
            line_has_tokens_ = false;
        }
        advance();
    }

    bool string_start() const {
        std::size_t k = pos_;
        while (k < src_.size() && k - pos_ < 2 &&
               (src_[k] == 'r' || src_[k] == 'R' || src_[k] == 'u' || src_[k] == 'U')) {
            ++k;
        }
        return k < src_.size() && (src_[k] == '"' || src_[k] == '\'');
    }

    void lex_string() {
        const SourceLocation start = here();
        while (src_[pos_] != '"' && src_[pos_] != '\'') advance();
        const char quote = src_[pos_];
        const bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote;
        const std::size_t qlen = triple ? 3 : 1;
        for (std::size_t i = 0; i < qlen; ++i) advance();
        std::string body;
        while (true) {
            if (pos_ >= src_.size()) throw ParseError(start, "unterminated string literal");
            const char c = src_[pos_];
            if (!triple && c == '\n') throw ParseError(start, "unterminated string literal");
            if (c == '\\' && pos_ + 1 < src_.size()) {
                body += c;
                advance();
                body += src_[pos_];
                advance();
                continue;
            }
            if (c == quote) {
                if (!triple) {
                    advance();
                    break;
                }
                if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote) {
                    advance();
                    advance();
                    advance();
                    break;
                }
            }
            body += c;
            advance();
        }
        push(TokenKind::String, std::move(body), start);
    }

    void lex_name() {
        const SourceLocation start = here();
        const std::size_t begin = pos_;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) advance();
        push(TokenKind::Name, std::string(src_.substr(begin, pos_ - begin)), start);
    }

    void lex_number() {
        const SourceLocation start = here();
        const std::size_t begin = pos_;
        while (pos_ < src_.size() && (is_digit(src_[pos_]) || src_[pos_] == '_')) advance();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            advance();
            while (pos_ < src_.size() && (is_digit(src_[pos_]) || src_[pos_] == '_')) advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t k = pos_ + 1;
            if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
            if (k < src_.size() && is_digit(src_[k])) {
                while (pos_ < k) advance();
                while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
            }
        }
        if (pos_ < src_.size() && is_name_char(src_[pos_])) {
            fail("malformed numeric literal");
        }
        push(TokenKind::Number, std::string(src_.substr(begin, pos_ - begin)), start);
    }

    void lex_op() {
        const SourceLocation start = here();
        for (std::string_view op : kThreeOrTwoCharOps) {
            if (src_.substr(pos_, op.size()) == op) {
                for (std::size_t i = 0; i < op.size(); ++i) advance();
                push(TokenKind::Op, std::string(op), start);
                return;
            }
        }
        const char c = src_[pos_];
        static constexpr std::string_view singles = "+-*/%@<>=()[]{},:.;~&|^!";
        if (singles.find(c) == std::string_view::npos) fail(std::string("unexpected character '") + c + "'");
        if (c == '(' || c == '[' || c == '{') ++depth_;
        if (c == ')' || c == ']' || c == '}') {
            if (depth_ == 0) fail(std::string("unbalanced '") + c + "'");
            --depth_;
        }
        advance();
        push(TokenKind::Op, std::string(1, c), start);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    int depth_ = 0;
    bool line_has_tokens_ = false;
    std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace eotf::dsl::detail
