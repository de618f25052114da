#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "eotf/dsl/program.hpp"

namespace eotf::dsl::detail {

enum class TokenKind { Name, Number, String, Op, Newline, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;  // Name/Number/Op verbatim; String holds the decoded body
    SourceLocation loc;
};

/// Python-flavoured tokenizer: comments dropped, newlines inside brackets
/// and after a backslash joined, one Newline token per logical line.
std::vector<Token> tokenize(std::string_view source);

}  // namespace eotf::dsl::detail
