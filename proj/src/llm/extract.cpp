#include "eotf/llm/query.hpp"

namespace eotf::llm {

std::optional<std::string> first_fenced_block(std::string_view r) {
    const auto open = r.find("```");
    if (open == std::string_view::npos) return std::nullopt;
    const auto line_end = r.find('\n', open + 3);
    if (line_end == std::string_view::npos) return std::nullopt;
    const auto close = r.find("```", line_end + 1);
    if (close == std::string_view::npos) return std::nullopt;
    return std::string(r.substr(line_end + 1, close - line_end - 1));
}

Extracted extract_program(std::string_view response) {
    const auto block = first_fenced_block(response);
    if (!block) throw ExtractionError("no-block: the response contains no fenced code block", {});
    try {
        return {dsl::compile(*block), *block};
    } catch (const dsl::ParseError& e) {
        throw ExtractionError(std::string("parse: ") + e.what(), *block);
    } catch (const dsl::TypeError& e) {
        throw ExtractionError(std::string("type: ") + e.what(), *block);
    }
}

}  // namespace eotf::llm
