#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eotf/dsl/typed_program.hpp"
#include "eotf/llm/prompts.hpp"
#include "eotf/llm/provider.hpp"

namespace eotf::llm {

/// The response had no usable fenced block, or the block failed to parse or
/// typecheck. block() is empty in the first case.
class ExtractionError : public std::runtime_error {
public:
    ExtractionError(const std::string& message, std::string block)
        : std::runtime_error(message), block_(std::move(block)) {}
    const std::string& block() const noexcept { return block_; }

private:
    std::string block_;
};

/// Contents of the first ``` fenced block, info string dropped.
std::optional<std::string> first_fenced_block(std::string_view response);

struct Extracted {
    dsl::TypedProgram program;
    std::string block;
};

Extracted extract_program(std::string_view response);

/// Prompt for a retry after `error` on `block`.
std::string repair_prompt(const std::string& original, const ExtractionError& error);

struct QueryOptions {
    /// Re-prompts after an unusable answer.
    int repair_attempts = 2;
    /// Queries this call may spend; never exceeded.
    std::size_t max_queries = 3;
};

struct Attempt {
    std::string prompt;
    std::string response;
    /// "ok", "transport: ...", "no-block: ...", "parse: ...", "type: ...".
    std::string outcome;
    std::optional<long> prompt_tokens;
    std::optional<long> completion_tokens;
};

struct QueryResult {
    std::optional<Extracted> candidate;
    std::vector<Attempt> attempts;

    std::size_t queries() const noexcept { return attempts.size(); }
};

/// Renders, completes and extracts with up to repair_attempts re-prompts.
/// A transport failure ends the call. TranscriptExhausted propagates.
QueryResult query_candidate(Provider& provider, PromptKind kind, const ela::NormalizedVector& target,
                            const std::vector<std::string>& context, const QueryOptions& options);

/// Same loop for a prompt that is already rendered.
QueryResult query_prompt(Provider& provider, const std::string& prompt, const QueryOptions& options);

}  // namespace eotf::llm
