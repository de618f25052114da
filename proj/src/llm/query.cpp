#include "eotf/llm/query.hpp"

namespace eotf::llm {

std::string repair_prompt(const std::string& original, const ExtractionError& error) {
    std::string p = original;
    p += "\n\nYour previous answer could not be used. Error: ";
    p += error.what();
    if (!error.block().empty()) {
        p += "\nThe rejected code block was:\n```python\n";
        p += error.block();
        if (error.block().back() != '\n') p += '\n';
        p += "```";
    }
    p += "\nReply with a corrected function in a single markdown code block that meets every requirement above.";
    return p;
}

QueryResult query_prompt(Provider& provider, const std::string& prompt, const QueryOptions& options) {
    QueryResult r;
    const std::size_t limit = std::min<std::size_t>(options.max_queries, 1 + std::max(options.repair_attempts, 0));
    std::string current = prompt;
    while (r.attempts.size() < limit) {
        Attempt a;
        a.prompt = current;
        Completion c;
        try {
            c = provider.complete(current);
        } catch (const TranscriptExhausted&) {
            throw;
        } catch (const ProviderError& e) {
            a.outcome = std::string("transport: ") + e.what();
            r.attempts.push_back(std::move(a));
            return r;
        }
        a.response = c.text;
        a.prompt_tokens = c.prompt_tokens;
        a.completion_tokens = c.completion_tokens;
        try {
            r.candidate = extract_program(c.text);
            a.outcome = "ok";
            r.attempts.push_back(std::move(a));
            return r;
        } catch (const ExtractionError& e) {
            a.outcome = e.what();
            r.attempts.push_back(std::move(a));
            current = repair_prompt(prompt, e);
        }
    }
    return r;
}

QueryResult query_candidate(Provider& provider, PromptKind kind, const ela::NormalizedVector& target,
                            const std::vector<std::string>& context, const QueryOptions& options) {
    return query_prompt(provider, render_prompt(kind, target, context), options);
}

}  // namespace eotf::llm
