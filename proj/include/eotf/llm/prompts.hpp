#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eotf/ela/normalize.hpp"

namespace eotf::llm {

enum class PromptKind { I1, E1, E2, M1, M2, M3 };

inline constexpr PromptKind kSweepOrder[] = {PromptKind::E1, PromptKind::E2, PromptKind::M1, PromptKind::M2,
                                             PromptKind::M3};

std::string_view kind_name(PromptKind kind) noexcept;
std::optional<PromptKind> kind_from_name(std::string_view name) noexcept;

bool is_exploration(PromptKind kind) noexcept;
bool is_mutation(PromptKind kind) noexcept;

class ArityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Stored template text: the shared preamble (also the whole I1 prompt) and
/// the operator templates, which begin with the {I1} placeholder.
std::string_view preamble_template() noexcept;
std::string_view operator_template(PromptKind kind) noexcept;

/// The operator-specific instruction paragraph (empty for I1).
std::string_view instruction_text(PromptKind kind) noexcept;

/// Extra requirement appended to the preamble that pins answers to the
/// accepted function subset.
std::string_view output_contract() noexcept;

/// One "- name: value" line per feature.
std::string format_features(const ela::NormalizedVector& target);

/// `context` holds numpy-text renderings of the parent functions. Throws
/// ArityError unless I1 has none, E1/E2 at least one, M1-M3 exactly one.
std::string render_prompt(PromptKind kind, const ela::NormalizedVector& target,
                          const std::vector<std::string>& context);

}  // namespace eotf::llm
