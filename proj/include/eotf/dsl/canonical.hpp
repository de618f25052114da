#pragma once

#include <cstdint>
#include <string>

#include "eotf/dsl/program.hpp"

namespace eotf::dsl {

struct CanonicalForm {
    std::string text;
    std::uint64_t hash = 0;
};

/// Normal form used for deduplication: assignments inlined, operands of
/// + and * ordered by their own canonical text, literals at 17 significant
/// digits. Names, docstring and formatting do not affect the result.
CanonicalForm canonicalize(const Program& program);

enum class Dialect { Dsl, NumpyText };

/// dsl: compact source using bare whitelist names; parses back to an
/// equivalent program. numpy-text: standalone numpy function with the
/// import line and annotated signature.
std::string render(const Program& program, Dialect dialect);

}  // namespace eotf::dsl
