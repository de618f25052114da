#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace eotf {

/// 64-bit FNV-1a. Stable across platforms; used for canonical program
/// hashes, prompt hashes and input-file fingerprints.
std::uint64_t fnv1a64(std::string_view data) noexcept;

/// Lower-case, zero-padded 16 digit hex.
std::string to_hex(std::uint64_t value);

}  // namespace eotf
