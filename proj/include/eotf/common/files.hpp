#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace eotf {

/// Throws std::runtime_error naming the path on failure.
std::string read_text_file(const std::filesystem::path& path);

/// Writes through a sibling temporary and renames over the target.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace eotf
