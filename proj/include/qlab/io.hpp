#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace qlab {

inline constexpr std::string_view kSchemaVersion = "1";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Writes to a temporary sibling and renames it over `path`, so readers
/// never observe a truncated file. Throws IoError.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace qlab
