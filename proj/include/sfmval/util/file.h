#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace sfmval {

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file. Throws IoError.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

std::string ReadFileBytes(const std::filesystem::path& path);

}  // namespace sfmval
