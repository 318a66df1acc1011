#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sfmval {

// %.17g-equivalent formatting; parses back to the identical double.
std::string FormatDouble(double value);

std::optional<double> ParseDouble(std::string_view text);
std::optional<uint64_t> ParseUint(std::string_view text);

std::string_view Trim(std::string_view text);

// Splits on runs of spaces/tabs; empty tokens are dropped.
std::vector<std::string_view> SplitWhitespace(std::string_view text);

// Splits on a single delimiter; empty tokens are kept.
std::vector<std::string_view> Split(std::string_view text, char delimiter);

}  // namespace sfmval
