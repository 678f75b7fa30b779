#pragma once

#include <cstddef>
#include <string_view>

namespace lasmut::metrics {

// Character-level Levenshtein distance; O(|a|*|b|) time, O(min) space.
std::size_t levenshtein(std::string_view a, std::string_view b);

}  // namespace lasmut::metrics
