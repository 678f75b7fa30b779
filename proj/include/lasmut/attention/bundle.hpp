#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lasmut::attention {

struct Subtoken {
  std::string text;
  std::size_t start = 0;  // offsets into the exact method text
  std::size_t end = 0;
  bool special = false;

  friend bool operator==(const Subtoken&, const Subtoken&) = default;
};

// Model attention for one method: n subtokens and an n x n row-major matrix
// already averaged over every layer and head.
struct AttentionBundle {
  std::string model_id;
  int num_layers = 0;
  int num_heads = 0;
  std::vector<Subtoken> subtokens;
  std::vector<double> matrix;
  bool aggregated = true;
  std::optional<std::string> method_id;
  std::optional<std::size_t> truncated_from;  // original subtoken count if truncated

  std::size_t n() const { return subtokens.size(); }
  double at(std::size_t row, std::size_t col) const { return matrix[row * n() + col]; }

  friend bool operator==(const AttentionBundle&, const AttentionBundle&) = default;
};

inline constexpr double kRowSumTolerance = 1e-4;

// Checks the interchange invariants: aggregated, n x n shape, finite entries in
// [0, 1], rows summing to 1 within `tolerance`, non-special spans
// non-decreasing and inside [0, text_length]. Throws ShapeError.
void validate(const AttentionBundle& bundle, std::optional<std::size_t> text_length = std::nullopt,
              double tolerance = kRowSumTolerance);

void to_json(nlohmann::json& j, const AttentionBundle& b);
void from_json(const nlohmann::json& j, AttentionBundle& b);

// Interchange file name for a method: first 16 hex digits of SHA-256(id) + ".json".
std::string dump_file_name(const std::string& method_id);

AttentionBundle read_dump(const std::filesystem::path& path);
void write_dump(const std::filesystem::path& path, const AttentionBundle& bundle);

}  // namespace lasmut::attention
