#include "lasmut/attention/bundle.hpp"

#include <cmath>
#include <string>

#include "lasmut/kernels/kernels.hpp"
#include "lasmut/util/error.hpp"
#include "lasmut/util/hash.hpp"
#include "lasmut/util/jsonl.hpp"

namespace lasmut::attention {

using nlohmann::json;

void validate(const AttentionBundle& b, std::optional<std::size_t> text_length, double tolerance) {
  const std::size_t n = b.n();
  if (!b.aggregated) throw ShapeError("attention dump is not aggregated over layers and heads");
  if (n == 0) throw ShapeError("attention dump has no subtokens");
  if (b.matrix.size() != n * n) {
    throw ShapeError("matrix has " + std::to_string(b.matrix.size()) + " entries, expected " +
                     std::to_string(n) + "x" + std::to_string(n));
  }
  for (double v : b.matrix) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0 + tolerance) throw ShapeError("matrix entry outside [0, 1]");
  }
  std::vector<double> sums(n);
  kernels::row_sums(b.matrix, n, n, sums);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(sums[i] - 1.0) > tolerance) {
      throw ShapeError("row " + std::to_string(i) + " sums to " + std::to_string(sums[i]));
    }
  }
  std::size_t last_start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = b.subtokens[i];
    if (t.special) continue;
    if (t.end < t.start) throw ShapeError("subtoken " + std::to_string(i) + " has end < start");
    if (t.start < last_start) throw ShapeError("subtoken spans decrease at " + std::to_string(i));
    if (text_length && t.end > *text_length) {
      throw ShapeError("subtoken " + std::to_string(i) + " extends past the method text");
    }
    last_start = t.start;
  }
}

void to_json(json& j, const AttentionBundle& b) {
  json subtokens = json::array();
  for (const auto& t : b.subtokens) {
    subtokens.push_back({{"text", t.text}, {"start", t.start}, {"end", t.end}, {"special", t.special}});
  }
  const std::size_t n = b.n();
  json matrix = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < n; ++k) row.push_back(b.matrix[i * n + k]);
    matrix.push_back(std::move(row));
  }
  j = json{{"model_id", b.model_id},   {"num_layers", b.num_layers}, {"num_heads", b.num_heads},
           {"subtokens", subtokens},   {"matrix", matrix},           {"aggregated", b.aggregated}};
  if (b.method_id) j["method_id"] = *b.method_id;
  if (b.truncated_from) j["truncated_from"] = *b.truncated_from;
}

void from_json(const json& j, AttentionBundle& b) {
  j.at("model_id").get_to(b.model_id);
  j.at("num_layers").get_to(b.num_layers);
  j.at("num_heads").get_to(b.num_heads);
  b.aggregated = j.value("aggregated", false);
  b.subtokens.clear();
  for (const auto& t : j.at("subtokens")) {
    b.subtokens.push_back(Subtoken{t.at("text").get<std::string>(), t.at("start").get<std::size_t>(),
                                   t.at("end").get<std::size_t>(), t.value("special", false)});
  }
  const auto& rows = j.at("matrix");
  b.matrix.clear();
  b.matrix.reserve(rows.size() * rows.size());
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw ShapeError("attention matrix is not square");
    for (const auto& v : row) b.matrix.push_back(v.get<double>());
  }
  b.method_id = j.contains("method_id") ? std::optional(j["method_id"].get<std::string>()) : std::nullopt;
  b.truncated_from = j.contains("truncated_from") ? std::optional(j["truncated_from"].get<std::size_t>())
                                                  : std::nullopt;
}

std::string dump_file_name(const std::string& method_id) { return util::short_hash(method_id, 16) + ".json"; }

AttentionBundle read_dump(const std::filesystem::path& path) {
  try {
    return util::read_json(path).get<AttentionBundle>();
  } catch (const json::exception& e) {
    throw ShapeError(path.string() + ": " + e.what());
  }
}

void write_dump(const std::filesystem::path& path, const AttentionBundle& bundle) {
  util::write_file(path, json(bundle).dump() + "\n");
}

}  // namespace lasmut::attention
