#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lasmut::util {

using nlohmann::json;

// Reads every non-blank line of a JSONL file. Throws IoError on an unreadable
// file and Error (with line number) on a malformed line.
std::vector<json> read_jsonl(const std::filesystem::path& path);

// Writes records one per line, creating parent directories.
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records);

void write_json(const std::filesystem::path& path, const json& value, int indent = 2);
json read_json(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// Append-only JSONL writer; one writer owns a file, appends are serialized.
class JsonlAppender {
 public:
  explicit JsonlAppender(const std::filesystem::path& path, bool truncate = false);
  void append(const json& record);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mu_;
};

}  // namespace lasmut::util
