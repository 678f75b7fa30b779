#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lasmut::util {

// Regular files under root whose extension equals `ext`, sorted by generic path.
std::vector<std::filesystem::path> find_files(const std::filesystem::path& root,
                                              const std::string& ext);

// Recursively copies `from` into a fresh directory `to` (removed first if present).
void copy_tree(const std::filesystem::path& from, const std::filesystem::path& to);

// Simple glob over a directory tree: supports `*` within a path component and
// `**` for any number of components.
std::vector<std::filesystem::path> glob(const std::filesystem::path& root,
                                        const std::string& pattern);

}  // namespace lasmut::util
