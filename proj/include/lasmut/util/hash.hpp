#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace lasmut::util {

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

// SHA-256 of a file's content; throws IoError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

// First `chars` hex digits of sha256_hex(bytes).
std::string short_hash(std::string_view bytes, std::size_t chars = 16);

}  // namespace lasmut::util
