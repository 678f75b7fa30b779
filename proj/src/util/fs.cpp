#include "lasmut/util/fs.hpp"

#include <algorithm>

#include "lasmut/util/error.hpp"

namespace lasmut::util {

namespace fs = std::filesystem;

std::vector<fs::path> find_files(const fs::path& root, const std::string& ext) {
  std::vector<fs::path> out;
  if (!fs::exists(root)) return out;
  for (auto it = fs::recursive_directory_iterator(
           root, fs::directory_options::skip_permission_denied);
       it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_regular_file() && it->path().extension() == ext) out.push_back(it->path());
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.generic_string() < b.generic_string();
  });
  return out;
}

void copy_tree(const fs::path& from, const fs::path& to) {
  std::error_code ec;
  fs::remove_all(to, ec);
  fs::create_directories(to);
  fs::copy(from, to, fs::copy_options::recursive | fs::copy_options::copy_symlinks, ec);
  if (ec) throw IoError("copy " + from.string() + " -> " + to.string() + ": " + ec.message());
}

namespace {

bool match_component(std::string_view pat, std::string_view name) {
  // Iterative wildcard match with backtracking on the last '*'.
  std::size_t p = 0, n = 0, star = std::string_view::npos, mark = 0;
  while (n < name.size()) {
    if (p < pat.size() && (pat[p] == '?' || pat[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pat.size() && pat[p] == '*') {
      star = p++;
      mark = n;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      n = ++mark;
    } else {
      return false;
    }
  }
  while (p < pat.size() && pat[p] == '*') ++p;
  return p == pat.size();
}

bool match_parts(const std::vector<std::string>& pat, std::size_t pi,
                 const std::vector<std::string>& parts, std::size_t ni) {
  if (pi == pat.size()) return ni == parts.size();
  if (pat[pi] == "**") {
    for (std::size_t k = ni; k <= parts.size(); ++k) {
      if (match_parts(pat, pi + 1, parts, k)) return true;
    }
    return false;
  }
  if (ni == parts.size()) return false;
  return match_component(pat[pi], parts[ni]) && match_parts(pat, pi + 1, parts, ni + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto pos = s.find('/', start);
    if (pos == std::string::npos) pos = s.size();
    if (pos > start) out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<fs::path> glob(const fs::path& root, const std::string& pattern) {
  std::vector<fs::path> out;
  if (!fs::exists(root)) return out;
  const auto pat = split(pattern);
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
       ++it) {
    if (!it->is_regular_file()) continue;
    const auto rel = fs::relative(it->path(), root).generic_string();
    if (match_parts(pat, 0, split(rel), 0)) out.push_back(it->path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lasmut::util
