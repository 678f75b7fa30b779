#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/frontend/method.hpp"
#include "lasmut/util/error.hpp"

namespace lasmut::generator {

inline constexpr int kDefaultBugs = 3;
inline constexpr std::size_t kDefaultContextBudget = 4096;  // estimated tokens
inline constexpr const char* kDefaultTemplate = "las-v1";

struct PromptSpec {
  std::string template_id;
  std::string method_id;
  int n_bugs = kDefaultBugs;
  std::vector<int> las_indices;
  std::string indexed_method;
  std::string rendered;
  std::size_t estimated_tokens = 0;
};

class PromptTooLarge : public Error {
 public:
  PromptTooLarge(std::size_t estimate, std::size_t budget);
  std::size_t estimate() const { return estimate_; }

 private:
  std::size_t estimate_;
};

// The method text with "/*i*/" inserted before statement i. Stripping the
// markers gives back method.text(). Throws Error for a method with no statements.
std::string index_method(const frontend::MethodRecord& method);

// A prompt template with {n}, {locations}, {language} and {method}
// placeholders; {method} and {locations} are required.
struct PromptTemplate {
  std::string id;
  std::string text;
};

// Built-in template by id, or a template file given as "file:<path>" (its id
// is the file stem). Throws ConfigError.
PromptTemplate load_template(const std::string& id_or_path);

// Rough token count for budgeting: one token per four characters.
std::size_t estimate_tokens(const std::string& text);

// Throws Error on empty LAS or n < 1, PromptTooLarge over budget.
PromptSpec build_prompt(const frontend::MethodRecord& method, const std::vector<int>& las, int n,
                        const PromptTemplate& tmpl = load_template(kDefaultTemplate),
                        std::size_t context_budget = kDefaultContextBudget, const std::string& language = "java");

void to_json(nlohmann::json& j, const PromptSpec& p);
void from_json(const nlohmann::json& j, PromptSpec& p);

}  // namespace lasmut::generator
