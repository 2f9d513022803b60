#include "eliterank/tokenizer.hpp"

#include <cctype>

namespace eliterank {

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& cfg) {
  std::vector<std::string> tokens;
  std::string current;
  current.reserve(32);

  auto flush = [&] {
    if (current.empty()) return;
    if (cfg.stopwords.empty() || !cfg.stopwords.contains(current)) {
      tokens.push_back(current);
    }
    current.clear();
  };

  for (const char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      current.push_back(
          cfg.lowercase ? static_cast<char>(std::tolower(uc)) : c);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

}  // namespace eliterank
