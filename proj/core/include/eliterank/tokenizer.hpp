#ifndef ELITERANK_TOKENIZER_HPP
#define ELITERANK_TOKENIZER_HPP

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace eliterank {

// Deterministic tokenization: contiguous ASCII alphanumeric runs, optional
// case folding, optional stopword removal (applied after folding).
// No stemming.
struct TokenizerConfig {
  bool lowercase = true;
  std::set<std::string> stopwords;

  bool operator==(const TokenizerConfig&) const = default;
};

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& cfg);

}  // namespace eliterank

#endif  // ELITERANK_TOKENIZER_HPP
