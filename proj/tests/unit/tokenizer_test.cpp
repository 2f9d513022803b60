#include <doctest.h>

#include "eliterank/tokenizer.hpp"

using namespace eliterank;

TEST_CASE("alphanumeric runs, lowercased") {
  TokenizerConfig cfg;
  CHECK(tokenize("The cat sat", cfg) ==
        std::vector<std::string>{"the", "cat", "sat"});
}

TEST_CASE("empty text yields no tokens") {
  CHECK(tokenize("", TokenizerConfig{}).empty());
  CHECK(tokenize("  \t .,;! ", TokenizerConfig{}).empty());
}

TEST_CASE("case folding merges variants") {
  const auto tokens = tokenize("A a A", TokenizerConfig{});
  CHECK(tokens == std::vector<std::string>{"a", "a", "a"});
}

TEST_CASE("lowercase disabled keeps case") {
  TokenizerConfig cfg;
  cfg.lowercase = false;
  CHECK(tokenize("A a", cfg) == std::vector<std::string>{"A", "a"});
}

TEST_CASE("stopwords removed after folding") {
  TokenizerConfig cfg;
  cfg.stopwords = {"the"};
  CHECK(tokenize("The THE cat", cfg) == std::vector<std::string>{"cat"});
}

TEST_CASE("digits and punctuation boundaries") {
  CHECK(tokenize("x86-64, C++20!", TokenizerConfig{}) ==
        std::vector<std::string>{"x86", "64", "c", "20"});
}

TEST_CASE("deterministic for identical input and config") {
  TokenizerConfig cfg;
  cfg.stopwords = {"and", "of"};
  const std::string text = "Ships AND shoes and sealing-wax, OF cabbages";
  CHECK(tokenize(text, cfg) == tokenize(text, cfg));
}
