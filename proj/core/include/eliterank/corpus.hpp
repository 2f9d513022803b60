#ifndef ELITERANK_CORPUS_HPP
#define ELITERANK_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "eliterank/tokenizer.hpp"

namespace eliterank {

using TermId = std::uint32_t;
using DocId = std::uint32_t;

struct Document {
  std::string id;
  std::string text;
};

struct Posting {
  DocId doc;
  std::uint32_t tf;  // always >= 1; zero-tf pairs are never stored
};

// Collection-wide tf histogram for one term, the input every estimator
// consumes. Buckets cover tf >= 1 in ascending order; the zero_count bucket
// holds the n_docs - df documents without the term.
struct TermStats {
  std::uint64_t n_docs = 0;
  std::uint64_t df = 0;
  std::uint64_t cf = 0;
  std::uint64_t zero_count = 0;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> tf_counts;
};

// Raw contents of a finished index. Produced by IndexBuilder or the index
// loader; validated by the CorpusIndex constructor.
struct IndexData {
  TokenizerConfig tokenizer;
  std::vector<std::string> doc_ids;           // internal id -> external id
  std::vector<std::uint32_t> doc_lens;        // internal id -> DL
  std::vector<std::string> terms;             // term id -> term, sorted
  std::vector<std::vector<Posting>> postings; // term id -> postings, doc asc
};

// Immutable inverted index. Safe for unrestricted concurrent reads once
// constructed; every downstream module treats it as read-only shared state.
class CorpusIndex {
 public:
  explicit CorpusIndex(IndexData data);

  std::uint64_t doc_count() const { return data_.doc_ids.size(); }
  double avg_doc_len() const { return avg_doc_len_; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  std::size_t vocab_size() const { return data_.terms.size(); }

  const std::string& doc_name(DocId d) const { return data_.doc_ids[d]; }
  std::uint32_t doc_len(DocId d) const { return data_.doc_lens[d]; }

  std::optional<TermId> term_id(std::string_view term) const;
  const std::string& term(TermId t) const { return data_.terms[t]; }
  const std::vector<Posting>& postings(TermId t) const;
  std::uint64_t df(TermId t) const { return postings(t).size(); }
  std::uint64_t cf(TermId t) const;

  // tf of term t in doc d; 0 when the doc holds no posting for t.
  std::uint32_t tf(TermId t, DocId d) const;

  // Histogram of tf values over the whole collection, zero bucket included.
  TermStats term_stats(TermId t) const;
  TermStats term_stats(std::string_view term) const;

  const TokenizerConfig& tokenizer() const { return data_.tokenizer; }

  // 64-bit digest of all statistics plus the tokenizer config. Models fitted
  // against this index record it and are rejected against any other index.
  std::uint64_t identity_hash() const { return identity_hash_; }

  const IndexData& data() const { return data_; }

 private:
  IndexData data_;
  std::unordered_map<std::string_view, TermId> term_lookup_;
  std::vector<std::uint64_t> cf_;
  std::uint64_t total_tokens_ = 0;
  double avg_doc_len_ = 0.0;
  std::uint64_t identity_hash_ = 0;

  void validate() const;
};

// Single-writer streaming construction. Document insertion order does not
// affect any statistic of the finished index.
class IndexBuilder {
 public:
  explicit IndexBuilder(TokenizerConfig cfg = {});

  void add(const Document& doc);  // throws on duplicate or empty doc id
  CorpusIndex finish();           // throws if no document was added

 private:
  TokenizerConfig cfg_;
  std::unordered_map<std::string, TermId> term_tmp_;
  std::vector<std::string> terms_tmp_;
  std::vector<std::vector<Posting>> postings_tmp_;
  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_lens_;
  std::unordered_set<std::string> seen_ids_;
  bool finished_ = false;
};

CorpusIndex build_index(const std::vector<Document>& docs,
                        TokenizerConfig cfg = {});

// tf * (b + (1-b) * avgDL/DL). Returns 0 for tf = 0 regardless of DL.
// Throws when b is outside [0,1]; requires DL > 0 whenever tf > 0.
double normalized_tf(double tf, double doc_len, double avg_doc_len, double b);

}  // namespace eliterank

#endif  // ELITERANK_CORPUS_HPP
