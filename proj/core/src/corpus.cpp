#include "eliterank/corpus.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <stdexcept>

namespace eliterank {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

struct Fnv1a {
  std::uint64_t state = kFnvOffset;

  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state ^= p[i];
      state *= kFnvPrime;
    }
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      state ^= static_cast<unsigned char>(v >> (8 * i));
      state *= kFnvPrime;
    }
  }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
};

std::uint64_t hash_index(const IndexData& d) {
  Fnv1a h;
  h.u64(d.tokenizer.lowercase ? 1 : 0);
  h.u64(d.tokenizer.stopwords.size());
  for (const auto& s : d.tokenizer.stopwords) h.str(s);
  h.u64(d.doc_ids.size());
  for (std::size_t i = 0; i < d.doc_ids.size(); ++i) {
    h.str(d.doc_ids[i]);
    h.u64(d.doc_lens[i]);
  }
  h.u64(d.terms.size());
  for (std::size_t t = 0; t < d.terms.size(); ++t) {
    h.str(d.terms[t]);
    h.u64(d.postings[t].size());
    for (const Posting& p : d.postings[t]) {
      h.u64(p.doc);
      h.u64(p.tf);
    }
  }
  return h.state;
}

}  // namespace

CorpusIndex::CorpusIndex(IndexData data) : data_(std::move(data)) {
  validate();

  term_lookup_.reserve(data_.terms.size());
  for (TermId t = 0; t < data_.terms.size(); ++t) {
    term_lookup_.emplace(data_.terms[t], t);
  }

  cf_.resize(data_.terms.size(), 0);
  for (TermId t = 0; t < data_.terms.size(); ++t) {
    for (const Posting& p : data_.postings[t]) cf_[t] += p.tf;
  }

  total_tokens_ = std::accumulate(data_.doc_lens.begin(), data_.doc_lens.end(),
                                  std::uint64_t{0});
  avg_doc_len_ = static_cast<double>(total_tokens_) /
                 static_cast<double>(data_.doc_ids.size());
  identity_hash_ = hash_index(data_);
}

void CorpusIndex::validate() const {
  if (data_.doc_ids.empty()) {
    throw std::invalid_argument("corpus index: no documents");
  }
  if (data_.doc_ids.size() != data_.doc_lens.size() ||
      data_.terms.size() != data_.postings.size()) {
    throw std::invalid_argument("corpus index: inconsistent table sizes");
  }
  const std::uint64_t n = data_.doc_ids.size();
  std::vector<std::uint64_t> doc_tf_sum(n, 0);
  for (TermId t = 0; t < data_.terms.size(); ++t) {
    const auto& plist = data_.postings[t];
    if (plist.empty() || plist.size() > n) {
      throw std::invalid_argument("corpus index: bad df for term '" +
                                  data_.terms[t] + "'");
    }
    if (t > 0 && !(data_.terms[t - 1] < data_.terms[t])) {
      throw std::invalid_argument("corpus index: vocabulary not sorted");
    }
    DocId prev = 0;
    bool first = true;
    for (const Posting& p : plist) {
      if (p.tf == 0 || p.doc >= n || (!first && p.doc <= prev)) {
        throw std::invalid_argument("corpus index: bad posting for term '" +
                                    data_.terms[t] + "'");
      }
      doc_tf_sum[p.doc] += p.tf;
      prev = p.doc;
      first = false;
    }
  }
  for (DocId d = 0; d < n; ++d) {
    if (doc_tf_sum[d] > data_.doc_lens[d]) {
      throw std::invalid_argument("corpus index: tf sum exceeds DL for doc '" +
                                  data_.doc_ids[d] + "'");
    }
  }
}

std::optional<TermId> CorpusIndex::term_id(std::string_view term) const {
  const auto it = term_lookup_.find(term);
  if (it == term_lookup_.end()) return std::nullopt;
  return it->second;
}

const std::vector<Posting>& CorpusIndex::postings(TermId t) const {
  if (t >= data_.postings.size()) {
    throw std::out_of_range("corpus index: unknown term id " +
                            std::to_string(t));
  }
  return data_.postings[t];
}

std::uint64_t CorpusIndex::cf(TermId t) const {
  if (t >= cf_.size()) {
    throw std::out_of_range("corpus index: unknown term id " +
                            std::to_string(t));
  }
  return cf_[t];
}

std::uint32_t CorpusIndex::tf(TermId t, DocId d) const {
  const auto& plist = postings(t);
  const auto it = std::lower_bound(
      plist.begin(), plist.end(), d,
      [](const Posting& p, DocId doc) { return p.doc < doc; });
  if (it == plist.end() || it->doc != d) return 0;
  return it->tf;
}

TermStats CorpusIndex::term_stats(TermId t) const {
  const auto& plist = postings(t);
  TermStats stats;
  stats.n_docs = doc_count();
  stats.df = plist.size();
  stats.cf = cf_[t];
  stats.zero_count = stats.n_docs - stats.df;

  std::map<std::uint32_t, std::uint64_t> hist;
  for (const Posting& p : plist) ++hist[p.tf];
  stats.tf_counts.assign(hist.begin(), hist.end());
  return stats;
}

TermStats CorpusIndex::term_stats(std::string_view term) const {
  const auto t = term_id(term);
  if (!t) {
    throw std::invalid_argument("corpus index: unknown term '" +
                                std::string(term) + "'");
  }
  return term_stats(*t);
}

IndexBuilder::IndexBuilder(TokenizerConfig cfg) : cfg_(std::move(cfg)) {}

void IndexBuilder::add(const Document& doc) {
  assert(!finished_);
  if (doc.id.empty()) {
    throw std::invalid_argument("index builder: empty doc id");
  }
  if (!seen_ids_.insert(doc.id).second) {
    throw std::invalid_argument("index builder: duplicate doc id '" + doc.id +
                                "'");
  }
  const auto internal = static_cast<DocId>(doc_ids_.size());
  doc_ids_.push_back(doc.id);

  const std::vector<std::string> tokens = tokenize(doc.text, cfg_);
  doc_lens_.push_back(static_cast<std::uint32_t>(tokens.size()));

  std::unordered_map<std::string_view, std::uint32_t> counts;
  for (const auto& tok : tokens) ++counts[tok];

  for (const auto& [tok, count] : counts) {
    auto [it, inserted] =
        term_tmp_.try_emplace(std::string(tok),
                              static_cast<TermId>(terms_tmp_.size()));
    if (inserted) {
      terms_tmp_.emplace_back(tok);
      postings_tmp_.emplace_back();
    }
    postings_tmp_[it->second].push_back({internal, count});
  }
}

CorpusIndex IndexBuilder::finish() {
  assert(!finished_);
  finished_ = true;
  if (doc_ids_.empty()) {
    throw std::invalid_argument("index builder: empty document stream");
  }

  // Canonical term ids: lexicographic order, independent of discovery order.
  std::vector<std::uint32_t> order(terms_tmp_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return terms_tmp_[a] < terms_tmp_[b];
  });

  IndexData data;
  data.tokenizer = std::move(cfg_);
  data.doc_ids = std::move(doc_ids_);
  data.doc_lens = std::move(doc_lens_);
  data.terms.reserve(order.size());
  data.postings.reserve(order.size());
  for (const std::uint32_t old : order) {
    data.terms.push_back(std::move(terms_tmp_[old]));
    data.postings.push_back(std::move(postings_tmp_[old]));
  }
  return CorpusIndex(std::move(data));
}

CorpusIndex build_index(const std::vector<Document>& docs,
                        TokenizerConfig cfg) {
  IndexBuilder builder(std::move(cfg));
  for (const Document& doc : docs) builder.add(doc);
  return builder.finish();
}

double normalized_tf(double tf, double doc_len, double avg_doc_len, double b) {
  if (b < 0.0 || b > 1.0) {
    throw std::invalid_argument("normalized_tf: b must lie in [0,1]");
  }
  if (tf == 0.0) return 0.0;
  assert(doc_len > 0.0);
  return tf * (b + (1.0 - b) * (avg_doc_len / doc_len));
}

}  // namespace eliterank
