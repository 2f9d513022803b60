#ifndef ELITERANK_RANKING_HPP
#define ELITERANK_RANKING_HPP

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "eliterank/baselines.hpp"
#include "eliterank/corpus.hpp"
#include "eliterank/eliteness_model.hpp"

namespace eliterank {

// A query as a set of elite term properties: a property is elite for the
// query exactly when its term occurs in the query text. Eliteness is binary,
// so duplicates collapse. Terms missing from the index vocabulary are kept
// for reporting but never scored.
struct QueryRepr {
  std::string query_id;
  std::vector<TermId> elite_terms;  // sorted, unique
  std::vector<std::string> unknown_terms;
};

QueryRepr make_query(std::string query_id, std::string_view text,
                     const CorpusIndex& index);

struct ScoredDoc {
  std::string doc_id;
  double score;
};

// Sorted by (score descending, doc_id ascending); at most top_k entries.
struct RankedList {
  std::string query_id;
  std::vector<ScoredDoc> entries;
};

// ---------------------------------------------------------------------------
// Eliteness scorers.
//
// score_final and score_logical_inclusion sum, over query terms occurring in
// the document, the log ratio of the elite posterior to the elite prior,
// with the document's tf length-normalized first. Query terms with tf = 0
// are dropped: their normalized tf is 0 for every document length, so each
// absent term contributes its fixed tf = 0 log ratio. Relative to the
// all-terms sum, the dropped part is sum over absent terms of that per-term
// offset; for a one-term query this is a per-query constant and ranking is
// untouched, and candidate generation can stay posting-driven. Multi-term
// orderings may in principle differ from the all-terms sum when per-term
// absence offsets are very unequal; the strict-identity scorer keeps the
// full sum and is the one full-scan scorer.
//
// The inclusion relation before simplification also carries a per-document
// product over the non-query terms. Eliteness is independent across terms,
// so that product factorizes into one two-state sum per term and never
// needs the exponential sum over eliteness vectors; the scorers here
// implement the simplified query-terms-only form, and the strict-identity
// scorer is the one that keeps a full-vocabulary product.
// ---------------------------------------------------------------------------

// log of the fitted-mixture ranking function: for each matching query term,
// log[ Pois(t; mu1) / (p Pois(t; mu1) + (1-p) Pois(t; mu0)) ] with t the
// normalized tf. Computed in log space end to end.
double score_final(const QueryRepr& q, DocId d, const CorpusIndex& index,
                   const ElitenessModel& model, double b);

// Same quantity reached through the posterior route: log of
// P(elite | t) / p per matching term. Agrees with score_final to 1e-9.
double score_logical_inclusion(const QueryRepr& q, DocId d,
                               const CorpusIndex& index,
                               const ElitenessModel& model, double b);

// Degenerate occurrence-based eliteness: sum of log(N / df) over query terms
// present in the document.
double score_idf(const QueryRepr& q, DocId d, const CorpusIndex& index);

// ---------------------------------------------------------------------------
// Ranking driver.
// ---------------------------------------------------------------------------

class DocScorer {
 public:
  virtual ~DocScorer() = default;
  virtual double score(const QueryRepr& q, DocId d) const = 0;
  // Full-collection scan instead of posting-driven candidates.
  virtual bool ranks_all_documents() const { return false; }
};

// Full-vocabulary scorer: every term contributes, elite-side for query terms
// and non-elite-side for the rest. The non-elite product over the whole
// vocabulary is precomputed per document (background) at construction, one
// pass over the postings; query time only corrects the query terms.
// Background scores differ per document even without any query-term match,
// so this scorer ranks the entire collection.
class StrictIdentityScorer : public DocScorer {
 public:
  StrictIdentityScorer(const CorpusIndex& index, const ElitenessModel& model,
                       double b);

  double score(const QueryRepr& q, DocId d) const override;
  bool ranks_all_documents() const override { return true; }

  double background(DocId d) const { return background_[d]; }

 private:
  const CorpusIndex& index_;
  const ElitenessModel& model_;
  double b_;
  std::vector<double> background_;
};

enum class ScorerKind {
  kFinal,
  kLogicalInclusion,
  kStrictIdentity,
  kIdf,
  kBm25,
  kLmJm,
  kLmDirichlet,
};

// Selector strings: final | logical-inclusion | strict-identity | idf |
// bm25 | lm-jm | lm-dirichlet. Throws on anything else.
ScorerKind parse_scorer(std::string_view name);
std::string_view scorer_name(ScorerKind kind);

struct ScorerOptions {
  double b = 0.64;
  BM25Config bm25;
  LMConfig lm;
};

// `model` may be nullptr for the scorers that do not need one (idf, bm25,
// lm-*); passing nullptr for an eliteness scorer throws.
std::unique_ptr<DocScorer> make_scorer(ScorerKind kind,
                                       const CorpusIndex& index,
                                       const ElitenessModel* model,
                                       const ScorerOptions& opts = {});

// Scores candidates (posting union of the query terms, or every document for
// full-scan scorers), sorts by (score desc, doc_id asc) and truncates to
// top_k. An empty candidate set yields an empty list.
RankedList rank(const QueryRepr& q, const CorpusIndex& index,
                const DocScorer& scorer, std::uint32_t top_k);

// Query terms whose fit is missing or unusable, for per-query diagnostics.
std::size_t count_skipped_terms(const QueryRepr& q,
                                const ElitenessModel& model);

// TREC run format: query_id Q0 doc_id rank score run_tag, ranks from 1,
// scores with 6 decimal places.
void write_trec_run(std::ostream& out, const RankedList& list,
                    std::string_view run_tag);

}  // namespace eliterank

#endif  // ELITERANK_RANKING_HPP
