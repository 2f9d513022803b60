#ifndef ELITERANK_BASELINES_HPP
#define ELITERANK_BASELINES_HPP

#include "eliterank/corpus.hpp"

namespace eliterank {

struct QueryRepr;

struct BM25Config {
  double k1 = 1.2;
  double b = 0.75;

  void validate() const;  // k1 > 0, b in [0,1]
};

struct LMConfig {
  enum class Smoothing { kJelinekMercer, kDirichlet };
  Smoothing smoothing = Smoothing::kDirichlet;
  double lambda = 0.7;  // JM, in (0,1]; 1 is the fully smoothed limit
  double mu = 2000.0;   // Dirichlet, > 0

  void validate() const;
};

// Okapi BM25 with the RSJ idf log((N-df+0.5)/(df+0.5)), floored at 0.
double bm25_score(const QueryRepr& q, DocId d, const CorpusIndex& index,
                  const BM25Config& cfg);

// Query log-likelihood with Jelinek-Mercer smoothing:
// sum log((1-lambda) tf/DL + lambda P(t|C)).
double lm_jm_score(const QueryRepr& q, DocId d, const CorpusIndex& index,
                   const LMConfig& cfg);

// Query log-likelihood with a Dirichlet prior:
// sum log((tf + mu P(t|C)) / (DL + mu)).
double lm_dirichlet_score(const QueryRepr& q, DocId d,
                          const CorpusIndex& index, const LMConfig& cfg);

}  // namespace eliterank

#endif  // ELITERANK_BASELINES_HPP
