#include "eliterank/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eliterank/ranking.hpp"

namespace eliterank {

void BM25Config::validate() const {
  if (k1 <= 0.0 || b < 0.0 || b > 1.0) {
    throw std::invalid_argument("BM25Config: need k1 > 0 and b in [0,1]");
  }
}

void LMConfig::validate() const {
  if (smoothing == Smoothing::kJelinekMercer) {
    if (lambda <= 0.0 || lambda > 1.0) {
      throw std::invalid_argument("LMConfig: lambda must lie in (0,1]");
    }
  } else if (mu <= 0.0) {
    throw std::invalid_argument("LMConfig: mu must be > 0");
  }
}

double bm25_score(const QueryRepr& q, DocId d, const CorpusIndex& index,
                  const BM25Config& cfg) {
  const double n = static_cast<double>(index.doc_count());
  const double dl = index.doc_len(d);
  const double avg = index.avg_doc_len();

  double score = 0.0;
  for (const TermId t : q.elite_terms) {
    const std::uint32_t tf = index.tf(t, d);
    if (tf == 0) continue;
    const double df = static_cast<double>(index.df(t));
    const double idf = std::max(0.0, std::log((n - df + 0.5) / (df + 0.5)));
    const double tf_part = (tf * (cfg.k1 + 1.0)) /
                           (tf + cfg.k1 * (1.0 - cfg.b + cfg.b * dl / avg));
    score += idf * tf_part;
  }
  return score;
}

double lm_jm_score(const QueryRepr& q, DocId d, const CorpusIndex& index,
                   const LMConfig& cfg) {
  const double total = static_cast<double>(index.total_tokens());
  const double dl = index.doc_len(d);

  double score = 0.0;
  for (const TermId t : q.elite_terms) {
    const double cf = static_cast<double>(index.cf(t));
    if (cf == 0.0) continue;  // cannot be smoothed
    const double p_coll = cf / total;
    const std::uint32_t tf = index.tf(t, d);
    const double mle = tf > 0 ? (1.0 - cfg.lambda) * tf / dl : 0.0;
    score += std::log(mle + cfg.lambda * p_coll);
  }
  return score;
}

double lm_dirichlet_score(const QueryRepr& q, DocId d,
                          const CorpusIndex& index, const LMConfig& cfg) {
  const double total = static_cast<double>(index.total_tokens());
  const double dl = index.doc_len(d);

  double score = 0.0;
  for (const TermId t : q.elite_terms) {
    const double cf = static_cast<double>(index.cf(t));
    if (cf == 0.0) continue;
    const double p_coll = cf / total;
    const std::uint32_t tf = index.tf(t, d);
    score += std::log((tf + cfg.mu * p_coll) / (dl + cfg.mu));
  }
  return score;
}

}  // namespace eliterank
