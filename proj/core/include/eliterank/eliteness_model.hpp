#ifndef ELITERANK_ELITENESS_MODEL_HPP
#define ELITERANK_ELITENESS_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eliterank/corpus.hpp"
#include "eliterank/mixture.hpp"

namespace eliterank {

struct FitReport {
  std::uint64_t terms = 0;
  std::uint64_t converged = 0;
  std::uint64_t clamped = 0;
  std::uint64_t failed = 0;
  std::uint64_t mean_fallback = 0;
};

// Vocabulary-wide mixture model, index-aligned: fits[t] belongs to term id t
// of the index recorded by (doc_count, corpus_hash). Immutable once fitted;
// safe for concurrent reads.
struct ElitenessModel {
  std::uint64_t doc_count = 0;
  std::uint64_t corpus_hash = 0;
  EMConfig config;
  std::vector<FitResult> fits;

  // nullptr for out-of-range or failed terms; scorers skip those.
  const FitResult* usable_fit(TermId t) const;

  FitReport report() const;
};

// One independent fit per vocabulary term. Per-term fits are pure functions
// of per-term statistics, so thread count never changes the result;
// threads = 0 picks the hardware concurrency. A term whose fit fails is
// marked unusable instead of aborting the model.
ElitenessModel fit_model(const CorpusIndex& index, const EMConfig& cfg = {},
                         unsigned threads = 1);

// Text model file: a header line carrying N, the corpus hash and the
// EMConfig, then one record per usable term:
//   term TAB mu_elite TAB mu_nonelite TAB p_elite TAB converged TAB iterations
// Doubles are printed with 17 significant digits so round-trips are
// bit-exact. Loading validates the binding against `index`.
void save_model(const ElitenessModel& model, const CorpusIndex& index,
                const std::string& path);
ElitenessModel load_model(const std::string& path, const CorpusIndex& index);

}  // namespace eliterank

#endif  // ELITERANK_ELITENESS_MODEL_HPP
