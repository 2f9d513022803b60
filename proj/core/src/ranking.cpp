#include "eliterank/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "eliterank/log_math.hpp"

namespace eliterank {

namespace {

// log of the mixture density at normalized tf t (factorial-free form).
double log_mixture(const TwoPoissonParams& p, double t) {
  return log_sum_exp(
      std::log(p.p_elite) + log_poisson_kernel(t, p.mu_elite),
      std::log1p(-p.p_elite) + log_poisson_kernel(t, p.mu_nonelite));
}

// log[P(elite | t) / p]: the per-term score of the fitted ranking function.
double elite_log_ratio(const TwoPoissonParams& p, double t) {
  return log_poisson_kernel(t, p.mu_elite) - log_mixture(p, t);
}

// log[P(non-elite | t) / (1-p)]: the background side of strict identity.
double nonelite_log_ratio(const TwoPoissonParams& p, double t) {
  return log_poisson_kernel(t, p.mu_nonelite) - log_mixture(p, t);
}

}  // namespace

QueryRepr make_query(std::string query_id, std::string_view text,
                     const CorpusIndex& index) {
  QueryRepr q;
  q.query_id = std::move(query_id);
  for (const std::string& token : tokenize(text, index.tokenizer())) {
    if (const auto t = index.term_id(token)) {
      q.elite_terms.push_back(*t);
    } else {
      q.unknown_terms.push_back(token);
    }
  }
  std::sort(q.elite_terms.begin(), q.elite_terms.end());
  q.elite_terms.erase(
      std::unique(q.elite_terms.begin(), q.elite_terms.end()),
      q.elite_terms.end());
  std::sort(q.unknown_terms.begin(), q.unknown_terms.end());
  q.unknown_terms.erase(
      std::unique(q.unknown_terms.begin(), q.unknown_terms.end()),
      q.unknown_terms.end());
  return q;
}

double score_final(const QueryRepr& q, DocId d, const CorpusIndex& index,
                   const ElitenessModel& model, double b) {
  double score = 0.0;
  for (const TermId t : q.elite_terms) {
    const FitResult* fit = model.usable_fit(t);
    if (!fit) continue;
    const std::uint32_t tf = index.tf(t, d);
    if (tf == 0) continue;
    const double ntf =
        normalized_tf(tf, index.doc_len(d), index.avg_doc_len(), b);
    score += elite_log_ratio(fit->params, ntf);
  }
  return score;
}

double score_logical_inclusion(const QueryRepr& q, DocId d,
                               const CorpusIndex& index,
                               const ElitenessModel& model, double b) {
  double score = 0.0;
  for (const TermId t : q.elite_terms) {
    const FitResult* fit = model.usable_fit(t);
    if (!fit) continue;
    const std::uint32_t tf = index.tf(t, d);
    if (tf == 0) continue;
    const double ntf =
        normalized_tf(tf, index.doc_len(d), index.avg_doc_len(), b);
    const double posterior = e_step(fit->params, ntf);
    if (posterior > 0.0) {
      score += std::log(posterior) - std::log(fit->params.p_elite);
    } else {
      // exp underflowed; the log-space form is the same quantity
      score += elite_log_ratio(fit->params, ntf);
    }
  }
  return score;
}

double score_idf(const QueryRepr& q, DocId d, const CorpusIndex& index) {
  double score = 0.0;
  for (const TermId t : q.elite_terms) {
    if (index.df(t) == 0) continue;
    if (index.tf(t, d) == 0) continue;
    score += std::log(static_cast<double>(index.doc_count()) /
                      static_cast<double>(index.df(t)));
  }
  return score;
}

StrictIdentityScorer::StrictIdentityScorer(const CorpusIndex& index,
                                           const ElitenessModel& model,
                                           double b)
    : index_(index), model_(model), b_(b) {
  // Background B(d) = sum over all usable terms of the non-elite log ratio
  // at the doc's normalized tf. Terms absent from a doc sit at tf = 0, whose
  // ratio is doc-independent: aggregate those once, then walk the postings
  // to replace the tf = 0 value with the occurring one.
  double zero_total = 0.0;
  for (TermId t = 0; t < index.vocab_size(); ++t) {
    if (const FitResult* fit = model.usable_fit(t)) {
      zero_total += nonelite_log_ratio(fit->params, 0.0);
    }
  }
  background_.assign(index.doc_count(), zero_total);

  for (TermId t = 0; t < index.vocab_size(); ++t) {
    const FitResult* fit = model.usable_fit(t);
    if (!fit) continue;
    const double at_zero = nonelite_log_ratio(fit->params, 0.0);
    for (const Posting& p : index.postings(t)) {
      const double ntf = normalized_tf(p.tf, index.doc_len(p.doc),
                                       index.avg_doc_len(), b_);
      background_[p.doc] += nonelite_log_ratio(fit->params, ntf) - at_zero;
    }
  }
}

double StrictIdentityScorer::score(const QueryRepr& q, DocId d) const {
  double score = background_[d];
  for (const TermId t : q.elite_terms) {
    const FitResult* fit = model_.usable_fit(t);
    if (!fit) continue;
    const std::uint32_t tf = index_.tf(t, d);
    const double ntf =
        tf == 0 ? 0.0
                : normalized_tf(tf, index_.doc_len(d), index_.avg_doc_len(),
                                b_);
    // move the term from the non-elite product to the elite one
    score += elite_log_ratio(fit->params, ntf) -
             nonelite_log_ratio(fit->params, ntf);
  }
  return score;
}

namespace {

class FinalScorer : public DocScorer {
 public:
  FinalScorer(const CorpusIndex& index, const ElitenessModel& model, double b)
      : index_(index), model_(model), b_(b) {}
  double score(const QueryRepr& q, DocId d) const override {
    return score_final(q, d, index_, model_, b_);
  }

 private:
  const CorpusIndex& index_;
  const ElitenessModel& model_;
  double b_;
};

class LogicalInclusionScorer : public DocScorer {
 public:
  LogicalInclusionScorer(const CorpusIndex& index, const ElitenessModel& model,
                         double b)
      : index_(index), model_(model), b_(b) {}
  double score(const QueryRepr& q, DocId d) const override {
    return score_logical_inclusion(q, d, index_, model_, b_);
  }

 private:
  const CorpusIndex& index_;
  const ElitenessModel& model_;
  double b_;
};

class IdfScorer : public DocScorer {
 public:
  explicit IdfScorer(const CorpusIndex& index) : index_(index) {}
  double score(const QueryRepr& q, DocId d) const override {
    return score_idf(q, d, index_);
  }

 private:
  const CorpusIndex& index_;
};

class Bm25Scorer : public DocScorer {
 public:
  Bm25Scorer(const CorpusIndex& index, BM25Config cfg)
      : index_(index), cfg_(cfg) {}
  double score(const QueryRepr& q, DocId d) const override {
    return bm25_score(q, d, index_, cfg_);
  }

 private:
  const CorpusIndex& index_;
  BM25Config cfg_;
};

class LmScorer : public DocScorer {
 public:
  LmScorer(const CorpusIndex& index, LMConfig cfg)
      : index_(index), cfg_(cfg) {}
  double score(const QueryRepr& q, DocId d) const override {
    return cfg_.smoothing == LMConfig::Smoothing::kJelinekMercer
               ? lm_jm_score(q, d, index_, cfg_)
               : lm_dirichlet_score(q, d, index_, cfg_);
  }

 private:
  const CorpusIndex& index_;
  LMConfig cfg_;
};

}  // namespace

ScorerKind parse_scorer(std::string_view name) {
  if (name == "final") return ScorerKind::kFinal;
  if (name == "logical-inclusion") return ScorerKind::kLogicalInclusion;
  if (name == "strict-identity") return ScorerKind::kStrictIdentity;
  if (name == "idf") return ScorerKind::kIdf;
  if (name == "bm25") return ScorerKind::kBm25;
  if (name == "lm-jm") return ScorerKind::kLmJm;
  if (name == "lm-dirichlet") return ScorerKind::kLmDirichlet;
  throw std::invalid_argument("unknown scorer '" + std::string(name) + "'");
}

std::string_view scorer_name(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kFinal: return "final";
    case ScorerKind::kLogicalInclusion: return "logical-inclusion";
    case ScorerKind::kStrictIdentity: return "strict-identity";
    case ScorerKind::kIdf: return "idf";
    case ScorerKind::kBm25: return "bm25";
    case ScorerKind::kLmJm: return "lm-jm";
    case ScorerKind::kLmDirichlet: return "lm-dirichlet";
  }
  return "?";
}

std::unique_ptr<DocScorer> make_scorer(ScorerKind kind,
                                       const CorpusIndex& index,
                                       const ElitenessModel* model,
                                       const ScorerOptions& opts) {
  auto require_model = [&]() -> const ElitenessModel& {
    if (!model) {
      throw std::invalid_argument(
          std::string("scorer '") + std::string(scorer_name(kind)) +
          "' needs a fitted model");
    }
    if (model->corpus_hash != index.identity_hash()) {
      throw std::invalid_argument("model/index mismatch: the model was "
                                  "fitted on a different index");
    }
    return *model;
  };

  switch (kind) {
    case ScorerKind::kFinal:
      return std::make_unique<FinalScorer>(index, require_model(), opts.b);
    case ScorerKind::kLogicalInclusion:
      return std::make_unique<LogicalInclusionScorer>(index, require_model(),
                                                      opts.b);
    case ScorerKind::kStrictIdentity:
      return std::make_unique<StrictIdentityScorer>(index, require_model(),
                                                    opts.b);
    case ScorerKind::kIdf:
      return std::make_unique<IdfScorer>(index);
    case ScorerKind::kBm25:
      opts.bm25.validate();
      return std::make_unique<Bm25Scorer>(index, opts.bm25);
    case ScorerKind::kLmJm: {
      LMConfig cfg = opts.lm;
      cfg.smoothing = LMConfig::Smoothing::kJelinekMercer;
      cfg.validate();
      return std::make_unique<LmScorer>(index, cfg);
    }
    case ScorerKind::kLmDirichlet: {
      LMConfig cfg = opts.lm;
      cfg.smoothing = LMConfig::Smoothing::kDirichlet;
      cfg.validate();
      return std::make_unique<LmScorer>(index, cfg);
    }
  }
  throw std::logic_error("unreachable scorer kind");
}

RankedList rank(const QueryRepr& q, const CorpusIndex& index,
                const DocScorer& scorer, std::uint32_t top_k) {
  if (top_k == 0) throw std::invalid_argument("rank: top_k must be >= 1");

  std::vector<DocId> candidates;
  if (scorer.ranks_all_documents()) {
    candidates.resize(index.doc_count());
    for (DocId d = 0; d < candidates.size(); ++d) candidates[d] = d;
  } else {
    std::vector<bool> seen(index.doc_count(), false);
    for (const TermId t : q.elite_terms) {
      for (const Posting& p : index.postings(t)) {
        if (!seen[p.doc]) {
          seen[p.doc] = true;
          candidates.push_back(p.doc);
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());
  }

  std::vector<std::pair<DocId, double>> scored;
  scored.reserve(candidates.size());
  for (const DocId d : candidates) {
    scored.emplace_back(d, scorer.score(q, d));
  }
  std::sort(scored.begin(), scored.end(),
            [&](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return index.doc_name(a.first) < index.doc_name(b.first);
            });
  if (scored.size() > top_k) scored.resize(top_k);

  RankedList out;
  out.query_id = q.query_id;
  out.entries.reserve(scored.size());
  for (const auto& [d, s] : scored) {
    out.entries.push_back({index.doc_name(d), s});
  }
  return out;
}

std::size_t count_skipped_terms(const QueryRepr& q,
                                const ElitenessModel& model) {
  std::size_t skipped = 0;
  for (const TermId t : q.elite_terms) {
    if (!model.usable_fit(t)) ++skipped;
  }
  return skipped;
}

void write_trec_run(std::ostream& out, const RankedList& list,
                    std::string_view run_tag) {
  char score_buf[32];
  std::uint64_t rank_no = 1;
  for (const ScoredDoc& entry : list.entries) {
    std::snprintf(score_buf, sizeof(score_buf), "%.6f", entry.score);
    out << list.query_id << " Q0 " << entry.doc_id << ' ' << rank_no << ' '
        << score_buf << ' ' << run_tag << '\n';
    ++rank_no;
  }
}

}  // namespace eliterank
