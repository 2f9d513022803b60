#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eliterank/corpus.hpp"
#include "eliterank/eliteness_model.hpp"
#include "eliterank/ranking.hpp"
#include "eliterank/synthetic.hpp"

using namespace eliterank;

namespace {

// Model with hand-set params for every vocabulary term.
ElitenessModel manual_model(const CorpusIndex& index,
                            const std::vector<TwoPoissonParams>& params) {
  REQUIRE(params.size() == index.vocab_size());
  ElitenessModel model;
  model.doc_count = index.doc_count();
  model.corpus_hash = index.identity_hash();
  model.fits.resize(params.size());
  for (std::size_t t = 0; t < params.size(); ++t) {
    model.fits[t].params = params[t];
    model.fits[t].converged = true;
  }
  return model;
}

QueryRepr query_of(const CorpusIndex& index, const std::string& text) {
  return make_query("q", text, index);
}

// -----------------------------------------------------------------------
// Test-local oracle for the strict identity score: the naive O(vocab)
// double loop, own arithmetic throughout.
// -----------------------------------------------------------------------
double naive_log_pois(double tf, double mu) {
  if (mu == 0.0) return tf == 0.0 ? 0.0 : -INFINITY;
  return -mu + tf * std::log(mu);
}

double naive_strict_identity(const QueryRepr& q, DocId d,
                             const CorpusIndex& index,
                             const ElitenessModel& model, double b) {
  double score = 0.0;
  for (TermId t = 0; t < index.vocab_size(); ++t) {
    const FitResult* fit = model.usable_fit(t);
    if (!fit) continue;
    const TwoPoissonParams& p = fit->params;
    const std::uint32_t tf = index.tf(t, d);
    double ntf = 0.0;
    if (tf > 0) {
      ntf = tf * (b + (1.0 - b) * index.avg_doc_len() / index.doc_len(d));
    }
    const double w1 = std::log(p.p_elite) + naive_log_pois(ntf, p.mu_elite);
    const double w0 =
        std::log(1.0 - p.p_elite) + naive_log_pois(ntf, p.mu_nonelite);
    const double hi = std::max(w1, w0);
    const double log_mix = hi + std::log(std::exp(w1 - hi) + std::exp(w0 - hi));
    const bool in_query =
        std::find(q.elite_terms.begin(), q.elite_terms.end(), t) !=
        q.elite_terms.end();
    if (in_query) {
      score += naive_log_pois(ntf, p.mu_elite) - log_mix;
    } else {
      score += naive_log_pois(ntf, p.mu_nonelite) - log_mix;
    }
  }
  return score;
}

}  // namespace

TEST_CASE("make_query collapses duplicates and records unknown terms") {
  const CorpusIndex index = build_index({{"d1", "apple banana"}});
  const QueryRepr q = query_of(index, "banana banana apple kiwi kiwi");
  CHECK(q.elite_terms.size() == 2);
  CHECK(q.unknown_terms == std::vector<std::string>{"kiwi"});
}

TEST_CASE("empty query scores zero everywhere") {
  const CorpusIndex index = build_index({{"d1", "a b"}, {"d2", "c"}});
  const ElitenessModel model = fit_model(index, EMConfig{});
  const QueryRepr q = query_of(index, "");
  for (DocId d = 0; d < index.doc_count(); ++d) {
    CHECK(score_final(q, d, index, model, 0.64) == 0.0);
    CHECK(score_logical_inclusion(q, d, index, model, 0.64) == 0.0);
    CHECK(score_idf(q, d, index) == 0.0);
  }
}

TEST_CASE("p -> 1 collapses every contribution to zero") {
  const CorpusIndex index = build_index({{"d1", "a a a"}, {"d2", "a"}});
  const ElitenessModel model = manual_model(index, {{4.0, 0.1, 1.0}});
  const QueryRepr q = query_of(index, "a");
  for (DocId d = 0; d < index.doc_count(); ++d) {
    CHECK(score_final(q, d, index, model, 1.0) == 0.0);
    CHECK(score_logical_inclusion(q, d, index, model, 1.0) == 0.0);
  }
}

TEST_CASE("frozen single-term score at t = 3") {
  // corpus where the query term sits at tf = 3 with DL = avgDL, so the
  // normalized tf equals 3 for every b
  const CorpusIndex index = build_index(
      {{"d1", "t t t x x"}, {"d2", "x x x x x"}, {"d3", "x x x x x"}});
  const ElitenessModel model =
      manual_model(index, {{5.0, 0.2, 0.1}, {1.0, 1.0, 0.5}});
  const QueryRepr q = query_of(index, "t");
  // log[e^-5 * 125 / (0.1 e^-5 125 + 0.9 e^-0.2 0.008)]
  const double frozen = 2.2349357898996078741;
  CHECK(score_final(q, 0, index, model, 0.64) ==
        doctest::Approx(frozen).epsilon(1e-12));
  CHECK(score_logical_inclusion(q, 0, index, model, 0.64) ==
        doctest::Approx(frozen).epsilon(1e-12));
}

TEST_CASE("scorer equivalence across a fitted synthetic corpus") {
  SyntheticSpec spec;
  spec.n_docs = 300;
  spec.seed = 17;
  spec.filler_max = 6;
  for (int t = 0; t < 10; ++t) {
    spec.terms.push_back({"t" + std::to_string(t), 0.08 + 0.03 * (t % 4),
                          3.0 + 0.7 * (t % 5), 0.05 + 0.05 * (t % 3)});
  }
  const CorpusIndex index = build_index(generate_synthetic(spec).docs);
  const ElitenessModel model = fit_model(index, EMConfig{});

  const QueryRepr q = query_of(index, "t0 t3 t7");
  for (const double b : {0.0, 0.64, 1.0}) {
    for (DocId d = 0; d < index.doc_count(); ++d) {
      const double lhs = score_final(q, d, index, model, b);
      const double rhs = score_logical_inclusion(q, d, index, model, b);
      CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
  }
}

TEST_CASE("uninformative mixture scores zero through the posterior route") {
  const CorpusIndex index = build_index({{"d1", "a a"}, {"d2", "a"}});
  const ElitenessModel model = manual_model(index, {{2.0, 2.0, 0.5}});
  const QueryRepr q = query_of(index, "a");
  CHECK(score_logical_inclusion(q, 0, index, model, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("posterior below the prior contributes negatively") {
  // tf = 1 is below the break-even point for these params
  const CorpusIndex index = build_index({{"d1", "a"}, {"d2", "a a a a a a"}});
  const ElitenessModel model = manual_model(index, {{6.0, 0.3, 0.3}});
  const QueryRepr q = query_of(index, "a");
  CHECK(score_logical_inclusion(q, 0, index, model, 1.0) < 0.0);
  CHECK(score_logical_inclusion(q, 1, index, model, 1.0) > 0.0);
}

TEST_CASE("strict identity: empty query returns the pure background") {
  const CorpusIndex index = build_index({{"d1", "a b"}, {"d2", "b c c"}});
  const ElitenessModel model = fit_model(index, EMConfig{});
  const StrictIdentityScorer scorer(index, model, 0.64);
  const QueryRepr q = query_of(index, "");
  for (DocId d = 0; d < index.doc_count(); ++d) {
    CHECK(scorer.score(q, d) == scorer.background(d));
  }
}

TEST_CASE("strict identity: decomposition equals the naive double loop") {
  // 50-term corpus
  SyntheticSpec spec;
  spec.n_docs = 60;
  spec.seed = 23;
  spec.filler_max = 0;
  for (int t = 0; t < 50; ++t) {
    spec.terms.push_back({"w" + std::to_string(100 + t),
                          0.1 + 0.02 * (t % 6), 2.0 + 0.4 * (t % 7),
                          0.05 + 0.04 * (t % 4)});
  }
  const CorpusIndex index = build_index(generate_synthetic(spec).docs);
  REQUIRE(index.vocab_size() == 50);
  const ElitenessModel model = fit_model(index, EMConfig{});
  const StrictIdentityScorer scorer(index, model, 0.64);

  for (const std::string text : {"w100 w117 w149", "w105", ""}) {
    const QueryRepr q = query_of(index, text);
    for (DocId d = 0; d < index.doc_count(); ++d) {
      const double fast = scorer.score(q, d);
      const double naive = naive_strict_identity(q, d, index, model, 0.64);
      CHECK(std::abs(fast - naive) <= 1e-9);
    }
  }
}

TEST_CASE("strict identity on a one-term vocabulary reduces to inclusion") {
  const CorpusIndex index = build_index({{"d1", "a a a"}, {"d2", "a"}});
  const ElitenessModel model = manual_model(index, {{4.0, 0.3, 0.2}});
  const StrictIdentityScorer scorer(index, model, 1.0);
  const QueryRepr q = query_of(index, "a");
  for (DocId d = 0; d < index.doc_count(); ++d) {
    // background cancels term by term: B(d) holds only this term
    const double inclusion = score_logical_inclusion(q, d, index, model, 1.0);
    CHECK(scorer.score(q, d) ==
          doctest::Approx(inclusion).epsilon(1e-12));
  }
}

TEST_CASE("idf scorer hand values") {
  // N = 100; term "rare" in 10 docs, term "everywhere" in all
  std::vector<Document> docs;
  for (int d = 0; d < 100; ++d) {
    docs.push_back({"d" + std::to_string(d + 100),
                    d < 10 ? "rare everywhere" : "everywhere"});
  }
  const CorpusIndex index = build_index(docs);

  const QueryRepr rare = query_of(index, "rare");
  CHECK(score_idf(rare, 0, index) ==
        doctest::Approx(std::log(10.0)).epsilon(1e-12));
  CHECK(score_idf(rare, 50, index) == 0.0);  // term absent from doc

  const QueryRepr common = query_of(index, "everywhere");
  CHECK(score_idf(common, 0, index) == 0.0);  // df = N carries no signal
}

TEST_CASE("rank: posting-driven candidates") {
  const CorpusIndex index = build_index(
      {{"d1", "x a"}, {"d2", "x"}, {"d3", "a x"}, {"d4", "b"}, {"d5", "b"}});
  const ElitenessModel model = fit_model(index, EMConfig{});
  const auto scorer =
      make_scorer(ScorerKind::kLogicalInclusion, index, &model, {});
  const RankedList out = rank(query_of(index, "a"), index, *scorer, 1000);
  CHECK(out.entries.size() == 2);  // only d1 and d3 contain "a"
}

TEST_CASE("rank: ties broken by doc id ascending") {
  const CorpusIndex index =
      build_index({{"zeta", "a"}, {"alpha", "a"}, {"mid", "a"}});
  const auto scorer = make_scorer(ScorerKind::kIdf, index, nullptr, {});
  const RankedList out = rank(query_of(index, "a"), index, *scorer, 10);
  REQUIRE(out.entries.size() == 3);
  CHECK(out.entries[0].doc_id == "alpha");
  CHECK(out.entries[1].doc_id == "mid");
  CHECK(out.entries[2].doc_id == "zeta");
}

TEST_CASE("rank: tf-monotone on equal-length docs") {
  // five docs, tf = 1..5 for "a", padded to equal length
  std::vector<Document> docs;
  for (int tf = 1; tf <= 5; ++tf) {
    std::string text;
    for (int i = 0; i < tf; ++i) text += "a ";
    for (int i = tf; i < 6; ++i) text += "pad ";
    docs.push_back({"d" + std::to_string(tf), text});
  }
  const CorpusIndex index = build_index(docs);
  const ElitenessModel model = fit_model(index, EMConfig{});
  REQUIRE(model.fits[*index.term_id("a")].params.mu_elite >
          model.fits[*index.term_id("a")].params.mu_nonelite);

  const auto scorer = make_scorer(ScorerKind::kFinal, index, &model, {});
  const RankedList out = rank(query_of(index, "a"), index, *scorer, 10);
  REQUIRE(out.entries.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(out.entries[i].doc_id == "d" + std::to_string(5 - i));
  }
  for (std::size_t i = 1; i < out.entries.size(); ++i) {
    CHECK(out.entries[i].score < out.entries[i - 1].score);
  }
}

TEST_CASE("rank: per-query constant shifts never change the order") {
  SyntheticSpec spec;
  spec.n_docs = 120;
  spec.seed = 31;
  for (int t = 0; t < 6; ++t) {
    spec.terms.push_back({"t" + std::to_string(t), 0.15, 3.5, 0.2});
  }
  const CorpusIndex index = build_index(generate_synthetic(spec).docs);
  const ElitenessModel model = fit_model(index, EMConfig{});
  const auto base = make_scorer(ScorerKind::kFinal, index, &model, {});

  struct Shifted : DocScorer {
    const DocScorer* inner;
    double offset;
    double score(const QueryRepr& q, DocId d) const override {
      return inner->score(q, d) + offset;
    }
  } shifted;
  shifted.inner = base.get();
  shifted.offset = -7.25;

  const QueryRepr q = query_of(index, "t1 t4");
  const RankedList a = rank(q, index, *base, 1000);
  const RankedList b = rank(q, index, shifted, 1000);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].doc_id == b.entries[i].doc_id);
  }
}

TEST_CASE("rank: top_k validation and empty candidates") {
  const CorpusIndex index = build_index({{"d1", "a"}});
  const auto scorer = make_scorer(ScorerKind::kIdf, index, nullptr, {});
  CHECK_THROWS_AS(rank(query_of(index, "a"), index, *scorer, 0),
                  std::invalid_argument);
  const RankedList empty = rank(query_of(index, "zzz"), index, *scorer, 5);
  CHECK(empty.entries.empty());
}

TEST_CASE("strict identity ranks every document") {
  const CorpusIndex index =
      build_index({{"d1", "a b"}, {"d2", "c d"}, {"d3", "e f"}});
  const ElitenessModel model = fit_model(index, EMConfig{});
  const auto scorer =
      make_scorer(ScorerKind::kStrictIdentity, index, &model, {});
  const RankedList out = rank(query_of(index, "a"), index, *scorer, 100);
  CHECK(out.entries.size() == 3);
}

TEST_CASE("degenerate occurrence model reproduces idf exactly") {
  // 50-doc corpus; p = df/N, mu0 = 0 makes the posterior 1 on occurrence
  SyntheticSpec spec;
  spec.n_docs = 50;
  spec.seed = 41;
  for (int t = 0; t < 8; ++t) {
    spec.terms.push_back({"t" + std::to_string(t), 0.2, 2.5, 0.1});
  }
  const CorpusIndex index = build_index(generate_synthetic(spec).docs);

  std::vector<TwoPoissonParams> degenerate;
  for (TermId t = 0; t < index.vocab_size(); ++t) {
    const double p = static_cast<double>(index.df(t)) /
                     static_cast<double>(index.doc_count());
    degenerate.push_back({1.0, 0.0, p});
  }
  const ElitenessModel model = manual_model(index, degenerate);

  const QueryRepr q = query_of(index, "t0 t3 t5");
  for (DocId d = 0; d < index.doc_count(); ++d) {
    const double eliteness = score_logical_inclusion(q, d, index, model, 1.0);
    const double idf = score_idf(q, d, index);
    CHECK(std::abs(eliteness - idf) <= 1e-9);
  }
}

TEST_CASE("scores stay finite for extreme tf") {
  const CorpusIndex index = build_index({{"d1", "a"}});
  const ElitenessModel model = manual_model(index, {{40.0, 1e-9, 0.05}});
  for (const double tf : {1.0, 10.0, 100.0, 1e4}) {
    const double post = e_step(model.fits[0].params, tf);
    CHECK(std::isfinite(post));
  }
  // the underflow guard keeps the posterior route finite as well
  const QueryRepr q = query_of(index, "a");
  CHECK(std::isfinite(score_logical_inclusion(q, 0, index, model, 1.0)));
  CHECK(std::isfinite(score_final(q, 0, index, model, 1.0)));
}

TEST_CASE("make_scorer rejects a missing or mismatched model") {
  const CorpusIndex index = build_index({{"d1", "a"}});
  CHECK_THROWS_AS(make_scorer(ScorerKind::kFinal, index, nullptr, {}),
                  std::invalid_argument);

  const CorpusIndex other = build_index({{"d1", "a b"}});
  const ElitenessModel model = fit_model(other, EMConfig{});
  CHECK_THROWS_WITH_AS(make_scorer(ScorerKind::kFinal, index, &model, {}),
                       doctest::Contains("mismatch"), std::invalid_argument);
}

TEST_CASE("scorer selector round trip") {
  for (const auto kind :
       {ScorerKind::kFinal, ScorerKind::kLogicalInclusion,
        ScorerKind::kStrictIdentity, ScorerKind::kIdf, ScorerKind::kBm25,
        ScorerKind::kLmJm, ScorerKind::kLmDirichlet}) {
    CHECK(parse_scorer(scorer_name(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_scorer("pagerank"), std::invalid_argument);
}

TEST_CASE("trec run line format") {
  RankedList list;
  list.query_id = "42";
  list.entries = {{"docA", 1.5}, {"docB", -0.25}};
  std::ostringstream out;
  write_trec_run(out, list, "tag1");
  CHECK(out.str() ==
        "42 Q0 docA 1 1.500000 tag1\n42 Q0 docB 2 -0.250000 tag1\n");
}
