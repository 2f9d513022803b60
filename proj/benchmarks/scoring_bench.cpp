#include <benchmark/benchmark.h>

#include <memory>

#include "eliterank/corpus.hpp"
#include "eliterank/eliteness_model.hpp"
#include "eliterank/ranking.hpp"
#include "eliterank/synthetic.hpp"

using namespace eliterank;

namespace {

struct Fixture {
  CorpusIndex index;
  ElitenessModel model;
  QueryRepr query;

  static Fixture make(std::uint64_t n_docs) {
    SyntheticSpec spec;
    spec.n_docs = n_docs;
    spec.seed = 3;
    spec.filler_max = 8;
    for (int t = 0; t < 40; ++t) {
      spec.terms.push_back({"t" + std::to_string(t), 0.1, 4.0, 0.2});
    }
    CorpusIndex index = build_index(generate_synthetic(spec).docs);
    ElitenessModel model = fit_model(index, EMConfig{}, 0);
    QueryRepr query = make_query("q", "t0 t7 t13 t21", index);
    return {std::move(index), std::move(model), std::move(query)};
  }
};

}  // namespace

static void BM_RankFinal(benchmark::State& state) {
  const Fixture f = Fixture::make(static_cast<std::uint64_t>(state.range(0)));
  const auto scorer = make_scorer(ScorerKind::kFinal, f.index, &f.model, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank(f.query, f.index, *scorer, 1000));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RankFinal)->Arg(1000)->Arg(10000);

static void BM_RankBm25(benchmark::State& state) {
  const Fixture f = Fixture::make(static_cast<std::uint64_t>(state.range(0)));
  const auto scorer = make_scorer(ScorerKind::kBm25, f.index, nullptr, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank(f.query, f.index, *scorer, 1000));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RankBm25)->Arg(1000)->Arg(10000);

// full-scan scorer; construction cost (background pass) measured separately
static void BM_StrictIdentityConstruction(benchmark::State& state) {
  const Fixture f = Fixture::make(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(StrictIdentityScorer(f.index, f.model, 0.64));
  }
}
BENCHMARK(BM_StrictIdentityConstruction)->Arg(1000)->Arg(10000);

static void BM_RankStrictIdentity(benchmark::State& state) {
  const Fixture f = Fixture::make(static_cast<std::uint64_t>(state.range(0)));
  const StrictIdentityScorer scorer(f.index, f.model, 0.64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank(f.query, f.index, scorer, 1000));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RankStrictIdentity)->Arg(1000)->Arg(10000);

static void BM_IndexBuild(benchmark::State& state) {
  SyntheticSpec spec;
  spec.n_docs = static_cast<std::uint64_t>(state.range(0));
  spec.seed = 5;
  for (int t = 0; t < 40; ++t) {
    spec.terms.push_back({"t" + std::to_string(t), 0.1, 4.0, 0.2});
  }
  const SyntheticCorpus corpus = generate_synthetic(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_index(corpus.docs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IndexBuild)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
