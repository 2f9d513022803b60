#ifndef ELITERANK_SYNTHETIC_HPP
#define ELITERANK_SYNTHETIC_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "eliterank/corpus.hpp"

namespace eliterank {

// Seeded 2-Poisson document sampler. For every document and planted term,
// the generator draws eliteness ~ Bernoulli(p_elite) and then
// tf ~ Pois(mu_elite) or Pois(mu_nonelite); the document text repeats the
// term tf times. Sampling uses mt19937_64 with inversion-method draws only,
// so a seed pins the corpus across platforms.
struct PlantedTerm {
  std::string term;
  double p_elite;
  double mu_elite;
  double mu_nonelite;
};

struct SyntheticSpec {
  std::uint64_t n_docs = 1000;
  std::uint64_t seed = 1;
  std::vector<PlantedTerm> terms;
  // Extra "filler" padding tokens per doc, uniform in [0, filler_max].
  std::uint32_t filler_max = 0;
};

struct SyntheticCorpus {
  std::vector<Document> docs;
  // Generator-side tallies, one histogram per planted term: tf -> doc count
  // (tf = 0 included). The index built from `docs` must reproduce these.
  std::vector<std::map<std::uint32_t, std::uint64_t>> tf_tallies;
  // Ground-truth eliteness per planted term and document, for qrels.
  std::vector<std::vector<bool>> elite;
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// Deterministic inversion-method draws used by the generator.
double uniform01(std::mt19937_64& rng);
std::uint32_t poisson_sample(std::mt19937_64& rng, double mu);

}  // namespace eliterank

#endif  // ELITERANK_SYNTHETIC_HPP
