#include "eliterank/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace eliterank {

double uniform01(std::mt19937_64& rng) {
  // 53 mantissa bits; avoids distribution implementations that vary across
  // standard libraries
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint32_t poisson_sample(std::mt19937_64& rng, double mu) {
  if (mu < 0.0) throw std::invalid_argument("poisson_sample: mu < 0");
  if (mu == 0.0) return 0;
  // CDF inversion; fine for the small means a term mixture uses
  const double u = uniform01(rng);
  double pmf = std::exp(-mu);
  double cdf = pmf;
  std::uint32_t k = 0;
  const auto cap = static_cast<std::uint32_t>(10.0 * mu + 200.0);
  while (u > cdf && k < cap) {
    ++k;
    pmf *= mu / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_docs == 0) {
    throw std::invalid_argument("generate_synthetic: n_docs must be >= 1");
  }
  for (const PlantedTerm& t : spec.terms) {
    if (t.term.empty() || t.p_elite <= 0.0 || t.p_elite >= 1.0 ||
        t.mu_elite < 0.0 || t.mu_nonelite < 0.0) {
      throw std::invalid_argument("generate_synthetic: bad planted term '" +
                                  t.term + "'");
    }
  }

  std::mt19937_64 rng(spec.seed);
  SyntheticCorpus corpus;
  corpus.docs.reserve(spec.n_docs);
  corpus.tf_tallies.resize(spec.terms.size());
  corpus.elite.assign(spec.terms.size(),
                      std::vector<bool>(spec.n_docs, false));

  char id_buf[32];
  for (std::uint64_t d = 0; d < spec.n_docs; ++d) {
    std::snprintf(id_buf, sizeof(id_buf), "d%08llu",
                  static_cast<unsigned long long>(d));
    std::string text;
    for (std::size_t t = 0; t < spec.terms.size(); ++t) {
      const PlantedTerm& planted = spec.terms[t];
      const bool elite = uniform01(rng) < planted.p_elite;
      const std::uint32_t tf = poisson_sample(
          rng, elite ? planted.mu_elite : planted.mu_nonelite);
      corpus.elite[t][d] = elite;
      ++corpus.tf_tallies[t][tf];
      for (std::uint32_t i = 0; i < tf; ++i) {
        if (!text.empty()) text.push_back(' ');
        text += planted.term;
      }
    }
    if (spec.filler_max > 0) {
      const auto extra = static_cast<std::uint32_t>(
          uniform01(rng) * (spec.filler_max + 1));
      for (std::uint32_t i = 0; i < extra && i <= spec.filler_max; ++i) {
        if (!text.empty()) text.push_back(' ');
        text += "filler";
      }
    }
    corpus.docs.push_back({id_buf, std::move(text)});
  }
  return corpus;
}

}  // namespace eliterank
