#ifndef ELITERANK_MIXTURE_HPP
#define ELITERANK_MIXTURE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "eliterank/corpus.hpp"

namespace eliterank {

// One term's fitted 2-Poisson mixture: tf ~ Pois(mu_elite) in documents
// elite for the term, Pois(mu_nonelite) otherwise, mixed with weight
// p_elite = P(elite). Published params satisfy mu_elite >= mu_nonelite.
struct TwoPoissonParams {
  double mu_elite = 0.0;
  double mu_nonelite = 0.0;
  double p_elite = 0.5;
};

struct EMConfig {
  std::uint32_t max_iters = 100;
  double tol = 1e-6;        // on the per-document mean log-likelihood change
  std::uint32_t n_boost = 3;
  double mu0_init = 1e-3;
  double mu_floor = 1e-9;
  double p_clamp = 1e-6;

  void validate() const;  // throws std::invalid_argument
};

struct FitResult {
  TwoPoissonParams params;
  std::uint32_t iterations = 0;
  std::vector<double> loglik_trace;  // entry 0 is at init, one per iteration after
  bool converged = false;
  bool swapped = false;        // components reordered post-fit
  bool mean_fallback = false;  // mu_elite seeded from the unconditional mean
  bool clamped = false;        // a floor or clamp was hit during fitting
  bool usable = true;          // false: scorers skip the term
  std::string error;           // failure diagnostic when usable is false
};

// Initialization: p = df/N (clamped), mu_elite = n_boost * mean tf over
// documents with tf > 1 (falls back to n_boost * cf/df when no such
// document exists), mu_nonelite = mu0_init.
TwoPoissonParams init_params(const TermStats& stats, const EMConfig& cfg,
                             bool* used_mean_fallback = nullptr);

// P(elite | tf), computed in log space; tf may be real-valued since the
// factorial cancels. Throws if both mixture components have log-zero mass.
double e_step(const TwoPoissonParams& params, double tf);

// Responsibilities for every histogram bucket of `stats`, zero bucket first,
// then tf_counts in ascending order (layout shared with m_step).
std::vector<double> e_step_buckets(const TwoPoissonParams& params,
                                   const TermStats& stats);

struct MStepResult {
  TwoPoissonParams params;
  bool collapsed = false;  // one component lost all responsibility
  bool clamped = false;    // a mu floor or p clamp was applied
};

// Bucket-weighted M-step update. `responsibilities` follows the
// e_step_buckets layout: index 0 is the tf = 0 bucket.
MStepResult m_step(std::span<const double> responsibilities,
                   const TermStats& stats, const EMConfig& cfg);

// Total log-likelihood of the histogram under the mixture. The
// parameter-free sum of log(tf!) is omitted, identically across iterations,
// so traces are comparable only within one run configuration.
double log_likelihood(const TwoPoissonParams& params, const TermStats& stats);

// Full EM fit: alternates E and M steps until the per-document mean
// log-likelihood changes by less than tol, or max_iters. Canonicalizes the
// component order afterwards (swapping replaces p with 1-p).
FitResult em_fit(const TermStats& stats, const EMConfig& cfg);

}  // namespace eliterank

#endif  // ELITERANK_MIXTURE_HPP
