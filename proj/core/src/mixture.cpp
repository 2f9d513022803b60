#include "eliterank/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "eliterank/log_math.hpp"

namespace eliterank {

namespace {

double clamp_p(double p, double p_clamp) {
  return std::min(std::max(p, p_clamp), 1.0 - p_clamp);
}

// log of the two mixture component weights at a given tf.
struct LogWeights {
  double elite;
  double nonelite;
};

LogWeights component_log_weights(const TwoPoissonParams& params, double tf) {
  return {std::log(params.p_elite) + log_poisson_kernel(tf, params.mu_elite),
          std::log1p(-params.p_elite) +
              log_poisson_kernel(tf, params.mu_nonelite)};
}

}  // namespace

void EMConfig::validate() const {
  if (max_iters == 0 || n_boost == 0 || tol <= 0.0 || tol >= 1.0 ||
      mu0_init <= 0.0 || mu_floor <= 0.0 || p_clamp <= 0.0 ||
      p_clamp >= 0.5) {
    throw std::invalid_argument("EMConfig: all fields must be positive, "
                                "tol < 1, p_clamp < 0.5");
  }
}

TwoPoissonParams init_params(const TermStats& stats, const EMConfig& cfg,
                             bool* used_mean_fallback) {
  if (stats.df < 1) {
    throw std::invalid_argument("init_params: term has df = 0");
  }
  TwoPoissonParams params;
  params.p_elite = clamp_p(
      static_cast<double>(stats.df) / static_cast<double>(stats.n_docs),
      cfg.p_clamp);

  // Mean tf over documents where the term repeats; documents at tf = 1 carry
  // no repetition signal. When every occurrence is a singleton, fall back to
  // the unconditional mean cf/df.
  std::uint64_t repeat_docs = 0;
  std::uint64_t repeat_tf = 0;
  for (const auto& [tf, count] : stats.tf_counts) {
    if (tf > 1) {
      repeat_docs += count;
      repeat_tf += static_cast<std::uint64_t>(tf) * count;
    }
  }
  bool fallback = repeat_docs == 0;
  const double mean =
      fallback ? static_cast<double>(stats.cf) / static_cast<double>(stats.df)
               : static_cast<double>(repeat_tf) /
                     static_cast<double>(repeat_docs);
  params.mu_elite = static_cast<double>(cfg.n_boost) * mean;
  params.mu_nonelite = cfg.mu0_init;
  if (used_mean_fallback) *used_mean_fallback = fallback;
  return params;
}

double e_step(const TwoPoissonParams& params, double tf) {
  const LogWeights w = component_log_weights(params, tf);
  if (w.elite == kLogZero && w.nonelite == kLogZero) {
    std::ostringstream msg;
    msg << "e_step: both mixture components have zero mass at tf=" << tf
        << " (mu_elite=" << params.mu_elite
        << ", mu_nonelite=" << params.mu_nonelite << ")";
    throw std::domain_error(msg.str());
  }
  return std::exp(w.elite - log_sum_exp(w.elite, w.nonelite));
}

std::vector<double> e_step_buckets(const TwoPoissonParams& params,
                                   const TermStats& stats) {
  std::vector<double> resp;
  resp.reserve(stats.tf_counts.size() + 1);
  resp.push_back(e_step(params, 0.0));
  for (const auto& [tf, count] : stats.tf_counts) {
    resp.push_back(e_step(params, static_cast<double>(tf)));
  }
  return resp;
}

MStepResult m_step(std::span<const double> responsibilities,
                   const TermStats& stats, const EMConfig& cfg) {
  if (responsibilities.size() != stats.tf_counts.size() + 1) {
    throw std::invalid_argument(
        "m_step: one responsibility per bucket expected, zero bucket first");
  }
  double sum_elite = 0.0, sum_nonelite = 0.0;
  double tf_elite = 0.0, tf_nonelite = 0.0;

  auto accumulate = [&](double gamma, double tf, double count) {
    sum_elite += count * gamma;
    sum_nonelite += count * (1.0 - gamma);
    tf_elite += count * gamma * tf;
    tf_nonelite += count * (1.0 - gamma) * tf;
  };
  accumulate(responsibilities[0], 0.0,
             static_cast<double>(stats.zero_count));
  for (std::size_t i = 0; i < stats.tf_counts.size(); ++i) {
    accumulate(responsibilities[i + 1],
               static_cast<double>(stats.tf_counts[i].first),
               static_cast<double>(stats.tf_counts[i].second));
  }

  MStepResult out;
  out.collapsed = sum_elite == 0.0 || sum_nonelite == 0.0;

  const double mu1 = sum_elite > 0.0 ? tf_elite / sum_elite : cfg.mu_floor;
  const double mu0 =
      sum_nonelite > 0.0 ? tf_nonelite / sum_nonelite : cfg.mu_floor;
  const double p = sum_elite / static_cast<double>(stats.n_docs);

  out.params.mu_elite = std::max(mu1, cfg.mu_floor);
  out.params.mu_nonelite = std::max(mu0, cfg.mu_floor);
  out.params.p_elite = clamp_p(p, cfg.p_clamp);
  out.clamped = out.collapsed || out.params.mu_elite != mu1 ||
                out.params.mu_nonelite != mu0 || out.params.p_elite != p;
  return out;
}

double log_likelihood(const TwoPoissonParams& params, const TermStats& stats) {
  double total = 0.0;
  auto bucket = [&](double tf, double count) {
    const LogWeights w = component_log_weights(params, tf);
    total += count * log_sum_exp(w.elite, w.nonelite);
  };
  bucket(0.0, static_cast<double>(stats.zero_count));
  for (const auto& [tf, count] : stats.tf_counts) {
    bucket(static_cast<double>(tf), static_cast<double>(count));
  }
  return total;
}

FitResult em_fit(const TermStats& stats, const EMConfig& cfg) {
  cfg.validate();
  if (stats.df < 1) {
    throw std::invalid_argument("em_fit: term has df = 0");
  }

  FitResult result;
  TwoPoissonParams params =
      init_params(stats, cfg, &result.mean_fallback);

  const auto n = static_cast<double>(stats.n_docs);
  double current = log_likelihood(params, stats);
  if (!std::isfinite(current)) {
    std::ostringstream msg;
    msg << "em_fit: non-finite likelihood at init (p=" << params.p_elite
        << ", mu_elite=" << params.mu_elite
        << ", mu_nonelite=" << params.mu_nonelite << ")";
    throw std::runtime_error(msg.str());
  }
  result.loglik_trace.push_back(current);

  for (std::uint32_t it = 0; it < cfg.max_iters; ++it) {
    const std::vector<double> resp = e_step_buckets(params, stats);
    const MStepResult m = m_step(resp, stats, cfg);
    params = m.params;
    result.clamped = result.clamped || m.clamped;
    if (m.collapsed) result.converged = false;

    const double next = log_likelihood(params, stats);
    if (!std::isfinite(next)) {
      std::ostringstream msg;
      msg << "em_fit: non-finite likelihood at iteration " << (it + 1)
          << " (p=" << params.p_elite << ", mu_elite=" << params.mu_elite
          << ", mu_nonelite=" << params.mu_nonelite << ")";
      throw std::runtime_error(msg.str());
    }
    result.loglik_trace.push_back(next);
    ++result.iterations;

    const bool done = std::abs(next - current) / n < cfg.tol;
    current = next;
    if (done && !m.collapsed) {
      result.converged = true;
      break;
    }
  }

  if (params.mu_elite < params.mu_nonelite) {
    std::swap(params.mu_elite, params.mu_nonelite);
    params.p_elite = 1.0 - params.p_elite;
    result.swapped = true;
  }
  result.params = params;
  return result;
}

}  // namespace eliterank
