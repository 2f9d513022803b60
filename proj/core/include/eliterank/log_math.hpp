#ifndef ELITERANK_LOG_MATH_HPP
#define ELITERANK_LOG_MATH_HPP

#include <cmath>
#include <limits>

namespace eliterank {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow. Tolerates -inf operands.
inline double log_sum_exp(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// log Poisson mass with the tf! term dropped: -mu + tf*log(mu).
// Every ratio evaluated in this project cancels the factorial, so it is
// never computed; this also makes the expression valid for real-valued tf.
// Convention: 0^0 = 1, i.e. Pois(0; 0) has log mass 0.
inline double log_poisson_kernel(double tf, double mu) {
  if (mu == 0.0) return tf == 0.0 ? 0.0 : kLogZero;
  return -mu + tf * std::log(mu);
}

}  // namespace eliterank

#endif  // ELITERANK_LOG_MATH_HPP
