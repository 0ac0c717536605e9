#pragma once

#include <cstdint>

#include "keycollide/cipher.hpp"

namespace kc {

/// Distinctness probability for N uniform draws from the 2^{3n} fingerprint
/// space, together with the chain of lower bounds it dominates.
struct Prop1Report {
  unsigned n = 0;
  u64 N = 0;
  double p_exact = 0;        // prod_{k<N} (1 - k / 2^{3n})
  double p_exp_bound = 0;    // exp(-((N-1)N / 2^{3n+1} + N^3 / (3*2^{6n})))
  double p_poly_bound = 0;   // 1 - (N-1)N / 2^{3n+1} - N^3 / (3*2^{6n})
  double p_final_bound = 0;  // 1 - 2^{-n}
  bool exact_rational = false;  // p_exact came from the integer-ratio path
};

/// Hit-probability bounds for 2^t uniform targets against a 2^m-key
/// dictionary over a 2^n key space.
struct Prop2Report {
  unsigned n = 0, m = 0, t = 0;
  double p_hat_exact_bound = 0;  // 1 - (1 - 2^{m-n})^{2^t}
  double p_hat_exp_bound = 0;    // 1 - e^{-2^{t+m-n}}
};

struct McEstimate {
  u64 trials = 0;
  u64 successes = 0;
  double estimate = 0;
  double stderr_ = 0;  // normal-approximation standard error of the proportion
};

/// Evaluates the full bound chain; requires N <= 2^n and asserts the
/// ordering p_final <= p_poly <= p_exp <= p_exact before returning.
Prop1Report prop1_eval(unsigned n, u64 N);

namespace detail {
/// The two routes behind p_exact, exposed so they can be cross-checked.
double prop1_exact_rational(unsigned n, u64 N);  // requires 3n <= 24, N <= 2^12
double prop1_log_domain(unsigned n, u64 N);
}  // namespace detail

Prop2Report prop2_eval(unsigned n, unsigned m, unsigned t);

/// Per trial draws N uniform 3n-bit values and tests all-distinct.
McEstimate mc_distinctness(unsigned n, u64 N, u64 trials, u64 seed);

/// Builds one ideal-cipher dictionary of 2^m sampled keys; per trial draws
/// 2^t uniform keys and tests whether any fingerprint lands in it.
McEstimate mc_hit_rate(unsigned n, unsigned m, unsigned t, u64 trials, u64 seed);

}  // namespace kc
