#include "keycollide/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include <gmpxx.h>

#include "keycollide/attack.hpp"
#include "keycollide/dictionary.hpp"
#include "keycollide/rng.hpp"

namespace kc {

namespace detail {

double prop1_exact_rational(unsigned n, u64 N) {
  // p = prod_{0<=k<N} (2^{3n} - k) / 2^{3nN}
  const mpz_class space = mpz_class(1) << (3 * n);
  mpz_class num = 1;
  for (u64 k = 0; k < N; ++k) num *= space - mpz_class(static_cast<unsigned long>(k));
  mpq_class p(num, mpz_class(1) << static_cast<unsigned long>(3 * n * N));
  p.canonicalize();
  return p.get_d();
}

double prop1_log_domain(unsigned n, u64 N) {
  const double space = std::ldexp(1.0, 3 * static_cast<int>(n));
  double sum = 0.0, comp = 0.0;  // Kahan
  for (u64 k = 1; k < N; ++k) {
    const double term = std::log1p(-static_cast<double>(k) / space);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::exp(sum);
}

}  // namespace detail

Prop1Report prop1_eval(unsigned n, u64 N) {
  if (n < 1 || n > 32) throw std::invalid_argument("n must be in [1, 32]");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (N > (u64{1} << n))
    throw std::invalid_argument("N > 2^n is outside the bound's regime");

  Prop1Report rep;
  rep.n = n;
  rep.N = N;
  rep.exact_rational = (3 * n <= 24) && (N <= (u64{1} << 12));
  rep.p_exact = rep.exact_rational ? detail::prop1_exact_rational(n, N)
                                   : detail::prop1_log_domain(n, N);

  const double Nd = static_cast<double>(N);
  const double exponent = (Nd - 1) * Nd / std::ldexp(1.0, 3 * static_cast<int>(n) + 1) +
                          Nd * Nd * Nd / (3.0 * std::ldexp(1.0, 6 * static_cast<int>(n)));
  rep.p_exp_bound = std::exp(-exponent);
  rep.p_poly_bound = 1.0 - exponent;
  rep.p_final_bound = 1.0 - std::ldexp(1.0, -static_cast<int>(n));

  if (!(rep.p_final_bound <= rep.p_poly_bound && rep.p_poly_bound <= rep.p_exp_bound &&
        rep.p_exp_bound <= rep.p_exact && rep.p_exact <= 1.0))
    throw std::logic_error("bound chain ordering violated");
  return rep;
}

Prop2Report prop2_eval(unsigned n, unsigned m, unsigned t) {
  if (m > n) throw std::invalid_argument("m must not exceed n");
  if (static_cast<int>(t) + static_cast<int>(m) - static_cast<int>(n) > 20)
    throw std::invalid_argument("t + m - n > 20 would overflow the exponent");

  Prop2Report rep;
  rep.n = n;
  rep.m = m;
  rep.t = t;
  const int e = static_cast<int>(m) - static_cast<int>(n);
  const double per_draw = std::ldexp(1.0, e);  // 2^{m-n}
  const double draws = std::ldexp(1.0, static_cast<int>(t));
  if (m == n) {
    rep.p_hat_exact_bound = 1.0;
  } else {
    rep.p_hat_exact_bound = -std::expm1(draws * std::log1p(-per_draw));
  }
  rep.p_hat_exp_bound = -std::expm1(-std::ldexp(1.0, static_cast<int>(t) + e));

  if (!(rep.p_hat_exp_bound <= rep.p_hat_exact_bound))
    throw std::logic_error("prop2 bound ordering violated");
  return rep;
}

namespace {

McEstimate finish(u64 trials, u64 successes) {
  McEstimate est;
  est.trials = trials;
  est.successes = successes;
  est.estimate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  est.stderr_ = trials ? std::sqrt(est.estimate * (1.0 - est.estimate) /
                                   static_cast<double>(trials))
                       : 0.0;
  return est;
}

/// Runs trials in parallel; outcome depends only on (seed, trial index).
template <typename TrialFn>
u64 run_trials(u64 trials, unsigned workers, TrialFn&& trial) {
  unsigned w = workers ? workers : std::thread::hardware_concurrency();
  if (w == 0) w = 1;
  w = static_cast<unsigned>(std::min<u64>(w, std::max<u64>(trials, 1)));
  if (w == 1) {
    u64 s = 0;
    for (u64 i = 0; i < trials; ++i) s += trial(i) ? 1 : 0;
    return s;
  }
  std::vector<u64> tallies(w, 0);
  std::vector<std::thread> pool;
  const u64 chunk = (trials + w - 1) / w;
  for (unsigned ti = 0; ti < w; ++ti) {
    const u64 lo = std::min<u64>(trials, ti * chunk);
    const u64 hi = std::min<u64>(trials, lo + chunk);
    if (lo < hi)
      pool.emplace_back([&, ti, lo, hi] {
        u64 s = 0;
        for (u64 i = lo; i < hi; ++i) s += trial(i) ? 1 : 0;
        tallies[ti] = s;
      });
  }
  for (auto& th : pool) th.join();
  u64 s = 0;
  for (u64 t : tallies) s += t;
  return s;
}

}  // namespace

McEstimate mc_distinctness(unsigned n, u64 N, u64 trials, u64 seed) {
  if (3 * n > 30) throw std::invalid_argument("3n must be <= 30 for sampling");
  const u64 space = u64{1} << (3 * n);
  if (N > space) throw std::invalid_argument("N exceeds the 2^{3n} space");

  const u64 successes = run_trials(trials, 0, [&](u64 trial) {
    Rng rng = Rng::substream(seed, trial);
    std::vector<u64> draws(N);
    for (u64 i = 0; i < N; ++i) draws[i] = rng.below(space);
    std::sort(draws.begin(), draws.end());
    return std::adjacent_find(draws.begin(), draws.end()) == draws.end();
  });
  return finish(trials, successes);
}

McEstimate mc_hit_rate(unsigned n, unsigned m, unsigned t, u64 trials, u64 seed) {
  if (m > n) throw std::invalid_argument("m must not exceed n");
  if (n > 24) throw std::invalid_argument("n must be <= 24");
  if (t > 16) throw std::invalid_argument("t must be <= 16");

  const CipherSpec spec{CipherId::Ideal, n, 0};
  const Plaintext x0 = default_x0(n);
  const auto keys = enumerate_keys(KeyGenMode::Sampled, n, m, seed);
  const Dictionary dict = build(spec, keys, x0);

  const u64 space = u64{1} << n;
  const u64 per_trial = u64{1} << t;
  const u64 successes = run_trials(trials, 0, [&](u64 trial) {
    Rng rng = Rng::substream(seed, trial + 1);
    std::vector<Key> targets(per_trial);
    for (u64 i = 0; i < per_trial; ++i) targets[i] = static_cast<Key>(rng.below(space));
    const TargetBatch batch = capture_targets(spec, x0, targets);
    return run_attack(dict, batch).any_hit;
  });
  return finish(trials, successes);
}

}  // namespace kc
