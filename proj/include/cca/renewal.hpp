#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cca/kernel.hpp"

namespace cca {

/// Law of the gaps T_{i+1} - T_i of a renewal process on N, supported on k >= 1.
///
/// Geometric laws are kept in closed form; every other law is an explicit pmf.
class InterarrivalLaw {
 public:
  /// P(gap = k) = beta (1-beta)^(k-1), k >= 1: the Bernoulli process of rate beta.
  static InterarrivalLaw geometric(double beta);
  /// Gap a with probability pa, gap b otherwise.
  static InterarrivalLaw two_point(std::uint64_t a, std::uint64_t b, double pa);
  /// pmf[k] = P(gap = k); pmf[0] must vanish.
  static InterarrivalLaw pmf(std::vector<double> pmf);
  /// Gap law of the regeneration times of a kernel, from beta_k = a_{-1} a_0 ... a_{k-2}
  /// and the renewal equation. Truncated once the survival mass falls below 1e-14.
  static InterarrivalLaw from_kernel(const KernelSpec& kernel);

  bool is_geometric() const noexcept { return geometric_; }
  /// P(gap = k).
  double mass(std::uint64_t k) const;
  /// F(k) = P(gap > k).
  double survival(std::int64_t k) const;
  /// Fbar(k) = sum_{j >= k} F(j).
  double tail_sum(std::int64_t k) const;
  double mean() const;
  /// Event density beta = 1 / mean.
  double rate() const { return 1.0 / mean(); }
  /// Largest gap with positive mass (0 for the unbounded geometric law).
  std::uint64_t support_max() const noexcept { return geometric_ ? 0 : pmf_.size() - 1; }
  const std::vector<double>& masses() const noexcept { return pmf_; }

  std::uint64_t sample(std::mt19937_64& rng) const;
  /// T_1 of the stationary process: P(T_1 = k) = beta F(k), k >= 0.
  std::uint64_t sample_delay(std::mt19937_64& rng) const;

  /// beta_k = P(N(k) = 1 | T_1 = 0) for k = 0..n via beta_k = sum_j f(j) beta_{k-j}.
  std::vector<double> renewal_sequence(std::size_t n) const;

 private:
  InterarrivalLaw() = default;
  void finish();

  bool geometric_ = false;
  double p_ = 0.0;
  std::vector<double> pmf_;
  std::vector<double> survival_;  // F(k), k = 0..K
  std::vector<double> tail_;      // Fbar(k), k = 0..K+1
  std::vector<double> gap_cdf_;
  std::vector<double> delay_cdf_;
};

/// Empirical statistics of one observed point pattern on [0, horizon).
struct RenewalStats {
  std::vector<std::uint64_t> times;
  std::vector<std::uint64_t> interarrivals;
  double beta_hat = 0.0;             // count / span
  std::vector<std::uint64_t> residuals;  // S_n for every n with a later event
  std::vector<double> fbar;          // empirical Fbar(k) from the gaps
};

RenewalStats renewal_stats(std::span<const std::uint64_t> times, std::uint64_t horizon);

/// N(A) = |{i : T_i in A}|.
std::uint64_t counting_measure(std::span<const std::uint64_t> times,
                               std::span<const std::uint64_t> A);

/// Nbar(n) = N([0, n]).
std::uint64_t counting_up_to(std::span<const std::uint64_t> times, std::uint64_t n);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Monte Carlo P{N(A) = 0} for the stationary renewal process with this gap law.
Estimate miss_probability(const InterarrivalLaw& law, std::span<const std::uint64_t> A,
                          std::uint64_t trials, std::uint64_t seed);

/// Monte Carlo P{N(A) = 0} for the regeneration times of a kernel, detected
/// from fresh uniforms on [0, max A] plus a horizon that certifies the tail.
Estimate miss_probability(const KernelSpec& kernel, std::span<const std::uint64_t> A,
                          std::uint64_t trials, std::uint64_t seed,
                          double tail_tol = 1e-6);

/// (1-delta)^l + (l-1) Fbar([n/l] - n0) + P{T_1 > [n/l] - n0}.
/// Requires 1 <= l <= n and 0 < delta < beta.
double epsilon_bound(const InterarrivalLaw& law, std::uint64_t n, std::uint64_t ell,
                     double delta, std::int64_t n0);

struct EpsilonParams {
  double delta = 0.0;
  std::int64_t n0 = 0;
};

/// delta = beta/2 and the smallest n0 with beta_k > delta for every k > n0.
/// Raises DomainError for periodic laws, where no such n0 exists.
EpsilonParams epsilon_params(const InterarrivalLaw& law);

/// eps(n): the bound minimized over l = 1..n, capped at 1.
double epsilon(const InterarrivalLaw& law, std::uint64_t n);
double epsilon(const InterarrivalLaw& law, std::uint64_t n, const EpsilonParams& params);

/// Greedy left-to-right subset of sorted A with consecutive gaps >= [n/l].
std::vector<std::uint64_t> spread_subset(std::span<const std::uint64_t> A, std::uint64_t ell);

/// F_n(k) = sum_{j=0}^n F(j+k) beta_{n-j}.
double residual_exact(const InterarrivalLaw& law, std::uint64_t n, std::uint64_t k);

/// Monte Carlo P{S_n > k | T_1 = 0}.
Estimate residual_conditioned(const InterarrivalLaw& law, std::uint64_t n, std::uint64_t k,
                              std::uint64_t trials, std::uint64_t seed);

/// Fraction of observed residuals exceeding k.
double residual_distribution(const RenewalStats& stats, std::uint64_t k);

}  // namespace cca
