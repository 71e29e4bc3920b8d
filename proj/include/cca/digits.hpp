#pragma once

#include <cstdint>
#include <vector>

namespace cca {

/// Base-p expansion m = sum_i digits[i] p^i.
struct PExpansion {
  std::uint64_t m = 0;
  std::uint64_t p = 2;
  std::vector<std::uint32_t> digits;  // least significant first, no trailing zeros
  std::vector<int> support;           // I(m), increasing
  std::vector<int> deltas;            // I(m) in decreasing order: delta_1 > ... > delta_s

  std::size_t support_size() const noexcept { return support.size(); }
  std::uint32_t digit(int i) const {
    return i >= 0 && static_cast<std::size_t>(i) < digits.size() ? digits[i] : 0;
  }
  /// Leading exponent floor(log_p m); -1 for m = 0.
  int top() const noexcept { return deltas.empty() ? -1 : deltas.front(); }
};

PExpansion p_expansion(std::uint64_t m, std::uint64_t p);

/// (m choose k) mod p by the digitwise product of Lucas' theorem.
std::uint64_t lucas_binomial(std::uint64_t m, std::uint64_t k, std::uint64_t p);

/// True iff every base-p digit of k is <= the matching digit of m.
bool lucas_nonzero(std::uint64_t m, std::uint64_t k, std::uint64_t p);

/// log_p x. Exact integer powers of p come out exact.
double log_base(double x, std::uint64_t p);

/// log_p log_p M, the scale used by the density-one sets.
double loglog(std::uint64_t M, std::uint64_t p);

struct DensityCount {
  std::uint64_t size = 0;
  double density = 0.0;
};

/// R_M = { m <= M : |I(m)| >= alpha log_p log_p M }, counted exhaustively.
DensityCount density_set(std::uint64_t M, double alpha, std::uint64_t p);

struct DensityPrimeCounts {
  std::uint64_t r_prime = 0;
  std::uint64_t r_double_prime = 0;
  double density_prime = 0.0;
  double density_double_prime = 0.0;
};

/// Thresholds that define R'_M and R''_M for a fixed M.
struct PrimeSetParams {
  std::uint64_t p = 2;
  std::uint64_t ell = 0;        // max J
  double eps_threshold = 0.0;   // eps * loglog M
  double eps_prime_threshold = 0.0;  // eps' * loglog M

  static PrimeSetParams make(std::uint64_t M, std::uint64_t ell, double eps, double eps_prime,
                             std::uint64_t p);
};

/// G_m = |{ n <= delta_1(m) : m_n < p-1 }|, with beta_{1,m} < beta_{2,m} < ... listed.
std::vector<int> low_digit_positions(const PExpansion& e);

bool in_r_prime(std::uint64_t m, const PrimeSetParams& params);
bool in_r_double_prime(std::uint64_t m, const PrimeSetParams& params);

/// Exact counts of R'_M and R''_M over m <= M.
DensityPrimeCounts density_sets_prime(std::uint64_t M, std::uint64_t ell, double eps,
                                      double eps_prime, std::uint64_t p);

}  // namespace cca
