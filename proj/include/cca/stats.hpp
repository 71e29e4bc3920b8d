#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cca {

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson chi-square of observed counts against expected probabilities.
ChiSquare chi_square(std::span<const std::uint64_t> counts, std::span<const double> probs);

/// Pearson chi-square against the uniform law on counts.size() cells.
ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts);

/// 1/2 sum |p_i - q_i|.
double total_variation(std::span<const double> p, std::span<const double> q);

/// 1/2 sum |p_i - 1/n|.
double total_variation_uniform(std::span<const double> p);

double mean(std::span<const double> xs);
/// Unbiased sample variance.
double variance(std::span<const double> xs);
/// Sample lag-1 autocorrelation.
double lag1_correlation(std::span<const double> xs);

/// sqrt(p(1-p)/n).
double binomial_stderr(double p, std::uint64_t n);

}  // namespace cca
