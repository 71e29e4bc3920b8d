#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cca/automaton.hpp"
#include "cca/kernel.hpp"

namespace cca {

/// S = sum_{r in R} a_r x_r over a finite strictly increasing index set R.
struct SumSpec {
  std::vector<std::uint64_t> indices;  // R
  std::vector<std::uint64_t> coeffs;   // a_r reduced mod p^r

  static SumSpec make(std::vector<std::uint64_t> indices, std::vector<std::uint64_t> coeffs,
                      const GroupSpec& spec);
  /// R = {0..m} with the coefficients of phi^m, so S = (phi^m x)_0.
  static SumSpec automaton(std::uint64_t m, const AutomatonParams& params);

  /// R* = indices whose coefficient is a unit mod p.
  std::vector<std::uint64_t> rstar(std::uint64_t p) const;
  /// Positions of R* inside R (the index map f).
  std::vector<std::size_t> rstar_positions(std::uint64_t p) const;
  /// n(R*) = |R* intersected with R_n|, R_n the first n+1 indices.
  std::size_t n_star(std::uint64_t p) const;
  std::size_t n_star(std::size_t n, std::uint64_t p) const;
  std::uint64_t coeff_at(std::uint64_t r) const;  // 0 outside R
  bool contains(std::uint64_t r) const;
};

/// A probability table over G^d, flattened with the first coordinate least significant.
struct DistributionTable {
  std::uint64_t q = 0;
  std::size_t arity = 1;
  std::vector<double> probs;

  double slack() const;  // |sum - 1|
  double tv_uniform() const;
  /// max_cell |P(cell) - q^-arity|.
  double sup_deviation() const;
  double at(std::span<const Elem> cell) const;
};

/// Encodes a cell of G^d (first coordinate least significant).
std::uint64_t cell_index(std::span<const Elem> cell, std::uint64_t q);
std::vector<Elem> cell_values(std::uint64_t index, std::size_t arity, std::uint64_t q);

inline constexpr std::uint64_t kExactIndexCap = 1'000'000;
inline constexpr std::uint64_t kExactStateCap = std::uint64_t{1} << 22;

/// Exact joint law of several sums of the same path, by transfer recursion over
/// (chain memory, partial sums). Runs of zero coefficients are skipped with
/// powers of the memory transition matrix.
DistributionTable exact_joint_distribution(std::span<const SumSpec> sums, const KernelSpec& kernel,
                                           std::span<const Elem> past = {});

DistributionTable exact_sum_distribution(const SumSpec& spec, const KernelSpec& kernel,
                                         std::span<const Elem> past = {});

/// Exact joint law of ((phi^{m+j} x)_0 : j in J).
DistributionTable iterate_marginal_exact(const KernelSpec& kernel, std::span<const Elem> past,
                                         std::uint64_t m, std::span<const std::uint64_t> J,
                                         const AutomatonParams& params);

enum class ScanMode { exact, monte_carlo };

struct ScanOptions {
  ScanMode mode = ScanMode::exact;
  std::vector<std::uint64_t> grid;      // increasing M values
  std::vector<std::uint64_t> J{0};
  std::vector<std::vector<Elem>> cylinders;  // cells to report; empty = all of G^J
  std::uint64_t trials = 2000;          // Monte Carlo only
  std::uint64_t seed = 1;
  bool keep_per_m = false;              // store every per-m law
};

/// Cesaro averages (1/M) sum_{m<M} P(phi^{m+j} x)_0 = g_j, j in J) on a grid of M.
struct CesaroReport {
  ScanMode mode = ScanMode::exact;
  std::uint64_t q = 0;
  std::vector<std::uint64_t> J;
  std::vector<std::uint64_t> grid;
  std::vector<std::vector<Elem>> cylinders;
  std::vector<std::vector<double>> averaged;  // [grid][cell of G^J]
  std::vector<std::vector<double>> stderrs;   // zero in exact mode
  std::vector<double> tv;
  std::vector<std::vector<double>> per_m;     // [m][cell], when kept

  /// CSV with `#` metadata lines, header M,cylinder,probability,tv,stderr.
  void write_csv(std::ostream& out, const std::vector<std::string>& metadata = {}) const;
};

/// Default dyadic grid 2^1..2^top.
std::vector<std::uint64_t> dyadic_grid(int top);

CesaroReport cesaro_scan(const KernelSpec& kernel, std::span<const Elem> past,
                         const AutomatonParams& params, const ScanOptions& options);

/// Deviation of a sum (or joint sums) from uniform against the renewal bound.
struct Lemma41Report {
  std::size_t n_star = 0;                // n(R*) or n~(R~^J)
  std::size_t arity = 1;
  double deviation = 0.0;                // Monte Carlo sup over cells
  double deviation_stderr = 0.0;
  std::optional<double> exact_deviation; // for exactly computable kernels
  double bound = 1.0;                    // 2 eps(n*+1) or 2|J| eps(n~+1)
  bool vacuous = false;                  // bound >= 1 or n* = 0
};

Lemma41Report lemma41_single(const SumSpec& spec, const KernelSpec& kernel,
                             std::span<const Elem> past, std::uint64_t trials,
                             std::uint64_t seed);

/// Requires the family R~ (one subset per sum) to satisfy H1-H3; raises
/// ValidationError naming the offending pair otherwise.
Lemma41Report lemma41_joint(std::span<const SumSpec> sums,
                            const std::vector<std::vector<std::uint64_t>>& rtilde,
                            const KernelSpec& kernel, std::span<const Elem> past,
                            std::uint64_t trials, std::uint64_t seed);

/// H1: R~^j inside R^{j*}; H2: pairwise disjoint; H3: r in R~^j and R^i, i < j,
/// forces a_r^{R^i} = 0 mod p. Returns a description of the first violation.
std::optional<std::string> check_h123(std::span<const SumSpec> sums,
                                      const std::vector<std::vector<std::uint64_t>>& rtilde,
                                      std::uint64_t p);

}  // namespace cca
