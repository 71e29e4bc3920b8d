#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cca/kernel.hpp"

namespace cca {

/// Interval lengths b_k(g|w) for levels k = -1..K, laid out on [0,1) in
/// (k ascending, g ascending) order. Intervals are half-open.
struct IntervalLayout {
  std::vector<Elem> past;                  // newest first
  int truncation = 0;                      // K
  std::vector<std::vector<double>> lengths;  // lengths[k+1][g]
  std::vector<double> a_seq;               // a_k for k = -1..K

  /// Total length of the levels <= k.
  double covered(int k) const;
  double covered() const { return covered(truncation); }
  /// Left endpoint of B_k(g|w).
  double start(int k, Elem g) const;

  struct Hit {
    Elem g = 0;
    int level = -1;
    bool found = false;
  };
  /// The interval containing u, if it lies below covered().
  Hit locate(double u) const;
};

/// Layout of the first K+1 levels for a past given newest first.
/// Raises KernelInconsistency if some b_k(g|w) < -1e-12.
IntervalLayout build_layout(const KernelSpec& kernel, std::span<const Elem> past, int K);

/// Hard cap on the number of levels the sampler will materialize for one step.
inline constexpr int kMaxLayoutLevels = 1 << 16;

struct StepResult {
  Elem g = 0;
  int level = -1;
};

/// Locates u in the layout of `past`, materializing levels lazily.
/// Floating-point remainder beyond the certified mass goes to the last
/// positive interval.
StepResult sample_step(const KernelSpec& kernel, const PastView& past, double u);

/// x_0..x_{N-1} from the past w (newest first); U_n is the n-th uniform keyed by seed.
std::vector<Elem> sample_values(const KernelSpec& kernel, std::span<const Elem> w,
                                std::size_t N, std::uint64_t seed);

/// A sampled path x_0..x_{N-1} with its uniforms and detected regeneration times.
struct RegenSample {
  std::vector<Elem> w;                    // initial past, newest first
  std::vector<Elem> xs;
  std::vector<double> us;
  std::vector<std::uint64_t> regens;
  std::vector<double> tail_bounds;        // uncheckable tail per regeneration time
  std::vector<std::uint64_t> candidates;  // pass the finite check, tail bound above tolerance
  std::vector<double> candidate_bounds;
  double tail_tol = 1e-6;
  std::uint64_t seed = 0;
};

inline constexpr double kDefaultTailTol = 1e-6;

/// Samples N steps from the past w (newest first) with uniforms keyed by seed,
/// then detects regenerations.
RegenSample sample_path(const KernelSpec& kernel, std::span<const Elem> w, std::size_t N,
                        std::uint64_t seed, double tail_tol = kDefaultTailTol);

struct RegenDetection {
  std::vector<std::uint64_t> times;
  std::vector<double> tail_bounds;
  std::vector<std::uint64_t> candidates;
  std::vector<double> candidate_bounds;
};

/// n is a regeneration iff U_{n+j} <= a_{j-1} for every j with n+j < N and
/// the unchecked tail sum_{k >= N-n-1} (1 - a_k) is at most tail_tol.
/// Depends on the uniforms only, never on the past. O(N log K).
RegenDetection detect_regenerations(std::span<const double> us, const KernelSpec& kernel,
                                    double tail_tol = kDefaultTailTol);

/// Recomputes the regeneration fields of `sample` in place.
void detect_regenerations(RegenSample& sample, const KernelSpec& kernel, double tail_tol);

struct Block {
  std::uint64_t start = 0;
  std::vector<Elem> elems;
};

/// Blocks (x_{T_i}, ..., x_{T_{i+1}-1}) between consecutive regenerations.
std::vector<Block> regeneration_blocks(const RegenSample& sample);

}  // namespace cca
