#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cca/group.hpp"

namespace cca {

/// How coordinates beyond the supplied finite past are resolved.
enum class TailMode {
  default_tail,  // the family's default continuation of the past
  worst_case,    // infimum over every continuation
  best_case,     // supremum over every continuation
};

/// A finite past seen newest first: at(1) = w_{-1}, at(2) = w_{-2}, ...
///
/// The view may be split in two pieces, a chronological buffer of recent
/// values (oldest first) followed by an older part stored newest first. This
/// lets the sampler extend the realized path without copying.
class PastView {
 public:
  PastView() = default;
  explicit PastView(std::span<const Elem> newest_first) : older_(newest_first) {}
  PastView(std::span<const Elem> recent_chrono, std::span<const Elem> older_newest_first)
      : recent_(recent_chrono), older_(older_newest_first) {}

  std::size_t length() const noexcept {
    return std::min(limit_, recent_.size() + older_.size());
  }
  /// Coordinate at depth d >= 1. Requires d <= length().
  Elem at(std::size_t depth) const noexcept {
    if (depth <= recent_.size()) return recent_[recent_.size() - depth];
    return older_[depth - recent_.size() - 1];
  }
  /// The same past restricted to its first k coordinates.
  PastView truncated(std::size_t k) const noexcept {
    PastView out = *this;
    out.limit_ = std::min(limit_, k);
    return out;
  }

 private:
  std::span<const Elem> recent_;
  std::span<const Elem> older_;
  std::size_t limit_ = std::numeric_limits<std::size_t>::max();
};

/// x_0 ~ pi independently of the past.
struct ProductFamily {
  std::vector<double> pi;
};

/// Order-k0 chain. Row index of a past is sum_d w_{-(d+1)} q^d (newest digit
/// least significant). Pasts shorter than k0 are padded by initial_past,
/// which is indexed by depth like any other past.
struct MarkovFamily {
  int order = 1;
  std::vector<std::vector<double>> transition;
  std::vector<Elem> initial_past;
};

/// P(g|w) = floor/q + (1-floor) sum_{j>=1} lambda_j f_j(g | w_{-j}).
///
/// The weights are given for j = 1..L and continue geometrically,
/// lambda_j = lambda_L rho^(j-L) for j > L, all normalized to sum one.
/// tables[j-1][h][g] = f_j(g | h); lags beyond L reuse tables[L-1].
/// Unseen coordinates default to `default_tail`.
struct MixtureFamily {
  std::vector<double> weights;
  double rho = 0.5;
  std::vector<std::vector<std::vector<double>>> tables;
  double floor = 0.05;
  Elem default_tail = 0;
};

/// A chain with complete connections and summable decay from one of three
/// exactly computable families.
///
/// All quantities of the regeneration construction are exact per family:
/// infima over infinite tails are closed form for the mixture and finite
/// enumerations for the Markov family, never sampled.
class KernelSpec {
 public:
  enum class Family { product, markov, mixture };

  static KernelSpec product(GroupSpec group, std::vector<double> pi);
  static KernelSpec markov(GroupSpec group, int order,
                           std::vector<std::vector<double>> transition,
                           std::vector<Elem> initial_past = {});
  /// Order-1 chain with P(x_0 = w_{-1}) = stay and the rest spread uniformly.
  static KernelSpec markov_stay(GroupSpec group, double stay);
  static KernelSpec mixture(GroupSpec group, std::vector<double> weights, double rho,
                            std::vector<std::vector<std::vector<double>>> tables,
                            double floor = 0.05, Elem default_tail = 0);

  Family family() const noexcept { return static_cast<Family>(family_.index()); }
  std::string family_name() const;
  const GroupSpec& group() const noexcept { return group_; }
  std::uint64_t order() const noexcept { return group_.order(); }

  const ProductFamily& as_product() const { return std::get<ProductFamily>(family_); }
  const MarkovFamily& as_markov() const { return std::get<MarkovFamily>(family_); }
  const MixtureFamily& as_mixture() const { return std::get<MixtureFamily>(family_); }

  /// P(g | past) with unseen coordinates resolved by `mode`.
  double eval(Elem g, const PastView& past, TailMode mode = TailMode::default_tail) const;
  std::vector<double> eval_row(const PastView& past, TailMode mode = TailMode::default_tail) const;

  /// Coordinate at `depth`, falling back to the family's default tail.
  Elem resolve(const PastView& past, std::size_t depth) const;

  /// a_k(g | w) for every g. The first k coordinates of the past are used (the
  /// default tail fills missing ones); k = -1 gives the global infimum of P.
  std::vector<double> a_row(int k, const PastView& past) const;

  /// Level increments b_k(g|w) = a_k(g|w) - a_{k-1}(g|w), with b_{-1} = a_{-1}(g|w).
  void level_row(int k, const PastView& past, std::span<double> out) const;

  /// a_k = min over pasts of sum_g a_k(g|w); a_{-1} = q inf P.
  double a_scalar(int k) const;

  /// Exact gamma_m = sup |P(g|w)/P(g|v) - 1| over pasts agreeing on m coordinates.
  double gamma(int m) const;

  /// sum_{k >= from} (1 - a_k), from >= -1, in closed form.
  double tail_deficit(int from) const;

  /// beta = a_{-1} a_0 a_1 ..., the density of regeneration times.
  double beta() const;

  /// Smallest K with a_k = 1 for every k >= K, or -1 when memory is infinite.
  int finite_memory() const;

  /// Upper bound on the mass of levels above k: 1 - sum_g a_k(g|w) for every w.
  double uncovered_bound(int k) const;

  /// Smallest conditional probability over all g and pasts.
  double min_probability() const;

 private:
  KernelSpec(GroupSpec group, std::variant<ProductFamily, MarkovFamily, MixtureFamily> family);
  void prepare();

  std::size_t markov_prefix_index(const PastView& past, int k) const;
  double mixture_weight(std::size_t j) const;
  double mixture_tail_weight(std::size_t n) const;  // sum_{j > n} lambda_j
  const std::vector<std::vector<double>>& mixture_table(std::size_t j) const;

  GroupSpec group_;
  std::variant<ProductFamily, MarkovFamily, MixtureFamily> family_;

  // Markov: min/max of the transition over completions, per prefix length.
  std::vector<std::vector<std::vector<double>>> markov_min_;
  std::vector<std::vector<std::vector<double>>> markov_max_;
  std::vector<double> markov_a_;  // a_k for k = 0..order

  // Mixture: normalization and per-lag extrema of the single-site tables.
  double mixture_norm_ = 1.0;
  std::vector<std::vector<double>> table_min_;  // [j][g]
  std::vector<std::vector<double>> table_max_;
  std::vector<double> table_min_mass_;          // m_j = sum_g min_h f_j(g|h)

  std::vector<double> inf_row_;  // a_0(g|w), independent of w
};

struct ACompute {
  std::vector<double> per_g;  // a_k(g | prefix)
  double prefix_sum = 0.0;    // sum_g a_k(g | prefix)
  double a_k = 0.0;           // minimum over all prefixes
};

/// a_k(g|w) for the given newest-first prefix together with the scalar a_k.
ACompute compute_a(const KernelSpec& kernel, int k, std::span<const Elem> prefix);

}  // namespace cca
