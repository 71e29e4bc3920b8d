#include "cca/regeneration.hpp"

#include <algorithm>
#include <limits>

#include "cca/error.hpp"
#include "cca/rng.hpp"

namespace cca {

namespace {

constexpr double kNegativeTol = 1e-12;
// Below this certified remainder the rest of [0,1) is rounding noise.
constexpr double kRemainderTol = 1e-14;

void check_past(const KernelSpec& kernel, std::span<const Elem> past) {
  for (Elem e : past) {
    if (e >= kernel.order()) throw DomainError("past entry outside the group");
  }
}

}  // namespace

double IntervalLayout::covered(int k) const {
  double acc = 0.0;
  for (int lv = -1; lv <= std::min(k, truncation); ++lv) {
    for (double b : lengths[lv + 1]) acc += b;
  }
  return acc;
}

double IntervalLayout::start(int k, Elem g) const {
  double acc = covered(k - 1);
  for (Elem h = 0; h < g; ++h) acc += lengths[k + 1][h];
  return acc;
}

IntervalLayout::Hit IntervalLayout::locate(double u) const {
  double lo = 0.0;
  for (int k = -1; k <= truncation; ++k) {
    const auto& row = lengths[k + 1];
    for (std::size_t g = 0; g < row.size(); ++g) {
      const double hi = lo + row[g];
      if (lo <= u && u < hi) return {static_cast<Elem>(g), k, true};
      lo = hi;
    }
  }
  return {};
}

IntervalLayout build_layout(const KernelSpec& kernel, std::span<const Elem> past, int K) {
  if (K < 0) throw DomainError("layout truncation K must be >= 0");
  check_past(kernel, past);
  IntervalLayout out;
  out.past.assign(past.begin(), past.end());
  out.truncation = K;
  const PastView view(past);
  const std::uint64_t q = kernel.order();
  for (int k = -1; k <= K; ++k) {
    std::vector<double> row(q);
    kernel.level_row(k, view, row);
    for (std::uint64_t g = 0; g < q; ++g) {
      if (row[g] < -kNegativeTol) {
        throw KernelInconsistency("b_" + std::to_string(k) + "(" + std::to_string(g) +
                                  "|w) = " + std::to_string(row[g]) + " is negative");
      }
      row[g] = std::max(row[g], 0.0);
    }
    out.lengths.push_back(std::move(row));
    out.a_seq.push_back(kernel.a_scalar(k));
  }
  return out;
}

StepResult sample_step(const KernelSpec& kernel, const PastView& past, double u) {
  const std::uint64_t q = kernel.order();
  std::vector<double> row(q);
  double lo = 0.0;
  StepResult last_positive{0, -1};
  for (int k = -1; k < kMaxLayoutLevels; ++k) {
    kernel.level_row(k, past, row);
    for (std::uint64_t g = 0; g < q; ++g) {
      if (row[g] <= 0.0) continue;
      const double hi = lo + row[g];
      if (u < hi) return {static_cast<Elem>(g), k};
      last_positive = {static_cast<Elem>(g), k};
      lo = hi;
    }
    if (k >= 0 && kernel.uncovered_bound(k) <= kRemainderTol) return last_positive;
  }
  throw CapacityError("uniform " + std::to_string(u) + " not located within " +
                      std::to_string(kMaxLayoutLevels) + " levels");
}

std::vector<Elem> sample_values(const KernelSpec& kernel, std::span<const Elem> w,
                                std::size_t N, std::uint64_t seed) {
  check_past(kernel, w);
  std::vector<Elem> xs;
  xs.reserve(N);
  const CounterUniforms uniforms(seed);
  for (std::size_t n = 0; n < N; ++n) {
    const PastView past(std::span<const Elem>(xs), w);
    xs.push_back(sample_step(kernel, past, uniforms(n)).g);
  }
  return xs;
}

RegenSample sample_path(const KernelSpec& kernel, std::span<const Elem> w, std::size_t N,
                        std::uint64_t seed, double tail_tol) {
  if (N < 1) throw DomainError("sample_path needs N >= 1");
  check_past(kernel, w);
  RegenSample s;
  s.w.assign(w.begin(), w.end());
  s.seed = seed;
  s.tail_tol = tail_tol;
  s.xs.reserve(N);
  s.us.resize(N);
  const CounterUniforms uniforms(seed);
  for (std::size_t n = 0; n < N; ++n) {
    s.us[n] = uniforms(n);
    const PastView past(std::span<const Elem>(s.xs), std::span<const Elem>(s.w));
    s.xs.push_back(sample_step(kernel, past, s.us[n]).g);
  }
  detect_regenerations(s, kernel, tail_tol);
  return s;
}

RegenDetection detect_regenerations(std::span<const double> us, const KernelSpec& kernel,
                                    double tail_tol) {
  RegenDetection out;
  const std::size_t N = us.size();
  if (N == 0) return out;

  // a_k for k = -1..K, stopping once a_k reaches 1 or k reaches N.
  std::vector<double> a;
  for (int k = -1; static_cast<std::size_t>(k + 1) <= N; ++k) {
    const double ak = kernel.a_scalar(k);
    a.push_back(a.empty() ? ak : std::max(ak, a.back()));
    if (a.back() >= 1.0) break;
  }

  // lev(t) = min{k >= -1 : U_t <= a_k}; n is a regeneration iff
  // n <= min_{t >= n} (t - 1 - lev(t)).
  constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::min() / 2;
  std::vector<std::int64_t> slack(N);
  for (std::size_t t = 0; t < N; ++t) {
    const auto it = std::lower_bound(a.begin(), a.end(), us[t]);
    if (it == a.end()) {
      slack[t] = kNever;
    } else {
      const auto lev = static_cast<std::int64_t>(it - a.begin()) - 1;
      slack[t] = static_cast<std::int64_t>(t) - 1 - lev;
    }
  }
  std::int64_t suffix_min = std::numeric_limits<std::int64_t>::max();
  std::vector<std::uint8_t> ok(N, 0);
  for (std::size_t i = N; i-- > 0;) {
    suffix_min = std::min(suffix_min, slack[i]);
    ok[i] = static_cast<std::int64_t>(i) <= suffix_min;
  }
  for (std::size_t n = 0; n < N; ++n) {
    if (!ok[n]) continue;
    const double bound = kernel.tail_deficit(static_cast<int>(std::min<std::size_t>(
        N - n - 1, static_cast<std::size_t>(std::numeric_limits<int>::max()))));
    if (bound <= tail_tol) {
      out.times.push_back(n);
      out.tail_bounds.push_back(bound);
    } else {
      out.candidates.push_back(n);
      out.candidate_bounds.push_back(bound);
    }
  }
  return out;
}

void detect_regenerations(RegenSample& sample, const KernelSpec& kernel, double tail_tol) {
  auto det = detect_regenerations(sample.us, kernel, tail_tol);
  sample.tail_tol = tail_tol;
  sample.regens = std::move(det.times);
  sample.tail_bounds = std::move(det.tail_bounds);
  sample.candidates = std::move(det.candidates);
  sample.candidate_bounds = std::move(det.candidate_bounds);
}

std::vector<Block> regeneration_blocks(const RegenSample& sample) {
  std::vector<Block> out;
  if (sample.regens.size() < 2) return out;
  for (std::size_t i = 0; i + 1 < sample.regens.size(); ++i) {
    const auto a = sample.regens[i], b = sample.regens[i + 1];
    out.push_back({a, std::vector<Elem>(sample.xs.begin() + a, sample.xs.begin() + b)});
  }
  return out;
}

}  // namespace cca
