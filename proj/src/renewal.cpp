#include "cca/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cca/error.hpp"
#include "cca/regeneration.hpp"
#include "cca/rng.hpp"
#include "cca/stats.hpp"

namespace cca {

namespace {

constexpr double kMassTol = 1e-9;
constexpr double kSurvivalCut = 1e-14;
constexpr std::size_t kKernelLawCap = std::size_t{1} << 14;

std::uint64_t draw(const std::vector<double>& cdf, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, cdf.back())(rng);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                             static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

std::vector<std::uint64_t> sorted_unique(std::span<const std::uint64_t> A) {
  std::vector<std::uint64_t> out(A.begin(), A.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_trials(std::uint64_t trials) {
  if (trials < 1000) throw DomainError("Monte Carlo estimates need at least 1000 trials");
}

}  // namespace

InterarrivalLaw InterarrivalLaw::geometric(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("geometric rate must lie in (0,1]");
  InterarrivalLaw law;
  law.geometric_ = true;
  law.p_ = beta;
  return law;
}

InterarrivalLaw InterarrivalLaw::two_point(std::uint64_t a, std::uint64_t b, double pa) {
  if (a < 1 || b < 1) throw DomainError("two-point gaps must be >= 1");
  if (!(pa >= 0.0 && pa <= 1.0)) throw DomainError("two-point weight must lie in [0,1]");
  std::vector<double> f(std::max(a, b) + 1, 0.0);
  f[a] += pa;
  f[b] += 1.0 - pa;
  return pmf(std::move(f));
}

InterarrivalLaw InterarrivalLaw::pmf(std::vector<double> f) {
  if (f.size() < 2) throw DomainError("pmf needs mass on some gap >= 1");
  if (f[0] != 0.0) throw DomainError("gaps are >= 1; pmf[0] must be 0");
  double sum = 0.0;
  for (double v : f) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("pmf entries must be >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kMassTol) {
    throw DomainError("pmf sums to " + std::to_string(sum) + ", not 1");
  }
  while (f.size() > 2 && f.back() == 0.0) f.pop_back();
  InterarrivalLaw law;
  law.pmf_ = std::move(f);
  for (double& v : law.pmf_) v /= sum;
  law.finish();
  return law;
}

InterarrivalLaw InterarrivalLaw::from_kernel(const KernelSpec& kernel) {
  // beta_k = P(regeneration at k | regeneration at 0) = a_{-1} a_0 ... a_{k-2}.
  std::vector<double> beta{1.0};
  std::vector<double> f{0.0};
  double survival = 1.0;
  for (std::size_t k = 1; k < kKernelLawCap; ++k) {
    beta.push_back(beta.back() * kernel.a_scalar(static_cast<int>(k) - 2));
    double fk = beta[k];
    for (std::size_t j = 1; j < k; ++j) fk -= f[j] * beta[k - j];
    fk = std::max(fk, 0.0);
    f.push_back(fk);
    survival -= fk;
    if (survival < kSurvivalCut) break;
  }
  if (survival > 1e-9) {
    throw CapacityError("regeneration gap law not resolved within " +
                        std::to_string(kKernelLawCap) + " steps");
  }
  const double total = std::accumulate(f.begin(), f.end(), 0.0);
  for (double& v : f) v /= total;
  return pmf(std::move(f));
}

void InterarrivalLaw::finish() {
  const std::size_t K = pmf_.size() - 1;
  survival_.assign(K + 1, 0.0);
  for (std::size_t k = K; k-- > 0;) survival_[k] = survival_[k + 1] + pmf_[k + 1];
  tail_.assign(K + 2, 0.0);
  for (std::size_t k = K + 1; k-- > 0;) tail_[k] = tail_[k + 1] + survival_[k];

  gap_cdf_.resize(pmf_.size());
  std::partial_sum(pmf_.begin(), pmf_.end(), gap_cdf_.begin());
  delay_cdf_.resize(survival_.size());
  std::partial_sum(survival_.begin(), survival_.end(), delay_cdf_.begin());
}

double InterarrivalLaw::mass(std::uint64_t k) const {
  if (geometric_) return k == 0 ? 0.0 : p_ * std::pow(1.0 - p_, static_cast<double>(k - 1));
  return k < pmf_.size() ? pmf_[k] : 0.0;
}

double InterarrivalLaw::survival(std::int64_t k) const {
  if (k < 0) return 1.0;
  if (geometric_) return std::pow(1.0 - p_, static_cast<double>(k));
  return static_cast<std::size_t>(k) < survival_.size() ? survival_[k] : 0.0;
}

double InterarrivalLaw::tail_sum(std::int64_t k) const {
  if (geometric_) {
    if (k < 0) return static_cast<double>(-k) + 1.0 / p_;
    return std::pow(1.0 - p_, static_cast<double>(k)) / p_;
  }
  if (k < 0) return static_cast<double>(-k) + tail_[0];
  return static_cast<std::size_t>(k) < tail_.size() ? tail_[k] : 0.0;
}

double InterarrivalLaw::mean() const { return geometric_ ? 1.0 / p_ : tail_[0]; }

std::uint64_t InterarrivalLaw::sample(std::mt19937_64& rng) const {
  if (geometric_) return std::geometric_distribution<std::uint64_t>(p_)(rng) + 1;
  return draw(gap_cdf_, rng);
}

std::uint64_t InterarrivalLaw::sample_delay(std::mt19937_64& rng) const {
  if (geometric_) return std::geometric_distribution<std::uint64_t>(p_)(rng);
  return draw(delay_cdf_, rng);
}

std::vector<double> InterarrivalLaw::renewal_sequence(std::size_t n) const {
  std::vector<double> beta(n + 1, 0.0);
  beta[0] = 1.0;
  if (geometric_) {
    std::fill(beta.begin() + 1, beta.end(), p_);
    return beta;
  }
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.0;
    const std::size_t top = std::min(k, pmf_.size() - 1);
    for (std::size_t j = 1; j <= top; ++j) acc += pmf_[j] * beta[k - j];
    beta[k] = acc;
  }
  return beta;
}

RenewalStats renewal_stats(std::span<const std::uint64_t> times, std::uint64_t horizon) {
  if (!std::is_sorted(times.begin(), times.end())) throw DomainError("event times must be sorted");
  if (horizon == 0) throw DomainError("renewal statistics need a positive horizon");
  RenewalStats s;
  s.times.assign(times.begin(), times.end());
  s.beta_hat = static_cast<double>(times.size()) / static_cast<double>(horizon);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] == times[i - 1]) throw DomainError("event times must be distinct");
    s.interarrivals.push_back(times[i] - times[i - 1]);
  }
  std::size_t next = 0;
  for (std::uint64_t n = 0; n < horizon; ++n) {
    while (next < times.size() && times[next] <= n) ++next;
    if (next == times.size()) break;
    s.residuals.push_back(times[next] - n);
  }
  if (!s.interarrivals.empty()) {
    const auto maxgap = *std::max_element(s.interarrivals.begin(), s.interarrivals.end());
    std::vector<double> surv(maxgap + 1, 0.0);
    for (auto g : s.interarrivals) {
      for (std::uint64_t k = 0; k < g; ++k) surv[k] += 1.0;
    }
    for (double& v : surv) v /= static_cast<double>(s.interarrivals.size());
    s.fbar.assign(maxgap + 2, 0.0);
    for (std::size_t k = maxgap + 1; k-- > 0;) s.fbar[k] = s.fbar[k + 1] + surv[k];
  }
  return s;
}

std::uint64_t counting_measure(std::span<const std::uint64_t> times,
                               std::span<const std::uint64_t> A) {
  std::uint64_t count = 0;
  for (auto a : sorted_unique(A)) {
    if (std::binary_search(times.begin(), times.end(), a)) ++count;
  }
  return count;
}

std::uint64_t counting_up_to(std::span<const std::uint64_t> times, std::uint64_t n) {
  return static_cast<std::uint64_t>(std::upper_bound(times.begin(), times.end(), n) - times.begin());
}

Estimate miss_probability(const InterarrivalLaw& law, std::span<const std::uint64_t> A,
                          std::uint64_t trials, std::uint64_t seed) {
  check_trials(trials);
  const auto set = sorted_unique(A);
  Estimate est;
  est.trials = trials;
  if (set.empty()) {
    est.value = 1.0;
    return est;
  }
  std::mt19937_64 rng(seed);
  std::uint64_t misses = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    bool hit = false;
    for (std::uint64_t T = law.sample_delay(rng); T <= set.back(); T += law.sample(rng)) {
      if (std::binary_search(set.begin(), set.end(), T)) {
        hit = true;
        break;
      }
    }
    if (!hit) ++misses;
  }
  est.value = static_cast<double>(misses) / static_cast<double>(trials);
  est.std_error = binomial_stderr(est.value, trials);
  return est;
}

Estimate miss_probability(const KernelSpec& kernel, std::span<const std::uint64_t> A,
                          std::uint64_t trials, std::uint64_t seed, double tail_tol) {
  check_trials(trials);
  const auto set = sorted_unique(A);
  Estimate est;
  est.trials = trials;
  if (set.empty()) {
    est.value = 1.0;
    return est;
  }
  int horizon = 0;
  while (kernel.tail_deficit(horizon) > tail_tol) {
    if (++horizon > kMaxLayoutLevels) throw CapacityError("tail tolerance not reachable");
  }
  const std::size_t N = set.back() + 2 + static_cast<std::size_t>(horizon);
  std::vector<double> us(N);
  std::uint64_t misses = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const CounterUniforms uniforms(substream_seed(seed, t));
    for (std::size_t n = 0; n < N; ++n) us[n] = uniforms(n);
    const auto det = detect_regenerations(us, kernel, tail_tol);
    if (counting_measure(det.times, set) == 0) ++misses;
  }
  est.value = static_cast<double>(misses) / static_cast<double>(trials);
  est.std_error = binomial_stderr(est.value, trials);
  return est;
}

double epsilon_bound(const InterarrivalLaw& law, std::uint64_t n, std::uint64_t ell,
                     double delta, std::int64_t n0) {
  if (ell < 1 || ell > n) throw DomainError("epsilon bound needs 1 <= l <= n");
  if (!(delta > 0.0 && delta < law.rate())) throw DomainError("epsilon bound needs 0 < delta < beta");
  const auto m = static_cast<std::int64_t>(n / ell) - n0;
  const double delay_tail = m < 0 ? 1.0 : law.rate() * law.tail_sum(m + 1);
  return std::pow(1.0 - delta, static_cast<double>(ell)) +
         static_cast<double>(ell - 1) * law.tail_sum(m) + delay_tail;
}

EpsilonParams epsilon_params(const InterarrivalLaw& law) {
  EpsilonParams params;
  params.delta = law.rate() / 2.0;
  const std::size_t horizon = std::max<std::size_t>(4096, 16 * law.support_max());
  const auto beta = law.renewal_sequence(horizon);
  std::int64_t last = 0;
  for (std::size_t k = 0; k <= horizon; ++k) {
    if (beta[k] <= params.delta) last = static_cast<std::int64_t>(k);
  }
  if (last > static_cast<std::int64_t>(3 * horizon / 4)) {
    throw DomainError("renewal sequence does not settle above beta/2; the gap law looks periodic");
  }
  params.n0 = last;
  return params;
}

double epsilon(const InterarrivalLaw& law, std::uint64_t n, const EpsilonParams& params) {
  if (n == 0) return 1.0;
  double best = 1.0;
  for (std::uint64_t ell = 1; ell <= n; ++ell) {
    best = std::min(best, epsilon_bound(law, n, ell, params.delta, params.n0));
  }
  return best;
}

double epsilon(const InterarrivalLaw& law, std::uint64_t n) {
  return epsilon(law, n, epsilon_params(law));
}

std::vector<std::uint64_t> spread_subset(std::span<const std::uint64_t> A, std::uint64_t ell) {
  const auto set = sorted_unique(A);
  if (ell < 1 || ell > set.size()) throw DomainError("spread subset needs 1 <= l <= |A|");
  const std::uint64_t gap = set.size() / ell;
  std::vector<std::uint64_t> out{set.front()};
  for (std::size_t i = 1; i < set.size() && out.size() < ell; ++i) {
    if (set[i] >= out.back() + gap) out.push_back(set[i]);
  }
  return out;
}

double residual_exact(const InterarrivalLaw& law, std::uint64_t n, std::uint64_t k) {
  const auto beta = law.renewal_sequence(n);
  double acc = 0.0;
  for (std::uint64_t j = 0; j <= n; ++j) {
    acc += law.survival(static_cast<std::int64_t>(j + k)) * beta[n - j];
  }
  return acc;
}

Estimate residual_conditioned(const InterarrivalLaw& law, std::uint64_t n, std::uint64_t k,
                              std::uint64_t trials, std::uint64_t seed) {
  check_trials(trials);
  std::mt19937_64 rng(seed);
  std::uint64_t exceed = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t T = 0;
    while (T <= n) T += law.sample(rng);
    if (T - n > k) ++exceed;
  }
  Estimate est;
  est.trials = trials;
  est.value = static_cast<double>(exceed) / static_cast<double>(trials);
  est.std_error = binomial_stderr(est.value, trials);
  return est;
}

double residual_distribution(const RenewalStats& stats, std::uint64_t k) {
  if (stats.residuals.empty()) return 0.0;
  const auto n = std::count_if(stats.residuals.begin(), stats.residuals.end(),
                               [k](std::uint64_t s) { return s > k; });
  return static_cast<double>(n) / static_cast<double>(stats.residuals.size());
}

}  // namespace cca
