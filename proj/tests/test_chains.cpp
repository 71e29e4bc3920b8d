#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cca/error.hpp"
#include "cca/kernel.hpp"
#include "cca/regeneration.hpp"
#include "cca/rng.hpp"
#include "cca/stats.hpp"

using namespace cca;

namespace {

const GroupSpec kZ2 = GroupSpec::cyclic(2);
const GroupSpec kZ3 = GroupSpec::cyclic(3);

KernelSpec mixture_z2() {
  return KernelSpec::mixture(kZ2, {0.5, 0.3, 0.2}, 0.5,
                             {{{0.8, 0.2}, {0.3, 0.7}}, {{0.6, 0.4}, {0.45, 0.55}}, {{0.55, 0.45}, {0.5, 0.5}}});
}

KernelSpec mixture_z3() {
  return KernelSpec::mixture(kZ3, {0.6, 0.4}, 0.4,
                             {{{0.7, 0.2, 0.1}, {0.1, 0.7, 0.2}, {0.2, 0.1, 0.7}},
                              {{0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}, {0.25, 0.25, 0.5}}},
                             0.1, 2);
}

KernelSpec markov2_z2() {
  return KernelSpec::markov(kZ2, 2, {{0.6, 0.4}, {0.3, 0.7}, {0.55, 0.45}, {0.2, 0.8}}, {1, 0});
}

std::vector<KernelSpec> all_kernels() {
  return {KernelSpec::product(kZ3, {0.5, 0.3, 0.2}), KernelSpec::markov_stay(kZ2, 0.7), markov2_z2(),
          KernelSpec::markov(kZ3, 1, {{0.5, 0.3, 0.2}, {0.2, 0.5, 0.3}, {0.3, 0.2, 0.5}}),
          mixture_z2(), mixture_z3()};
}

std::vector<Elem> random_past(std::mt19937_64& rng, std::uint64_t q, std::size_t len) {
  std::vector<Elem> w(len);
  for (auto& e : w) e = static_cast<Elem>(rng() % q);
  return w;
}

// All pasts of exact length n over {0..q-1}.
std::vector<std::vector<Elem>> all_pasts(std::uint64_t q, std::size_t n) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> w(n, 0);
  for (;;) {
    out.push_back(w);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++w[i] < q) break;
      w[i] = 0;
    }
    if (i == n) break;
  }
  return out;
}

}  // namespace

TEST(Kernel, ProductUniform) {
  const auto k = KernelSpec::product(kZ3, uniform_measure(kZ3));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto w = random_past(rng, 3, t);
    for (Elem g = 0; g < 3; ++g) EXPECT_NEAR(k.eval(g, PastView(w)), 1.0 / 3.0, 1e-15);
  }
}

TEST(Kernel, MarkovLookup) {
  const auto k = KernelSpec::markov_stay(kZ2, 0.7);
  const std::vector<Elem> w{1, 0, 0};
  EXPECT_DOUBLE_EQ(k.eval(1, PastView(w)), 0.7);
  EXPECT_DOUBLE_EQ(k.eval(0, PastView(w)), 0.3);
  const auto k2 = markov2_z2();
  // Row index: newest symbol least significant.
  const std::vector<Elem> v{1, 1};
  EXPECT_DOUBLE_EQ(k2.eval(1, PastView(v)), 0.8);
  const std::vector<Elem> u{0, 1};
  EXPECT_DOUBLE_EQ(k2.eval(1, PastView(u)), 0.45);
  // Padding by the initial past (depth-indexed): w_{-1}=1, w_{-2}=0 gives row 1.
  EXPECT_DOUBLE_EQ(k2.eval(1, PastView()), 0.7);
}

TEST(Kernel, RejectsInvalidFamilies) {
  EXPECT_THROW(KernelSpec::product(kZ2, {0.5, 0.4}), DomainError);
  EXPECT_THROW(KernelSpec::product(kZ2, {1.0, 0.0}), DomainError);
  EXPECT_THROW(KernelSpec::markov(kZ2, 1, {{0.5, 0.5}}), Error);
  EXPECT_THROW(KernelSpec::mixture(kZ2, {0.5}, 1.2, {{{0.5, 0.5}, {0.5, 0.5}}}), DomainError);
  EXPECT_THROW(KernelSpec::mixture(kZ2, {0.5}, 0.5, {{{0.5, 0.5}, {0.5, 0.5}}}, 0.0), DomainError);
}

TEST(Kernel, Normalization) {
  std::mt19937_64 rng(2);
  for (const auto& k : all_kernels()) {
    for (int t = 0; t < 1000; ++t) {
      const auto w = random_past(rng, k.order(), rng() % 15);
      double s = 0.0;
      for (Elem g = 0; g < k.order(); ++g) {
        const double v = k.eval(g, PastView(w));
        EXPECT_GT(v, 0.0);
        EXPECT_GE(v, k.min_probability() - 1e-15);
        s += v;
      }
      EXPECT_NEAR(s, 1.0, 1e-12) << k.family_name();
    }
  }
}

TEST(Kernel, TailModesBracketDefault) {
  std::mt19937_64 rng(3);
  for (const auto& k : {mixture_z2(), mixture_z3(), markov2_z2()}) {
    for (int t = 0; t < 300; ++t) {
      const auto w = random_past(rng, k.order(), rng() % 5);
      for (Elem g = 0; g < k.order(); ++g) {
        const PastView v(w);
        const double lo = k.eval(g, v, TailMode::worst_case);
        const double mid = k.eval(g, v, TailMode::default_tail);
        const double hi = k.eval(g, v, TailMode::best_case);
        EXPECT_LE(lo, mid + 1e-15);
        EXPECT_LE(mid, hi + 1e-15);
      }
    }
  }
}

TEST(Kernel, WorstCaseIsInfimumOverCompletions) {
  // Exhaustive completion of the unseen coordinates, deep enough that the
  // remaining mixture weight is below the tolerance.
  for (const auto& k : {mixture_z2(), markov2_z2()}) {
    for (std::size_t known = 0; known <= 2; ++known) {
      for (const auto& prefix : all_pasts(k.order(), known)) {
        for (Elem g = 0; g < k.order(); ++g) {
          double lo = 1.0, hi = 0.0;
          for (const auto& tail : all_pasts(k.order(), 14 - known)) {
            auto w = prefix;
            w.insert(w.end(), tail.begin(), tail.end());
            const double v = k.eval(g, PastView(w));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
          const PastView view(prefix);
          EXPECT_NEAR(k.eval(g, view, TailMode::worst_case), lo, 2e-4);
          EXPECT_NEAR(k.eval(g, view, TailMode::best_case), hi, 2e-4);
          EXPECT_LE(k.eval(g, view, TailMode::worst_case), lo + 1e-15);
          EXPECT_GE(k.eval(g, view, TailMode::best_case), hi - 1e-15);
        }
      }
    }
  }
}

TEST(ComputeA, ProductKernel) {
  const std::vector<double> pi{0.5, 0.3, 0.2};
  const auto k = KernelSpec::product(kZ3, pi);
  EXPECT_NEAR(k.a_scalar(-1), 3 * 0.2, 1e-15);
  for (int j = 0; j < 10; ++j) EXPECT_DOUBLE_EQ(k.a_scalar(j), 1.0);
  const auto low = compute_a(k, -1, {});
  for (double v : low.per_g) EXPECT_NEAR(v, 0.2, 1e-15);
  EXPECT_NEAR(k.beta(), 0.6, 1e-15);
}

TEST(ComputeA, MarkovStabilizesAtItsOrder) {
  for (const auto& k : {KernelSpec::markov_stay(kZ2, 0.7), markov2_z2(),
                        KernelSpec::markov(kZ3, 1, {{0.5, 0.3, 0.2}, {0.2, 0.5, 0.3}, {0.3, 0.2, 0.5}})}) {
    const int k0 = k.as_markov().order;
    const auto& T = k.as_markov().transition;
    const std::uint64_t q = k.order();
    // Oracle: a_k = min over prefixes of sum_g min over completions of the table row.
    auto row_of = [&](const std::vector<Elem>& w) {
      std::size_t r = 0, s = 1;
      for (int d = 0; d < k0; ++d, s *= q) r += w[d] * s;
      return r;
    };
    std::vector<double> oracle;
    double global = 1.0;
    for (const auto& w : all_pasts(q, k0)) {
      for (Elem g = 0; g < q; ++g) global = std::min(global, T[row_of(w)][g]);
    }
    oracle.push_back(q * global);
    for (int j = 0; j <= k0 + 2; ++j) {
      const int known = std::min(j, k0);
      double best = 2.0;
      for (const auto& prefix : all_pasts(q, known)) {
        double sum = 0.0;
        for (Elem g = 0; g < q; ++g) {
          double lo = 1.0;
          for (const auto& rest : all_pasts(q, k0 - known)) {
            auto w = prefix;
            w.insert(w.end(), rest.begin(), rest.end());
            lo = std::min(lo, T[row_of(w)][g]);
          }
          sum += lo;
        }
        best = std::min(best, sum);
      }
      oracle.push_back(best);
    }
    for (int j = -1; j <= k0 + 2; ++j) {
      EXPECT_NEAR(k.a_scalar(j), oracle[j + 1], 1e-12) << "k=" << j;
    }
    for (int j = k0; j < k0 + 5; ++j) EXPECT_DOUBLE_EQ(k.a_scalar(j), k.a_scalar(k0));
    EXPECT_EQ(k.finite_memory(), k0);
  }
  const auto m = KernelSpec::markov_stay(kZ2, 0.7);
  EXPECT_NEAR(m.a_scalar(-1), 0.6, 1e-15);
  EXPECT_NEAR(m.a_scalar(0), 0.6, 1e-15);
  EXPECT_NEAR(m.a_scalar(1), 1.0, 1e-15);
  EXPECT_NEAR(m.beta(), 0.36, 1e-15);
}

TEST(ComputeA, MixtureMatchesEnumerationAndDecaysGeometrically) {
  const auto k = mixture_z2();
  for (int j = 0; j <= 6; ++j) {
    double best = 2.0;
    for (const auto& prefix : all_pasts(2, j)) {
      double sum = 0.0;
      for (Elem g = 0; g < 2; ++g) {
        double lo = 1.0;
        for (const auto& tail : all_pasts(2, 14 - j)) {
          auto w = prefix;
          w.insert(w.end(), tail.begin(), tail.end());
          lo = std::min(lo, k.eval(g, PastView(w)));
        }
        sum += lo;
      }
      best = std::min(best, sum);
    }
    EXPECT_LE(k.a_scalar(j), best + 1e-12) << j;
    EXPECT_NEAR(k.a_scalar(j), best, 1e-3) << j;
  }
  const double rho = k.as_mixture().rho;
  const double C = (1.0 - k.a_scalar(0));
  for (int j = 1; j < 40; ++j) {
    EXPECT_LE(1.0 - k.a_scalar(j), C * std::pow(rho, j - 2) + 1e-15);
    EXPECT_LT(k.a_scalar(j), 1.0);
  }
  EXPECT_EQ(k.finite_memory(), -1);
}

TEST(ComputeA, MonotoneAndBoundedByDecay) {
  for (const auto& k : all_kernels()) {
    double prev = k.a_scalar(-1);
    EXPECT_GT(prev, 0.0);
    for (int j = 0; j < 40; ++j) {
      const double a = k.a_scalar(j);
      EXPECT_GE(a, prev - 1e-15) << k.family_name() << " " << j;
      EXPECT_GE(a, 1.0 - k.gamma(j) - 1e-12) << k.family_name() << " " << j;
      prev = a;
    }
    double direct = 0.0;
    for (int j = 5; j < 4000; ++j) direct += 1.0 - k.a_scalar(j);
    EXPECT_NEAR(k.tail_deficit(5), direct, 1e-10) << k.family_name();
    EXPECT_TRUE(std::isfinite(k.tail_deficit(0)));
  }
}

TEST(ComputeA, DecayBoundIsSound) {
  std::mt19937_64 rng(4);
  for (const auto& k : all_kernels()) {
    for (int m = 0; m <= 8; ++m) {
      const double gm = k.gamma(m);
      for (int t = 0; t < 400; ++t) {
        auto w = random_past(rng, k.order(), 12);
        auto v = random_past(rng, k.order(), 12);
        for (int i = 0; i < m; ++i) v[i] = w[i];
        for (Elem g = 0; g < k.order(); ++g) {
          const double r = k.eval(g, PastView(w)) / k.eval(g, PastView(v));
          EXPECT_LE(std::abs(r - 1.0), gm + 1e-12) << k.family_name() << " m=" << m;
        }
      }
    }
  }
}

TEST(Layout, ProductMassOnTwoLevels) {
  const auto k = KernelSpec::product(kZ3, {0.5, 0.3, 0.2});
  const auto lay = build_layout(k, {}, 4);
  EXPECT_NEAR(lay.covered(0), 1.0, 1e-15);
  for (int lv = 1; lv <= 4; ++lv) {
    for (double b : lay.lengths[lv + 1]) EXPECT_EQ(b, 0.0);
  }
  for (Elem g = 0; g < 3; ++g) EXPECT_NEAR(lay.lengths[0][g], 0.2, 1e-15);
}

TEST(Layout, UniformSliceAtLowestLevel) {
  std::mt19937_64 rng(6);
  for (const auto& k : all_kernels()) {
    const auto w = random_past(rng, k.order(), 6);
    const auto lay = build_layout(k, w, 10);
    const double total = lay.covered(-1);
    EXPECT_NEAR(total, k.a_scalar(-1), 1e-14);
    for (double b : lay.lengths[0]) EXPECT_NEAR(b / total, 1.0 / static_cast<double>(k.order()), 1e-14);
  }
}

TEST(Layout, MarkovHandComputation) {
  const auto k = KernelSpec::markov_stay(kZ2, 0.7);
  const std::vector<Elem> w{1};
  const auto lay = build_layout(k, w, 3);
  EXPECT_NEAR(lay.lengths[0][0], 0.3, 1e-15);
  EXPECT_NEAR(lay.lengths[0][1], 0.3, 1e-15);
  EXPECT_NEAR(lay.lengths[1][0], 0.0, 1e-15);
  EXPECT_NEAR(lay.lengths[1][1], 0.0, 1e-15);
  EXPECT_NEAR(lay.lengths[2][0], 0.0, 1e-15);
  EXPECT_NEAR(lay.lengths[2][1], 0.4, 1e-15);
  EXPECT_NEAR(lay.covered(), 1.0, 1e-15);
  EXPECT_NEAR(lay.start(1, 1), 0.6, 1e-15);
  const auto hit = lay.locate(0.65);
  EXPECT_TRUE(hit.found);
  EXPECT_EQ(hit.g, 1u);
  EXPECT_EQ(hit.level, 1);
  const auto edge = lay.locate(0.3 + 1e-12);
  EXPECT_EQ(edge.g, 1u);
  EXPECT_EQ(edge.level, -1);
}

TEST(Layout, CoverageAndSliceBounds) {
  std::mt19937_64 rng(7);
  for (const auto& k : all_kernels()) {
    for (int t = 0; t < 50; ++t) {
      const auto w = random_past(rng, k.order(), rng() % 10);
      const int K = 30;
      const auto lay = build_layout(k, w, K);
      for (int lv = -1; lv <= K; ++lv) {
        for (double b : lay.lengths[lv + 1]) EXPECT_GE(b, 0.0);
        EXPECT_GE(lay.covered(lv), lay.a_seq[lv + 1] - 1e-12);
      }
      EXPECT_LE(lay.covered(), 1.0 + 1e-12);
      for (Elem g = 0; g < k.order(); ++g) {
        double s = 0.0;
        for (const auto& row : lay.lengths) s += row[g];
        EXPECT_LE(s, k.eval(g, PastView(w)) + 1e-12);
      }
      for (int i = 1; i <= K + 1; ++i) EXPECT_GE(lay.a_seq[i], lay.a_seq[i - 1] - 1e-15);
    }
  }
  EXPECT_THROW(build_layout(mixture_z2(), {}, -1), DomainError);
}

TEST(Sampler, ProductFrequenciesWithinBands) {
  const GroupSpec z4 = GroupSpec::cyclic(2, 2);
  const auto k = KernelSpec::product(z4, uniform_measure(z4));
  const std::size_t N = 100000;
  const auto s = sample_path(k, {}, N, 8);
  std::vector<double> freq(4, 0.0);
  for (auto x : s.xs) freq[x] += 1.0 / N;
  for (double f : freq) EXPECT_LE(std::abs(f - 0.25), 3 * binomial_stderr(0.25, N));
}

TEST(Sampler, MarkovTransitionsMatchTableAndDirectSampler) {
  const auto k = KernelSpec::markov(kZ3, 1, {{0.5, 0.3, 0.2}, {0.2, 0.5, 0.3}, {0.3, 0.2, 0.5}});
  const auto& T = k.as_markov().transition;
  const std::size_t N = 100000;
  const std::vector<Elem> w{0};
  const auto s = sample_path(k, w, N, 9);

  std::vector<std::vector<double>> ours(3, std::vector<double>(3, 0.0)), direct = ours;
  std::vector<double> from(3, 0.0), dfrom(3, 0.0);
  for (std::size_t n = 1; n < N; ++n) {
    ours[s.xs[n - 1]][s.xs[n]] += 1;
    from[s.xs[n - 1]] += 1;
  }
  // Oracle: inverse-cdf Markov sampler.
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> U;
  Elem prev = 0;
  for (std::size_t n = 0; n < N; ++n) {
    const double u = U(rng);
    Elem x = 0;
    for (double c = T[prev][0]; u >= c && x < 2;) c += T[prev][++x];
    direct[prev][x] += 1;
    dfrom[prev] += 1;
    prev = x;
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double band = 3 * binomial_stderr(T[a][b], static_cast<std::uint64_t>(from[a]));
      EXPECT_LE(std::abs(ours[a][b] / from[a] - T[a][b]), band);
      EXPECT_LE(std::abs(ours[a][b] / from[a] - direct[a][b] / dfrom[a]), 2 * band);
    }
  }
}

TEST(Sampler, MixtureMarginalMatchesKernel) {
  const auto k = mixture_z3();
  const std::size_t N = 60000;
  const std::vector<Elem> w{0, 1, 2};
  const auto s = sample_path(k, w, N, 12);
  // P(x_n = g | x_{n-1} = h) averaged over the realized deeper past equals the
  // empirical mean of the kernel evaluated along the path.
  std::vector<double> predicted(3, 0.0), observed(3, 0.0);
  for (std::size_t n = 1; n < N; ++n) {
    std::vector<Elem> past(s.xs.rbegin() + static_cast<std::ptrdiff_t>(N - n), s.xs.rend());
    past.insert(past.end(), w.begin(), w.end());
    for (Elem g = 0; g < 3; ++g) predicted[g] += k.eval(g, PastView(past)) / (N - 1);
    observed[s.xs[n]] += 1.0 / (N - 1);
  }
  for (Elem g = 0; g < 3; ++g) EXPECT_NEAR(observed[g], predicted[g], 4 * binomial_stderr(predicted[g], N));
}

TEST(Sampler, DeterministicPerSeed) {
  const auto k = mixture_z2();
  const std::vector<Elem> w{1, 0};
  const auto a = sample_path(k, w, 5000, 77);
  const auto b = sample_path(k, w, 5000, 77);
  EXPECT_EQ(a.xs, b.xs);
  EXPECT_EQ(a.us, b.us);
  EXPECT_EQ(a.regens, b.regens);
  const auto c = sample_path(k, w, 5000, 78);
  EXPECT_NE(a.xs, c.xs);
  EXPECT_THROW(sample_path(k, {}, 0, 1), DomainError);
  EXPECT_THROW(sample_path(k, std::vector<Elem>{5}, 10, 1), DomainError);
}

TEST(Sampler, StepDependsOnlyOnRecentHistoryBelowLevel) {
  std::mt19937_64 rng(13);
  const CounterUniforms U(5);
  for (const auto& k : {mixture_z2(), mixture_z3(), markov2_z2()}) {
    for (int t = 0; t < 3000; ++t) {
      const int depth = static_cast<int>(rng() % 6);
      const double u = U(t);
      if (u > k.a_scalar(depth)) continue;
      auto w = random_past(rng, k.order(), 12);
      auto v = random_past(rng, k.order(), 12);
      for (int i = 0; i < depth; ++i) v[i] = w[i];
      const auto a = sample_step(k, PastView(w), u);
      const auto b = sample_step(k, PastView(v), u);
      EXPECT_EQ(a.g, b.g);
      EXPECT_LE(a.level, depth);
    }
  }
}

TEST(Regeneration, ProductReducesToLowestLevel) {
  const auto k = KernelSpec::product(kZ3, {0.5, 0.3, 0.2});
  const auto s = sample_path(k, {}, 50000, 14);
  std::vector<std::uint64_t> expect;
  for (std::size_t n = 0; n < s.us.size(); ++n) {
    if (s.us[n] <= k.a_scalar(-1)) expect.push_back(n);
  }
  EXPECT_EQ(s.regens, expect);
  EXPECT_TRUE(s.candidates.empty());
  EXPECT_NEAR(static_cast<double>(s.regens.size()) / 50000.0, 0.6, 4 * binomial_stderr(0.6, 50000));
}

TEST(Regeneration, MatchesBruteForceCondition) {
  for (const auto& k : {mixture_z2(), markov2_z2(), KernelSpec::markov_stay(kZ2, 0.7)}) {
    const std::size_t N = 3000;
    const double tol = 1e-6;
    const auto s = sample_path(k, {}, N, 15, tol);
    std::vector<std::uint64_t> regens, cands;
    for (std::size_t n = 0; n < N; ++n) {
      bool ok = true;
      for (std::size_t j = 0; n + j < N && ok; ++j) ok = s.us[n + j] <= k.a_scalar(static_cast<int>(j) - 1);
      if (!ok) continue;
      double tail = 0.0;
      for (std::size_t j = N - n; j < N - n + 20000; ++j) tail += 1.0 - k.a_scalar(static_cast<int>(j) - 1);
      (tail <= tol ? regens : cands).push_back(n);
    }
    EXPECT_EQ(s.regens, regens) << k.family_name();
    EXPECT_EQ(s.candidates, cands) << k.family_name();
    for (double b : s.tail_bounds) EXPECT_LE(b, tol);
    for (double b : s.candidate_bounds) EXPECT_GT(b, tol);
    EXPECT_TRUE(std::is_sorted(s.regens.begin(), s.regens.end()));
  }
}

TEST(Regeneration, TimesDoNotDependOnInitialPast) {
  for (const auto& k : {mixture_z3(), markov2_z2()}) {
    const auto a = sample_path(k, std::vector<Elem>{0, 0, 0, 0}, 20000, 16);
    const auto b = sample_path(k, std::vector<Elem>{1, static_cast<Elem>(2 % k.order()), 1, 0}, 20000, 16);
    EXPECT_EQ(a.regens, b.regens);
    EXPECT_EQ(a.candidates, b.candidates);
    // After the first regeneration both paths coincide.
    ASSERT_FALSE(a.regens.empty());
    for (std::size_t n = a.regens.front(); n < a.xs.size(); ++n) ASSERT_EQ(a.xs[n], b.xs[n]);
  }
}

TEST(Regeneration, MixtureTailsLeaveCandidatesNearTheEnd) {
  const auto k = mixture_z2();
  const auto s = sample_path(k, {}, 2000, 17, 1e-12);
  for (auto n : s.candidates) EXPECT_GT(n, 1900u);
  EXPECT_FALSE(s.regens.empty());
}

TEST(Blocks, LengthsFirstSymbolsAndIndependence) {
  const auto k = KernelSpec::markov_stay(kZ2, 0.7);
  const auto s = sample_path(k, {}, 400000, 18);
  const auto blocks = regeneration_blocks(s);
  ASSERT_EQ(blocks.size() + 1, s.regens.size());
  std::uint64_t covered = 0;
  std::vector<double> lengths;
  std::vector<std::uint64_t> first(2, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    EXPECT_EQ(blocks[i].start, s.regens[i]);
    covered += blocks[i].elems.size();
    lengths.push_back(static_cast<double>(blocks[i].elems.size()));
    ++first[blocks[i].elems.front()];
  }
  EXPECT_EQ(covered, s.regens.back() - s.regens.front());
  EXPECT_NEAR(mean(lengths) * k.beta(), 1.0, 0.05);
  EXPECT_GT(chi_square_uniform(first).p_value, 0.01);
  EXPECT_LE(std::abs(lag1_correlation(lengths)), 3.0 / std::sqrt(static_cast<double>(lengths.size())));

  RegenSample tiny;
  tiny.regens = {4};
  EXPECT_TRUE(regeneration_blocks(tiny).empty());
}
