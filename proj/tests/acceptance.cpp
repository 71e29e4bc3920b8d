// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cca/automaton.hpp"
#include "cca/cesaro.hpp"
#include "cca/digits.hpp"
#include "cca/kernel.hpp"
#include "cca/regeneration.hpp"
#include "cca/renewal.hpp"
#include "cca/rtilde.hpp"
#include "cca/stats.hpp"
#include "cca/system_s.hpp"

using namespace cca;

namespace {

constexpr double kOscillationGap = 0.05;
constexpr double kBernoulliTv = 0.02;
constexpr double kJointTv = 0.05;
constexpr double kChiSquareLevel = 0.01;
constexpr double kMeanGapRel = 0.05;
constexpr double kDensityAt20 = 0.99;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(static_cast<int>(budget_s)) + " s budget)";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome closed_form() {
  std::mt19937_64 rng(1);
  const std::vector<GroupSpec> specs{GroupSpec::cyclic(2), GroupSpec::cyclic(2, 2), GroupSpec::cyclic(3),
                                     GroupSpec(2, {1, 1})};
  std::uint64_t checked = 0;
  for (const auto& g : specs) {
    for (int t = 0; t < 1000; ++t) {
      std::int64_t mu, nu;
      do {
        mu = static_cast<std::int64_t>(rng() % 16) - 4;
        nu = static_cast<std::int64_t>(rng() % 16) - 4;
      } while (!is_unit_scalar(mu, g) || !is_unit_scalar(nu, g));
      const AutomatonParams params(mu, nu, g);
      const std::uint64_t m = rng() % 65;
      Word w{static_cast<std::int64_t>(rng() % 7) - 3, {}};
      const std::size_t len = m + 1 + rng() % 16;
      for (std::size_t i = 0; i < len; ++i) w.elems.push_back(static_cast<Elem>(rng() % g.order()));
      const auto out = iterate(w, m, params);
      for (std::int64_t i = out.start; i < out.end(); ++i, ++checked) {
        if (apply_closed_form(w, m, i, params) != out.at(i)) {
          return {false, g.describe() + " m=" + std::to_string(m) + " site " + std::to_string(i)};
        }
      }
    }
  }
  return {true, "4000 words, " + std::to_string(checked) + " sites equal"};
}

Outcome lucas() {
  using boost::multiprecision::cpp_int;
  std::uint64_t checked = 0;
  for (std::uint64_t p : {2u, 3u, 5u}) {
    std::vector<cpp_int> row{1};
    for (std::uint64_t m = 0; m <= 1000; ++m) {
      for (std::uint64_t k = 0; k <= m; ++k, ++checked) {
        if (lucas_binomial(m, k, p) != static_cast<std::uint64_t>(row[k] % p)) {
          return {false, "p=" + std::to_string(p) + " C(" + std::to_string(m) + "," + std::to_string(k) + ")"};
        }
      }
      std::vector<cpp_int> next(m + 2);
      next[0] = next[m + 1] = 1;
      for (std::uint64_t k = 1; k <= m; ++k) next[k] = row[k - 1] + row[k];
      row = std::move(next);
    }
  }
  return {true, std::to_string(checked) + " binomials"};
}

// Zero solutions of A g = 0 on G^l, using only group addition.
std::uint64_t count_solutions(const IntMatrix& a, const GroupSpec& g) {
  const std::size_t l = a.size();
  const std::uint64_t q = g.order();
  auto times = [&](std::int64_t n, Elem x) {
    Elem acc = g.identity();
    for (std::int64_t i = 0; i < n; ++i) acc = g.add(acc, x);
    return acc;
  };
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < l; ++i) total *= q;
  std::uint64_t zeros = 0;
  std::vector<Elem> v(l);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t r = idx;
    for (auto& e : v) {
      e = static_cast<Elem>(r % q);
      r /= q;
    }
    bool zero = true;
    for (std::size_t i = 0; i < l && zero; ++i) {
      Elem row = g.identity();
      for (std::size_t j = 0; j < l; ++j) row = g.add(row, times(a[i][j], v[j]));
      zero = row == g.identity();
    }
    zeros += zero;
  }
  return zeros;
}

Outcome system_s() {
  std::mt19937_64 rng(3);
  const std::vector<GroupSpec> specs{GroupSpec::cyclic(2),    GroupSpec::cyclic(2, 2), GroupSpec::cyclic(2, 3),
                                     GroupSpec::cyclic(3),    GroupSpec::cyclic(5),    GroupSpec::cyclic(7),
                                     GroupSpec(2, {1, 1}),    GroupSpec(2, {1, 2}),    GroupSpec(2, {1, 1, 1})};
  for (int t = 0; t < 200; ++t) {
    const auto& g = specs[t % specs.size()];
    const std::size_t l = 1 + rng() % 3;
    const auto p = static_cast<std::int64_t>(g.prime());
    IntMatrix a(l, std::vector<std::int64_t>(l));
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        const auto v = static_cast<std::int64_t>(rng() % 12);
        a[i][j] = j < i ? v : (j == i ? v * p + 1 + static_cast<std::int64_t>(rng() % (p - 1)) : v * p);
      }
    }
    const bool lib = check_system_s(a, g);
    const bool brute = count_solutions(a, g) == 1;
    if (!lib || !brute) return {false, "matrix " + std::to_string(t) + " on " + g.describe()};
  }
  return {true, "200 matrices uniquely solvable"};
}

Outcome regeneration() {
  const auto k = KernelSpec::markov_stay(GroupSpec::cyclic(2), 0.7);
  const auto s = sample_path(k, {}, 1'000'000, 4, 1e-6);
  std::vector<std::uint64_t> counts(2, 0);
  for (auto t : s.regens) ++counts[s.xs[t]];
  const auto chi = chi_square_uniform(counts);
  const double gap = static_cast<double>(s.regens.back() - s.regens.front()) /
                     static_cast<double>(s.regens.size() - 1);
  const double target = 1.0 / k.beta();
  const double rel = std::abs(gap - target) / target;
  const bool ok = chi.p_value > kChiSquareLevel && s.regens.size() >= 10000 && rel <= kMeanGapRel;
  return {ok, std::to_string(s.regens.size()) + " regenerations, chi-square p=" + fmt("%.3f", chi.p_value) +
                  ", mean gap " + fmt("%.4f", gap) + " vs 1/beta " + fmt("%.4f", target)};
}

Outcome renewal_bound() {
  const double beta = 0.3;
  const auto law = InterarrivalLaw::geometric(beta);
  const auto params = epsilon_params(law);
  double worst_z = 0.0;
  double min_margin = 1.0;
  for (std::uint64_t n = 4; n <= 64; ++n) {
    std::vector<std::uint64_t> A;
    for (std::uint64_t i = 0; i < n; ++i) A.push_back(3 + 2 * i);
    const auto est = miss_probability(law, A, 10000, 100 + n);
    const double exact = std::pow(1.0 - beta, static_cast<double>(n));
    const double sigma = binomial_stderr(exact, 10000);
    worst_z = std::max(worst_z, std::abs(est.value - exact) / sigma);
    min_margin = std::min(min_margin, epsilon(law, n, params) - est.value);
  }
  const bool ok = worst_z <= 3.0 && min_margin >= 0.0;
  return {ok, "max |z| " + fmt("%.2f", worst_z) + ", min eps - estimate " + fmt("%.4f", min_margin)};
}

Outcome bernoulli_cesaro() {
  const auto z2 = GroupSpec::cyclic(2);
  ScanOptions opt;
  opt.grid = dyadic_grid(14);
  opt.keep_per_m = true;
  const auto rep = cesaro_scan(KernelSpec::product(z2, {0.7, 0.3}), {}, AutomatonParams(1, 1, z2), opt);
  double min_gap = 1.0;
  for (int k = 4; k <= 10; ++k) {
    const std::uint64_t m = std::uint64_t{1} << k;
    min_gap = std::min(min_gap, std::abs(rep.per_m[m][0] - rep.per_m[m - 1][0]));
  }
  const double tv = rep.tv.back();
  return {min_gap >= kOscillationGap && tv <= kBernoulliTv,
          "min oscillation gap " + fmt("%.4f", min_gap) + ", TV(2^14) " + fmt("%.3g", tv)};
}

Outcome joint_cesaro() {
  const auto z2 = GroupSpec::cyclic(2);
  ScanOptions opt;
  opt.grid = dyadic_grid(14);
  opt.J = {0, 1};
  const auto rep = cesaro_scan(KernelSpec::markov_stay(z2, 0.7), {}, AutomatonParams(1, 1, z2), opt);
  bool monotone = true;
  for (std::size_t i = 1; i < rep.tv.size(); ++i) monotone = monotone && rep.tv[i] < rep.tv[i - 1];
  const double tv = rep.tv.back();
  return {monotone && tv <= kJointTv, std::string(monotone ? "strictly decreasing" : "not monotone") +
                                          ", TV(2^14) " + fmt("%.3g", tv)};
}

Outcome density() {
  double prev = 0.0;
  bool increasing = true;
  double last = 0.0;
  for (int t = 8; t <= 20; ++t) {
    last = density_set(std::uint64_t{1} << t, 0.4, 2).density;
    increasing = increasing && last > prev;
    prev = last;
  }
  return {increasing && last > kDensityAt20, std::string(increasing ? "increasing" : "not increasing") +
                                                 " on t=8..20, density(2^20) " + fmt("%.6f", last)};
}

Outcome rtilde() {
  std::uint64_t families = 0;
  for (std::uint64_t p : {2u, 3u}) {
    const RtildeParams params{std::uint64_t{1} << 20, 0.49, 0.47, 0.009, p};
    const std::uint64_t max_j = p == 2 ? 2 : 3;
    std::mt19937_64 rng(9 + p);
    std::uint64_t built = 0;
    for (std::uint64_t tries = 0; built < 100; ++tries) {
      if (tries > 1'000'000) return {false, "too few eligible pairs for p=" + std::to_string(p)};
      std::vector<std::uint64_t> J{0};
      for (std::uint64_t j = 1; j <= max_j; ++j) {
        if (rng() & 1) J.push_back(j);
      }
      const std::uint64_t m = rng() % (params.M - max_j);
      if (!rtilde_eligibility(m, J, params).ok) continue;
      const auto fam = build_rtilde(m, J, params);
      if (auto bad = validate_rtilde(m, J, fam.sets, p)) {
        return {false, "p=" + std::to_string(p) + " m=" + std::to_string(m) + ": " + *bad};
      }
      for (const auto& s : fam.sets) {
        if (static_cast<double>(s.size()) < fam.size_threshold) {
          return {false, "p=" + std::to_string(p) + " m=" + std::to_string(m) + " set below threshold"};
        }
      }
      ++built;
    }
    families += built;
  }
  return {true, std::to_string(families) + " families validated"};
}

}  // namespace

int main() {
  criterion(1, "closed form equals iteration", 10, closed_form);
  criterion(2, "Lucas binomials vs big integers", 5, lucas);
  criterion(3, "system (S) unique solution", 30, system_s);
  criterion(4, "regeneration uniformity and mean gap", 60, regeneration);
  criterion(5, "renewal miss probability and epsilon bound", 30, renewal_bound);
  criterion(6, "Cesaro convergence despite oscillation", 120, bernoulli_cesaro);
  criterion(7, "joint Cesaro convergence", 300, joint_cesaro);
  criterion(8, "density-one sweep", 30, density);
  criterion(9, "H1-H3 families", 30, rtilde);
  std::printf("# %d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
