#include "cca/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "cca/automaton.hpp"
#include "cca/cesaro.hpp"
#include "cca/digits.hpp"
#include "cca/error.hpp"
#include "cca/regeneration.hpp"
#include "cca/renewal.hpp"
#include "cca/rng.hpp"
#include "cca/rtilde.hpp"
#include "cca/stats.hpp"
#include "cca/system_s.hpp"

namespace cca {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join(const std::vector<std::uint64_t>& xs, char sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(xs[i]);
  }
  return s;
}

std::uint64_t seed_for(const Config& cfg, const std::string& section, const CommandOptions& opts) {
  const auto from_file = cfg.get_uint(section, "seed", 1);
  return opts.seed ? *opts.seed : from_file;
}

std::vector<std::string> base_metadata(const std::string& command, const Config& cfg,
                                       std::uint64_t seed) {
  return {"command = " + command, "config_digest = " + cfg.digest_hex(),
          "seed = " + std::to_string(seed)};
}

void write_metadata(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) out << "# " << l << '\n';
}

double mean_gap(const std::vector<std::uint64_t>& times) {
  if (times.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(times.back() - times.front()) /
         static_cast<double>(times.size() - 1);
}

void warn_noncoprime(const AutomatonParams& params, std::ostream& log) {
  if (!params.coprime()) {
    log << "warning: mu=" << params.mu() << ", nu=" << params.nu()
        << " are not both coprime to p; Cesaro convergence is not guaranteed\n";
  }
}

}  // namespace

int cmd_simulate(const Config& cfg, const CommandOptions& opts, std::ostream& out,
                 std::ostream& log) {
  const auto group = load_group(cfg);
  const auto kernel = load_kernel(cfg, group);
  const auto past = load_past(cfg, group);
  const auto N = cfg.get_uint("simulate", "N", 10000);
  const double tol = cfg.get_double("simulate", "tail_tol", kDefaultTailTol);
  const auto seed = seed_for(cfg, "simulate", opts);
  std::optional<std::uint64_t> phi_m;
  if (cfg.has("simulate", "phi_m")) phi_m = cfg.get_uint("simulate", "phi_m");
  std::vector<std::string> used{"", "group", "kernel", "past", "simulate"};
  std::optional<AutomatonParams> params;
  if (phi_m) {
    params = load_automaton(cfg, group);
    warn_noncoprime(*params, log);
    used.push_back("automaton");
  }
  cfg.check_unused(used);
  if (N == 0) throw ConfigError("[simulate] N must be positive");
  if (phi_m && *phi_m >= N) throw ConfigError("[simulate] phi_m must be below N");

  const auto sample = sample_path(kernel, past, N, seed, tol);
  std::vector<std::int8_t> flag(N, 0);
  std::vector<double> bound(N, -1.0);
  for (std::size_t i = 0; i < sample.regens.size(); ++i) {
    flag[sample.regens[i]] = 1;
    bound[sample.regens[i]] = sample.tail_bounds[i];
  }
  for (std::size_t i = 0; i < sample.candidates.size(); ++i) {
    bound[sample.candidates[i]] = sample.candidate_bounds[i];
  }
  std::vector<Elem> phi;
  if (phi_m) phi = iterate(Word{0, sample.xs}, *phi_m, *params).elems;

  const double density = static_cast<double>(sample.regens.size()) / static_cast<double>(N);
  const double beta = kernel.beta();
  const double gap = mean_gap(sample.regens);

  auto meta = base_metadata("simulate", cfg, seed);
  meta.push_back("group = " + group.describe());
  meta.push_back("kernel = " + kernel.family_name());
  meta.push_back("N = " + std::to_string(N));
  meta.push_back("tail_tol = " + num(tol));
  meta.push_back("regenerations = " + std::to_string(sample.regens.size()));
  meta.push_back("candidates = " + std::to_string(sample.candidates.size()));
  meta.push_back("regen_density = " + num(density));
  meta.push_back("a_minus1 = " + num(kernel.a_scalar(-1)));
  meta.push_back("beta = " + num(beta));
  meta.push_back("mean_gap = " + num(gap));
  meta.push_back("inverse_beta = " + num(beta > 0 ? 1.0 / beta : 0.0));
  if (phi_m) meta.push_back("phi_m = " + std::to_string(*phi_m));
  write_metadata(out, meta);

  out << "n,x,regeneration,tail_bound";
  if (phi_m) out << ",phi";
  out << '\n';
  for (std::uint64_t n = 0; n < N; ++n) {
    out << n << ',' << sample.xs[n] << ',' << int(flag[n]) << ',';
    if (bound[n] >= 0.0) out << num(bound[n]);
    if (phi_m) {
      out << ',';
      if (n < phi.size()) out << phi[n];
    }
    out << '\n';
  }
  log << "simulate: N=" << N << " regenerations=" << sample.regens.size()
      << " density=" << num(density) << " mean_gap=" << num(gap)
      << " inverse_beta=" << num(beta > 0 ? 1.0 / beta : 0.0) << '\n';
  return kExitOk;
}

int cmd_cesaro(const Config& cfg, const CommandOptions& opts, std::ostream& out,
               std::ostream& log) {
  const auto group = load_group(cfg);
  const auto params = load_automaton(cfg, group);
  warn_noncoprime(params, log);
  const auto kernel = load_kernel(cfg, group);
  const auto past = load_past(cfg, group);
  const std::string mode = opts.mode ? *opts.mode : cfg.get_string("cesaro", "mode", std::string("exact"));
  if (mode != "exact" && mode != "mc") throw ConfigError("mode must be exact or mc, got '" + mode + "'");

  ScanOptions o;
  o.mode = mode == "exact" ? ScanMode::exact : ScanMode::monte_carlo;
  if (cfg.has("cesaro", "grid")) {
    o.grid = cfg.get_uints("cesaro", "grid");
  } else {
    o.grid = dyadic_grid(static_cast<int>(cfg.get_uint("cesaro", "top", 10)));
  }
  if (cfg.has("cesaro", "J")) o.J = cfg.get_uints("cesaro", "J");
  o.trials = cfg.get_uint("cesaro", "trials", 2000);
  o.seed = seed_for(cfg, "cesaro", opts);
  if (cfg.has("cesaro", "cylinders")) {
    for (auto c : cfg.get_uints("cesaro", "cylinders")) {
      o.cylinders.push_back(cell_values(c, o.J.size(), group.order()));
    }
  }
  const bool cross = cfg.get_bool("cesaro", "cross_check", false);
  const auto cross_trials = cfg.get_uint("cesaro", "cross_trials", o.trials);
  cfg.check_unused({"", "group", "automaton", "kernel", "past", "cesaro"});

  const auto report = cesaro_scan(kernel, past, params, o);
  auto meta = base_metadata("cesaro", cfg, o.seed);
  meta.push_back("mode = " + mode);
  meta.push_back("group = " + group.describe());
  meta.push_back("kernel = " + kernel.family_name());
  meta.push_back("mu = " + std::to_string(params.mu()) + ", nu = " + std::to_string(params.nu()));
  meta.push_back("J = " + join(o.J, ':'));
  if (o.mode == ScanMode::monte_carlo) meta.push_back("trials = " + std::to_string(o.trials));

  if (cross) {
    ScanOptions exact = o, mc = o;
    exact.mode = ScanMode::exact;
    mc.mode = ScanMode::monte_carlo;
    mc.trials = cross_trials;
    const auto re = o.mode == ScanMode::exact ? report : cesaro_scan(kernel, past, params, exact);
    const auto rm = o.mode == ScanMode::monte_carlo ? report : cesaro_scan(kernel, past, params, mc);
    double max_abs = 0.0, max_z = 0.0;
    for (std::size_t i = 0; i < re.grid.size(); ++i) {
      for (std::size_t c = 0; c < re.averaged[i].size(); ++c) {
        const double d = std::abs(re.averaged[i][c] - rm.averaged[i][c]);
        const double s = rm.stderrs[i][c];
        max_abs = std::max(max_abs, d);
        if (s > 0.0) {
          max_z = std::max(max_z, d / s);
        } else if (d > 0.0) {
          max_z = std::numeric_limits<double>::infinity();
        }
      }
    }
    meta.push_back("cross_check_trials = " + std::to_string(cross_trials));
    meta.push_back("cross_check_max_abs = " + num(max_abs));
    meta.push_back("cross_check_max_z = " + num(max_z));
    meta.push_back(std::string("cross_check_within_4sigma = ") + (max_z <= 4.0 ? "true" : "false"));
    log << "cesaro: cross check max |delta| = " << num(max_abs) << " (" << num(max_z)
        << " sigma)\n";
  }
  report.write_csv(out, meta);
  log << "cesaro: mode=" << mode << " M=" << report.grid.back() << " tv=" << num(report.tv.back())
      << '\n';
  return kExitOk;
}

int cmd_regen_stats(const Config& cfg, const CommandOptions& opts, std::ostream& out,
                    std::ostream& log) {
  const auto group = load_group(cfg);
  const auto kernel = load_kernel(cfg, group);
  const auto past = load_past(cfg, group);
  const auto N = cfg.get_uint("regen-stats", "N", 200000);
  const double tol = cfg.get_double("regen-stats", "tail_tol", kDefaultTailTol);
  const auto bins = cfg.get_uint("regen-stats", "max_gap", 20);
  const auto seed = seed_for(cfg, "regen-stats", opts);
  cfg.check_unused({"", "group", "kernel", "past", "regen-stats"});
  if (N == 0) throw ConfigError("[regen-stats] N must be positive");

  const auto sample = sample_path(kernel, past, N, seed, tol);
  const auto& T = sample.regens;
  std::vector<std::uint64_t> counts(group.order(), 0);
  for (auto t : T) ++counts[sample.xs[t]];
  const auto chi = chi_square_uniform(counts);

  std::vector<double> gaps;
  for (std::size_t i = 1; i < T.size(); ++i) gaps.push_back(static_cast<double>(T[i] - T[i - 1]));
  const double beta = kernel.beta();
  const auto law = InterarrivalLaw::from_kernel(kernel);
  const double gap = gaps.empty() ? std::numeric_limits<double>::quiet_NaN() : mean(gaps);
  const double corr = gaps.size() > 2 ? lag1_correlation(gaps) : std::numeric_limits<double>::quiet_NaN();

  std::vector<double> observed(bins + 2, 0.0), expected(bins + 2, 0.0);
  for (double g : gaps) {
    const auto k = static_cast<std::uint64_t>(g);
    observed[std::min<std::uint64_t>(k, bins + 1)] += 1.0 / static_cast<double>(gaps.size());
  }
  double head = 0.0;
  for (std::uint64_t k = 1; k <= bins; ++k) {
    expected[k] = law.mass(k);
    head += expected[k];
  }
  expected[bins + 1] = std::max(0.0, 1.0 - head);
  const double gap_tv = gaps.empty() ? 1.0 : total_variation(observed, expected);

  auto meta = base_metadata("regen-stats", cfg, seed);
  meta.push_back("group = " + group.describe());
  meta.push_back("kernel = " + kernel.family_name());
  meta.push_back("N = " + std::to_string(N));
  meta.push_back("tail_tol = " + num(tol));
  write_metadata(out, meta);
  out << "statistic,value,reference\n";
  out << "regenerations," << T.size() << ',' << num(beta * static_cast<double>(N)) << '\n';
  out << "chi_square_statistic," << num(chi.statistic) << ',' << chi.dof << '\n';
  out << "chi_square_p_value," << num(chi.p_value) << ",0.01\n";
  out << "mean_gap," << num(gap) << ',' << num(1.0 / beta) << '\n';
  out << "lag1_correlation," << num(corr) << ",0\n";
  out << "gap_histogram_tv," << num(gap_tv) << ",0\n";
  for (std::uint64_t k = 1; k <= bins; ++k) {
    out << "gap_" << k << ',' << num(observed[k]) << ',' << num(expected[k]) << '\n';
  }
  out << "gap_over_" << bins << ',' << num(observed[bins + 1]) << ',' << num(expected[bins + 1])
      << '\n';
  log << "regen-stats: regenerations=" << T.size() << " chi_square_p=" << num(chi.p_value)
      << " mean_gap=" << num(gap) << " inverse_beta=" << num(1.0 / beta) << '\n';
  return kExitOk;
}

int cmd_density(const Config& cfg, const CommandOptions& opts, std::ostream& out,
                std::ostream& log) {
  const double alpha = cfg.get_double("density", "alpha", 0.4);
  const auto p = cfg.get_uint("density", "p", 2);
  const auto t_min = cfg.get_uint("density", "t_min", 8);
  const auto t_max = cfg.get_uint("density", "t_max", 20);
  const bool primes = cfg.get_bool("density", "primes", false);
  const auto ell = cfg.get_uint("density", "ell", 1);
  const double eps = cfg.get_double("density", "eps", 0.47);
  const double eps_prime = cfg.get_double("density", "eps_prime", 0.009);
  const auto seed = seed_for(cfg, "density", opts);
  cfg.check_unused({"", "density"});
  if (!is_prime(p)) throw ConfigError("[density] p must be prime");
  if (t_min > t_max || t_min == 0) throw ConfigError("[density] needs 1 <= t_min <= t_max");
  if (std::pow(static_cast<double>(p), static_cast<double>(t_max)) > 1e9) {
    throw CapacityError("[density] p^t_max exceeds the exhaustive count cap of 1e9");
  }

  auto meta = base_metadata("density", cfg, seed);
  meta.push_back("alpha = " + num(alpha));
  meta.push_back("p = " + std::to_string(p));
  write_metadata(out, meta);
  out << "t,M,size,density";
  if (primes) out << ",r_prime,density_prime,r_double_prime,density_double_prime";
  out << '\n';
  double prev = -1.0;
  bool monotone = true;
  double last = 0.0;
  for (auto t = t_min; t <= t_max; ++t) {
    std::uint64_t M = 1;
    for (std::uint64_t i = 0; i < t; ++i) M *= p;
    const auto d = density_set(M, alpha, p);
    out << t << ',' << M << ',' << d.size << ',' << num(d.density);
    if (primes) {
      const auto pc = density_sets_prime(M, ell, eps, eps_prime, p);
      out << ',' << pc.r_prime << ',' << num(pc.density_prime) << ',' << pc.r_double_prime << ','
          << num(pc.density_double_prime);
    }
    out << '\n';
    if (d.density < prev) monotone = false;
    prev = last = d.density;
  }
  log << "density: final=" << num(last) << " monotone=" << (monotone ? "yes" : "no") << '\n';
  return kExitOk;
}

int cmd_lemma41(const Config& cfg, const CommandOptions& opts, std::ostream& out,
                std::ostream& log) {
  const auto group = load_group(cfg);
  const auto params = load_automaton(cfg, group);
  warn_noncoprime(params, log);
  const auto kernel = load_kernel(cfg, group);
  const auto past = load_past(cfg, group);
  std::vector<std::uint64_t> ms{3, 7, 12, 15};
  if (cfg.has("lemma41", "m")) ms = cfg.get_uints("lemma41", "m");
  const auto trials = cfg.get_uint("lemma41", "trials", 4000);
  const auto seed = seed_for(cfg, "lemma41", opts);
  const bool joint = cfg.get_bool("lemma41", "joint", false);
  std::uint64_t joint_m = 0;
  std::vector<std::uint64_t> J{0, 1};
  RtildeParams rp;
  rp.p = group.prime();
  if (joint) {
    joint_m = cfg.get_uint("lemma41", "joint_m");
    if (cfg.has("lemma41", "J")) J = cfg.get_uints("lemma41", "J");
    rp.M = cfg.get_uint("lemma41", "M", std::uint64_t{1} << 20);
    rp.alpha = cfg.get_double("lemma41", "alpha", rp.alpha);
    rp.eps = cfg.get_double("lemma41", "eps", rp.eps);
    rp.eps_prime = cfg.get_double("lemma41", "eps_prime", rp.eps_prime);
  }
  cfg.check_unused({"", "group", "automaton", "kernel", "past", "lemma41"});

  auto meta = base_metadata("lemma41", cfg, seed);
  meta.push_back("group = " + group.describe());
  meta.push_back("kernel = " + kernel.family_name());
  meta.push_back("trials = " + std::to_string(trials));
  write_metadata(out, meta);
  out << "kind,m,J,n_star,deviation,stderr,exact_deviation,bound,vacuous\n";
  auto row = [&](const std::string& kind, std::uint64_t m, const std::string& j,
                 const Lemma41Report& r) {
    out << kind << ',' << m << ',' << j << ',' << r.n_star << ',' << num(r.deviation) << ','
        << num(r.deviation_stderr) << ',';
    if (r.exact_deviation) out << num(*r.exact_deviation);
    out << ',' << num(r.bound) << ',' << (r.vacuous ? 1 : 0) << '\n';
  };
  std::size_t violations = 0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto spec = SumSpec::automaton(ms[i], params);
    const auto r = lemma41_single(spec, kernel, past, trials, substream_seed(seed, i));
    row("single", ms[i], "0", r);
    const double dev = r.exact_deviation ? *r.exact_deviation : r.deviation;
    if (dev > r.bound + 1e-12) ++violations;
  }
  if (joint) {
    const auto fam = build_rtilde(joint_m, J, rp);
    std::vector<SumSpec> sums;
    for (auto j : J) sums.push_back(SumSpec::automaton(joint_m + j, params));
    const auto r = lemma41_joint(sums, fam.sets, kernel, past, trials,
                                 substream_seed(seed, ms.size()));
    row("joint", joint_m, join(J, ':'), r);
    const double dev = r.exact_deviation ? *r.exact_deviation : r.deviation;
    if (dev > r.bound + 1e-12) ++violations;
  }
  log << "lemma41: rows=" << ms.size() + (joint ? 1 : 0) << " bound_violations=" << violations
      << '\n';
  return kExitOk;
}

namespace {

struct CheckResult {
  bool ok = true;
  std::string detail;
};

using Check = std::function<CheckResult()>;

struct VerifyCheck {
  std::string section;
  std::string name;
  Check run;
};

std::uint64_t random_unit(std::mt19937_64& rng, const GroupSpec& g) {
  std::uniform_int_distribution<std::uint64_t> d(1, g.exponent() * 3);
  for (;;) {
    const auto a = d(rng);
    if (a % g.prime() != 0) return a;
  }
}

std::vector<VerifyCheck> build_checks(const Config& cfg, std::uint64_t seed) {
  const auto group = load_group(cfg);
  const auto mu = cfg.get_int("automaton", "mu", 1);
  const auto nu = cfg.get_int("automaton", "nu", 1);
  const std::string fault = cfg.get_string("verify", "inject_fault", std::string("none"));
  if (fault != "none" && fault != "mu_parity") {
    throw ConfigError("[verify] inject_fault must be none or mu_parity");
  }
  const std::int64_t mu_used = fault == "mu_parity" ? mu * static_cast<std::int64_t>(group.prime()) : mu;

  std::vector<VerifyCheck> checks;
  checks.push_back({"automaton", "coprimality", [group, mu_used, nu] {
                      CheckResult r;
                      for (auto [name, v] : {std::pair{"mu", mu_used}, std::pair{"nu", nu}}) {
                        if (!is_unit_scalar(v, group)) {
                          r.ok = false;
                          r.detail += std::string("is_unit_scalar(") + name + "=" +
                                      std::to_string(v) + ") is false for p=" +
                                      std::to_string(group.prime()) + "; ";
                        }
                      }
                      if (r.ok) r.detail = "mu and nu are units";
                      else r.detail.resize(r.detail.size() - 2);
                      return r;
                    }});
  checks.push_back({"automaton", "closed_form_vs_iterate", [seed] {
                      std::mt19937_64 rng(seed);
                      const std::vector<GroupSpec> specs{GroupSpec::cyclic(2), GroupSpec::cyclic(2, 2),
                                                         GroupSpec::cyclic(3), GroupSpec(2, {1, 1})};
                      std::size_t words = 0;
                      for (const auto& g : specs) {
                        for (int t = 0; t < 100; ++t, ++words) {
                          const AutomatonParams params(static_cast<std::int64_t>(random_unit(rng, g)),
                                                       static_cast<std::int64_t>(random_unit(rng, g)), g);
                          const std::uint64_t m = rng() % 65;
                          Word w{static_cast<std::int64_t>(rng() % 7), {}};
                          for (std::uint64_t i = 0; i < m + 8; ++i) w.elems.push_back(rng() % g.order());
                          const auto it = iterate(w, m, params);
                          const auto row = coefficients(m, params);
                          for (std::int64_t i = it.start; i < it.end(); ++i) {
                            if (apply_closed_form(w, row, i, g) != it.at(i)) {
                              return CheckResult{false, "mismatch on " + g.describe() + " m=" +
                                                            std::to_string(m)};
                            }
                          }
                        }
                      }
                      return CheckResult{true, std::to_string(words) + " words"};
                    }});
  checks.push_back({"automaton", "pascal_rows", [group, mu_used, nu] {
                      const AutomatonParams params(mu_used, nu, group, Coprimality::allow);
                      CoefficientRows rows(params);
                      for (std::uint64_t m = 0; m <= 300; ++m, rows.advance()) {
                        if (rows.row() != coefficients(m, params).coeffs) {
                          return CheckResult{false, "row " + std::to_string(m) + " differs"};
                        }
                      }
                      return CheckResult{true, "rows 0..300"};
                    }});
  checks.push_back({"lucas", "pascal_triangle", [] {
                      for (std::uint64_t p : {2, 3, 5}) {
                        std::vector<std::uint64_t> row{1};
                        for (std::uint64_t m = 0; m <= 400; ++m) {
                          for (std::uint64_t k = 0; k <= m; ++k) {
                            if (lucas_binomial(m, k, p) != row[k]) {
                              return CheckResult{false, "C(" + std::to_string(m) + "," +
                                                            std::to_string(k) + ") mod " +
                                                            std::to_string(p)};
                            }
                          }
                          std::vector<std::uint64_t> next(m + 2, 1);
                          for (std::uint64_t k = 1; k <= m; ++k) next[k] = (row[k - 1] + row[k]) % p;
                          row = std::move(next);
                        }
                      }
                      return CheckResult{true, "m,k <= 400, p in {2,3,5}"};
                    }});
  checks.push_back({"system", "unique_solution", [seed] {
                      std::mt19937_64 rng(seed + 1);
                      const std::vector<GroupSpec> specs{GroupSpec::cyclic(2), GroupSpec::cyclic(2, 2),
                                                         GroupSpec::cyclic(3), GroupSpec(2, {1, 1}),
                                                         GroupSpec::cyclic(2, 3), GroupSpec(2, {1, 2})};
                      for (int t = 0; t < 60; ++t) {
                        const auto& g = specs[rng() % specs.size()];
                        const std::size_t l = 1 + rng() % 3;
                        IntMatrix a(l, std::vector<std::int64_t>(l));
                        for (std::size_t i = 0; i < l; ++i) {
                          for (std::size_t j = 0; j < l; ++j) {
                            const auto v = static_cast<std::int64_t>(rng() % (3 * g.exponent()));
                            if (j < i) a[i][j] = v;
                            else if (j == i) a[i][j] = static_cast<std::int64_t>(random_unit(rng, g));
                            else a[i][j] = v * static_cast<std::int64_t>(g.prime());
                          }
                        }
                        if (h_prime_violation(a, g.prime()) || !check_system_s(a, g) ||
                            find_nontrivial_solution(a, g)) {
                          return CheckResult{false, "system on " + g.describe() + " not uniquely solvable"};
                        }
                      }
                      return CheckResult{true, "60 random (H') matrices"};
                    }});
  checks.push_back({"chains", "layout_coverage", [seed] {
                      std::mt19937_64 rng(seed + 2);
                      const auto z2 = GroupSpec::cyclic(2);
                      const auto z3 = GroupSpec::cyclic(3);
                      std::vector<KernelSpec> kernels;
                      kernels.push_back(KernelSpec::product(z3, {0.5, 0.3, 0.2}));
                      kernels.push_back(KernelSpec::markov_stay(z2, 0.7));
                      kernels.push_back(KernelSpec::markov(z2, 2, {{0.6, 0.4}, {0.3, 0.7}, {0.55, 0.45}, {0.2, 0.8}}));
                      kernels.push_back(KernelSpec::mixture(
                          z3, {0.5, 0.3}, 0.5,
                          {{{0.6, 0.2, 0.2}, {0.2, 0.6, 0.2}, {0.2, 0.2, 0.6}},
                           {{0.4, 0.3, 0.3}, {0.3, 0.4, 0.3}, {0.3, 0.3, 0.4}}}));
                      for (const auto& k : kernels) {
                        for (int t = 0; t < 20; ++t) {
                          std::vector<Elem> past(rng() % 12);
                          for (auto& e : past) e = static_cast<Elem>(rng() % k.order());
                          const int K = 40;
                          const auto lay = build_layout(k, past, K);
                          const double cov = lay.covered(K);
                          if (cov > 1.0 + 1e-12 || 1.0 - cov > k.uncovered_bound(K) + 1e-12) {
                            return CheckResult{false, k.family_name() + ": coverage " + num(cov)};
                          }
                          double low = 0.0;
                          for (double b : lay.lengths[0]) low += b;
                          if (std::abs(low - k.a_scalar(-1)) > 1e-12) {
                            return CheckResult{false, k.family_name() + ": level -1 mass " + num(low)};
                          }
                          const PastView view(past);
                          for (Elem g = 0; g < k.order(); ++g) {
                            double s = 0.0;
                            for (const auto& lv : lay.lengths) s += lv[g];
                            if (s > k.eval(g, view) + 1e-12) {
                              return CheckResult{false, k.family_name() + ": slices exceed P(g|w)"};
                            }
                          }
                        }
                      }
                      return CheckResult{true, "4 kernels x 20 pasts, K=40"};
                    }});
  checks.push_back({"chains", "regeneration_uniformity", [seed] {
                      const auto k = KernelSpec::markov_stay(GroupSpec::cyclic(2), 0.7);
                      const auto s = sample_path(k, {}, 200000, seed + 3);
                      std::vector<std::uint64_t> counts(2, 0);
                      for (auto t : s.regens) ++counts[s.xs[t]];
                      const auto chi = chi_square_uniform(counts);
                      const double rel = std::abs(mean_gap(s.regens) * k.beta() - 1.0);
                      return CheckResult{chi.p_value >= 0.001 && rel <= 0.05,
                                         "chi-square p=" + num(chi.p_value) + ", mean gap rel err " + num(rel)};
                    }});
  checks.push_back({"renewal", "gap_law", [] {
                      const auto z2 = GroupSpec::cyclic(2);
                      for (const auto& k : {KernelSpec::markov_stay(z2, 0.7),
                                            KernelSpec::product(z2, {0.7, 0.3})}) {
                        const auto law = InterarrivalLaw::from_kernel(k);
                        double total = 0.0;
                        for (double m : law.masses()) total += m;
                        if (std::abs(total - 1.0) > 1e-9 || std::abs(law.mean() * k.beta() - 1.0) > 1e-6) {
                          return CheckResult{false, k.family_name() + ": mass " + num(total) +
                                                        ", mean*beta " + num(law.mean() * k.beta())};
                        }
                      }
                      return CheckResult{true, "masses sum to 1, mean = 1/beta"};
                    }});
  checks.push_back({"renewal", "epsilon_dominates_geometric", [] {
                      const double beta = 0.3;
                      const auto law = InterarrivalLaw::geometric(beta);
                      for (std::uint64_t n = 4; n <= 64; ++n) {
                        if (epsilon(law, n) + 1e-15 < std::pow(1.0 - beta, static_cast<double>(n))) {
                          return CheckResult{false, "eps(" + std::to_string(n) + ") below (1-beta)^n"};
                        }
                      }
                      return CheckResult{true, "|A| = 4..64"};
                    }});
  checks.push_back({"renewal", "miss_probability", [seed] {
                      const double beta = 0.3;
                      const auto law = InterarrivalLaw::geometric(beta);
                      std::vector<std::uint64_t> A;
                      for (std::uint64_t i = 0; i < 8; ++i) A.push_back(5 * i + 2);
                      const auto e = miss_probability(law, A, 20000, seed + 4);
                      const double exact = std::pow(1.0 - beta, 8.0);
                      const double z = std::abs(e.value - exact) / e.std_error;
                      return CheckResult{z <= 4.0, "estimate " + num(e.value) + " vs " + num(exact) +
                                                       " (" + num(z) + " sigma)"};
                    }});
  checks.push_back({"rtilde", "h1_h3", [seed] {
                      std::mt19937_64 rng(seed + 5);
                      std::size_t built = 0;
                      for (std::uint64_t p : {2, 3}) {
                        RtildeParams rp;
                        rp.M = std::uint64_t{1} << 20;
                        rp.p = p;
                        const std::uint64_t ell = p == 2 ? 2 : 3;
                        int found = 0;
                        for (int attempt = 0; found < 20 && attempt < 200000; ++attempt) {
                          std::vector<std::uint64_t> J{0};
                          for (std::uint64_t j = 1; j <= ell; ++j) {
                            if (rng() & 1) J.push_back(j);
                          }
                          const std::uint64_t m = rng() % (rp.M - ell + 1);
                          if (!rtilde_eligibility(m, J, rp).ok) continue;
                          ++found;
                          const auto fam = build_rtilde(m, J, rp);
                          if (auto bad = validate_rtilde(m, J, fam.sets, p)) {
                            return CheckResult{false, "m=" + std::to_string(m) + ": " + *bad};
                          }
                          for (const auto& s : fam.sets) {
                            if (static_cast<double>(s.size()) < fam.size_threshold) {
                              return CheckResult{false, "m=" + std::to_string(m) + ": set below size threshold"};
                            }
                          }
                        }
                        built += static_cast<std::size_t>(found);
                        if (found < 20) return CheckResult{false, "too few eligible pairs for p=" + std::to_string(p)};
                      }
                      return CheckResult{true, std::to_string(built) + " families"};
                    }});
  checks.push_back({"density", "sweep", [] {
                      double prev = 0.0;
                      for (int t = 8; t <= 16; ++t) {
                        const auto d = density_set(std::uint64_t{1} << t, 0.4, 2);
                        if (d.density < prev) return CheckResult{false, "decrease at t=" + std::to_string(t)};
                        prev = d.density;
                      }
                      return CheckResult{prev > 0.99, "density at 2^16 = " + num(prev)};
                    }});
  return checks;
}

}  // namespace

const std::vector<std::string>& verify_sections() {
  static const std::vector<std::string> names{"automaton", "lucas",   "system", "chains",
                                              "renewal",   "rtilde", "density"};
  return names;
}

int cmd_verify(const Config& cfg, const CommandOptions& opts, std::ostream& out,
               std::ostream& log) {
  const auto seed = seed_for(cfg, "verify", opts);
  if (opts.section) {
    const auto& s = verify_sections();
    if (std::find(s.begin(), s.end(), *opts.section) == s.end()) {
      throw ConfigError("unknown verify section '" + *opts.section + "'");
    }
  }
  auto checks = build_checks(cfg, seed);
  cfg.check_unused({"", "group", "automaton", "verify"});

  auto meta = base_metadata("verify", cfg, seed);
  if (opts.section) meta.push_back("section = " + *opts.section);
  write_metadata(out, meta);
  std::size_t passed = 0, failed = 0;
  for (const auto& c : checks) {
    if (opts.section && c.section != *opts.section) continue;
    CheckResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    (r.ok ? passed : failed)++;
    out << (r.ok ? "PASS " : "FAIL ") << c.section << '.' << c.name << ' ' << r.detail << '\n';
  }
  out << "# passed = " << passed << ", failed = " << failed << '\n';
  log << "verify: passed=" << passed << " failed=" << failed << '\n';
  return failed == 0 ? kExitOk : kExitVerify;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"simulate", "cesaro", "regen-stats",
                                              "density",  "lemma41", "verify"};
  return names;
}

int run_command(const std::string& name, const Config& cfg, const CommandOptions& opts,
                std::ostream& out, std::ostream& log) {
  if (name == "simulate") return cmd_simulate(cfg, opts, out, log);
  if (name == "cesaro") return cmd_cesaro(cfg, opts, out, log);
  if (name == "regen-stats") return cmd_regen_stats(cfg, opts, out, log);
  if (name == "density") return cmd_density(cfg, opts, out, log);
  if (name == "lemma41") return cmd_lemma41(cfg, opts, out, log);
  if (name == "verify") return cmd_verify(cfg, opts, out, log);
  throw ConfigError("unknown command '" + name + "'");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const CapacityError*>(&e)) return kExitCapacity;
  return kExitConfig;
}

}  // namespace cca
