#include "cca/cesaro.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>

#include "cca/error.hpp"
#include "cca/regeneration.hpp"
#include "cca/renewal.hpp"
#include "cca/rng.hpp"
#include "cca/stats.hpp"

namespace cca {

namespace {

// Dense powers of the memory chain are used up to this many memory states.
constexpr std::size_t kDensePowerStates = 256;

struct Term {
  std::uint64_t index;
  std::size_t sum;
  std::uint64_t coeff;
};

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Forward recursion for the joint law of d sums over (memory, partial sums).
class TransferEngine {
 public:
  TransferEngine(const KernelSpec& kernel, std::span<const Elem> past, std::size_t arity)
      : spec_(kernel.group()), q_(kernel.order()), arity_(arity) {
    if (kernel.family() == KernelSpec::Family::mixture) {
      throw UnsupportedError("exact laws need a product or Markov kernel; use Monte Carlo");
    }
    cells_ = ipow(q_, arity_);
    std::size_t mem0 = 0;
    if (kernel.family() == KernelSpec::Family::markov) {
      const auto& mk = kernel.as_markov();
      states_ = ipow(q_, mk.order);
      high_ = states_ / q_;
      trans_ = mk.transition;
      const PastView view(past);
      std::size_t scale = 1;
      for (int d = 0; d < mk.order; ++d) {
        mem0 += kernel.resolve(view, d + 1) * scale;
        scale *= q_;
      }
    } else {
      states_ = 1;
      high_ = 1;
      trans_ = {kernel.as_product().pi};
    }
    if (states_ * cells_ > kExactStateCap) {
      throw CapacityError("exact state space " + std::to_string(states_ * cells_) +
                          " exceeds the cap of " + std::to_string(kExactStateCap));
    }
    decode_.resize(cells_ * arity_);
    for (std::uint64_t c = 0; c < cells_; ++c) {
      auto vals = cell_values(c, arity_, q_);
      std::copy(vals.begin(), vals.end(), decode_.begin() + c * arity_);
    }
    v_.assign(states_ * cells_, 0.0);
    v_[mem0 * cells_] = 1.0;
    scratch_.resize(v_.size());
  }

  std::size_t next(std::size_t mem, Elem g) const {
    return states_ == 1 ? 0 : g + q_ * (mem % high_);
  }

  void advance_zero(std::uint64_t steps) {
    if (states_ == 1 || steps == 0) return;
    if (states_ <= kDensePowerStates) {
      for (std::size_t bit = 0; steps; ++bit, steps >>= 1) {
        if (steps & 1) apply_dense(power(bit));
      }
      return;
    }
    for (std::uint64_t s = 0; s < steps; ++s) {
      std::fill(scratch_.begin(), scratch_.end(), 0.0);
      for (std::size_t m = 0; m < states_; ++m) {
        for (Elem g = 0; g < q_; ++g) {
          const double w = trans_[m][g];
          const std::size_t to = next(m, g) * cells_;
          for (std::uint64_t c = 0; c < cells_; ++c) scratch_[to + c] += v_[m * cells_ + c] * w;
        }
      }
      v_.swap(scratch_);
    }
  }

  void step(std::span<const std::uint64_t> coeffs) {
    // shift[g][c] = cell c plus (coeffs_i g)_i.
    std::vector<std::uint64_t> shift(q_ * cells_);
    std::vector<Elem> delta(arity_);
    for (Elem g = 0; g < q_; ++g) {
      for (std::size_t i = 0; i < arity_; ++i) delta[i] = spec_.scale(coeffs[i], g);
      for (std::uint64_t c = 0; c < cells_; ++c) {
        std::uint64_t idx = 0, scale = 1;
        for (std::size_t i = 0; i < arity_; ++i) {
          idx += spec_.add(decode_[c * arity_ + i], delta[i]) * scale;
          scale *= q_;
        }
        shift[g * cells_ + c] = idx;
      }
    }
    std::fill(scratch_.begin(), scratch_.end(), 0.0);
    for (std::size_t m = 0; m < states_; ++m) {
      for (Elem g = 0; g < q_; ++g) {
        const double w = trans_[m][g];
        const std::size_t to = next(m, g) * cells_;
        const std::uint64_t* sh = &shift[g * cells_];
        for (std::uint64_t c = 0; c < cells_; ++c) {
          const double mass = v_[m * cells_ + c];
          if (mass != 0.0) scratch_[to + sh[c]] += mass * w;
        }
      }
    }
    v_.swap(scratch_);
  }

  DistributionTable marginal() const {
    DistributionTable t{q_, arity_, std::vector<double>(cells_, 0.0)};
    for (std::size_t m = 0; m < states_; ++m) {
      for (std::uint64_t c = 0; c < cells_; ++c) t.probs[c] += v_[m * cells_ + c];
    }
    return t;
  }

 private:
  using Matrix = std::vector<double>;  // states x states, row major

  const Matrix& power(std::size_t bit) {
    if (powers_.empty()) {
      Matrix base(states_ * states_, 0.0);
      for (std::size_t m = 0; m < states_; ++m) {
        for (Elem g = 0; g < q_; ++g) base[m * states_ + next(m, g)] += trans_[m][g];
      }
      powers_.push_back(std::move(base));
    }
    while (powers_.size() <= bit) {
      const Matrix& a = powers_.back();
      Matrix sq(states_ * states_, 0.0);
      for (std::size_t i = 0; i < states_; ++i) {
        for (std::size_t k = 0; k < states_; ++k) {
          const double x = a[i * states_ + k];
          if (x == 0.0) continue;
          for (std::size_t j = 0; j < states_; ++j) sq[i * states_ + j] += x * a[k * states_ + j];
        }
      }
      powers_.push_back(std::move(sq));
    }
    return powers_[bit];
  }

  void apply_dense(const Matrix& p) {
    std::fill(scratch_.begin(), scratch_.end(), 0.0);
    for (std::size_t i = 0; i < states_; ++i) {
      for (std::size_t j = 0; j < states_; ++j) {
        const double x = p[i * states_ + j];
        if (x == 0.0) continue;
        for (std::uint64_t c = 0; c < cells_; ++c) scratch_[j * cells_ + c] += v_[i * cells_ + c] * x;
      }
    }
    v_.swap(scratch_);
  }

  const GroupSpec& spec_;
  std::uint64_t q_;
  std::size_t arity_;
  std::uint64_t cells_ = 1;
  std::size_t states_ = 1;
  std::size_t high_ = 1;
  std::vector<std::vector<double>> trans_;
  std::vector<Elem> decode_;
  std::vector<double> v_, scratch_;
  std::vector<Matrix> powers_;
};

DistributionTable run_terms(std::vector<Term> terms, std::size_t arity, const KernelSpec& kernel,
                            std::span<const Elem> past) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.index < b.index; });
  if (!terms.empty() && terms.back().index >= kExactIndexCap) {
    throw CapacityError("index span above the exact cap of " + std::to_string(kExactIndexCap));
  }
  TransferEngine engine(kernel, past, arity);
  std::vector<std::uint64_t> coeffs(arity);
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < terms.size();) {
    const std::uint64_t t = terms[i].index;
    std::fill(coeffs.begin(), coeffs.end(), 0);
    for (; i < terms.size() && terms[i].index == t; ++i) coeffs[terms[i].sum] = terms[i].coeff;
    engine.advance_zero(t - pos);
    engine.step(coeffs);
    pos = t + 1;
  }
  return engine.marginal();
}

// (phi^n x)_0 for n = 0..L-1 from x_0..x_{L-1}.
std::vector<Elem> site_zero_orbit(std::vector<Elem> x, const AutomatonParams& params) {
  const GroupSpec& spec = params.spec();
  const std::size_t L = x.size();
  std::vector<Elem> y(L);
  if (spec.order() == 2 && params.mu_mod() % 2 == 1 && params.nu_mod() % 2 == 1) {
    // Z_2 with mu = nu = 1: bit-packed x <- x xor (x >> 1).
    std::vector<std::uint64_t> bits((L + 63) / 64, 0);
    for (std::size_t i = 0; i < L; ++i) bits[i / 64] |= std::uint64_t{x[i]} << (i % 64);
    for (std::size_t n = 0; n < L; ++n) {
      y[n] = static_cast<Elem>(bits[0] & 1);
      const std::size_t words = (L - n + 63) / 64;
      for (std::size_t w = 0; w < words; ++w) {
        const std::uint64_t carry = w + 1 < bits.size() ? bits[w + 1] << 63 : 0;
        bits[w] ^= (bits[w] >> 1) | carry;
      }
    }
    return y;
  }
  for (std::size_t n = 0; n < L; ++n) {
    y[n] = x[0];
    for (std::size_t i = 0; i + 1 < L - n; ++i) {
      x[i] = spec.add(spec.scale(params.mu_mod(), x[i]), spec.scale(params.nu_mod(), x[i + 1]));
    }
  }
  return y;
}

std::string cylinder_label(const std::vector<Elem>& cell) {
  std::string out;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (i) out += ':';
    out += std::to_string(cell[i]);
  }
  return out;
}

double bound_from_kernel(const KernelSpec& kernel, std::size_t n, double factor) {
  const auto law = InterarrivalLaw::from_kernel(kernel);
  return std::min(1.0, factor * epsilon(law, n + 1));
}

}  // namespace

SumSpec SumSpec::make(std::vector<std::uint64_t> indices, std::vector<std::uint64_t> coeffs,
                      const GroupSpec& spec) {
  if (indices.size() != coeffs.size()) {
    throw StructuralError("sum needs one coefficient per index");
  }
  for (std::size_t i = 1; i < indices.size(); ++i) {
    if (indices[i] <= indices[i - 1]) throw DomainError("sum indices must be strictly increasing");
  }
  for (auto& c : coeffs) c %= spec.exponent();
  return SumSpec{std::move(indices), std::move(coeffs)};
}

SumSpec SumSpec::automaton(std::uint64_t m, const AutomatonParams& params) {
  const CoeffVector row = coefficients(m, params);
  std::vector<std::uint64_t> idx(m + 1);
  for (std::uint64_t k = 0; k <= m; ++k) idx[k] = k;
  return SumSpec{std::move(idx), row.coeffs};
}

std::vector<std::uint64_t> SumSpec::rstar(std::uint64_t p) const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (coeffs[i] % p != 0) out.push_back(indices[i]);
  }
  return out;
}

std::vector<std::size_t> SumSpec::rstar_positions(std::uint64_t p) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (coeffs[i] % p != 0) out.push_back(i);
  }
  return out;
}

std::size_t SumSpec::n_star(std::uint64_t p) const {
  return indices.empty() ? 0 : n_star(indices.size() - 1, p);
}

std::size_t SumSpec::n_star(std::size_t n, std::uint64_t p) const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < indices.size() && i <= n; ++i) count += coeffs[i] % p != 0;
  return count;
}

std::uint64_t SumSpec::coeff_at(std::uint64_t r) const {
  const auto it = std::lower_bound(indices.begin(), indices.end(), r);
  if (it == indices.end() || *it != r) return 0;
  return coeffs[it - indices.begin()];
}

bool SumSpec::contains(std::uint64_t r) const {
  return std::binary_search(indices.begin(), indices.end(), r);
}

std::uint64_t cell_index(std::span<const Elem> cell, std::uint64_t q) {
  std::uint64_t idx = 0, scale = 1;
  for (Elem e : cell) {
    idx += e * scale;
    scale *= q;
  }
  return idx;
}

std::vector<Elem> cell_values(std::uint64_t index, std::size_t arity, std::uint64_t q) {
  std::vector<Elem> out(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    out[i] = static_cast<Elem>(index % q);
    index /= q;
  }
  return out;
}

double DistributionTable::slack() const {
  double s = 0.0;
  for (double v : probs) s += v;
  return std::abs(s - 1.0);
}

double DistributionTable::tv_uniform() const { return total_variation_uniform(probs); }

double DistributionTable::sup_deviation() const {
  const double u = 1.0 / static_cast<double>(probs.size());
  double worst = 0.0;
  for (double v : probs) worst = std::max(worst, std::abs(v - u));
  return worst;
}

double DistributionTable::at(std::span<const Elem> cell) const {
  if (cell.size() != arity) throw StructuralError("cell arity does not match the table");
  return probs.at(cell_index(cell, q));
}

DistributionTable exact_joint_distribution(std::span<const SumSpec> sums, const KernelSpec& kernel,
                                           std::span<const Elem> past) {
  if (sums.empty()) throw StructuralError("joint law needs at least one sum");
  std::vector<Term> terms;
  for (std::size_t s = 0; s < sums.size(); ++s) {
    const SumSpec& spec = sums[s];
    if (spec.indices.size() != spec.coeffs.size()) {
      throw StructuralError("sum needs one coefficient per index");
    }
    for (std::size_t i = 0; i < spec.indices.size(); ++i) {
      const std::uint64_t c = spec.coeffs[i] % kernel.group().exponent();
      if (c != 0) terms.push_back({spec.indices[i], s, c});
    }
  }
  return run_terms(std::move(terms), sums.size(), kernel, past);
}

DistributionTable exact_sum_distribution(const SumSpec& spec, const KernelSpec& kernel,
                                         std::span<const Elem> past) {
  return exact_joint_distribution(std::span<const SumSpec>(&spec, 1), kernel, past);
}

DistributionTable iterate_marginal_exact(const KernelSpec& kernel, std::span<const Elem> past,
                                         std::uint64_t m, std::span<const std::uint64_t> J,
                                         const AutomatonParams& params) {
  if (J.empty()) throw StructuralError("J must be nonempty");
  if (!(params.spec() == kernel.group())) {
    throw StructuralError("automaton and kernel live on different groups");
  }
  std::vector<SumSpec> sums;
  for (auto j : J) sums.push_back(SumSpec::automaton(m + j, params));
  return exact_joint_distribution(sums, kernel, past);
}

std::vector<std::uint64_t> dyadic_grid(int top) {
  std::vector<std::uint64_t> out;
  for (int t = 1; t <= top; ++t) out.push_back(std::uint64_t{1} << t);
  return out;
}

CesaroReport cesaro_scan(const KernelSpec& kernel, std::span<const Elem> past,
                         const AutomatonParams& params, const ScanOptions& options) {
  if (options.grid.empty()) throw DomainError("Cesaro scan needs a nonempty M grid");
  for (std::size_t i = 0; i < options.grid.size(); ++i) {
    if (options.grid[i] == 0 || (i && options.grid[i] <= options.grid[i - 1])) {
      throw DomainError("M grid must be positive and strictly increasing");
    }
  }
  if (options.J.empty()) throw DomainError("J must be nonempty");
  if (!std::is_sorted(options.J.begin(), options.J.end()) ||
      std::adjacent_find(options.J.begin(), options.J.end()) != options.J.end()) {
    throw DomainError("J must be strictly increasing");
  }
  if (options.mode == ScanMode::exact && kernel.family() == KernelSpec::Family::mixture) {
    throw ConfigError("exact mode needs a product or Markov kernel; use mode = mc");
  }
  if (!(params.spec() == kernel.group())) {
    throw StructuralError("automaton and kernel live on different groups");
  }

  const std::uint64_t q = kernel.order();
  const std::size_t arity = options.J.size();
  const std::uint64_t cells = ipow(q, arity);
  const std::uint64_t max_j = options.J.back();
  const std::uint64_t m_max = options.grid.back();

  CesaroReport rep;
  rep.mode = options.mode;
  rep.q = q;
  rep.J = options.J;
  rep.grid = options.grid;
  rep.cylinders = options.cylinders;
  if (rep.cylinders.empty()) {
    for (std::uint64_t c = 0; c < cells; ++c) rep.cylinders.push_back(cell_values(c, arity, q));
  }
  for (const auto& cyl : rep.cylinders) {
    if (cyl.size() != arity) throw ConfigError("cylinder arity does not match J");
    for (Elem e : cyl) {
      if (e >= q) throw ConfigError("cylinder value outside the group");
    }
  }

  if (options.mode == ScanMode::exact) {
    // Rows m..m+maxJ of the coefficient triangle, advanced with the Pascal recurrence.
    CoefficientRows rows(params);
    std::deque<std::vector<std::uint64_t>> window;
    for (std::uint64_t j = 0; j <= max_j; ++j) {
      window.push_back(rows.row());
      rows.advance();
    }
    std::vector<double> acc(cells, 0.0);
    std::size_t g = 0;
    for (std::uint64_t m = 0; m < m_max; ++m) {
      std::vector<Term> terms;
      for (std::size_t s = 0; s < arity; ++s) {
        const auto& row = window[options.J[s]];
        for (std::uint64_t k = 0; k < row.size(); ++k) {
          if (row[k] != 0) terms.push_back({k, s, row[k]});
        }
      }
      const DistributionTable law = run_terms(std::move(terms), arity, kernel, past);
      for (std::uint64_t c = 0; c < cells; ++c) acc[c] += law.probs[c];
      if (options.keep_per_m) rep.per_m.push_back(law.probs);
      if (m + 1 == options.grid[g]) {
        std::vector<double> avg(cells);
        for (std::uint64_t c = 0; c < cells; ++c) avg[c] = acc[c] / static_cast<double>(m + 1);
        rep.tv.push_back(total_variation_uniform(avg));
        rep.averaged.push_back(std::move(avg));
        rep.stderrs.emplace_back(cells, 0.0);
        ++g;
      }
      window.pop_front();
      window.push_back(rows.row());
      rows.advance();
    }
    return rep;
  }

  if (options.trials < 2) throw ConfigError("Monte Carlo scan needs at least 2 trials");
  const std::size_t L = m_max + max_j;
  std::vector<std::vector<double>> sum(options.grid.size(), std::vector<double>(cells, 0.0));
  std::vector<std::vector<double>> sumsq = sum;
  std::vector<std::vector<double>> per_m_counts;
  if (options.keep_per_m) per_m_counts.assign(m_max, std::vector<double>(cells, 0.0));
  std::vector<double> counts(cells);
  for (std::uint64_t t = 0; t < options.trials; ++t) {
    const auto xs = sample_values(kernel, past, L, substream_seed(options.seed, t));
    const auto y = site_zero_orbit(xs, params);
    std::fill(counts.begin(), counts.end(), 0.0);
    std::size_t g = 0;
    for (std::uint64_t m = 0; m < m_max; ++m) {
      std::uint64_t c = 0, scale = 1;
      for (auto j : options.J) {
        c += y[m + j] * scale;
        scale *= q;
      }
      counts[c] += 1.0;
      if (options.keep_per_m) per_m_counts[m][c] += 1.0;
      if (m + 1 == options.grid[g]) {
        for (std::uint64_t k = 0; k < cells; ++k) {
          const double a = counts[k] / static_cast<double>(m + 1);
          sum[g][k] += a;
          sumsq[g][k] += a * a;
        }
        ++g;
      }
    }
  }
  const auto T = static_cast<double>(options.trials);
  for (std::size_t g = 0; g < options.grid.size(); ++g) {
    std::vector<double> avg(cells), se(cells);
    for (std::uint64_t k = 0; k < cells; ++k) {
      avg[k] = sum[g][k] / T;
      const double var = std::max(0.0, (sumsq[g][k] - T * avg[k] * avg[k]) / (T - 1.0));
      se[k] = std::sqrt(var / T);
    }
    rep.tv.push_back(total_variation_uniform(avg));
    rep.averaged.push_back(std::move(avg));
    rep.stderrs.push_back(std::move(se));
  }
  for (auto& row : per_m_counts) {
    for (double& v : row) v /= T;
    rep.per_m.push_back(std::move(row));
  }
  return rep;
}

void CesaroReport::write_csv(std::ostream& out, const std::vector<std::string>& metadata) const {
  for (const auto& line : metadata) out << "# " << line << '\n';
  out << "M,cylinder,probability,tv,stderr\n";
  out.precision(12);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (const auto& cyl : cylinders) {
      const auto c = cell_index(cyl, q);
      out << grid[g] << ',' << cylinder_label(cyl) << ',' << averaged[g][c] << ',' << tv[g] << ','
          << stderrs[g][c] << '\n';
    }
  }
}

std::optional<std::string> check_h123(std::span<const SumSpec> sums,
                                      const std::vector<std::vector<std::uint64_t>>& rtilde,
                                      std::uint64_t p) {
  if (sums.size() != rtilde.size()) return "need one subset per sum";
  for (std::size_t j = 0; j < rtilde.size(); ++j) {
    for (auto r : rtilde[j]) {
      if (!sums[j].contains(r) || sums[j].coeff_at(r) % p == 0) {
        return "H1: index " + std::to_string(r) + " of subset " + std::to_string(j) +
               " is not a unit-coefficient index of sum " + std::to_string(j);
      }
    }
  }
  for (std::size_t i = 0; i < rtilde.size(); ++i) {
    std::vector<std::uint64_t> a = rtilde[i];
    std::sort(a.begin(), a.end());
    for (std::size_t j = i + 1; j < rtilde.size(); ++j) {
      std::vector<std::uint64_t> b = rtilde[j], both;
      std::sort(b.begin(), b.end());
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
      if (!both.empty()) {
        return "H2: subsets " + std::to_string(i) + " and " + std::to_string(j) +
               " share index " + std::to_string(both.front());
      }
    }
  }
  for (std::size_t j = 0; j < rtilde.size(); ++j) {
    for (auto r : rtilde[j]) {
      for (std::size_t i = 0; i < j; ++i) {
        if (sums[i].contains(r) && sums[i].coeff_at(r) % p != 0) {
          return "H3: index " + std::to_string(r) + " of subset " + std::to_string(j) +
                 " has a unit coefficient in earlier sum " + std::to_string(i);
        }
      }
    }
  }
  return std::nullopt;
}

namespace {

struct McTable {
  std::vector<double> probs;
  double deviation = 0.0;
  double stderr_at = 0.0;
};

McTable monte_carlo_joint(std::span<const SumSpec> sums, const KernelSpec& kernel,
                          std::span<const Elem> past, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("Monte Carlo needs at least one trial");
  const GroupSpec& spec = kernel.group();
  const std::uint64_t q = kernel.order();
  std::uint64_t top = 0;
  for (const auto& s : sums) {
    if (!s.indices.empty()) top = std::max(top, s.indices.back());
  }
  const std::uint64_t cells = ipow(q, sums.size());
  std::vector<double> counts(cells, 0.0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto xs = sample_values(kernel, past, top + 1, substream_seed(seed, t));
    std::uint64_t c = 0, scale = 1;
    for (const auto& s : sums) {
      Elem acc = spec.identity();
      for (std::size_t i = 0; i < s.indices.size(); ++i) {
        if (s.coeffs[i] != 0) acc = spec.add(acc, spec.scale(s.coeffs[i], xs[s.indices[i]]));
      }
      c += acc * scale;
      scale *= q;
    }
    counts[c] += 1.0;
  }
  McTable out;
  out.probs.resize(cells);
  const double u = 1.0 / static_cast<double>(cells);
  for (std::uint64_t c = 0; c < cells; ++c) {
    out.probs[c] = counts[c] / static_cast<double>(trials);
    const double dev = std::abs(out.probs[c] - u);
    if (dev >= out.deviation) {
      out.deviation = dev;
      out.stderr_at = binomial_stderr(out.probs[c], trials);
    }
  }
  return out;
}

}  // namespace

Lemma41Report lemma41_single(const SumSpec& spec, const KernelSpec& kernel,
                             std::span<const Elem> past, std::uint64_t trials,
                             std::uint64_t seed) {
  Lemma41Report rep;
  rep.arity = 1;
  rep.n_star = spec.n_star(kernel.group().prime());
  const auto mc = monte_carlo_joint(std::span<const SumSpec>(&spec, 1), kernel, past, trials, seed);
  rep.deviation = mc.deviation;
  rep.deviation_stderr = mc.stderr_at;
  if (kernel.family() != KernelSpec::Family::mixture &&
      (spec.indices.empty() || spec.indices.back() < kExactIndexCap)) {
    try {
      rep.exact_deviation = exact_sum_distribution(spec, kernel, past).sup_deviation();
    } catch (const CapacityError&) {
    }
  }
  rep.bound = rep.n_star == 0 ? 1.0 : bound_from_kernel(kernel, rep.n_star, 2.0);
  rep.vacuous = rep.n_star == 0 || rep.bound >= 1.0;
  return rep;
}

Lemma41Report lemma41_joint(std::span<const SumSpec> sums,
                            const std::vector<std::vector<std::uint64_t>>& rtilde,
                            const KernelSpec& kernel, std::span<const Elem> past,
                            std::uint64_t trials, std::uint64_t seed) {
  if (auto bad = check_h123(sums, rtilde, kernel.group().prime())) {
    throw ValidationError(*bad);
  }
  Lemma41Report rep;
  rep.arity = sums.size();
  rep.n_star = rtilde.empty() ? 0 : rtilde.front().size();
  for (const auto& r : rtilde) rep.n_star = std::min(rep.n_star, r.size());
  const auto mc = monte_carlo_joint(sums, kernel, past, trials, seed);
  rep.deviation = mc.deviation;
  rep.deviation_stderr = mc.stderr_at;
  if (kernel.family() != KernelSpec::Family::mixture) {
    try {
      rep.exact_deviation = exact_joint_distribution(sums, kernel, past).sup_deviation();
    } catch (const CapacityError&) {
    }
  }
  rep.bound = rep.n_star == 0
                  ? 1.0
                  : bound_from_kernel(kernel, rep.n_star, 2.0 * static_cast<double>(sums.size()));
  rep.vacuous = rep.n_star == 0 || rep.bound >= 1.0;
  return rep;
}

}  // namespace cca
