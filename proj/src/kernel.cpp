#include "cca/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cca/error.hpp"

namespace cca {

namespace {

constexpr double kRowSumTol = 1e-9;
constexpr std::uint64_t kMarkovRowCap = std::uint64_t{1} << 20;

void check_distribution(const std::vector<double>& row, std::uint64_t q, const std::string& what) {
  if (row.size() != q) {
    throw StructuralError(what + " has " + std::to_string(row.size()) + " entries, expected " +
                          std::to_string(q));
  }
  double sum = 0.0;
  for (double v : row) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(what + " has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kRowSumTol) {
    throw DomainError(what + " sums to " + std::to_string(sum) + ", not 1");
  }
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

KernelSpec::KernelSpec(GroupSpec group,
                       std::variant<ProductFamily, MarkovFamily, MixtureFamily> family)
    : group_(std::move(group)), family_(std::move(family)) {
  prepare();
}

KernelSpec KernelSpec::product(GroupSpec group, std::vector<double> pi) {
  return KernelSpec(std::move(group), ProductFamily{std::move(pi)});
}

KernelSpec KernelSpec::markov(GroupSpec group, int order,
                              std::vector<std::vector<double>> transition,
                              std::vector<Elem> initial_past) {
  if (initial_past.empty()) initial_past.assign(order > 0 ? order : 0, 0);
  return KernelSpec(std::move(group),
                    MarkovFamily{order, std::move(transition), std::move(initial_past)});
}

KernelSpec KernelSpec::markov_stay(GroupSpec group, double stay) {
  const std::uint64_t q = group.order();
  if (q < 2) throw DomainError("markov_stay needs a nontrivial group");
  std::vector<std::vector<double>> t(q, std::vector<double>(q, (1.0 - stay) / (q - 1)));
  for (std::uint64_t h = 0; h < q; ++h) t[h][h] = stay;
  return markov(std::move(group), 1, std::move(t));
}

KernelSpec KernelSpec::mixture(GroupSpec group, std::vector<double> weights, double rho,
                               std::vector<std::vector<std::vector<double>>> tables,
                               double floor, Elem default_tail) {
  return KernelSpec(std::move(group), MixtureFamily{std::move(weights), rho, std::move(tables),
                                                    floor, default_tail});
}

std::string KernelSpec::family_name() const {
  switch (family()) {
    case Family::product: return "product";
    case Family::markov: return "markov";
    case Family::mixture: return "mixture";
  }
  return "unknown";
}

void KernelSpec::prepare() {
  const std::uint64_t q = group_.order();
  if (auto* prod = std::get_if<ProductFamily>(&family_)) {
    check_distribution(prod->pi, q, "product law");
    if (min_of(prod->pi) <= 0.0) throw DomainError("product law must be strictly positive");
    inf_row_ = prod->pi;
    return;
  }

  if (auto* mk = std::get_if<MarkovFamily>(&family_)) {
    if (mk->order < 1) throw DomainError("Markov order must be >= 1");
    std::uint64_t rows = 1;
    for (int d = 0; d < mk->order; ++d) {
      if (rows > kMarkovRowCap / q) throw CapacityError("q^order exceeds the Markov table cap");
      rows *= q;
    }
    if (mk->transition.size() != rows) {
      throw StructuralError("Markov transition needs q^order = " + std::to_string(rows) +
                            " rows, got " + std::to_string(mk->transition.size()));
    }
    for (std::size_t i = 0; i < rows; ++i) {
      check_distribution(mk->transition[i], q, "transition row " + std::to_string(i));
      if (min_of(mk->transition[i]) <= 0.0) {
        throw DomainError("transition row " + std::to_string(i) +
                          " has a zero entry; complete connections need P > 0");
      }
    }
    if (mk->initial_past.size() != static_cast<std::size_t>(mk->order)) {
      throw StructuralError("initial past must have exactly `order` entries");
    }
    for (Elem e : mk->initial_past) {
      if (e >= q) throw DomainError("initial past entry outside the group");
    }

    const int k0 = mk->order;
    markov_min_.assign(k0 + 1, {});
    markov_max_.assign(k0 + 1, {});
    markov_min_[k0] = mk->transition;
    markov_max_[k0] = mk->transition;
    std::uint64_t width = rows;
    for (int k = k0 - 1; k >= 0; --k) {
      width /= q;
      markov_min_[k].assign(width, std::vector<double>(q, 1.0));
      markov_max_[k].assign(width, std::vector<double>(q, 0.0));
      for (std::uint64_t idx = 0; idx < width; ++idx) {
        for (std::uint64_t h = 0; h < q; ++h) {
          const auto& lo = markov_min_[k + 1][idx + h * width];
          const auto& hi = markov_max_[k + 1][idx + h * width];
          for (std::uint64_t g = 0; g < q; ++g) {
            markov_min_[k][idx][g] = std::min(markov_min_[k][idx][g], lo[g]);
            markov_max_[k][idx][g] = std::max(markov_max_[k][idx][g], hi[g]);
          }
        }
      }
    }
    markov_a_.assign(k0 + 1, 1.0);
    for (int k = 0; k < k0; ++k) {
      double best = 1.0;
      for (const auto& row : markov_min_[k]) {
        best = std::min(best, std::accumulate(row.begin(), row.end(), 0.0));
      }
      markov_a_[k] = best;
    }
    inf_row_ = markov_min_[0][0];
    return;
  }

  auto& mx = std::get<MixtureFamily>(family_);
  if (mx.weights.empty()) throw StructuralError("mixture needs at least one weight");
  if (mx.tables.size() != mx.weights.size()) {
    throw StructuralError("mixture needs one single-site table per weight");
  }
  if (!(mx.rho >= 0.0 && mx.rho < 1.0)) throw DomainError("mixture tail ratio must lie in [0,1)");
  if (!(mx.floor > 0.0 && mx.floor <= 1.0)) throw DomainError("mixture floor must lie in (0,1]");
  if (mx.default_tail >= q) throw DomainError("default tail element outside the group");
  for (double w : mx.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("mixture weights must be >= 0");
  }
  const double head = std::accumulate(mx.weights.begin(), mx.weights.end(), 0.0);
  mixture_norm_ = head + mx.weights.back() * mx.rho / (1.0 - mx.rho);
  if (!(mixture_norm_ > 0.0)) throw DomainError("mixture weights must not all vanish");

  const std::size_t L = mx.weights.size();
  table_min_.assign(L, std::vector<double>(q, 1.0));
  table_max_.assign(L, std::vector<double>(q, 0.0));
  table_min_mass_.assign(L, 0.0);
  for (std::size_t j = 0; j < L; ++j) {
    if (mx.tables[j].size() != q) throw StructuralError("single-site table needs q rows");
    for (std::uint64_t h = 0; h < q; ++h) {
      check_distribution(mx.tables[j][h], q,
                         "table " + std::to_string(j + 1) + " row " + std::to_string(h));
      for (std::uint64_t g = 0; g < q; ++g) {
        table_min_[j][g] = std::min(table_min_[j][g], mx.tables[j][h][g]);
        table_max_[j][g] = std::max(table_max_[j][g], mx.tables[j][h][g]);
      }
    }
    table_min_mass_[j] = std::accumulate(table_min_[j].begin(), table_min_[j].end(), 0.0);
  }

  inf_row_.assign(q, mx.floor / static_cast<double>(q));
  for (std::uint64_t g = 0; g < q; ++g) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= L; ++j) acc += mixture_weight(j) * table_min_[j - 1][g];
    acc += mixture_tail_weight(L) * table_min_[L - 1][g];
    inf_row_[g] += (1.0 - mx.floor) * acc;
  }
}

double KernelSpec::mixture_weight(std::size_t j) const {
  const auto& mx = std::get<MixtureFamily>(family_);
  const std::size_t L = mx.weights.size();
  if (j == 0) return 0.0;
  if (j <= L) return mx.weights[j - 1] / mixture_norm_;
  return mx.weights.back() * std::pow(mx.rho, static_cast<double>(j - L)) / mixture_norm_;
}

double KernelSpec::mixture_tail_weight(std::size_t n) const {
  const auto& mx = std::get<MixtureFamily>(family_);
  const std::size_t L = mx.weights.size();
  const double lam_l = mx.weights.back() / mixture_norm_;
  if (n >= L) {
    return lam_l * std::pow(mx.rho, static_cast<double>(n + 1 - L)) / (1.0 - mx.rho);
  }
  double acc = lam_l * mx.rho / (1.0 - mx.rho);
  for (std::size_t j = n + 1; j <= L; ++j) acc += mixture_weight(j);
  return acc;
}

const std::vector<std::vector<double>>& KernelSpec::mixture_table(std::size_t j) const {
  const auto& mx = std::get<MixtureFamily>(family_);
  return mx.tables[std::min(j, mx.tables.size()) - 1];
}

Elem KernelSpec::resolve(const PastView& past, std::size_t depth) const {
  if (depth <= past.length()) return past.at(depth);
  switch (family()) {
    case Family::markov: {
      const auto& init = as_markov().initial_past;
      return depth <= init.size() ? init[depth - 1] : 0;
    }
    case Family::mixture: return as_mixture().default_tail;
    case Family::product: return 0;
  }
  return 0;
}

std::size_t KernelSpec::markov_prefix_index(const PastView& past, int k) const {
  const std::uint64_t q = group_.order();
  std::size_t idx = 0, scale = 1;
  for (int d = 0; d < k; ++d) {
    idx += resolve(past, d + 1) * scale;
    scale *= q;
  }
  return idx;
}

double KernelSpec::eval(Elem g, const PastView& past, TailMode mode) const {
  switch (family()) {
    case Family::product: return as_product().pi.at(g);
    case Family::markov: {
      const int k0 = as_markov().order;
      const auto len = static_cast<int>(std::min<std::size_t>(past.length(), k0));
      if (len == k0 || mode == TailMode::default_tail) {
        return markov_min_[k0][markov_prefix_index(past, k0)].at(g);
      }
      const auto& table = mode == TailMode::worst_case ? markov_min_ : markov_max_;
      return table[len][markov_prefix_index(past, len)].at(g);
    }
    case Family::mixture: break;
  }
  const auto& mx = as_mixture();
  const std::size_t L = mx.weights.size();
  const std::size_t n = past.length();
  double acc = 0.0;
  for (std::size_t j = 1; j <= n; ++j) acc += mixture_weight(j) * mixture_table(j)[past.at(j)].at(g);
  // Lags beyond the supplied past.
  auto lag_value = [&](std::size_t j) {
    switch (mode) {
      case TailMode::worst_case: return table_min_[std::min(j, L) - 1][g];
      case TailMode::best_case: return table_max_[std::min(j, L) - 1][g];
      case TailMode::default_tail: break;
    }
    return mixture_table(j)[mx.default_tail][g];
  };
  for (std::size_t j = n + 1; j <= L; ++j) acc += mixture_weight(j) * lag_value(j);
  acc += mixture_tail_weight(std::max(n, L)) * lag_value(L + 1);
  return mx.floor / static_cast<double>(group_.order()) + (1.0 - mx.floor) * acc;
}

std::vector<double> KernelSpec::eval_row(const PastView& past, TailMode mode) const {
  std::vector<double> out(group_.order());
  for (std::uint64_t g = 0; g < out.size(); ++g) out[g] = eval(static_cast<Elem>(g), past, mode);
  return out;
}

std::vector<double> KernelSpec::a_row(int k, const PastView& past) const {
  const std::uint64_t q = group_.order();
  if (k < -1) throw DomainError("a_k needs k >= -1");
  if (k == -1) return std::vector<double>(q, min_of(inf_row_));
  switch (family()) {
    case Family::product: return inf_row_;
    case Family::markov: {
      const int kk = std::min(k, as_markov().order);
      return markov_min_[kk][markov_prefix_index(past, kk)];
    }
    case Family::mixture: break;
  }
  const double scale = 1.0 - as_mixture().floor;
  std::vector<double> out = inf_row_;
  for (int j = 1; j <= k; ++j) {
    const double lam = mixture_weight(j);
    if (lam == 0.0) continue;
    const auto& row = mixture_table(j)[resolve(past, j)];
    const auto& lo = table_min_[std::min<std::size_t>(j, table_min_.size()) - 1];
    for (std::uint64_t g = 0; g < q; ++g) out[g] += scale * lam * (row[g] - lo[g]);
  }
  return out;
}

void KernelSpec::level_row(int k, const PastView& past, std::span<double> out) const {
  const std::uint64_t q = group_.order();
  if (out.size() != q) throw StructuralError("level_row output must have q entries");
  const double floor_level = min_of(inf_row_);
  if (k == -1) {
    std::fill(out.begin(), out.end(), floor_level);
    return;
  }
  if (k == 0) {
    for (std::uint64_t g = 0; g < q; ++g) out[g] = inf_row_[g] - floor_level;
    return;
  }
  switch (family()) {
    case Family::product:
      std::fill(out.begin(), out.end(), 0.0);
      return;
    case Family::markov: {
      if (k > as_markov().order) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
      }
      const auto& hi = markov_min_[k][markov_prefix_index(past, k)];
      const auto& lo = markov_min_[k - 1][markov_prefix_index(past, k - 1)];
      for (std::uint64_t g = 0; g < q; ++g) out[g] = hi[g] - lo[g];
      return;
    }
    case Family::mixture: break;
  }
  const double lam = (1.0 - as_mixture().floor) * mixture_weight(k);
  const auto& row = mixture_table(k)[resolve(past, k)];
  const auto& lo = table_min_[std::min<std::size_t>(k, table_min_.size()) - 1];
  for (std::uint64_t g = 0; g < q; ++g) out[g] = lam * (row[g] - lo[g]);
}

double KernelSpec::a_scalar(int k) const {
  if (k < -1) throw DomainError("a_k needs k >= -1");
  if (k == -1) return static_cast<double>(group_.order()) * min_of(inf_row_);
  switch (family()) {
    case Family::product: return 1.0;
    case Family::markov: return k >= as_markov().order ? 1.0 : markov_a_[k];
    case Family::mixture: break;
  }
  const auto& mx = as_mixture();
  const std::size_t L = mx.weights.size();
  const auto kk = static_cast<std::size_t>(k);
  // sum_{j > k} lambda_j m_j
  double tail_mass = table_min_mass_[L - 1] * mixture_tail_weight(std::max(kk, L));
  for (std::size_t j = kk + 1; j <= L; ++j) tail_mass += mixture_weight(j) * table_min_mass_[j - 1];
  const double a = mx.floor + (1.0 - mx.floor) * (1.0 - mixture_tail_weight(kk) + tail_mass);
  return std::min(a, 1.0);
}

double KernelSpec::gamma(int m) const {
  if (m < 0) throw DomainError("gamma_m needs m >= 0");
  const std::uint64_t q = group_.order();
  switch (family()) {
    case Family::product: return 0.0;
    case Family::markov: {
      if (m >= as_markov().order) return 0.0;
      double worst = 0.0;
      for (std::size_t idx = 0; idx < markov_min_[m].size(); ++idx) {
        for (std::uint64_t g = 0; g < q; ++g) {
          worst = std::max(worst, markov_max_[m][idx][g] / markov_min_[m][idx][g] - 1.0);
        }
      }
      return worst;
    }
    case Family::mixture: break;
  }
  const auto& mx = as_mixture();
  const std::size_t L = mx.weights.size();
  const auto mm = static_cast<std::size_t>(m);
  double worst = 0.0;
  for (std::uint64_t g = 0; g < q; ++g) {
    double spread = (table_max_[L - 1][g] - table_min_[L - 1][g]) * mixture_tail_weight(std::max(mm, L));
    for (std::size_t j = mm + 1; j <= L; ++j) {
      spread += mixture_weight(j) * (table_max_[j - 1][g] - table_min_[j - 1][g]);
    }
    worst = std::max(worst, (1.0 - mx.floor) * spread / inf_row_[g]);
  }
  return worst;
}

double KernelSpec::tail_deficit(int from) const {
  if (from < -1) from = -1;
  double acc = from == -1 ? 1.0 - a_scalar(-1) : 0.0;
  const int start = std::max(from, 0);
  switch (family()) {
    case Family::product: return acc;
    case Family::markov:
      for (int k = start; k < as_markov().order; ++k) acc += 1.0 - markov_a_[k];
      return acc;
    case Family::mixture: break;
  }
  const auto& mx = as_mixture();
  const auto L = static_cast<int>(mx.weights.size());
  for (int k = start; k < L; ++k) acc += 1.0 - a_scalar(k);
  // For k >= L: 1 - a_k = (1-floor)(1-m_L) lambda_L rho^(k+1-L) / (1-rho).
  const int K = std::max(start, L);
  const double lam_l = mx.weights.back() / mixture_norm_;
  const double deficit_l = std::max(0.0, 1.0 - table_min_mass_[L - 1]);
  acc += (1.0 - mx.floor) * deficit_l * lam_l * std::pow(mx.rho, K + 1 - L) /
         ((1.0 - mx.rho) * (1.0 - mx.rho));
  return acc;
}

double KernelSpec::beta() const {
  double b = a_scalar(-1);
  for (int k = 0; k < 100000; ++k) {
    const double a = a_scalar(k);
    if (a >= 1.0) break;
    b *= a;
    if (tail_deficit(k + 1) < 1e-18) break;
  }
  return b;
}

int KernelSpec::finite_memory() const {
  switch (family()) {
    case Family::product: return 0;
    case Family::markov: return as_markov().order;
    case Family::mixture: break;
  }
  const auto L = static_cast<int>(as_mixture().weights.size());
  for (int k = 0; k <= L; ++k) {
    if (tail_deficit(k) == 0.0) return k;
  }
  return -1;
}

double KernelSpec::uncovered_bound(int k) const { return 1.0 - a_scalar(k); }

double KernelSpec::min_probability() const { return min_of(inf_row_); }

ACompute compute_a(const KernelSpec& kernel, int k, std::span<const Elem> prefix) {
  if (k < -1) throw DomainError("compute_a needs k >= -1");
  for (Elem e : prefix) {
    if (e >= kernel.order()) throw DomainError("past entry outside the group");
  }
  ACompute out;
  out.per_g = kernel.a_row(k, PastView(prefix));
  out.prefix_sum = std::accumulate(out.per_g.begin(), out.per_g.end(), 0.0);
  out.a_k = kernel.a_scalar(k);
  return out;
}

}  // namespace cca
