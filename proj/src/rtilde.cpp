#include "cca/rtilde.hpp"

#include <algorithm>
#include <cmath>

#include "cca/error.hpp"

namespace cca {

namespace {

void check_J(std::span<const std::uint64_t> J) {
  if (J.empty()) throw DomainError("J must be nonempty");
  for (std::size_t i = 1; i < J.size(); ++i) {
    if (J[i] <= J[i - 1]) throw DomainError("J must be strictly increasing");
  }
}

int low_cut_of(const PrimeSetParams& pp) {
  return static_cast<int>(std::floor(pp.eps_threshold));
}

}  // namespace

Eligibility rtilde_eligibility(std::uint64_t m, std::span<const std::uint64_t> J,
                               const RtildeParams& params) {
  check_J(J);
  const auto pp = PrimeSetParams::make(params.M, J.back(), params.eps, params.eps_prime, params.p);
  const int cut = low_cut_of(pp);
  const PExpansion base = p_expansion(m, params.p);
  for (auto j : J) {
    const std::uint64_t n = m + j;
    if (n > params.M) return {false, "m+" + std::to_string(j) + " exceeds M"};
    if (!in_r_prime(n, pp)) return {false, "m+" + std::to_string(j) + " not in R'_M"};
    if (!in_r_double_prime(n, pp)) return {false, "m+" + std::to_string(j) + " not in R''_M"};
    const PExpansion e = p_expansion(n, params.p);
    const int top = std::max(e.top(), base.top());
    for (int i = cut + 1; i <= top; ++i) {
      if (e.digit(i) != base.digit(i)) {
        return {false, "adding " + std::to_string(j) + " carries past digit " + std::to_string(cut)};
      }
    }
  }
  return {true, {}};
}

RtildeFamily build_rtilde(std::uint64_t m, std::span<const std::uint64_t> J,
                          const RtildeParams& params) {
  const Eligibility el = rtilde_eligibility(m, J, params);
  if (!el.ok) throw IneligibleError("m=" + std::to_string(m) + " is ineligible: " + el.reason);
  const auto pp = PrimeSetParams::make(params.M, J.back(), params.eps, params.eps_prime, params.p);
  const std::uint64_t p = params.p;

  RtildeFamily fam;
  fam.m = m;
  fam.J.assign(J.begin(), J.end());
  fam.low_cut = low_cut_of(pp);
  fam.size_threshold = std::pow(2.0, pp.eps_prime_threshold);

  const PExpansion base = p_expansion(m, p);
  // Free high digits: positions of I_+(m), each ranging over 0..m_i.
  std::vector<int> free_pos;
  for (int i : base.support) {
    if (i > fam.low_cut) free_pos.push_back(i);
  }
  std::vector<std::uint64_t> weight(free_pos.size());
  for (std::size_t t = 0; t < free_pos.size(); ++t) {
    std::uint64_t w = 1;
    for (int s = 0; s < free_pos[t]; ++s) w *= p;
    weight[t] = w;
  }

  for (auto j : J) {
    const PExpansion e = p_expansion(m + j, p);
    std::uint64_t low = 0, w = 1;
    for (int i = 0; i <= fam.low_cut; ++i) {
      low += e.digit(i) * w;
      w *= p;
    }
    std::vector<std::uint64_t> set;
    std::vector<std::uint32_t> digit(free_pos.size(), 0);
    while (true) {
      std::uint64_t k = low;
      for (std::size_t t = 0; t < free_pos.size(); ++t) k += digit[t] * weight[t];
      set.push_back(k);
      std::size_t t = 0;
      for (; t < free_pos.size(); ++t) {
        if (digit[t] < base.digit(free_pos[t])) {
          ++digit[t];
          break;
        }
        digit[t] = 0;
      }
      if (t == free_pos.size()) break;
    }
    std::sort(set.begin(), set.end());
    fam.sets.push_back(std::move(set));
  }
  return fam;
}

std::optional<std::string> validate_rtilde(std::uint64_t m, std::span<const std::uint64_t> J,
                                           const std::vector<std::vector<std::uint64_t>>& sets,
                                           std::uint64_t p) {
  if (sets.size() != J.size()) return "need one set per element of J";
  for (std::size_t a = 0; a < J.size(); ++a) {
    for (auto k : sets[a]) {
      if (k > m + J[a] || lucas_binomial(m + J[a], k, p) == 0) {
        return "H1: C(" + std::to_string(m + J[a]) + "," + std::to_string(k) + ") = 0 mod p";
      }
    }
  }
  for (std::size_t a = 0; a < J.size(); ++a) {
    std::vector<std::uint64_t> x = sets[a];
    std::sort(x.begin(), x.end());
    for (std::size_t b = a + 1; b < J.size(); ++b) {
      std::vector<std::uint64_t> y = sets[b], both;
      std::sort(y.begin(), y.end());
      std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
      if (!both.empty()) {
        return "H2: j=" + std::to_string(J[a]) + " and j=" + std::to_string(J[b]) +
               " share k=" + std::to_string(both.front());
      }
    }
  }
  for (std::size_t a = 0; a < J.size(); ++a) {
    for (auto k : sets[a]) {
      for (std::size_t b = 0; b < a; ++b) {
        if (k <= m + J[b] && lucas_binomial(m + J[b], k, p) != 0) {
          return "H3: k=" + std::to_string(k) + " in the set of j=" + std::to_string(J[a]) +
                 " has C(" + std::to_string(m + J[b]) + ",k) != 0 mod p";
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace cca
