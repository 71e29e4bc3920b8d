#include "cca/digits.hpp"

#include <algorithm>
#include <cmath>

#include "cca/error.hpp"
#include "cca/group.hpp"

namespace cca {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// C(a, b) mod p for 0 <= b <= a < p; every factor is invertible.
std::uint64_t small_binomial(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  if (b > a) return 0;
  b = std::min(b, a - b);
  std::uint64_t num = 1, den = 1;
  for (std::uint64_t i = 1; i <= b; ++i) {
    num = mulmod(num, a - b + i, p);
    den = mulmod(den, i, p);
  }
  return mulmod(num, powmod(den, p - 2, p), p);
}

double snap(double x) {
  const double r = std::round(x);
  return std::abs(x - r) < 1e-9 ? r : x;
}

void check_prime(std::uint64_t p) {
  if (!is_prime(p)) throw DomainError("p=" + std::to_string(p) + " is not prime");
}

}  // namespace

PExpansion p_expansion(std::uint64_t m, std::uint64_t p) {
  check_prime(p);
  PExpansion e;
  e.m = m;
  e.p = p;
  for (std::uint64_t rest = m; rest > 0; rest /= p) {
    e.digits.push_back(static_cast<std::uint32_t>(rest % p));
  }
  for (std::size_t i = 0; i < e.digits.size(); ++i) {
    if (e.digits[i] != 0) e.support.push_back(static_cast<int>(i));
  }
  e.deltas.assign(e.support.rbegin(), e.support.rend());
  return e;
}

std::uint64_t lucas_binomial(std::uint64_t m, std::uint64_t k, std::uint64_t p) {
  check_prime(p);
  std::uint64_t out = 1;
  while (k > 0 || m > 0) {
    const std::uint64_t mi = m % p, ki = k % p;
    if (ki > mi) return 0;
    out = mulmod(out, small_binomial(mi, ki, p), p);
    m /= p;
    k /= p;
  }
  return out % p;
}

bool lucas_nonzero(std::uint64_t m, std::uint64_t k, std::uint64_t p) {
  while (k > 0) {
    if (k % p > m % p) return false;
    m /= p;
    k /= p;
  }
  return true;
}

double log_base(double x, std::uint64_t p) {
  return snap(std::log(x) / std::log(static_cast<double>(p)));
}

double loglog(std::uint64_t M, std::uint64_t p) {
  return log_base(log_base(static_cast<double>(M), p), p);
}

DensityCount density_set(std::uint64_t M, double alpha, std::uint64_t p) {
  check_prime(p);
  if (M < 16 || static_cast<double>(M) <= static_cast<double>(p)) {
    throw DomainError("density_set needs M >= 16 and M > p so that log_p log_p M > 0");
  }
  const double threshold = snap(alpha * loglog(M, p));
  DensityCount out;
  for (std::uint64_t m = 1; m <= M; ++m) {
    std::uint64_t support = 0;
    for (std::uint64_t rest = m; rest > 0; rest /= p) support += (rest % p != 0);
    if (static_cast<double>(support) >= threshold) ++out.size;
  }
  out.density = static_cast<double>(out.size) / static_cast<double>(M);
  return out;
}

PrimeSetParams PrimeSetParams::make(std::uint64_t M, std::uint64_t ell, double eps,
                                    double eps_prime, std::uint64_t p) {
  check_prime(p);
  if (M < 16 || static_cast<double>(M) <= static_cast<double>(p)) {
    throw DomainError("density sets need M >= 16 and M > p");
  }
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("eps must lie in (0, 1/2)");
  if (!(eps_prime > 0.0)) throw DomainError("eps' must be positive");
  const double ll = loglog(M, p);
  return PrimeSetParams{p, ell, snap(eps * ll), snap(eps_prime * ll)};
}

std::vector<int> low_digit_positions(const PExpansion& e) {
  std::vector<int> out;
  for (int n = 0; n <= e.top(); ++n) {
    if (e.digit(n) < e.p - 1) out.push_back(n);
  }
  return out;
}

bool in_r_prime(std::uint64_t m, const PrimeSetParams& params) {
  const PExpansion e = p_expansion(m, params.p);
  const std::vector<int> beta = low_digit_positions(e);
  const double need = log_base(2.0 * static_cast<double>(params.ell + 1), params.p);
  if (static_cast<double>(beta.size()) < need) return false;
  const auto idx = static_cast<std::size_t>(std::floor(need));
  // idx == 0 happens for p > 2(ell+1); the position condition is then vacuous.
  if (idx == 0) return true;
  return static_cast<double>(beta[idx - 1]) <= params.eps_threshold;
}

bool in_r_double_prime(std::uint64_t m, const PrimeSetParams& params) {
  const PExpansion e = p_expansion(m, params.p);
  if (!(static_cast<double>(e.top()) > params.eps_threshold)) return false;
  const auto high = std::count_if(e.support.begin(), e.support.end(), [&](int n) {
    return static_cast<double>(n) >= params.eps_threshold;
  });
  return static_cast<double>(high) >= params.eps_prime_threshold;
}

DensityPrimeCounts density_sets_prime(std::uint64_t M, std::uint64_t ell, double eps,
                                      double eps_prime, std::uint64_t p) {
  const PrimeSetParams params = PrimeSetParams::make(M, ell, eps, eps_prime, p);
  DensityPrimeCounts out;
  for (std::uint64_t m = 0; m <= M; ++m) {
    out.r_prime += in_r_prime(m, params);
    out.r_double_prime += in_r_double_prime(m, params);
  }
  out.density_prime = static_cast<double>(out.r_prime) / static_cast<double>(M);
  out.density_double_prime = static_cast<double>(out.r_double_prime) / static_cast<double>(M);
  return out;
}

}  // namespace cca
