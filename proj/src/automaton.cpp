#include "cca/automaton.hpp"

#include <utility>

#include "cca/digits.hpp"
#include "cca/error.hpp"

namespace cca {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

// Inverse of a unit a modulo n via the extended Euclidean algorithm.
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t n) {
  std::int64_t t = 0, new_t = 1;
  auto r = static_cast<std::int64_t>(n), new_r = static_cast<std::int64_t>(a % n);
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  if (r != 1) throw DomainError("scalar is not invertible modulo p^r");
  return reduce_mod(t, n);
}

// Splits n = p^v * u with p not dividing u.
std::pair<int, std::uint64_t> split_p(std::uint64_t n, std::uint64_t p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return {v, n};
}

}  // namespace

AutomatonParams::AutomatonParams(std::int64_t mu, std::int64_t nu, GroupSpec spec,
                                 Coprimality check)
    : mu_(mu),
      nu_(nu),
      spec_(std::move(spec)),
      mu_mod_(reduce_mod(mu, spec_.exponent())),
      nu_mod_(reduce_mod(nu, spec_.exponent())) {
  if (check == Coprimality::enforce && !coprime()) {
    throw DomainError("mu=" + std::to_string(mu) + " and nu=" + std::to_string(nu) +
                      " must both be coprime to p=" + std::to_string(spec_.prime()));
  }
}

bool AutomatonParams::coprime() const {
  return is_unit_scalar(mu_, spec_) && is_unit_scalar(nu_, spec_);
}

Word step(const Word& w, const AutomatonParams& params) {
  if (w.size() < 2) throw DomainError("step needs a window of length >= 2");
  const GroupSpec& g = params.spec();
  Word out{w.start, std::vector<Elem>(w.size() - 1)};
  for (std::size_t n = 0; n + 1 < w.size(); ++n) {
    out.elems[n] = g.add(g.scale(params.mu_mod(), w.elems[n]),
                         g.scale(params.nu_mod(), w.elems[n + 1]));
  }
  return out;
}

Word iterate(const Word& w, std::uint64_t m, const AutomatonParams& params) {
  if (w.size() < m + 1) {
    throw DomainError("iterate needs a window of length >= m+1 (m=" + std::to_string(m) + ")");
  }
  const GroupSpec& g = params.spec();
  Word out = w;
  // In place: each pass consumes the rightmost cell.
  for (std::uint64_t s = 0; s < m; ++s) {
    const std::size_t len = out.elems.size() - 1;
    for (std::size_t n = 0; n < len; ++n) {
      out.elems[n] = g.add(g.scale(params.mu_mod(), out.elems[n]),
                           g.scale(params.nu_mod(), out.elems[n + 1]));
    }
    out.elems.pop_back();
  }
  return out;
}

CoeffVector coefficients(std::uint64_t m, const AutomatonParams& params) {
  const GroupSpec& spec = params.spec();
  const std::uint64_t p = spec.prime();
  const std::uint64_t mod = spec.exponent();
  const int r = spec.exponent_power();

  std::vector<std::uint64_t> mu_pow(m + 1), nu_pow(m + 1);
  mu_pow[0] = nu_pow[0] = 1 % mod;
  for (std::uint64_t k = 1; k <= m; ++k) {
    mu_pow[k] = mulmod(mu_pow[k - 1], params.mu_mod(), mod);
    nu_pow[k] = mulmod(nu_pow[k - 1], params.nu_mod(), mod);
  }

  CoeffVector out;
  out.m = m;
  out.coeffs.resize(m + 1);
  out.unit.resize(m + 1);

  // C(m,k) = C(m,k-1) (m-k+1) / k, tracked as p^v * unit mod p^r.
  int v = 0;
  std::uint64_t unit = 1 % mod;
  for (std::uint64_t k = 0; k <= m; ++k) {
    if (k > 0) {
      const auto [vn, un] = split_p(m - k + 1, p);
      const auto [vd, ud] = split_p(k, p);
      v += vn - vd;
      unit = mulmod(mulmod(unit, un % mod, mod), inverse_mod(ud % mod, mod), mod);
    }
    std::uint64_t binom = 0;
    if (v < r) {
      binom = unit;
      for (int i = 0; i < v; ++i) binom = mulmod(binom, p, mod);
    }
    out.coeffs[k] = mulmod(mulmod(binom, mu_pow[m - k], mod), nu_pow[k], mod);
    out.unit[k] = lucas_nonzero(m, k, p) ? 1 : 0;
  }
  return out;
}

Elem apply_closed_form(const Word& w, const CoeffVector& row, std::int64_t i,
                       const GroupSpec& spec) {
  const auto m = static_cast<std::int64_t>(row.m);
  if (!w.covers(i, i + m)) {
    throw DomainError("closed form at i=" + std::to_string(i) + " needs indices " +
                      std::to_string(i) + ".." + std::to_string(i + m) + " in the window");
  }
  Elem acc = spec.identity();
  const std::size_t base = static_cast<std::size_t>(i - w.start);
  for (std::size_t k = 0; k < row.coeffs.size(); ++k) {
    if (row.coeffs[k] != 0) acc = spec.add(acc, spec.scale(row.coeffs[k], w.elems[base + k]));
  }
  return acc;
}

Elem apply_closed_form(const Word& w, std::uint64_t m, std::int64_t i,
                       const AutomatonParams& params) {
  if (!w.covers(i, i + static_cast<std::int64_t>(m))) {
    throw DomainError("closed form window does not cover i..i+m");
  }
  return apply_closed_form(w, coefficients(m, params), i, params.spec());
}

CoefficientRows::CoefficientRows(const AutomatonParams& params)
    : mu_(params.mu_mod()), nu_(params.nu_mod()), modulus_(params.spec().exponent()) {}

void CoefficientRows::advance() {
  row_.push_back(0);
  for (std::size_t k = row_.size() - 1; k > 0; --k) {
    row_[k] = (mulmod(mu_, row_[k], modulus_) + mulmod(nu_, row_[k - 1], modulus_)) % modulus_;
  }
  row_[0] = mulmod(mu_, row_[0], modulus_);
  ++m_;
}

}  // namespace cca
