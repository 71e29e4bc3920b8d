#pragma once

#include <cstdint>
#include <vector>

#include "cca/group.hpp"

namespace cca {

enum class Coprimality { enforce, allow };

/// The local rule (phi x)_n = mu x_n + nu x_{n+1} over a GroupSpec.
class AutomatonParams {
 public:
  /// Throws DomainError unless mu and nu are coprime to p, unless `check` is
  /// Coprimality::allow (exploratory runs outside the convergence hypotheses).
  AutomatonParams(std::int64_t mu, std::int64_t nu, GroupSpec spec,
                  Coprimality check = Coprimality::enforce);

  std::int64_t mu() const noexcept { return mu_; }
  std::int64_t nu() const noexcept { return nu_; }
  /// mu and nu reduced into [0, p^r).
  std::uint64_t mu_mod() const noexcept { return mu_mod_; }
  std::uint64_t nu_mod() const noexcept { return nu_mod_; }
  const GroupSpec& spec() const noexcept { return spec_; }
  bool coprime() const;

 private:
  std::int64_t mu_;
  std::int64_t nu_;
  GroupSpec spec_;
  std::uint64_t mu_mod_;
  std::uint64_t nu_mod_;
};

/// A finite window x_start, ..., x_{start+size-1} of a configuration.
struct Word {
  std::int64_t start = 0;
  std::vector<Elem> elems;

  std::size_t size() const noexcept { return elems.size(); }
  std::int64_t end() const noexcept { return start + static_cast<std::int64_t>(elems.size()); }
  bool covers(std::int64_t lo, std::int64_t hi) const noexcept { return lo >= start && hi < end(); }
  Elem at(std::int64_t n) const { return elems.at(static_cast<std::size_t>(n - start)); }

  friend bool operator==(const Word&, const Word&) = default;
};

/// Coefficients c_k = C(m,k) mu^(m-k) nu^k mod p^r of phi^m, k = 0..m.
struct CoeffVector {
  std::uint64_t m = 0;
  std::vector<std::uint64_t> coeffs;
  /// unit[k] != 0 iff C(m,k) is nonzero mod p (Lucas), i.e. g -> c_k g is a bijection.
  std::vector<std::uint8_t> unit;
};

/// One application of phi; output is one cell shorter, same start index.
Word step(const Word& w, const AutomatonParams& params);

/// phi^m applied to the window; output has size |w| - m.
Word iterate(const Word& w, std::uint64_t m, const AutomatonParams& params);

/// Row m of the coefficient family, built in O(m) from the p-adic valuation
/// and unit part of successive binomials.
CoeffVector coefficients(std::uint64_t m, const AutomatonParams& params);

/// (phi^m x)_i = sum_k c_k x_{k+i}. Requires the window to cover i..i+m.
Elem apply_closed_form(const Word& w, std::uint64_t m, std::int64_t i,
                       const AutomatonParams& params);
Elem apply_closed_form(const Word& w, const CoeffVector& row, std::int64_t i,
                       const GroupSpec& spec);

/// Walks the coefficient rows m = 0, 1, 2, ... with the Pascal recurrence
/// c_k(m+1) = mu c_k(m) + nu c_{k-1}(m) mod p^r.
class CoefficientRows {
 public:
  explicit CoefficientRows(const AutomatonParams& params);

  std::uint64_t m() const noexcept { return m_; }
  const std::vector<std::uint64_t>& row() const noexcept { return row_; }
  void advance();

 private:
  std::uint64_t mu_, nu_, modulus_;
  std::uint64_t m_ = 0;
  std::vector<std::uint64_t> row_{1};
};

}  // namespace cca
