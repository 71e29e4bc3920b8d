#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cca {

/// Index of a group element in the canonical enumeration of a GroupSpec.
using Elem = std::uint32_t;

/// An element of G = Z_{p^e_1} x ... x Z_{p^e_d}, stored by coordinates.
struct GroupElement {
  std::vector<std::uint64_t> coords;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// A finite abelian p-group written as a product of cyclic p-power groups.
///
/// Elements are enumerated in mixed radix with coordinate 0 least significant,
/// so index 0 is the identity and Z_q enumerates as 0, 1, ..., q-1. Small
/// groups (q <= 256) carry precomputed addition and scalar tables shared
/// between copies.
class GroupSpec {
 public:
  GroupSpec(std::uint64_t p, std::vector<int> exponents);

  static GroupSpec cyclic(std::uint64_t p, int e = 1) { return GroupSpec(p, {e}); }

  std::uint64_t prime() const noexcept { return p_; }
  const std::vector<int>& exponents() const noexcept { return exponents_; }
  std::size_t rank() const noexcept { return exponents_.size(); }
  /// Group order q = p^(e_1 + ... + e_d).
  std::uint64_t order() const noexcept { return q_; }
  /// r = max e_i, so that p^r g = 0 for every g.
  int exponent_power() const noexcept { return r_; }
  /// p^r, the modulus through which integer scalars act.
  std::uint64_t exponent() const noexcept { return pr_; }
  std::uint64_t modulus(std::size_t i) const { return moduli_.at(i); }

  bool contains(const GroupElement& g) const;
  Elem index_of(const GroupElement& g) const;
  GroupElement element_at(Elem idx) const;
  std::vector<GroupElement> elements() const;

  Elem identity() const noexcept { return 0; }
  Elem add(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  /// n.g with n reduced mod p^r first.
  Elem scale(std::uint64_t n, Elem g) const;

  std::string label(Elem idx) const;
  std::string describe() const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.p_ == b.p_ && a.exponents_ == b.exponents_;
  }

 private:
  struct Tables;

  Elem add_slow(Elem a, Elem b) const;
  Elem scale_slow(std::uint64_t n, Elem g) const;

  std::uint64_t p_;
  std::vector<int> exponents_;
  std::vector<std::uint64_t> moduli_;
  std::uint64_t q_ = 1;
  int r_ = 0;
  std::uint64_t pr_ = 1;
  std::shared_ptr<const Tables> tables_;
};

bool is_prime(std::uint64_t n);

/// Coordinatewise sum mod p^{e_i}.
GroupElement add(const GroupElement& a, const GroupElement& b, const GroupSpec& spec);

/// n.g, computed per coordinate as (n mod p^{e_i}) * g_i mod p^{e_i}.
GroupElement scalar_mul(std::uint64_t n, const GroupElement& g, const GroupSpec& spec);

/// True iff a is not divisible by p, i.e. g -> a.g is a bijection of G.
bool is_unit_scalar(std::int64_t a, const GroupSpec& spec);

/// The uniform probability vector over G (lambda in the Cesaro limit).
std::vector<double> uniform_measure(const GroupSpec& spec);

/// a mod n in [0, n) for possibly negative a.
std::uint64_t reduce_mod(std::int64_t a, std::uint64_t n);

}  // namespace cca
