#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cca/group.hpp"

namespace cca {

/// Square matrix of nonnegative integer scalars acting on G^l.
using IntMatrix = std::vector<std::vector<std::int64_t>>;

inline constexpr std::uint64_t kDefaultSystemCap = std::uint64_t{1} << 20;

/// Describes the first (H') violation: a_ii = 0 mod p, or a_ij != 0 mod p above
/// the diagonal. Empty when the matrix is lower triangular mod p with unit diagonal.
std::optional<std::string> h_prime_violation(const IntMatrix& a, std::uint64_t p);

/// Brute-force check that A.g = 0 has only the zero solution in G^l.
/// Requires (H'); raises CapacityError when q^l exceeds `cap`.
bool check_system_s(const IntMatrix& a, const GroupSpec& spec,
                    std::uint64_t cap = kDefaultSystemCap);

/// Exhaustive search for a nonzero kernel vector of A on G^l, for any square A.
std::optional<std::vector<Elem>> find_nontrivial_solution(const IntMatrix& a,
                                                          const GroupSpec& spec,
                                                          std::uint64_t cap = kDefaultSystemCap);

}  // namespace cca
