#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cca/digits.hpp"

namespace cca {

/// Parameters of the density-one sets used by the joint construction.
struct RtildeParams {
  std::uint64_t M = 0;
  double alpha = 0.49;
  double eps = 0.47;
  double eps_prime = 0.009;
  std::uint64_t p = 2;
};

struct Eligibility {
  bool ok = false;
  std::string reason;  // failed membership when !ok
};

/// m is eligible for J when m+j lies in R'_M and R''_M for every j in J and
/// adding j never carries into the digits above eps log log M.
Eligibility rtilde_eligibility(std::uint64_t m, std::span<const std::uint64_t> J,
                               const RtildeParams& params);

struct RtildeFamily {
  std::uint64_t m = 0;
  std::vector<std::uint64_t> J;
  std::vector<std::vector<std::uint64_t>> sets;  // R~^j, increasing
  double size_threshold = 0.0;                   // 2^(eps' log log M)
  int low_cut = 0;                               // digits at positions <= low_cut are pinned
};

/// R~^j = { k <= m+j : I(k) in I(m+j), k_i <= m_i on I_+(m), k_i = (m+j)_i on I_-(m+j) }.
/// Raises IneligibleError naming the failed membership.
RtildeFamily build_rtilde(std::uint64_t m, std::span<const std::uint64_t> J,
                          const RtildeParams& params);

/// Independent H1-H3 check for the family built from the rows m+j of Pascal's
/// triangle mod p, using only lucas_binomial and set operations.
std::optional<std::string> validate_rtilde(std::uint64_t m, std::span<const std::uint64_t> J,
                                           const std::vector<std::vector<std::uint64_t>>& sets,
                                           std::uint64_t p);

}  // namespace cca
