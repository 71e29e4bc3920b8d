#include "cca/system_s.hpp"

#include "cca/error.hpp"

namespace cca {

namespace {

void check_shape(const IntMatrix& a) {
  if (a.empty()) throw StructuralError("system (S) needs at least one equation");
  for (const auto& row : a) {
    if (row.size() != a.size()) throw StructuralError("system (S) matrix must be square");
    for (std::int64_t v : row) {
      if (v < 0) throw DomainError("system (S) coefficients must be nonnegative");
    }
  }
}

std::uint64_t state_count(std::size_t ell, const GroupSpec& spec, std::uint64_t cap) {
  std::uint64_t states = 1;
  for (std::size_t i = 0; i < ell; ++i) {
    if (states > cap / spec.order()) {
      throw CapacityError("q^l exceeds the enumeration cap of " + std::to_string(cap));
    }
    states *= spec.order();
  }
  return states;
}

bool is_solution(const IntMatrix& a, const std::vector<Elem>& g, const GroupSpec& spec) {
  for (const auto& row : a) {
    Elem acc = spec.identity();
    for (std::size_t j = 0; j < row.size(); ++j) {
      acc = spec.add(acc, spec.scale(static_cast<std::uint64_t>(row[j]), g[j]));
    }
    if (acc != spec.identity()) return false;
  }
  return true;
}

}  // namespace

std::optional<std::string> h_prime_violation(const IntMatrix& a, std::uint64_t p) {
  check_shape(a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i][i] % static_cast<std::int64_t>(p) == 0) {
      return "a[" + std::to_string(i) + "][" + std::to_string(i) + "] = " +
             std::to_string(a[i][i]) + " is divisible by p";
    }
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i][j] % static_cast<std::int64_t>(p) != 0) {
        return "a[" + std::to_string(i) + "][" + std::to_string(j) + "] = " +
               std::to_string(a[i][j]) + " is not divisible by p";
      }
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Elem>> find_nontrivial_solution(const IntMatrix& a,
                                                          const GroupSpec& spec,
                                                          std::uint64_t cap) {
  check_shape(a);
  const std::size_t ell = a.size();
  const std::uint64_t states = state_count(ell, spec, cap);
  std::vector<Elem> g(ell, 0);
  for (std::uint64_t s = 1; s < states; ++s) {
    std::uint64_t rest = s;
    for (std::size_t j = 0; j < ell; ++j) {
      g[j] = static_cast<Elem>(rest % spec.order());
      rest /= spec.order();
    }
    if (is_solution(a, g, spec)) return g;
  }
  return std::nullopt;
}

bool check_system_s(const IntMatrix& a, const GroupSpec& spec, std::uint64_t cap) {
  if (auto bad = h_prime_violation(a, spec.prime())) {
    throw PreconditionError("(H') violated: " + *bad);
  }
  return !find_nontrivial_solution(a, spec, cap).has_value();
}

}  // namespace cca
