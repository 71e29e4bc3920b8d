#include "cca/group.hpp"

#include <limits>
#include <sstream>

#include "cca/error.hpp"

namespace cca {

namespace {

constexpr std::uint64_t kTableLimit = 256;
constexpr std::uint64_t kMaxOrder = std::numeric_limits<Elem>::max();

std::uint64_t checked_pow(std::uint64_t base, int e) {
  std::uint64_t out = 1;
  for (int i = 0; i < e; ++i) {
    if (out > kMaxOrder / base) {
      throw CapacityError("group order exceeds the 32-bit element index range");
    }
    out *= base;
  }
  return out;
}

}  // namespace

struct GroupSpec::Tables {
  std::vector<Elem> add;    // q*q
  std::vector<Elem> scale;  // p^r * q
};

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t reduce_mod(std::int64_t a, std::uint64_t n) {
  const auto sn = static_cast<std::int64_t>(n);
  std::int64_t r = a % sn;
  if (r < 0) r += sn;
  return static_cast<std::uint64_t>(r);
}

GroupSpec::GroupSpec(std::uint64_t p, std::vector<int> exponents)
    : p_(p), exponents_(std::move(exponents)) {
  if (!is_prime(p_)) {
    throw DomainError("group prime p=" + std::to_string(p_) + " is not prime");
  }
  if (exponents_.empty()) {
    throw StructuralError("group needs at least one cyclic factor");
  }
  int total = 0;
  for (int e : exponents_) {
    if (e < 1) throw DomainError("cyclic factor exponents must be >= 1");
    moduli_.push_back(checked_pow(p_, e));
    total += e;
    r_ = std::max(r_, e);
  }
  q_ = checked_pow(p_, total);
  pr_ = checked_pow(p_, r_);

  if (q_ <= kTableLimit) {
    auto t = std::make_shared<Tables>();
    t->add.resize(q_ * q_);
    for (Elem a = 0; a < q_; ++a) {
      for (Elem b = 0; b < q_; ++b) t->add[a * q_ + b] = add_slow(a, b);
    }
    t->scale.resize(pr_ * q_);
    for (std::uint64_t n = 0; n < pr_; ++n) {
      for (Elem g = 0; g < q_; ++g) t->scale[n * q_ + g] = scale_slow(n, g);
    }
    tables_ = std::move(t);
  }
}

bool GroupSpec::contains(const GroupElement& g) const {
  if (g.coords.size() != rank()) return false;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (g.coords[i] >= moduli_[i]) return false;
  }
  return true;
}

Elem GroupSpec::index_of(const GroupElement& g) const {
  if (g.coords.size() != rank()) {
    throw StructuralError("element has " + std::to_string(g.coords.size()) +
                          " coordinates, group has rank " + std::to_string(rank()));
  }
  std::uint64_t idx = 0;
  for (std::size_t i = rank(); i-- > 0;) {
    if (g.coords[i] >= moduli_[i]) throw DomainError("coordinate out of range");
    idx = idx * moduli_[i] + g.coords[i];
  }
  return static_cast<Elem>(idx);
}

GroupElement GroupSpec::element_at(Elem idx) const {
  if (idx >= q_) throw DomainError("element index out of range");
  GroupElement g;
  g.coords.resize(rank());
  std::uint64_t rest = idx;
  for (std::size_t i = 0; i < rank(); ++i) {
    g.coords[i] = rest % moduli_[i];
    rest /= moduli_[i];
  }
  return g;
}

std::vector<GroupElement> GroupSpec::elements() const {
  std::vector<GroupElement> out;
  out.reserve(q_);
  for (std::uint64_t i = 0; i < q_; ++i) out.push_back(element_at(static_cast<Elem>(i)));
  return out;
}

Elem GroupSpec::add_slow(Elem a, Elem b) const {
  std::uint64_t ra = a, rb = b, out = 0, place = 1;
  for (std::size_t i = 0; i < rank(); ++i) {
    const std::uint64_t m = moduli_[i];
    out += ((ra % m + rb % m) % m) * place;
    ra /= m;
    rb /= m;
    place *= m;
  }
  return static_cast<Elem>(out);
}

Elem GroupSpec::scale_slow(std::uint64_t n, Elem g) const {
  std::uint64_t rg = g, out = 0, place = 1;
  for (std::size_t i = 0; i < rank(); ++i) {
    const std::uint64_t m = moduli_[i];
    const auto c = static_cast<unsigned __int128>(n % m) * (rg % m) % m;
    out += static_cast<std::uint64_t>(c) * place;
    rg /= m;
    place *= m;
  }
  return static_cast<Elem>(out);
}

Elem GroupSpec::add(Elem a, Elem b) const {
  if (tables_) return tables_->add[a * q_ + b];
  return add_slow(a, b);
}

Elem GroupSpec::neg(Elem a) const {
  std::uint64_t ra = a, out = 0, place = 1;
  for (std::size_t i = 0; i < rank(); ++i) {
    const std::uint64_t m = moduli_[i];
    out += ((m - ra % m) % m) * place;
    ra /= m;
    place *= m;
  }
  return static_cast<Elem>(out);
}

Elem GroupSpec::scale(std::uint64_t n, Elem g) const {
  n %= pr_;
  if (tables_) return tables_->scale[n * q_ + g];
  return scale_slow(n, g);
}

std::string GroupSpec::label(Elem idx) const {
  if (rank() == 1) return std::to_string(idx);
  const GroupElement g = element_at(idx);
  std::string out = "(";
  for (std::size_t i = 0; i < g.coords.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(g.coords[i]);
  }
  return out + ")";
}

std::string GroupSpec::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (i) os << "x";
    os << "Z_" << moduli_[i];
  }
  return os.str();
}

GroupElement add(const GroupElement& a, const GroupElement& b, const GroupSpec& spec) {
  if (a.coords.size() != spec.rank() || b.coords.size() != spec.rank()) {
    throw StructuralError("add: operand dimension does not match the group rank");
  }
  GroupElement out;
  out.coords.resize(spec.rank());
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const std::uint64_t m = spec.modulus(i);
    out.coords[i] = (a.coords[i] % m + b.coords[i] % m) % m;
  }
  return out;
}

GroupElement scalar_mul(std::uint64_t n, const GroupElement& g, const GroupSpec& spec) {
  if (g.coords.size() != spec.rank()) {
    throw StructuralError("scalar_mul: element dimension does not match the group rank");
  }
  GroupElement out;
  out.coords.resize(spec.rank());
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const std::uint64_t m = spec.modulus(i);
    out.coords[i] =
        static_cast<std::uint64_t>(static_cast<unsigned __int128>(n % m) * (g.coords[i] % m) % m);
  }
  return out;
}

bool is_unit_scalar(std::int64_t a, const GroupSpec& spec) {
  return reduce_mod(a, spec.prime()) != 0;
}

std::vector<double> uniform_measure(const GroupSpec& spec) {
  return std::vector<double>(spec.order(), 1.0 / static_cast<double>(spec.order()));
}

}  // namespace cca
