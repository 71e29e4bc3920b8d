#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "cca/automaton.hpp"
#include "cca/digits.hpp"
#include "cca/error.hpp"

using namespace cca;
using boost::multiprecision::cpp_int;

namespace {

Word random_word(std::mt19937_64& rng, const GroupSpec& g, std::size_t len) {
  Word w{static_cast<std::int64_t>(rng() % 5) - 2, {}};
  for (std::size_t i = 0; i < len; ++i) w.elems.push_back(static_cast<Elem>(rng() % g.order()));
  return w;
}

}  // namespace

TEST(Step, Examples) {
  const auto z2 = GroupSpec::cyclic(2);
  const AutomatonParams xor_rule(1, 1, z2);
  EXPECT_EQ(step(Word{0, {1, 0, 1}}, xor_rule).elems, (std::vector<Elem>{1, 1}));

  const auto z3 = GroupSpec::cyclic(3);
  const AutomatonParams r(1, 2, z3);
  EXPECT_EQ(step(Word{0, {1, 2, 0}}, r).elems, (std::vector<Elem>{2, 2}));
  for (Elem g = 0; g < 3; ++g) {
    const auto out = step(Word{4, {g, g, g, g}}, r);
    EXPECT_EQ(out.start, 4);
    for (auto v : out.elems) EXPECT_EQ(v, z3.scale(3, g));
  }
  EXPECT_THROW(step(Word{0, {1}}, xor_rule), DomainError);
}

TEST(Step, IsAHomomorphism) {
  std::mt19937_64 rng(3);
  for (const auto& g : {GroupSpec::cyclic(2, 2), GroupSpec(2, {1, 1}), GroupSpec::cyclic(3)}) {
    const AutomatonParams params(g.prime() == 2 ? 3 : 2, 1, g);
    for (int t = 0; t < 50; ++t) {
      const auto a = random_word(rng, g, 20), b0 = random_word(rng, g, 20);
      Word b{a.start, b0.elems}, s{a.start, {}};
      for (std::size_t i = 0; i < 20; ++i) s.elems.push_back(g.add(a.elems[i], b.elems[i]));
      const auto sa = step(a, params), sb = step(b, params), ss = step(s, params);
      for (std::size_t i = 0; i < ss.size(); ++i) EXPECT_EQ(ss.elems[i], g.add(sa.elems[i], sb.elems[i]));
    }
  }
}

TEST(Iterate, ZeroStepsIsIdentity) {
  const AutomatonParams r(1, 1, GroupSpec::cyclic(2));
  const Word w{3, {1, 0, 0, 1}};
  EXPECT_EQ(iterate(w, 0, r), w);
  EXPECT_THROW(iterate(w, 4, r), DomainError);
}

TEST(Iterate, DyadicStepsOverZ2) {
  std::mt19937_64 rng(5);
  const auto z2 = GroupSpec::cyclic(2);
  const AutomatonParams r(1, 1, z2);
  for (int k = 0; k <= 7; ++k) {
    const std::uint64_t m = std::uint64_t{1} << k;
    for (int t = 0; t < 20; ++t) {
      const auto w = random_word(rng, z2, m + 3);
      const auto out = iterate(w, m, r);
      EXPECT_EQ(out.elems[0], w.elems[0] ^ w.elems[m]);
      const auto full = iterate(w, m - 1, r);
      Elem sum = 0;
      for (std::uint64_t l = 0; l < m; ++l) sum ^= w.elems[l];
      EXPECT_EQ(full.elems[0], sum);
    }
  }
}

TEST(Coefficients, SmallRows) {
  const auto z4 = GroupSpec::cyclic(2, 2);
  const AutomatonParams r(3, 5, z4);
  EXPECT_EQ(coefficients(0, r).coeffs, std::vector<std::uint64_t>{1});
  EXPECT_EQ(coefficients(1, r).coeffs, (std::vector<std::uint64_t>{3, 1}));
  const AutomatonParams x(1, 1, GroupSpec::cyclic(2));
  EXPECT_EQ(coefficients(4, x).unit, (std::vector<std::uint8_t>{1, 0, 0, 0, 1}));
}

TEST(Coefficients, MatchBigIntegerFormula) {
  const std::vector<std::tuple<GroupSpec, std::int64_t, std::int64_t>> cases{
      {GroupSpec::cyclic(2), 1, 1},      {GroupSpec::cyclic(2, 3), 3, 5},
      {GroupSpec::cyclic(3, 2), 2, 7},   {GroupSpec(2, {1, 2}), 1, 3},
      {GroupSpec::cyclic(5), 4, 2},      {GroupSpec::cyclic(3), -1, 1}};
  for (const auto& [g, mu, nu] : cases) {
    const AutomatonParams params(mu, nu, g);
    const cpp_int mod = g.exponent();
    const cpp_int mu_r = reduce_mod(mu, g.exponent()), nu_r = reduce_mod(nu, g.exponent());
    for (std::uint64_t m = 0; m <= 120; ++m) {
      const auto row = coefficients(m, params);
      ASSERT_EQ(row.coeffs.size(), m + 1);
      cpp_int binom = 1;
      for (std::uint64_t k = 0; k <= m; ++k) {
        if (k > 0) binom = binom * (m - k + 1) / k;
        const cpp_int expect = binom * boost::multiprecision::pow(mu_r, static_cast<unsigned>(m - k)) *
                               boost::multiprecision::pow(nu_r, static_cast<unsigned>(k)) % mod;
        ASSERT_EQ(cpp_int(row.coeffs[k]), expect) << g.describe() << " m=" << m << " k=" << k;
      }
      EXPECT_TRUE(is_unit_scalar(static_cast<std::int64_t>(row.coeffs.front()), g));
      EXPECT_TRUE(is_unit_scalar(static_cast<std::int64_t>(row.coeffs.back()), g));
    }
  }
}

TEST(Coefficients, UnitFlagsFollowLucas) {
  for (std::uint64_t p : {2, 3}) {
    const GroupSpec g = GroupSpec::cyclic(p, 2);
    const AutomatonParams params(1, static_cast<std::int64_t>(p) - 1 + static_cast<std::int64_t>(p), g);
    for (std::uint64_t m = 0; m <= 1000; ++m) {
      const auto row = coefficients(m, params);
      for (std::uint64_t k = 0; k <= m; ++k) {
        ASSERT_EQ(row.unit[k] != 0, lucas_binomial(m, k, p) != 0) << m << " " << k;
        ASSERT_EQ(row.unit[k] != 0, row.coeffs[k] % p != 0);
      }
    }
  }
}

TEST(Coefficients, PascalRowsAgree) {
  for (const auto& [g, mu, nu] : {std::tuple{GroupSpec::cyclic(2, 2), 3, 1},
                                  std::tuple{GroupSpec::cyclic(3, 2), 2, 4},
                                  std::tuple{GroupSpec::cyclic(7), 3, 6}}) {
    const AutomatonParams params(mu, nu, g);
    CoefficientRows rows(params);
    for (std::uint64_t m = 0; m <= 400; ++m, rows.advance()) {
      ASSERT_EQ(rows.m(), m);
      ASSERT_EQ(rows.row(), coefficients(m, params).coeffs) << m;
    }
  }
}

TEST(ClosedForm, Examples) {
  const auto z2 = GroupSpec::cyclic(2);
  const AutomatonParams x(1, 1, z2);
  const Word w{0, {1, 0, 1, 1, 0, 1, 1, 1}};
  EXPECT_EQ(apply_closed_form(w, 0, 3, x), w.at(3));
  const auto row = coefficients(6, x);
  for (std::uint64_t k = 0; k <= 6; ++k) EXPECT_EQ(row.unit[k] != 0, k % 2 == 0);
  EXPECT_EQ(apply_closed_form(w, 6, 0, x), w.at(0) ^ w.at(2) ^ w.at(4) ^ w.at(6));
  EXPECT_EQ(apply_closed_form(w, 6, 0, x), iterate(w, 6, x).at(0));
  EXPECT_THROW(apply_closed_form(w, 6, 2, x), DomainError);
  EXPECT_THROW(apply_closed_form(w, 2, -1, x), DomainError);
}

TEST(ClosedForm, EqualsIterateOnRandomWords) {
  std::mt19937_64 rng(17);
  const std::vector<GroupSpec> specs{GroupSpec::cyclic(2), GroupSpec::cyclic(2, 2),
                                     GroupSpec::cyclic(3), GroupSpec(2, {1, 1})};
  for (const auto& g : specs) {
    for (int t = 0; t < 60; ++t) {
      std::int64_t mu, nu;
      do {
        mu = static_cast<std::int64_t>(rng() % 20) - 5;
        nu = static_cast<std::int64_t>(rng() % 20) - 5;
      } while (!is_unit_scalar(mu, g) || !is_unit_scalar(nu, g));
      const AutomatonParams params(mu, nu, g);
      const std::uint64_t m = rng() % 65;
      const auto w = random_word(rng, g, m + 1 + rng() % 10);
      const auto out = iterate(w, m, params);
      for (std::int64_t i = out.start; i < out.end(); ++i) {
        ASSERT_EQ(apply_closed_form(w, m, i, params), out.at(i));
      }
    }
  }
}

TEST(Params, CoprimalityIsEnforced) {
  const auto z4 = GroupSpec::cyclic(2, 2);
  EXPECT_THROW(AutomatonParams(2, 1, z4), DomainError);
  EXPECT_THROW(AutomatonParams(1, 6, z4), DomainError);
  const AutomatonParams loose(2, 1, z4, Coprimality::allow);
  EXPECT_FALSE(loose.coprime());
  EXPECT_EQ(loose.mu_mod(), 2u);
  const AutomatonParams neg(-1, 5, z4);
  EXPECT_EQ(neg.mu_mod(), 3u);
  EXPECT_EQ(neg.nu_mod(), 1u);
}
