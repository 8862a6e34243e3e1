#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "padicrd/errors.hpp"
#include "padicrd/padic.hpp"

using namespace padicrd;

namespace {

PAdicCode code(std::uint32_t p, std::vector<std::uint32_t> d) { return PAdicCode(p, std::move(d)); }

}  // namespace

TEST(PAdicCode, ValueIsDigitSum) {
  EXPECT_EQ(code(2, {0, 1, 1}).value(), 6u);
  EXPECT_EQ(code(3, {2, 0, 1}).value(), 11u);
  EXPECT_EQ(PAdicCode::from_integer(5, 123, 4).value(), 123u);
  EXPECT_EQ(PAdicCode::from_integer(2, 2, 2).to_string(), "01");
}

TEST(PAdicCode, RejectsBadDigitsAndPrimes) {
  EXPECT_THROW(code(2, {0, 2}), ArgumentError);
  EXPECT_THROW(code(4, {0, 1}), ArgumentError);
  EXPECT_THROW(PAdicCode::from_integer(2, 8, 3), ArgumentError);
}

TEST(PAdicCode, EqualityNeedsSamePrecision) {
  EXPECT_EQ(code(2, {1, 0}), code(2, {1, 0}));
  EXPECT_NE(code(2, {1, 0}), code(2, {1, 0, 0}));
}

TEST(PAdicOrder, Examples) {
  EXPECT_EQ(padic_order(code(2, {0, 1, 1})), 1u);
  EXPECT_DOUBLE_EQ(padic_norm(code(2, {0, 1, 1})), 0.5);
  EXPECT_EQ(padic_order(code(3, {2, 0})), 0u);
  EXPECT_DOUBLE_EQ(padic_norm(code(3, {2, 0})), 1.0);
  EXPECT_FALSE(padic_order(code(2, {0, 0})).has_value());
  EXPECT_EQ(padic_norm(code(2, {0, 0})), 0.0);
}

TEST(BallContains, Examples) {
  EXPECT_TRUE(ball_contains(code(2, {1, 0}), 2, code(2, {1, 0, 1})));
  EXPECT_FALSE(ball_contains(code(2, {1, 0}), 1, code(2, {0, 0})));
  EXPECT_TRUE(ball_contains(code(2, {1, 0}), 0, code(2, {0, 1})));
  EXPECT_THROW(ball_contains(code(2, {1}), 2, code(2, {1, 0})), PrecisionError);
}

TEST(BallContains, PartitionsCodesAtEachLevel) {
  const std::uint32_t p = 3;
  const unsigned len = 4, r = 2;
  std::vector<PAdicCode> centers;
  for (std::uint64_t c = 0; c < 9; ++c) centers.push_back(PAdicCode::from_integer(p, c, r));
  for (std::uint64_t x = 0; x < 81; ++x) {
    const auto cx = PAdicCode::from_integer(p, x, len);
    int hits = 0;
    for (const auto& c : centers) hits += ball_contains(c, r, cx) ? 1 : 0;
    EXPECT_EQ(hits, 1) << x;
  }
}

TEST(RefineBall, Examples) {
  EXPECT_EQ(refine_ball(code(2, {1}), 1, 2), (std::vector{code(2, {1, 0}), code(2, {1, 1})}));
  EXPECT_EQ(refine_ball(code(2, {1, 0}), 2, 2), (std::vector{code(2, {1, 0})}));
  EXPECT_EQ(refine_ball(code(3, {2}), 1, 2), (std::vector{code(3, {2, 0}), code(3, {2, 1}), code(3, {2, 2})}));
  EXPECT_THROW(refine_ball(code(2, {1, 0}), 2, 1), ArgumentError);
}

TEST(RefineBall, ExhaustsTheBallOnce) {
  const auto center = code(2, {1, 1});
  const auto kids = refine_ball(center, 2, 5);
  ASSERT_EQ(kids.size(), 8u);
  std::set<PAdicCode> seen(kids.begin(), kids.end());
  EXPECT_EQ(seen.size(), kids.size());
  int inside = 0;
  for (std::uint64_t x = 0; x < 32; ++x) {
    const auto cx = PAdicCode::from_integer(2, x, 5);
    if (ball_contains(center, 2, cx)) {
      ++inside;
      EXPECT_TRUE(seen.count(cx));
    }
  }
  EXPECT_EQ(inside, 8);
}

TEST(FractionalPart, Examples) {
  EXPECT_EQ(fractional_part_scaled(code(2, {1}), 1, 0), DyadicFraction(2, 1, 1));
  EXPECT_EQ(fractional_part_scaled(code(2, {1, 0}), 1, 1), DyadicFraction(2, 1, 2));
  EXPECT_DOUBLE_EQ(fractional_part_scaled(code(2, {1, 0}), 1, 1).to_double(), 0.25);
  EXPECT_THROW(fractional_part_scaled(code(2, {1}), 2, 0), ArgumentError);
  EXPECT_THROW(fractional_part_scaled(code(2, {1}), 1, 1), PrecisionError);
}

TEST(FractionalPart, LongDivisionOracle) {
  // {j x / p^{N+1}} by schoolbook long division of j*x in base p.
  std::mt19937_64 rng(3);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int trial = 0; trial < 50; ++trial) {
      const unsigned n = 1 + static_cast<unsigned>(rng() % 5);
      const std::uint64_t x = rng() % static_cast<std::uint64_t>(std::pow(p, n + 1));
      const std::uint32_t j = 1 + static_cast<std::uint32_t>(rng() % (p - 1));
      std::uint64_t rem = 0;
      std::uint64_t jx = j * x;
      std::vector<std::uint32_t> digits;
      while (jx) {
        digits.push_back(static_cast<std::uint32_t>(jx % p));
        jx /= p;
      }
      for (unsigned i = 0; i < std::min<std::size_t>(n + 1, digits.size()); ++i) {
        rem += digits[i] * static_cast<std::uint64_t>(std::pow(p, i));
      }
      const double expect = static_cast<double>(rem) / std::pow(p, n + 1);
      const auto got = fractional_part_scaled(PAdicCode::from_integer(p, x, n + 1), j, n);
      EXPECT_DOUBLE_EQ(got.to_double(), expect);
    }
  }
  EXPECT_DOUBLE_EQ(fractional_part_scaled(code(3, {2}), 2, 0).to_double(), 1.0 / 3.0);
}

TEST(FractionalPart, AdditiveInX) {
  std::mt19937_64 rng(5);
  const std::uint32_t p = 3;
  const unsigned n = 3;
  const std::uint64_t mod = 81;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t x = rng() % mod, y = rng() % mod;
    const std::uint32_t j = 1 + static_cast<std::uint32_t>(rng() % 2);
    const auto fx = fractional_part_scaled(PAdicCode::from_integer(p, x, n + 1), j, n);
    const auto fy = fractional_part_scaled(PAdicCode::from_integer(p, y, n + 1), j, n);
    const auto fxy = fractional_part_scaled(PAdicCode::from_integer(p, (x + y) % mod, n + 1), j, n);
    EXPECT_EQ(fx + fy, fxy);
  }
}

TEST(Character, ExactQuarterTurns) {
  EXPECT_EQ(character_eval(DyadicFraction(2, 0, 1)), std::pair(1.0, 0.0));
  EXPECT_EQ(character_eval(DyadicFraction(2, 1, 1)), std::pair(-1.0, 0.0));
  EXPECT_EQ(character_eval(DyadicFraction(2, 1, 2)), std::pair(0.0, 1.0));
  EXPECT_EQ(character_eval(DyadicFraction(2, 3, 2)), std::pair(0.0, -1.0));
}

TEST(Character, Multiplicative) {
  std::mt19937_64 rng(11);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int trial = 0; trial < 100; ++trial) {
      const unsigned e = 1 + static_cast<unsigned>(rng() % 6);
      const auto den = static_cast<std::uint64_t>(std::pow(p, e));
      const DyadicFraction a(p, rng() % den, e), b(p, rng() % den, e);
      const auto [ar, ai] = character_eval(a);
      const auto [br, bi] = character_eval(b);
      const auto [sr, si] = character_eval(a + b);
      EXPECT_NEAR(ar * br - ai * bi, sr, 1e-12);
      EXPECT_NEAR(ar * bi + ai * br, si, 1e-12);
    }
  }
}
