#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace padicrd {

bool is_prime(std::uint64_t n);

// p^k with overflow detection; throws PrecisionError when p^k >= 2^63.
std::uint64_t checked_pow(std::uint64_t p, unsigned k);

/**
 * Truncated p-adic integer I = I_0 + I_1 p + ... + I_{L-1} p^{L-1}.
 *
 * Digits are stored little-endian, so the level-r ball containing the code
 * is addressed by its first r digits. A code is both a vertex address and a
 * representative of a ball centre in the hierarchy.
 */
class PAdicCode {
 public:
  PAdicCode(std::uint32_t p, std::vector<std::uint32_t> digits);

  // Base-p expansion of `value`, truncated to `precision` digits.
  static PAdicCode from_integer(std::uint32_t p, std::uint64_t value, unsigned precision);

  std::uint32_t prime() const { return p_; }
  unsigned precision() const { return static_cast<unsigned>(digits_.size()); }
  std::span<const std::uint32_t> digits() const { return digits_; }
  std::uint32_t digit(unsigned i) const { return digits_.at(i); }

  // Sum digits[i] p^i. Throws PrecisionError if it does not fit in 63 bits.
  std::uint64_t value() const;

  // First `r` digits only; r <= precision().
  PAdicCode truncated(unsigned r) const;

  // Extend with zero digits up to `precision` (no-op if already that long).
  PAdicCode padded(unsigned precision) const;

  // Digits in index order (little-endian), e.g. "01" for 2 = (0,1); "." separates digits when p > 10.
  std::string to_string() const;

  friend bool operator==(const PAdicCode&, const PAdicCode&) = default;
  friend std::strong_ordering operator<=>(const PAdicCode&, const PAdicCode&) = default;

 private:
  std::uint32_t p_;
  std::vector<std::uint32_t> digits_;
};

// ord_p(x); std::nullopt stands for "infinite at this precision" (all digits zero).
std::optional<unsigned> padic_order(const PAdicCode& x);

// |x|_p = p^{-ord}, 0 for the infinite-order marker.
double padic_norm(const PAdicCode& x);

// Omega(p^r |x - center|_p): true iff the first r digits agree.
bool ball_contains(const PAdicCode& center, unsigned r, const PAdicCode& x);

// Representatives I + c p^N, c = 0 .. p^{M-N}-1, of the level-M balls inside
// the level-N ball of `center` (only the first N digits of center are used).
std::vector<PAdicCode> refine_ball(const PAdicCode& center, unsigned level_n, unsigned level_m);

// Haar measure of a level-r ball, p^{-r}.
double ball_volume(std::uint32_t p, unsigned r);

/// Exact fraction numerator / p^exponent in [0, 1), kept reduced.
class DyadicFraction {
 public:
  DyadicFraction(std::uint32_t p, std::uint64_t numerator, unsigned exponent);

  std::uint32_t prime() const { return p_; }
  std::uint64_t numerator() const { return num_; }
  unsigned exponent() const { return exp_; }
  double to_double() const;

  // {f1 + f2}: fractional part of the sum, still exact.
  friend DyadicFraction operator+(const DyadicFraction& a, const DyadicFraction& b);
  friend bool operator==(const DyadicFraction&, const DyadicFraction&) = default;

 private:
  std::uint32_t p_;
  std::uint64_t num_;
  unsigned exp_;
};

// {p^{-N-1} j x}_p = (j * x mod p^{N+1}) / p^{N+1}.
DyadicFraction fractional_part_scaled(const PAdicCode& x, std::uint32_t j, unsigned level_n);

// chi_p evaluated on an exact fractional part: (cos 2 pi f, sin 2 pi f).
std::pair<double, double> character_eval(const DyadicFraction& f);

}  // namespace padicrd
