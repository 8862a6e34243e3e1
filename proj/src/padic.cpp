#include "padicrd/padic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "padicrd/errors.hpp"

namespace padicrd {

__extension__ using u128 = unsigned __int128;

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t checked_pow(std::uint64_t p, unsigned k) {
  constexpr std::uint64_t limit = std::uint64_t{1} << 62;
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (r > limit / p) {
      throw PrecisionError("p^k overflows 63 bits (p=" + std::to_string(p) +
                           ", k=" + std::to_string(k) + ")");
    }
    r *= p;
  }
  return r;
}

PAdicCode::PAdicCode(std::uint32_t p, std::vector<std::uint32_t> digits)
    : p_(p), digits_(std::move(digits)) {
  if (!is_prime(p)) throw ArgumentError("p-adic code needs a prime p, got " + std::to_string(p));
  for (auto d : digits_) {
    if (d >= p) {
      throw ArgumentError("digit " + std::to_string(d) + " out of range for p=" + std::to_string(p));
    }
  }
}

PAdicCode PAdicCode::from_integer(std::uint32_t p, std::uint64_t value, unsigned precision) {
  if (!is_prime(p)) throw ArgumentError("p-adic code needs a prime p, got " + std::to_string(p));
  const auto original = value;
  std::vector<std::uint32_t> digits(precision);
  for (unsigned i = 0; i < precision; ++i) {
    digits[i] = static_cast<std::uint32_t>(value % p);
    value /= p;
  }
  if (value != 0) {
    throw ArgumentError(std::to_string(original) + " needs more than " + std::to_string(precision) + " digits");
  }
  return PAdicCode(p, std::move(digits));
}

std::uint64_t PAdicCode::value() const {
  std::uint64_t v = 0;
  checked_pow(p_, precision());  // throws when the value cannot fit
  for (unsigned i = precision(); i-- > 0;) v = v * p_ + digits_[i];
  return v;
}

PAdicCode PAdicCode::truncated(unsigned r) const {
  if (r > precision()) throw PrecisionError("cannot truncate a code to more digits than it has");
  return PAdicCode(p_, {digits_.begin(), digits_.begin() + r});
}

PAdicCode PAdicCode::padded(unsigned precision) const {
  auto d = digits_;
  if (d.size() < precision) d.resize(precision, 0);
  return PAdicCode(p_, std::move(d));
}

std::string PAdicCode::to_string() const {
  std::string s;
  for (unsigned i = 0; i < precision(); ++i) {
    if (p_ <= 10) {
      s += static_cast<char>('0' + digits_[i]);
    } else {
      if (i > 0) s += '.';
      s += std::to_string(digits_[i]);
    }
  }
  return s;
}

std::optional<unsigned> padic_order(const PAdicCode& x) {
  const auto d = x.digits();
  for (unsigned i = 0; i < d.size(); ++i) {
    if (d[i] != 0) return i;
  }
  return std::nullopt;
}

double padic_norm(const PAdicCode& x) {
  const auto ord = padic_order(x);
  if (!ord) return 0.0;
  return std::pow(static_cast<double>(x.prime()), -static_cast<double>(*ord));
}

bool ball_contains(const PAdicCode& center, unsigned r, const PAdicCode& x) {
  if (center.precision() < r || x.precision() < r) {
    throw PrecisionError("ball level " + std::to_string(r) + " exceeds code precision");
  }
  if (center.prime() != x.prime()) throw ArgumentError("codes use different primes");
  for (unsigned i = 0; i < r; ++i) {
    if (center.digit(i) != x.digit(i)) return false;
  }
  return true;
}

std::vector<PAdicCode> refine_ball(const PAdicCode& center, unsigned level_n, unsigned level_m) {
  if (level_m < level_n) throw ArgumentError("refinement level M must be >= N");
  if (center.precision() < level_n) throw PrecisionError("centre shorter than its ball level");
  const auto p = center.prime();
  const auto count = checked_pow(p, level_m - level_n);
  std::vector<PAdicCode> out;
  out.reserve(count);
  const auto prefix = center.digits().first(level_n);
  for (std::uint64_t c = 0; c < count; ++c) {
    std::vector<std::uint32_t> digits(prefix.begin(), prefix.end());
    auto rest = c;
    for (unsigned i = level_n; i < level_m; ++i) {
      digits.push_back(static_cast<std::uint32_t>(rest % p));
      rest /= p;
    }
    out.emplace_back(p, std::move(digits));
  }
  return out;
}

double ball_volume(std::uint32_t p, unsigned r) {
  return std::pow(static_cast<double>(p), -static_cast<double>(r));
}

DyadicFraction::DyadicFraction(std::uint32_t p, std::uint64_t numerator, unsigned exponent)
    : p_(p), num_(numerator), exp_(exponent) {
  if (p < 2) throw ArgumentError("fraction base must be >= 2");
  if (num_ >= checked_pow(p, exp_)) throw ArgumentError("fraction must lie in [0, 1)");
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && num_ % p_ == 0) {
    num_ /= p_;
    --exp_;
  }
}

double DyadicFraction::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(checked_pow(p_, exp_));
}

DyadicFraction operator+(const DyadicFraction& a, const DyadicFraction& b) {
  if (a.p_ != b.p_) throw ArgumentError("fractions use different primes");
  const unsigned e = std::max(a.exp_, b.exp_);
  const auto den = checked_pow(a.p_, e);
  const auto na = a.num_ * checked_pow(a.p_, e - a.exp_);
  const auto nb = b.num_ * checked_pow(b.p_, e - b.exp_);
  return DyadicFraction(a.p_, (na + nb) % den, e);
}

DyadicFraction fractional_part_scaled(const PAdicCode& x, std::uint32_t j, unsigned level_n) {
  const auto p = x.prime();
  if (j < 1 || j >= p) throw ArgumentError("j must lie in {1, ..., p-1}");
  if (x.precision() < level_n + 1) {
    throw PrecisionError("fractional part at level " + std::to_string(level_n) + " needs " +
                         std::to_string(level_n + 1) + " digits");
  }
  const auto den = checked_pow(p, level_n + 1);
  const auto low = x.truncated(level_n + 1).value();
  // low < den <= 2^62 and j < p, so reduce j*low without overflow via mulmod.
  const auto num = static_cast<std::uint64_t>((static_cast<u128>(low) * j) % den);
  return DyadicFraction(p, num, level_n + 1);
}

std::pair<double, double> character_eval(const DyadicFraction& f) {
  const auto den = checked_pow(f.prime(), f.exponent());
  const auto quarter_num = static_cast<u128>(f.numerator()) * 4;
  if (quarter_num % den == 0) {
    switch (static_cast<int>(quarter_num / den)) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, -1.0};
      default: break;
    }
  }
  const double angle = 2.0 * std::numbers::pi * f.to_double();
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace padicrd
