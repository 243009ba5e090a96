#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace sbk {

using i128 = __int128;

/// Exact rational number with 128-bit numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator. Arithmetic traps
/// on overflow with std::overflow_error.
class Rat {
public:
  Rat() = default;
  Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rat(i128 n, i128 d);

  static Rat from_string(const std::string& s);

  i128 num() const { return num_; }
  i128 den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const;
  std::string str() const;

  Rat operator-() const;
  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

private:
  i128 num_ = 0;
  i128 den_ = 1;
};

i128 checked_mul(i128 a, i128 b);
i128 checked_add(i128 a, i128 b);
i128 ipow(i128 base, int e);
std::string i128_to_string(i128 v);

/// p-adic valuation of a nonzero integer.
int vp_int(i128 n, std::int64_t p);

/// Multiplicative inverse of a modulo m (gcd(a, m) = 1, 0 < m < 2^62).
i128 inv_mod(i128 a, i128 m);
i128 mod_floor(i128 a, i128 m);

}  // namespace sbk
