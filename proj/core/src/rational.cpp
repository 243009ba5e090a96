#include "sbk/rational.hpp"

#include <stdexcept>

namespace sbk {

namespace {

i128 iabs(i128 v) { return v < 0 ? -v : v; }

i128 igcd(i128 a, i128 b) {
  a = iabs(a);
  b = iabs(b);
  while (b != 0) {
    i128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow (mul)");
  return r;
}

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow (add)");
  return r;
}

i128 ipow(i128 base, int e) {
  if (e < 0) throw std::invalid_argument("ipow: negative exponent");
  i128 r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

std::string i128_to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string s;
  while (v != 0) {
    int d = static_cast<int>(v % 10);
    s.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

int vp_int(i128 n, std::int64_t p) {
  if (n == 0) throw std::invalid_argument("vp_int: zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

i128 mod_floor(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

i128 inv_mod(i128 a, i128 m) {
  if (m == 1) return 0;
  i128 g = m, x = 0, x1 = 1, a1 = mod_floor(a, m);
  while (a1 != 0) {
    i128 q = g / a1;
    i128 t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::invalid_argument("inv_mod: not invertible");
  return mod_floor(x, m);
}

Rat::Rat(i128 n, i128 d) : num_(n), den_(d) {
  if (d == 0) throw std::domain_error("Rat: zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  i128 g = igcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

Rat Rat::from_string(const std::string& s) {
  auto parse = [](const std::string& t) -> i128 {
    if (t.empty()) throw std::invalid_argument("Rat: empty component");
    std::size_t i = 0;
    bool neg = false;
    if (t[0] == '-' || t[0] == '+') {
      neg = t[0] == '-';
      i = 1;
    }
    if (i >= t.size()) throw std::invalid_argument("Rat: malformed '" + t + "'");
    i128 v = 0;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') throw std::invalid_argument("Rat: malformed '" + t + "'");
      v = checked_add(checked_mul(v, 10), t[i] - '0');
    }
    return neg ? -v : v;
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(parse(s), 1);
  return Rat(parse(s.substr(0, slash)), parse(s.substr(slash + 1)));
}

double Rat::to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

std::string Rat::str() const {
  if (den_ == 1) return i128_to_string(num_);
  return i128_to_string(num_) + "/" + i128_to_string(den_);
}

Rat Rat::operator-() const {
  Rat r = *this;
  r.num_ = -r.num_;
  return r;
}

Rat& Rat::operator+=(const Rat& o) {
  if (den_ == o.den_) {
    *this = Rat(checked_add(num_, o.num_), den_);
    return *this;
  }
  i128 g = igcd(den_, o.den_);
  i128 d1 = den_ / g;
  i128 d2 = o.den_ / g;
  i128 n = checked_add(checked_mul(num_, d2), checked_mul(o.num_, d1));
  *this = Rat(n, checked_mul(den_, d2));
  return *this;
}

Rat& Rat::operator-=(const Rat& o) { return *this += -o; }

Rat& Rat::operator*=(const Rat& o) {
  i128 g1 = igcd(num_, o.den_);
  i128 g2 = igcd(o.num_, den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  i128 n = checked_mul(num_ / g1, o.num_ / g2);
  i128 d = checked_mul(den_ / g2, o.den_ / g1);
  *this = Rat(n, d);
  return *this;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.num_ == 0) throw std::domain_error("Rat: division by zero");
  return *this *= Rat(o.den_, o.num_);
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
  i128 l = checked_mul(a.num_, b.den_);
  i128 r = checked_mul(b.num_, a.den_);
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace sbk
