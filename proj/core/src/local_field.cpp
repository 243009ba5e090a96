#include "sbk/local_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace sbk {

namespace {

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
  i128 r = 1, x = mod_floor(b, m);
  while (e > 0) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::int64_t>(r);
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::string to_string(Ext e) { return e == Ext::Unramified ? "unramified" : "ramified"; }

Ext ext_from_string(const std::string& s) {
  if (s == "unramified" || s == "Unramified") return Ext::Unramified;
  if (s == "ramified" || s == "Ramified") return Ext::Ramified;
  throw std::invalid_argument("unknown extension kind '" + s + "'");
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_square_mod(std::int64_t a, std::int64_t p) {
  a = static_cast<std::int64_t>(mod_floor(a, p));
  if (a == 0) return true;
  return powmod(a, (p - 1) / 2, p) == 1;
}

FieldPair::FieldPair(std::int64_t p, Ext ext, Rat alpha_sq) : p_(p), ext_(ext), alpha_sq_(alpha_sq) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  if (p > 1000) throw std::invalid_argument("p too large for residue-field tables (p <= 1000)");
  if (alpha_sq.is_zero()) throw std::invalid_argument("alpha_sq must be nonzero");
  const int v = val_F(alpha_sq);
  if (ext == Ext::Unramified) {
    if (v != 0) throw std::invalid_argument("unramified alpha_sq must be a unit");
    a_res_ = residue(alpha_sq);
    if (is_square_mod(a_res_, p)) throw std::invalid_argument("unramified alpha_sq must be a non-square mod p");
  } else {
    if (v != 1) throw std::invalid_argument("ramified alpha_sq must have valuation 1");
    u_res_ = residue(alpha_sq / Rat(p));
    if (u_res_ != 1)
      throw std::invalid_argument("ramified alpha_sq must satisfy alpha_sq/p = 1 mod p (so that chi(p) = 1)");
    u_res_inv_ = static_cast<std::int64_t>(inv_mod(u_res_, p));
  }

  const std::int64_t qe = qE();
  const std::int64_t order = qe - 1;
  const auto factors = prime_factors(order);
  for (std::int64_t g = 1; g < qe; ++g) {
    bool ok = true;
    for (auto r : factors) {
      if (res_pow(g, order / r) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen_E_ = g;
      break;
    }
  }
  expE_.assign(static_cast<std::size_t>(order), 0);
  logE_.assign(static_cast<std::size_t>(qe), -1);
  std::int64_t cur = 1;
  for (std::int64_t j = 0; j < order; ++j) {
    expE_[static_cast<std::size_t>(j)] = cur;
    logE_[static_cast<std::size_t>(cur)] = static_cast<int>(j);
    cur = res_mul(cur, gen_E_);
  }
  gen_F_ = ext == Ext::Unramified ? res_pow(gen_E_, p + 1) : gen_E_;
  if (gen_F_ >= p) throw std::logic_error("restricted generator not in F_p");
  logF_.assign(static_cast<std::size_t>(p), -1);
  cur = 1;
  for (std::int64_t j = 0; j < p - 1; ++j) {
    logF_[static_cast<std::size_t>(cur)] = static_cast<int>(j);
    cur = cur * gen_F_ % p;
  }
}

FieldPair FieldPair::make_default(std::int64_t p, Ext ext) {
  if (ext == Ext::Ramified) return FieldPair(p, ext, Rat(p));
  for (std::int64_t a = 2; a < p; ++a)
    if (!is_square_mod(a, p)) return FieldPair(p, ext, Rat(a));
  throw std::invalid_argument("p must be an odd prime");
}

EElt FieldPair::mul(const EElt& a, const EElt& b) const {
  return {a.x1 * b.x1 + alpha_sq_ * a.x2 * b.x2, a.x1 * b.x2 + a.x2 * b.x1};
}

Rat FieldPair::norm(const EElt& a) const { return a.x1 * a.x1 - alpha_sq_ * a.x2 * a.x2; }

EElt FieldPair::inv(const EElt& a) const {
  Rat n = norm(a);
  if (n.is_zero()) throw std::domain_error("inverse of zero in E");
  return {a.x1 / n, -a.x2 / n};
}

int FieldPair::val_F(const Rat& x) const {
  if (x.is_zero()) return kValInf;
  return vp_int(x.num(), p_) - vp_int(x.den(), p_);
}

int FieldPair::w_E(const EElt& x) const {
  const int v1 = val_F(x.x1);
  const int v2 = val_F(x.x2);
  if (v1 == kValInf && v2 == kValInf) return kValInf;
  if (ext_ == Ext::Unramified) return 2 * std::min(v1, v2);
  const long a = v1 == kValInf ? static_cast<long>(kValInf) : 2L * v1;
  const long b = v2 == kValInf ? static_cast<long>(kValInf) : 2L * v2 + 1;
  return static_cast<int>(std::min(a, b));
}

int FieldPair::val_E(const EElt& x) const {
  const int w = w_E(x);
  if (w == kValInf) return kValInf;
  return ext_ == Ext::Unramified ? w / 2 : w;
}

int FieldPair::valuation(const EElt& x, FieldTag tag) const {
  if (tag == FieldTag::F) {
    if (!x.x2.is_zero()) throw std::invalid_argument("F-valuation of an element outside F");
    return val_F(x.x1);
  }
  return val_E(x);
}

Rat FieldPair::p_pow(int e) const {
  if (e >= 0) return Rat(ipow(p_, e), 1);
  return Rat(1, ipow(p_, -e));
}

Rat FieldPair::abs_F(const Rat& x) const {
  if (x.is_zero()) return Rat(0);
  return p_pow(-val_F(x));
}

Rat FieldPair::abs_E(const EElt& x) const {
  const int w = w_E(x);
  if (w == kValInf) return Rat(0);
  return p_pow(-w);
}

Rat FieldPair::abs_value(const EElt& x, FieldTag tag) const {
  if (tag == FieldTag::F) {
    if (!x.x2.is_zero()) throw std::invalid_argument("F-absolute value of an element outside F");
    return abs_F(x.x1);
  }
  return abs_E(x);
}

std::int64_t FieldPair::residue(const Rat& x) const {
  if (x.is_zero()) return 0;
  if (x.den() % p_ == 0) throw std::invalid_argument("residue of a non-integral element");
  i128 n = mod_floor(x.num(), p_);
  i128 d = inv_mod(mod_floor(x.den(), p_), p_);
  return static_cast<std::int64_t>(n * d % p_);
}

std::int64_t FieldPair::lead_F(const Rat& x) const {
  if (x.is_zero()) throw std::invalid_argument("leading unit of zero");
  return residue(x / p_pow(val_F(x)));
}

std::int64_t FieldPair::lead_E(const EElt& x) const {
  const int v1 = val_F(x.x1);
  const int v2 = val_F(x.x2);
  if (v1 == kValInf && v2 == kValInf) throw std::invalid_argument("leading unit of zero");
  if (ext_ == Ext::Unramified) {
    const int v = std::min(v1, v2);
    const Rat s = p_pow(-v);
    return residue(x.x1 * s) + p_ * residue(x.x2 * s);
  }
  // x / alpha^w with alpha^2 = p*u.
  const int w = w_E(x);
  if (w % 2 == 0) {
    const std::int64_t r = residue(x.x1 / p_pow(v1));
    const std::int64_t uf = v1 >= 0 ? powmod(u_res_inv_, v1, p_) : powmod(u_res_, -static_cast<std::int64_t>(v1), p_);
    return static_cast<std::int64_t>(i128(r) * uf % p_);
  }
  const std::int64_t r = residue(x.x2 / p_pow(v2));
  const std::int64_t uf = v2 >= 0 ? powmod(u_res_inv_, v2, p_) : powmod(u_res_, -static_cast<std::int64_t>(v2), p_);
  return static_cast<std::int64_t>(i128(r) * uf % p_);
}

std::int64_t FieldPair::leading_unit(const EElt& x, FieldTag tag) const {
  if (tag == FieldTag::F) {
    if (!x.x2.is_zero()) throw std::invalid_argument("F-leading unit of an element outside F");
    return lead_F(x.x1);
  }
  return lead_E(x);
}

int FieldPair::logF(std::int64_t r) const {
  if (r <= 0 || r >= p_) throw std::invalid_argument("logF: not a nonzero residue");
  return logF_[static_cast<std::size_t>(r)];
}

int FieldPair::logE(std::int64_t r) const {
  if (r <= 0 || r >= qE() || logE_[static_cast<std::size_t>(r)] < 0)
    throw std::invalid_argument("logE: not a nonzero residue");
  return logE_[static_cast<std::size_t>(r)];
}

std::int64_t FieldPair::res_mul(std::int64_t a, std::int64_t b) const {
  if (ext_ == Ext::Ramified) return static_cast<std::int64_t>(i128(a) * b % p_);
  const std::int64_t a0 = a % p_, a1 = a / p_, b0 = b % p_, b1 = b / p_;
  const std::int64_t c0 = (a0 * b0 + a_res_ * (a1 * b1 % p_)) % p_;
  const std::int64_t c1 = (a0 * b1 + a1 * b0) % p_;
  return c0 + p_ * c1;
}

std::int64_t FieldPair::res_pow(std::int64_t a, std::int64_t e) const {
  std::int64_t r = 1;
  while (e > 0) {
    if (e & 1) r = res_mul(r, a);
    a = res_mul(a, a);
    e >>= 1;
  }
  return r;
}

Rat FieldPair::reduce(const Rat& x, int N) const {
  if (x.is_zero() || val_F(x) >= N) return Rat(0);
  i128 d = x.den();
  int k = 0;
  while (d % p_ == 0) {
    d /= p_;
    ++k;
  }
  const i128 m = ipow(p_, N + k);
  if (m >= (i128(1) << 62)) throw std::overflow_error("coset modulus exceeds 2^62");
  const i128 a = mod_floor(x.num(), m) * inv_mod(mod_floor(d, m), m) % m;
  return Rat(a, ipow(p_, k));
}

std::vector<Rat> FieldPair::residues_between(int lo, int N) const {
  if (lo == INT_MIN) throw std::invalid_argument("unbounded box");
  if (N < lo) throw std::invalid_argument("level below the box bound");
  const i128 count = ipow(p_, N - lo);
  if (count > 50'000'000) throw std::invalid_argument("coset enumeration too large");
  std::vector<Rat> out;
  out.reserve(static_cast<std::size_t>(count));
  const Rat step = p_pow(lo);
  for (i128 j = 0; j < count; ++j) out.push_back(Rat(static_cast<std::int64_t>(j)) * step);
  return out;
}

std::vector<Coset> FieldPair::coset_reps(FieldTag tag, const Box& box, int N) const {
  std::vector<Coset> out;
  const auto r1 = residues_between(box.lo1, N);
  if (tag == FieldTag::F) {
    for (const auto& r : r1) out.push_back({FieldTag::F, r, Rat(0), N});
    return out;
  }
  const auto r2 = residues_between(box.lo2, N);
  if (r1.size() * r2.size() > 50'000'000) throw std::invalid_argument("coset enumeration too large");
  out.reserve(r1.size() * r2.size());
  for (const auto& a : r1)
    for (const auto& b : r2) out.push_back({FieldTag::E, a, b, N});
  return out;
}

Rat FieldPair::coset_volume(FieldTag tag, int N) const {
  return tag == FieldTag::F ? p_pow(-N) : p_pow(-2 * N);
}

std::string FieldPair::describe() const {
  return "p=" + std::to_string(p_) + " " + to_string(ext_) + " alpha^2=" + alpha_sq_.str();
}

}  // namespace sbk
