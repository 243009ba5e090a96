#include "sbk/merorat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sbk {

namespace {

constexpr double kDropRel = 1e-14;
constexpr double kPoleTol = 1e-12;

void check_base(const MeroRational& u, const MeroRational& v) {
  if (u.base() != v.base()) throw std::invalid_argument("MeroRational base mismatch");
}

// Multiset difference: factors of `all` not matched by `part`.
std::vector<Factor> den_minus(const std::vector<Factor>& all, const std::vector<Factor>& part) {
  std::vector<bool> used(all.size(), false);
  for (const auto& f : part) {
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!used[i] && same_factor(all[i], f)) {
        used[i] = true;
        break;
      }
    }
  }
  std::vector<Factor> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!used[i]) out.push_back(all[i]);
  return out;
}

std::vector<Mono> times_factor(const std::vector<Mono>& num, const Factor& f) {
  std::vector<Mono> out = num;
  for (const auto& m : num) out.push_back({-f.c * m.c, m.a + f.a, m.b + f.b});
  return out;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

bool same_factor(const Factor& f, const Factor& g) {
  return f.a == g.a && f.b == g.b && std::abs(f.c - g.c) <= 1e-12 * std::max(1.0, std::abs(f.c));
}

MeroRational MeroRational::constant(double base, cplx c) {
  MeroRational u(base);
  u.add_term(c, 0, 0);
  u.normalize();
  return u;
}

MeroRational MeroRational::monomial(double base, cplx c, int a, int b) {
  MeroRational u(base);
  u.add_term(c, a, b);
  u.normalize();
  return u;
}

void MeroRational::add_term(cplx c, int a, int b) { num_.push_back({c, a, b}); }

void MeroRational::add_den(const Factor& f) {
  if (f.a == 0 && f.b == 0) {
    if (std::abs(1.0 - f.c) <= kPoleTol) throw std::domain_error("constant vanishing denominator factor");
    for (auto& m : num_) m.c /= (1.0 - f.c);
    return;
  }
  if (std::abs(f.c) == 0.0) return;
  den_.push_back(f);
}

void MeroRational::normalize() {
  std::map<std::pair<int, int>, cplx> merged;
  for (const auto& m : num_) merged[{m.a, m.b}] += m.c;
  double mx = 0;
  for (const auto& [k, c] : merged) mx = std::max(mx, std::abs(c));
  num_.clear();
  for (const auto& [k, c] : merged)
    if (std::abs(c) > kDropRel * mx && std::abs(c) > 0) num_.push_back({c, k.first, k.second});
  std::vector<Factor> d;
  for (const auto& f : den_)
    if (std::abs(f.c) > 0) d.push_back(f);
  den_ = d;
}

std::string MeroRational::str() const {
  std::ostringstream os;
  os.precision(12);
  os << "(";
  for (std::size_t i = 0; i < num_.size(); ++i) {
    if (i) os << " + ";
    os << num_[i].c << "*X^" << num_[i].a << "*Y^" << num_[i].b;
  }
  if (num_.empty()) os << "0";
  os << ")";
  for (const auto& f : den_) os << " / (1 - " << f.c << "*X^" << f.a << "*Y^" << f.b << ")";
  return os.str();
}

MeroRational add(const MeroRational& u, const MeroRational& v) {
  if (v.is_zero()) return u;
  if (u.is_zero()) return v;
  check_base(u, v);
  std::vector<Factor> common = u.den();
  for (const auto& f : den_minus(v.den(), u.den())) common.push_back(f);
  std::vector<Mono> nu = u.num();
  for (const auto& f : den_minus(common, u.den())) nu = times_factor(nu, f);
  std::vector<Mono> nv = v.num();
  for (const auto& f : den_minus(common, v.den())) nv = times_factor(nv, f);
  MeroRational r(u.base());
  for (const auto& m : nu) r.add_term(m.c, m.a, m.b);
  for (const auto& m : nv) r.add_term(m.c, m.a, m.b);
  r.mutable_den() = common;
  r.normalize();
  if (r.is_zero()) r.mutable_den().clear();
  return r;
}

MeroRational sub(const MeroRational& u, const MeroRational& v) { return add(u, scale(v, -1.0)); }

MeroRational scale(const MeroRational& u, cplx c) {
  MeroRational r = u;
  for (auto& m : r.mutable_num()) m.c *= c;
  r.normalize();
  if (r.is_zero()) r.mutable_den().clear();
  return r;
}

MeroRational mul(const MeroRational& u, const MeroRational& v) {
  if (u.is_zero() || v.is_zero()) return MeroRational(u.base() != 0 ? u.base() : v.base());
  check_base(u, v);
  MeroRational r(u.base());
  for (const auto& m : u.num())
    for (const auto& n : v.num()) r.add_term(m.c * n.c, m.a + n.a, m.b + n.b);
  r.mutable_den() = u.den();
  for (const auto& f : v.den()) r.mutable_den().push_back(f);
  r.normalize();
  return r;
}

MeroRational mul_factor(const MeroRational& u, const Factor& f) {
  MeroRational r = u;
  auto& den = r.mutable_den();
  for (std::size_t i = 0; i < den.size(); ++i) {
    if (same_factor(den[i], f)) {
      den.erase(den.begin() + static_cast<std::ptrdiff_t>(i));
      return r;
    }
  }
  r.mutable_num() = times_factor(u.num(), f);
  r.normalize();
  return r;
}

MeroRational geometric_tail(double base, cplx c, int a, int b, int k0) {
  if (a == 0 && b == 0) {
    if (std::abs(c) >= 1) throw std::domain_error("geometric_tail: divergent constant series");
    return MeroRational::constant(base, std::pow(c, k0) / (1.0 - c));
  }
  MeroRational u = MeroRational::monomial(base, std::pow(c, k0), a * k0, b * k0);
  u.add_den({c, a, b});
  return u;
}

CancelResult cancel_factor(const MeroRational& u, const Factor& f) {
  CancelResult res{u, false};
  std::size_t idx = u.den().size();
  for (std::size_t i = 0; i < u.den().size(); ++i) {
    if (same_factor(u.den()[i], f)) {
      idx = i;
      break;
    }
  }
  if (idx == u.den().size() || (f.a == 0 && f.b == 0)) return res;
  // Group monomials into classes e0 + j (a, b) and divide each class polynomial in m = X^a Y^b.
  std::map<std::pair<std::int64_t, std::int64_t>, std::map<std::int64_t, cplx>> classes;
  for (const auto& m : u.num()) {
    std::int64_t j;
    if (f.a != 0) {
      j = f.a > 0 ? floor_div(m.a, f.a) : -floor_div(m.a, -f.a);
    } else {
      j = f.b > 0 ? floor_div(m.b, f.b) : -floor_div(m.b, -f.b);
    }
    classes[{m.a - j * f.a, m.b - j * f.b}][j] += m.c;
  }
  MeroRational q(u.base());
  for (const auto& [key, poly] : classes) {
    const std::int64_t j0 = poly.begin()->first;
    const std::int64_t j1 = poly.rbegin()->first;
    std::vector<cplx> n(static_cast<std::size_t>(j1 - j0 + 1));
    double scale_mag = 0;
    for (const auto& [j, c] : poly) {
      n[static_cast<std::size_t>(j - j0)] = c;
      scale_mag = std::max(scale_mag, std::abs(c));
    }
    cplx prev{};
    std::vector<cplx> qs(n.size());
    for (std::size_t j = 0; j < n.size(); ++j) {
      qs[j] = n[j] + f.c * prev;
      prev = qs[j];
      scale_mag = std::max(scale_mag, std::abs(f.c * prev));
    }
    if (std::abs(qs.back()) > 1e-9 * scale_mag) return res;
    for (std::size_t j = 0; j + 1 < n.size(); ++j) {
      const std::int64_t jj = j0 + static_cast<std::int64_t>(j);
      q.add_term(qs[j], static_cast<int>(key.first + jj * f.a), static_cast<int>(key.second + jj * f.b));
    }
  }
  q.mutable_den() = u.den();
  q.mutable_den().erase(q.mutable_den().begin() + static_cast<std::ptrdiff_t>(idx));
  q.normalize();
  res.value = q;
  res.divisible = true;
  return res;
}

MeroRational cancel_all(const MeroRational& u) {
  MeroRational cur = u;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& f : cur.den()) {
      auto r = cancel_factor(cur, f);
      if (r.divisible) {
        cur = r.value;
        progress = true;
        break;
      }
    }
  }
  return cur;
}

MeroRational substitute(const MeroRational& u, cplx cx, int xa, int xb, cplx cy, int ya, int yb) {
  MeroRational r(u.base());
  for (const auto& m : u.num())
    r.add_term(m.c * std::pow(cx, m.a) * std::pow(cy, m.b), m.a * xa + m.b * ya, m.a * xb + m.b * yb);
  for (const auto& f : u.den())
    r.add_den({f.c * std::pow(cx, f.a) * std::pow(cy, f.b), f.a * xa + f.b * ya, f.a * xb + f.b * yb});
  r.normalize();
  return r;
}

cplx eval_num(const MeroRational& u, cplx X, cplx Y) {
  cplx s{};
  for (const auto& m : u.num()) s += m.c * std::pow(X, m.a) * std::pow(Y, m.b);
  return s;
}

cplx eval_factor(const Factor& f, cplx X, cplx Y) { return 1.0 - f.c * std::pow(X, f.a) * std::pow(Y, f.b); }

namespace {

cplx eval_mono_st(double q, cplx c, int a, int b, cplx s, cplx t) {
  return c * qpow(q, -(static_cast<double>(a) * s + static_cast<double>(b) * t));
}

}  // namespace

EvalResult eval_at(const MeroRational& u, cplx s, cplx t) {
  EvalResult r;
  const double q = u.base();
  cplx num{};
  for (const auto& m : u.num()) num += eval_mono_st(q, m.c, m.a, m.b, s, t);
  cplx den = 1.0;
  for (const auto& f : u.den()) {
    const cplx v = 1.0 - eval_mono_st(q, f.c, f.a, f.b, s, t);
    if (std::abs(v) <= kPoleTol) {
      r.pole = true;
      ++r.order;
      r.vanishing.push_back(f);
    }
    den *= v;
  }
  if (!r.pole) r.value = u.is_zero() ? cplx{} : num / den;
  return r;
}

cplx residue_along(const MeroRational& u, const Factor& f, cplx s, cplx t) {
  int mult = 0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < u.den().size(); ++i) {
    if (same_factor(u.den()[i], f)) {
      ++mult;
      idx = i;
    }
  }
  if (mult != 1) throw std::invalid_argument("residue_along: factor multiplicity is " + std::to_string(mult));
  MeroRational v = u;
  v.mutable_den().erase(v.mutable_den().begin() + static_cast<std::ptrdiff_t>(idx));
  const auto r = eval_at(v, s, t);
  if (r.pole) throw std::domain_error("residue_along: further pole at the point");
  return r.value;
}

LimitResult limit_along_line(const MeroRational& u, cplx s0, cplx t0) {
  LimitResult out;
  const double q = u.base();
  if (u.is_zero()) return out;
  // Univariate restriction in Z = q^{-z}.
  std::map<int, cplx> coef;
  for (const auto& m : u.num()) coef[m.a] += eval_mono_st(q, m.c, m.a, m.b, s0, t0);
  const int lo = coef.begin()->first;
  const int hi = coef.rbegin()->first;
  std::vector<cplx> P(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [a, c] : coef) P[static_cast<std::size_t>(a - lo)] = c;
  cplx den_at_one = 1.0;
  int npole = 0;
  bool constant_pole = false;
  for (const auto& f : u.den()) {
    const cplx c1 = eval_mono_st(q, f.c, f.a, f.b, s0, t0);
    if (std::abs(1.0 - c1) <= 1e-9) {
      if (f.a == 0) constant_pole = true;
      ++npole;
      den_at_one *= static_cast<double>(f.a);  // (1 - Z^a) / (1 - Z) at Z = 1
    } else {
      den_at_one *= (1.0 - c1);
    }
  }
  int nz = 0;
  cplx sign = 1.0;
  auto at_one = [](const std::vector<cplx>& v) {
    cplx s{};
    for (auto c : v) s += c;
    return s;
  };
  auto l1 = [](const std::vector<cplx>& v) {
    double s = 0;
    for (auto c : v) s += std::abs(c);
    return s;
  };
  const double scale_mag = l1(P);
  while (P.size() > 1 && std::abs(at_one(P)) <= 1e-9 * scale_mag) {
    // P = (Z - 1) Q.
    std::vector<cplx> Q(P.size() - 1);
    cplx carry{};
    for (std::size_t i = P.size() - 1; i >= 1; --i) {
      carry = P[i] + carry;
      Q[i - 1] = carry;
    }
    P = Q;
    sign = -sign;
    ++nz;
  }
  const int k = nz - npole - 1;
  if (!constant_pole && k >= 0) {
    out.value = k > 0 ? cplx{} : sign * at_one(P) / (den_at_one * 2.0);
    return out;
  }
  if (constant_pole || std::abs(at_one(P)) > 1e-6 * scale_mag) {
    out.removable = false;
    return out;
  }
  // Borderline exact division: symmetric average with one Richardson step.
  const double h = 1e-4;
  auto g = [&](double z) {
    const auto r = eval_at(u, s0 + z, t0);
    if (r.pole) return cplx(std::nan(""), 0);
    return r.value / (1.0 - std::pow(q, -2 * z));
  };
  auto A = [&](double hh) { return 0.5 * (g(hh) + g(-hh)); };
  const cplx a1 = A(h);
  const cplx a2 = A(h / 2);
  const cplx v = (4.0 * a2 - a1) / 3.0;
  out.numeric = true;
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(a1 - a2) > 1e-3 * std::max(1.0, std::abs(v))) {
    out.removable = false;
    return out;
  }
  out.value = v;
  return out;
}

}  // namespace sbk
