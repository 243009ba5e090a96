#include "sbk/stepfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sbk {

namespace {

CosetKey make_key(const FieldPair& fp, FieldTag tag, const EElt& x, int N) {
  if (tag == FieldTag::F) return {fp.reduce(x.x1, N), Rat(0)};
  return {fp.reduce(x.x1, N), fp.reduce(x.x2, N)};
}

int min_coord_val(const FieldPair& fp, const EElt& x) {
  return std::min(fp.val_F(x.x1), fp.val_F(x.x2));
}

// Tightest support bound covering rep + p^N O.
int support_bound(const FieldPair& fp, const EElt& rep, int N) {
  const int v = min_coord_val(fp, rep);
  return v == kValInf ? -N : std::max(-N, -v);
}

void check_same_field(const StepFunction& f, const StepFunction& g) {
  if (f.tag != g.tag) throw std::invalid_argument("step functions on different fields");
}

}  // namespace

StepFunction zero_function(FieldTag tag, int level, int support_M) {
  StepFunction f;
  f.tag = tag;
  f.level = level;
  f.support_M = support_M;
  return f;
}

StepFunction indicator(const FieldPair& fp, const Coset& c) {
  const EElt rep{c.r1, c.tag == FieldTag::F ? Rat(0) : c.r2};
  StepFunction f = zero_function(c.tag, c.level, support_bound(fp, rep, c.level));
  f.coeffs[make_key(fp, c.tag, rep, c.level)] = 1.0;
  return f;
}

StepFunction box_indicator(const FieldPair& fp, FieldTag tag, int lo, int level) {
  const int N = std::max(lo, level);
  StepFunction f = zero_function(tag, N, -lo);
  for (const auto& c : fp.coset_reps(tag, Box{lo, lo}, N)) f.coeffs[{c.r1, c.r2}] = 1.0;
  return f;
}

cplx evaluate(const FieldPair& fp, const StepFunction& f, const EElt& x) {
  if (f.tag == FieldTag::F && !x.x2.is_zero()) throw std::invalid_argument("evaluate: F-function at a point outside F");
  auto it = f.coeffs.find(make_key(fp, f.tag, x, f.level));
  return it == f.coeffs.end() ? cplx{} : it->second;
}

cplx integrate(const FieldPair& fp, const StepFunction& f) {
  cplx s{};
  for (const auto& [k, c] : f.coeffs) s += c;
  return s * fp.coset_volume(f.tag, f.level).to_double();
}

cplx value_at_zero(const FieldPair& fp, const StepFunction& f) { return evaluate(fp, f, EElt{}); }

double coeff_l1(const StepFunction& f) {
  double s = 0;
  for (const auto& [k, c] : f.coeffs) s += std::abs(c);
  return s;
}

StepFunction refine(const FieldPair& fp, const StepFunction& f, int level) {
  if (level < f.level) throw std::invalid_argument("refine: target level below current level");
  if (level == f.level) return f;
  StepFunction g = zero_function(f.tag, level, f.support_M);
  const auto sub = fp.residues_between(f.level, level);
  for (const auto& [k, c] : f.coeffs) {
    if (f.tag == FieldTag::F) {
      for (const auto& j : sub) g.coeffs[{k.first + j, Rat(0)}] = c;
    } else {
      for (const auto& j1 : sub)
        for (const auto& j2 : sub) g.coeffs[{k.first + j1, k.second + j2}] = c;
    }
  }
  return g;
}

StepFunction add(const FieldPair& fp, const StepFunction& f, const StepFunction& g) {
  check_same_field(f, g);
  const int L = std::max(f.level, g.level);
  StepFunction a = refine(fp, f, L);
  const StepFunction b = refine(fp, g, L);
  a.support_M = std::max(f.support_M, g.support_M);
  for (const auto& [k, c] : b.coeffs) a.coeffs[k] += c;
  return a;
}

StepFunction sub(const FieldPair& fp, const StepFunction& f, const StepFunction& g) {
  return add(fp, f, scale(g, -1.0));
}

StepFunction scale(const StepFunction& f, cplx c) {
  StepFunction g = f;
  for (auto& [k, v] : g.coeffs) v *= c;
  return g;
}

StepFunction conj(const StepFunction& f) {
  StepFunction g = f;
  for (auto& [k, v] : g.coeffs) v = std::conj(v);
  return g;
}

StepFunction product(const FieldPair& fp, const StepFunction& f, const StepFunction& g) {
  check_same_field(f, g);
  const int L = std::max(f.level, g.level);
  const StepFunction a = refine(fp, f, L);
  const StepFunction b = refine(fp, g, L);
  StepFunction out = zero_function(f.tag, L, std::min(f.support_M, g.support_M));
  for (const auto& [k, c] : a.coeffs) {
    auto it = b.coeffs.find(k);
    if (it != b.coeffs.end()) out.coeffs[k] = c * it->second;
  }
  return out;
}

StepFunction multiply_by(const StepFunction& f, const std::function<cplx(const EElt&, int)>& w) {
  StepFunction g = f;
  for (auto& [k, c] : g.coeffs) c *= w(EElt{k.first, k.second}, f.level);
  return g;
}

StepFunction prune(const StepFunction& f, double tol) {
  StepFunction g = zero_function(f.tag, f.level, f.support_M);
  for (const auto& [k, c] : f.coeffs)
    if (std::abs(c) > tol) g.coeffs[k] = c;
  return g;
}

bool approx_equal(const FieldPair& fp, const StepFunction& f, const StepFunction& g, double tol) {
  const StepFunction d = sub(fp, f, g);
  for (const auto& [k, c] : d.coeffs)
    if (std::abs(c) > tol) return false;
  return true;
}

StepFunction translate(const FieldPair& fp, const StepFunction& f, const EElt& y) {
  if (f.tag == FieldTag::F && !y.x2.is_zero()) throw std::invalid_argument("translate: F-function by a non-F shift");
  StepFunction g = zero_function(f.tag, f.level, f.support_M);
  const int v = min_coord_val(fp, y);
  if (v != kValInf) g.support_M = std::max(f.support_M, -v);
  for (const auto& [k, c] : f.coeffs) g.coeffs[make_key(fp, f.tag, EElt{k.first + y.x1, k.second + y.x2}, f.level)] = c;
  return g;
}

StepFunction dilate(const FieldPair& fp, const StepFunction& f, const Rat& a) {
  if (a.is_zero()) throw std::invalid_argument("dilate: zero factor");
  const int v = fp.val_F(a);
  StepFunction g = zero_function(f.tag, f.level + v, f.support_M - v);
  for (const auto& [k, c] : f.coeffs) g.coeffs[make_key(fp, f.tag, EElt{a * k.first, a * k.second}, g.level)] = c;
  return g;
}

StepFunction mobius_pullback(const FieldPair& fp, const StepFunction& f, const Rat& b, int weight_power) {
  if (b.is_zero()) throw std::invalid_argument("mobius_pullback: b must be nonzero");
  const Rat binv = Rat(1) / b;
  struct Ball {
    EElt center;
    int level;
    cplx value;
  };
  std::vector<Ball> balls;
  int L = f.level;
  int M = -f.level;
  for (const auto& [k, c] : f.coeffs) {
    const EElt y0{k.first, k.second};
    const bool contains_pole = fp.val_F(binv - y0.x1) >= f.level && fp.val_F(y0.x2) >= f.level;
    if (contains_pole) {
      throw std::domain_error("mobius_pullback: coset " + y0.x1.str() + (f.tag == FieldTag::E ? "," + y0.x2.str() : "") +
                              " + p^" + std::to_string(f.level) + "O contains 1/b = " + binv.str());
    }
    // The image of y0 + p^N O under y -> y/(1 - b y) is the ball x0 + d^{-2} p^N O, d = 1 - b y0,
    // and |1 + b x| = |d|^{-1} on it.
    const EElt d{Rat(1) - b * y0.x1, -b * y0.x2};
    const EElt x0 = fp.mul(y0, fp.inv(d));
    const int wd = f.tag == FieldTag::F ? 2 * fp.val_F(d.x1) : fp.w_E(d);
    const int lvl = f.level - wd;
    const int wabs = f.tag == FieldTag::F ? fp.val_F(d.x1) : fp.w_E(d);
    const cplx weight = std::pow(static_cast<double>(fp.qF()), static_cast<double>(wabs) * weight_power);
    balls.push_back({x0, lvl, c * weight});
    L = std::max(L, lvl);
    M = std::max(M, support_bound(fp, x0, lvl));
  }
  if (L > f.support_M + f.level + 12)
    throw std::runtime_error("mobius_pullback: output level " + std::to_string(L) + " exceeds cap M+N+12");
  StepFunction g = zero_function(f.tag, L, M);
  for (const auto& ball : balls) {
    StepFunction piece = zero_function(f.tag, ball.level, M);
    piece.coeffs[make_key(fp, f.tag, ball.center, ball.level)] = ball.value;
    for (const auto& [k, c] : refine(fp, piece, L).coeffs) {
      if (g.coeffs.count(k)) throw std::logic_error("mobius_pullback: overlapping image balls");
      g.coeffs[k] = c;
    }
  }
  return g;
}

StepFunction restrict_to_F(const FieldPair& fp, const StepFunction& f) {
  (void)fp;
  if (f.tag != FieldTag::E) throw std::invalid_argument("restrict_to_F expects a function on E");
  StepFunction g = zero_function(FieldTag::F, f.level, f.support_M);
  for (const auto& [k, c] : f.coeffs)
    if (k.second.is_zero()) g.coeffs[{k.first, Rat(0)}] = c;
  return g;
}

StepFunction tensor(const FieldPair& fp, const StepFunction& f1, const StepFunction& f2) {
  if (f1.tag != FieldTag::F || f2.tag != FieldTag::F) throw std::invalid_argument("tensor expects functions on F");
  const int L = std::max(f1.level, f2.level);
  const StepFunction a = refine(fp, f1, L);
  const StepFunction b = refine(fp, f2, L);
  StepFunction g = zero_function(FieldTag::E, L, std::max(f1.support_M, f2.support_M));
  for (const auto& [k1, c1] : a.coeffs)
    for (const auto& [k2, c2] : b.coeffs) g.coeffs[{k1.first, k2.first}] = c1 * c2;
  return g;
}

StepFunction random_step(const FieldPair& fp, FieldTag tag, std::uint64_t seed, const RandomBounds& b) {
  if (b.N < -b.M) throw std::invalid_argument("random_step: level below support bound");
  Rng rng(seed);
  StepFunction f = zero_function(tag, b.N, b.M);
  for (const auto& c : fp.coset_reps(tag, Box{-b.M, -b.M}, b.N)) {
    const double keep = rng.uniform();
    const double re = b.magnitude * (2 * rng.uniform() - 1);
    const double im = b.magnitude * (2 * rng.uniform() - 1);
    if (keep < b.density) f.coeffs[{c.r1, c.r2}] = {re, im};
  }
  return f;
}

}  // namespace sbk
