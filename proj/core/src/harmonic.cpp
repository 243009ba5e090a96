#include "sbk/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbk {

namespace {

using Grid = std::map<CosetKey, cplx>;

Rat& coord(CosetKey& k, int idx) { return idx == 0 ? k.first : k.second; }

// One coordinate of a separable transform: b -> a with kernel psi(lambda a b). Input cells
// have level N in that coordinate; the output lives on p^{-(N + v(lambda))} O at level L.
Grid transform_coord(const FieldPair& fp, const Grid& in, int idx, const Rat& lambda, int N, int L) {
  const int out_support = N + fp.val_F(lambda);
  const auto outs = fp.residues_between(-out_support, L);
  const double vol = std::pow(static_cast<double>(fp.qF()), -N);
  Grid out;
  for (const auto& [k, c] : in) {
    CosetKey key = k;
    const Rat b = coord(key, idx);
    for (const Rat& a : outs) {
      coord(key, idx) = a;
      out[key] += c * vol * additive_char(fp, lambda * a * b);
    }
  }
  return out;
}

StepFunction from_grid(FieldTag tag, int level, int support, Grid g) {
  StepFunction f = zero_function(tag, level, support);
  double mx = 0;
  for (const auto& [k, c] : g) mx = std::max(mx, std::abs(c));
  for (auto& [k, c] : g)
    if (std::abs(c) > 1e-15 * mx) f.coeffs.emplace(k, c);
  return f;
}

int ceil_div2(int m) { return m >= 0 ? (m + 1) / 2 : -((-m) / 2); }
int floor_div2(int m) { return m >= 0 ? m / 2 : -((-m + 1) / 2); }

// Normalized valuation of the field carrying chi0.
int field_val(const FieldPair& fp, FieldTag tag, const EElt& x) {
  return tag == FieldTag::F ? fp.val_F(x.x1) : fp.val_E(x);
}

double field_q(const FieldPair& fp, FieldTag tag) {
  return static_cast<double>(tag == FieldTag::F ? fp.qF() : fp.qE());
}

// Residue degree of the field over F (|x| = q_F^{-deg * val}).
int field_deg(const FieldPair& fp, FieldTag tag) { return tag == FieldTag::F ? 1 : fp.f(); }

// Smallest normalized valuation m0 with psi trivial on the shell of valuation m0.
int psi_trivial_from(const FieldPair& fp, FieldTag tag) {
  return tag == FieldTag::E && fp.ext() == Ext::Ramified ? -1 : 0;
}

// int over {val = m} of psi(x) chi0(x) dx as an exact sum over cosets on which psi and
// chi0 are both constant.
cplx shell_integral(const FieldPair& fp, const TameChar& chi0, int m) {
  const FieldTag tag = chi0.tag;
  const double q = static_cast<double>(fp.qF());
  int lo = m;
  int L = m + 1;
  if (tag == FieldTag::E && fp.ext() == Ext::Ramified) {
    lo = floor_div2(m);
    L = ceil_div2(m + 1);
  }
  L = std::max(L, 0);
  const double vol = tag == FieldTag::F ? std::pow(q, -L) : std::pow(q, -2.0 * L);
  cplx sum{};
  for (const auto& c : fp.coset_reps(tag, Box{lo, lo}, L)) {
    const EElt x{c.r1, c.r2};
    if (field_val(fp, tag, x) != m) continue;
    sum += additive_char(fp, x) * eval_tame(fp, chi0, fp.leading_unit(x, tag));
  }
  return sum * vol;
}

}  // namespace

// ---------------------------------------------------------------------------
// Fourier layer
// ---------------------------------------------------------------------------

StepFunction fourier(const FieldPair& fp, const StepFunction& f) {
  const int N = f.level;
  const int M = f.support_M;
  Grid g(f.coeffs.begin(), f.coeffs.end());
  g = transform_coord(fp, g, 0, Rat(1), N, M);
  if (f.tag == FieldTag::F) return from_grid(FieldTag::F, M, N, std::move(g));
  g = transform_coord(fp, g, 1, fp.alpha_sq(), N, M);
  return from_grid(FieldTag::E, M, N + fp.v_alpha_sq(), std::move(g));
}

StepFunction symplectic_fourier(const FieldPair& fp, const StepFunction& f) {
  if (f.tag != FieldTag::E) throw std::invalid_argument("symplectic_fourier expects a function on E");
  const int N = f.level;
  const int M = f.support_M;
  // psi(x1 y2 - x2 y1): y1 -> x2 with lambda = -1, y2 -> x1 with lambda = 1.
  Grid g(f.coeffs.begin(), f.coeffs.end());
  g = transform_coord(fp, g, 0, Rat(-1), N, M);
  g = transform_coord(fp, g, 1, Rat(1), N, M);
  Grid swapped;
  for (const auto& [k, c] : g) swapped.emplace(CosetKey{k.second, k.first}, c);
  return from_grid(FieldTag::E, M, N, std::move(swapped));
}

StepFunction symplectic_coordinates(const FieldPair& fp, const StepFunction& f) {
  if (f.tag != FieldTag::E) throw std::invalid_argument("symplectic_coordinates expects a function on E");
  const int v = fp.v_alpha_sq();
  const int L = f.level + v;
  const auto sub = fp.residues_between(f.level, L);
  StepFunction g = zero_function(FieldTag::E, L, f.support_M);
  for (const auto& [k, c] : f.coeffs) {
    const Rat x1 = fp.reduce(fp.alpha_sq() * k.second, L);
    for (const Rat& j : sub) g.coeffs[{x1, fp.reduce(-k.first + j, L)}] = c;
  }
  return g;
}

StepFunction convolve(const FieldPair& fp, const StepFunction& f, const StepFunction& g) {
  if (f.tag != g.tag) throw std::invalid_argument("convolve: step functions on different fields");
  const int L = std::max(f.level, g.level);
  const StepFunction a = refine(fp, f, L);
  const StepFunction b = refine(fp, g, L);
  const double vol = fp.coset_volume(f.tag, L).to_double();
  StepFunction out = zero_function(f.tag, L, std::max(f.support_M, g.support_M));
  for (const auto& [ka, ca] : a.coeffs)
    for (const auto& [kb, cb] : b.coeffs)
      out.coeffs[{fp.reduce(ka.first + kb.first, L), fp.reduce(ka.second + kb.second, L)}] += ca * cb * vol;
  return out;
}

StepFunction reflect(const FieldPair& fp, const StepFunction& f) {
  StepFunction g = zero_function(f.tag, f.level, f.support_M);
  for (const auto& [k, c] : f.coeffs)
    g.coeffs[{fp.reduce(-k.first, f.level), fp.reduce(-k.second, f.level)}] = c;
  return g;
}

cplx inner_l2(const FieldPair& fp, const StepFunction& f, const StepFunction& g) {
  return integrate(fp, product(fp, f, conj(g)));
}

InversionConstants inversion_constants(const FieldPair& fp) {
  InversionConstants c;
  for (FieldTag tag : {FieldTag::F, FieldTag::E}) {
    const StepFunction one = box_indicator(fp, tag, 0, 0);
    const cplx back = value_at_zero(fp, fourier(fp, fourier(fp, one)));
    if (std::abs(back.imag()) > 1e-12 || back.real() <= 0)
      throw std::logic_error("inversion_constants: double transform of 1_O is not a positive multiple");
    (tag == FieldTag::F ? c.cF : c.cE) = 1.0 / back.real();
  }
  return c;
}

cplx weighted_integral(const FieldPair& fp, const StepFunction& g, cplx e) {
  const double q = static_cast<double>(fp.qF());
  const double vol = fp.coset_volume(g.tag, g.level).to_double();
  cplx sum{};
  cplx at_zero{};
  for (const auto& [k, c] : g.coeffs) {
    const EElt x{k.first, k.second};
    if (x.x1.is_zero() && x.x2.is_zero()) {
      at_zero = c;
      continue;
    }
    const int w = g.tag == FieldTag::F ? fp.val_F(x.x1) : fp.w_E(x);
    sum += c * vol * qpow(q, -static_cast<double>(w) * e);
  }
  if (at_zero == cplx{}) return sum;
  if ((1.0 + e).real() <= 0)
    throw std::domain_error("weighted_integral: |x|^e is not integrable at 0 and g(0) != 0");
  const int L = g.level;
  cplx tail;
  if (g.tag == FieldTag::F) {
    tail = (1.0 - 1.0 / q) * qpow(q, -static_cast<double>(L) * (1.0 + e)) / (1.0 - qpow(q, -(1.0 + e)));
  } else if (fp.ext() == Ext::Unramified) {
    tail = (1.0 - 1.0 / (q * q)) * qpow(q, -2.0 * static_cast<double>(L) * (1.0 + e)) / (1.0 - qpow(q, -2.0 * (1.0 + e)));
  } else {
    tail = (1.0 - 1.0 / q) * qpow(q, -2.0 * static_cast<double>(L) * (1.0 + e)) / (1.0 - qpow(q, -(1.0 + e)));
  }
  return sum + at_zero * tail;
}

// ---------------------------------------------------------------------------
// Gamma factors
// ---------------------------------------------------------------------------

GammaValue gamma_factor(const FieldPair& fp, const TameChar& chi0) {
  const FieldTag tag = chi0.tag;
  const double q = static_cast<double>(fp.qF());
  const double qK = field_q(fp, tag);
  const int f = field_deg(fp, tag);
  const int m0 = psi_trivial_from(fp, tag);

  GammaValue out;
  out.chi0 = chi0;
  out.method = GammaMethod::ExactShells;
  const cplx below = shell_integral(fp, chi0, m0 - 2);
  const cplx gauss = shell_integral(fp, chi0, m0 - 1);
  out.shells = {{m0 - 2, below}, {m0 - 1, gauss}};
  if (std::abs(below) > 1e-12)
    throw std::logic_error("gamma_factor: shell below the conductor contributes " + std::to_string(std::abs(below)));

  // |x|^{z-1} = qK^m X^{f m} on the shell of valuation m.
  MeroRational u(q);
  u.add_term(gauss * std::pow(qK, m0 - 1), f * (m0 - 1), 0);
  if (chi0.trivial()) {
    MeroRational tail = MeroRational::monomial(q, 1.0 - 1.0 / qK, f * m0, 0);
    tail.add_den({1.0, f, 0});
    u = add(u, tail);
  }
  u.normalize();
  out.value = u;
  return out;
}

cplx gamma_value(const FieldPair& fp, const TameChar& chi0, cplx z) {
  const EvalResult r = eval_at(gamma_factor(fp, chi0).value, z, 0.0);
  if (r.pole) throw std::domain_error("gamma_value: pole");
  return r.value;
}

cplx gamma_truncated(const FieldPair& fp, const TameChar& chi0, cplx z, int J) {
  const FieldTag tag = chi0.tag;
  const double qK = field_q(fp, tag);
  const int m0 = psi_trivial_from(fp, tag);
  cplx sum{};
  // Shells below m0 - 2 vanish for the same reason as shell m0 - 2 (psi integrates to 0 on
  // every coset on which chi0 is constant); gamma_factor checks that shell explicitly.
  for (int m = std::max(-J, m0 - 2); m <= J; ++m)
    sum += shell_integral(fp, chi0, m) * qpow(qK, -static_cast<double>(m) * (z - 1.0));
  return sum;
}

cplx gamma_product(const FieldPair& fp, const std::vector<std::pair<TameChar, std::pair<cplx, cplx>>>& terms) {
  auto at = [&](double h) {
    cplx v = 1.0;
    for (const auto& [chi, zd] : terms) v *= gamma_value(fp, chi, zd.first + h * zd.second);
    return v;
  };
  bool pole = false;
  cplx v = 1.0;
  for (const auto& [chi, zd] : terms) {
    const EvalResult r = eval_at(gamma_factor(fp, chi).value, zd.first, 0.0);
    if (r.pole) {
      pole = true;
      break;
    }
    v *= r.value;
  }
  if (!pole) return v;
  // Symmetric differences cancel the odd part; Richardson removes the h^2 term.
  const double h = 1e-4;
  const cplx a1 = 0.5 * (at(h) + at(-h));
  const cplx a2 = 0.5 * (at(h / 2) + at(-h / 2));
  const cplx lim = (4.0 * a2 - a1) / 3.0;
  if (std::abs(a1 - a2) > 1e-3 * std::max(1.0, std::abs(lim)))
    throw std::domain_error("gamma_product: product has a pole");
  return lim;
}

cplx gamma_integral(const FieldPair& fp, const TameChar& chi0E, cplx z, GammaIntegralVersion version) {
  if (chi0E.tag != FieldTag::E) throw std::invalid_argument("gamma_integral expects a character of E");
  const InversionConstants c = inversion_constants(fp);
  const TameChar inv_restricted = restrict_char(fp, char_inv(chi0E));
  const cplx chi_minus_one = eval_mult_char(fp, chi0E, z, EElt{Rat(-1), Rat(0)});
  const cplx base = c.cF * chi_minus_one * gamma_product(fp, {{inv_restricted, {-2.0 * z - 1.0, 0.0}},
                                                              {chi0E, {z + 1.0, 0.0}}});
  if (version == GammaIntegralVersion::OnePlusYAlpha) return base;
  // y + alpha = alpha (1 + (y / alpha^2) alpha).
  const double q = static_cast<double>(fp.qF());
  const cplx chi_alpha = eval_mult_char(fp, chi0E, z, EElt{Rat(0), Rat(1)});
  return chi_alpha * std::pow(q, -fp.v_alpha_sq()) * base;
}

TruncatedIntegral gamma_integral_truncated(const FieldPair& fp, const TameChar& chi0E, cplx z,
                                           GammaIntegralVersion version, int J) {
  if (z.real() >= -0.5) throw std::invalid_argument("gamma_integral_truncated: requires Re z < -1/2");
  const double q = static_cast<double>(fp.qF());
  const bool plus_alpha = version == GammaIntegralVersion::YPlusAlpha;
  auto point = [&](const Rat& y) { return plus_alpha ? EElt{y, Rat(1)} : EElt{Rat(1), y}; };
  auto chi = [&](const Rat& y) { return eval_mult_char(fp, chi0E, z, point(y)); };
  auto check_constant = [&](const Rat& y, int level, cplx v) {
    const cplx w = chi(y + fp.p_pow(level));
    if (std::abs(w - v) > 1e-12 * std::max(1.0, std::abs(v)))
      throw std::logic_error("gamma_integral_truncated: integrand not constant on a coset");
  };
  TruncatedIntegral out;
  // y in O at level 1.
  for (std::int64_t y0 = 0; y0 < fp.p(); ++y0) {
    const cplx v = chi(Rat(y0));
    check_constant(Rat(y0), 1, v);
    out.value += v / q;
  }
  for (int i = -1; i >= -J; --i) {
    for (std::int64_t u = 1; u < fp.p(); ++u) {
      const Rat y = fp.p_pow(i) * Rat(u);
      const cplx v = chi(y);
      check_constant(y, i + 1, v);
      out.value += v * std::pow(q, -(i + 1.0));
    }
  }
  // Shell i < 0 has |y| = q^{-i} and |point|_E = q^{-2i - v}, v = v(alpha^2) for 1 + y alpha
  // and v = 0 for y + alpha.
  const double x = z.real();
  const int v = plus_alpha ? 0 : fp.v_alpha_sq();
  const double r = std::pow(q, 1.0 + 2.0 * x);
  out.tail_bound = (1.0 - 1.0 / q) * std::pow(q, -v * x) * std::pow(r, J + 1) / (1.0 - r);
  return out;
}

// ---------------------------------------------------------------------------
// Inner products
// ---------------------------------------------------------------------------

cplx inner_product(const FieldPair& fp, double s, const StepFunction& f1, const StepFunction& f2) {
  if (!(s > 0 && s < 0.5)) throw std::invalid_argument("inner_product: s must lie in (0, 1/2)");
  if (f1.tag != FieldTag::E || f2.tag != FieldTag::E) throw std::invalid_argument("inner_product expects functions on E");
  const InversionConstants c = inversion_constants(fp);
  const cplx g = gamma_value(fp, make_char(fp, FieldTag::E, 0), 2.0 * s);
  const StepFunction h = product(fp, fourier(fp, f1), conj(fourier(fp, f2)));
  return c.cE * g * weighted_integral(fp, h, -2.0 * s);
}

namespace {

void require_zero_integral(const FieldPair& fp, const StepFunction& f) {
  const double scale = std::max(coeff_l1(f) * fp.coset_volume(f.tag, f.level).to_double(), 1e-300);
  if (std::abs(integrate(fp, f)) > 1e-12 * scale)
    throw std::invalid_argument("renormalized norm requires a function with zero integral");
}

// |f^|^2 with the coefficient at 0 removed when it is rounding noise.
StepFunction abs2_transform(const FieldPair& fp, const StepFunction& f, bool drop_zero) {
  const StepFunction fh = fourier(fp, f);
  StepFunction h = product(fp, fh, conj(fh));
  if (drop_zero) h.coeffs.erase(CosetKey{Rat(0), Rat(0)});
  return h;
}

}  // namespace

cplx steinberg_norm(const FieldPair& fp, const StepFunction& f) {
  if (f.tag != FieldTag::E) throw std::invalid_argument("steinberg_norm expects a function on E");
  require_zero_integral(fp, f);
  const InversionConstants c = inversion_constants(fp);
  return c.cE * weighted_integral(fp, abs2_transform(fp, f, true), -1.0);
}

cplx norm_F(const FieldPair& fp, double t, const StepFunction& f) {
  if (f.tag != FieldTag::F) throw std::invalid_argument("norm_F expects a function on F");
  const InversionConstants c = inversion_constants(fp);
  if (std::abs(t - 0.5) < 1e-15) {
    require_zero_integral(fp, f);
    return c.cF * weighted_integral(fp, abs2_transform(fp, f, true), -1.0);
  }
  if (!(t > 0 && t < 0.5)) throw std::invalid_argument("norm_F: t must lie in (0, 1/2]");
  const cplx g = gamma_value(fp, make_char(fp, FieldTag::F, 0), 2.0 * t);
  return c.cF * g * weighted_integral(fp, abs2_transform(fp, f, false), -2.0 * t);
}

namespace {

// int_F |x1 + y alpha|_E^{-2s} dy for v(x1) = i, split at v(y) = i.
double line_integral_at(const FieldPair& fp, double s, int i) {
  const double q = static_cast<double>(fp.qF());
  const int v = fp.v_alpha_sq();
  // v(y) >= i: |x1 + y alpha|_E = |x1|^2.
  double sum = std::pow(q, -i) * std::pow(q, 4.0 * s * i);
  // v(y) = j < i: |x1 + y alpha|_E = q^{-(2j + v)}; the terms form a geometric series in
  // q^{-1 + 4s} as j decreases.
  const double r = std::pow(q, 1.0 - 4.0 * s);
  const double first = (1.0 - 1.0 / q) * std::pow(q, -(i - 1.0)) * std::pow(q, 2.0 * s * (2.0 * (i - 1) + v));
  sum += first / (1.0 - r);
  return sum;
}

// int over {x1 in p^L O} x F of |x|_E^{-2s}.
double zero_cell_integral(const FieldPair& fp, double s, int L) {
  const double q = static_cast<double>(fp.qF());
  const int v = fp.v_alpha_sq();
  const double e = -2.0 * s;
  // y in p^L O: the ball p^L O_E.
  double ball;
  if (fp.ext() == Ext::Unramified)
    ball = (1.0 - 1.0 / (q * q)) * std::pow(q, -2.0 * L * (1.0 + e)) / (1.0 - std::pow(q, -2.0 * (1.0 + e)));
  else
    ball = (1.0 - 1.0 / q) * std::pow(q, -2.0 * L * (1.0 + e)) / (1.0 - std::pow(q, -(1.0 + e)));
  // v(y) = j < L: |x|_E = |y alpha|_E = q^{-(2j + v)}.
  const double r = std::pow(q, 1.0 - 4.0 * s);
  const double first = std::pow(q, -L) * (1.0 - 1.0 / q) * std::pow(q, -(L - 1.0)) *
                       std::pow(q, 2.0 * s * (2.0 * (L - 1) + v));
  return ball + first / (1.0 - r);
}

}  // namespace

double line_integral_abs_power(const FieldPair& fp, double s) {
  if (!(s > 0.25)) throw std::invalid_argument("line_integral_abs_power: requires s > 1/4");
  return line_integral_at(fp, s, 0);
}

EmbedRatio embed_norm_ratio(const FieldPair& fp, double s, const StepFunction& f) {
  if (f.tag != FieldTag::F) throw std::invalid_argument("embed_norm_ratio expects a function on F");
  const bool steinberg = std::abs(s - 0.5) < 1e-15;
  if (!steinberg && !(s > 0.25 && s < 0.5)) throw std::invalid_argument("embed_norm_ratio: s must lie in (1/4, 1/2]");
  const double t = 2.0 * s - 0.5;
  const InversionConstants c = inversion_constants(fp);
  if (steinberg) require_zero_integral(fp, f);

  // int_E |f^(x1)|^2 |x|_E^{-2s} dx: the embedded distribution f(x1) delta(x2) has Fourier
  // transform f^(x1), constant in x2.
  const StepFunction h = abs2_transform(fp, f, steinberg);
  const double vol = fp.coset_volume(FieldTag::F, h.level).to_double();
  cplx inner_E{};
  for (const auto& [k, v] : h.coeffs) {
    if (k.first.is_zero())
      inner_E += v * zero_cell_integral(fp, s, h.level);
    else
      inner_E += v * vol * line_integral_at(fp, s, fp.val_F(k.first));
  }
  const cplx lhs = steinberg ? c.cE * inner_E
                             : c.cE * gamma_value(fp, make_char(fp, FieldTag::E, 0), 2.0 * s) * inner_E;
  const cplx inner_F = weighted_integral(fp, h, -2.0 * t);

  const TameChar oneF = make_char(fp, FieldTag::F, 0);
  const TameChar oneE = make_char(fp, FieldTag::E, 0);
  std::vector<std::pair<TameChar, std::pair<cplx, cplx>>> terms = {{oneF, {4.0 * s - 1.0, 4.0}},
                                                                    {oneE, {1.0 - 2.0 * s, -2.0}}};
  if (!steinberg) terms.push_back({oneE, {2.0 * s, 2.0}});

  EmbedRatio out;
  out.s = s;
  out.measured = lhs / inner_F;
  out.gamma_constant = c.cE * c.cF * gamma_product(fp, terms);
  out.norm_ratio = lhs / norm_F(fp, t, f);
  return out;
}

}  // namespace sbk

namespace sbk {

cplx slash_delta_constant(const FieldPair& fp, const ParamTuple& pt) {
  const double q = static_cast<double>(fp.qF());
  const InversionConstants c = inversion_constants(fp);
  const TameChar chi2 = char_pow(pt.chi, 2);
  const cplx chi_minus_alpha = eval_tame(fp, pt.chi, fp.lead_E(EElt{Rat(0), Rat(-1)}));
  const cplx gammas = gamma_product(fp, {{restrict_char(fp, chi2), {2.0 * pt.t, 2.0}},
                                         {char_inv(chi2), {-pt.t + 0.5, -1.0}}});
  cplx l_inv = 1.0;
  if (char_mul(restrict_char(fp, pt.chi), pt.eta).trivial()) l_inv = 1.0 - qpow(q, -(2.0 * pt.s + pt.t + 0.5));
  return c.cF * (1.0 - 1.0 / q) / (chi_minus_alpha * chi_minus_alpha) *
         qpow(q, -static_cast<double>(fp.v_alpha_sq()) * (-pt.t + 0.5)) * gammas * l_inv;
}

}  // namespace sbk
