#include "sbk/characters.hpp"

#include <cmath>
#include <stdexcept>

namespace sbk {

namespace {

// x mod 2 into [0, 2).
Rat mod2(const Rat& x) {
  const i128 m = 2 * x.den();
  return Rat(mod_floor(x.num(), m), x.den());
}

bool is_even_integer(const Rat& x) { return x.is_integer() && x.num() % 2 == 0; }

double canon_imag(double im, double period) {
  double r = std::fmod(im, period);
  if (r < 0) r += period;
  if (period - r < 1e-13) r = 0;
  return r;
}

}  // namespace

cplx qpow(double q, cplx z) { return std::exp(z * std::log(q)); }

TameChar make_char(const FieldPair& fp, FieldTag tag, std::int64_t k) {
  const std::int64_t m = (tag == FieldTag::F ? fp.qF() : fp.qE()) - 1;
  return {tag, static_cast<std::int64_t>(mod_floor(k, m)), m};
}

TameChar char_mul(const TameChar& a, const TameChar& b) {
  if (a.tag != b.tag || a.mod != b.mod) throw std::invalid_argument("char_mul: characters on different groups");
  return {a.tag, (a.k + b.k) % a.mod, a.mod};
}

TameChar char_pow(const TameChar& a, std::int64_t e) {
  return {a.tag, static_cast<std::int64_t>(mod_floor(i128(a.k) * e, a.mod)), a.mod};
}

TameChar char_inv(const TameChar& a) { return char_pow(a, -1); }

bool char_square_trivial(const TameChar& a) { return (2 * a.k) % a.mod == 0; }

cplx eval_tame(const FieldPair& fp, const TameChar& chi, std::int64_t residue) {
  const int lg = chi.tag == FieldTag::F ? fp.logF(residue) : fp.logE(residue);
  const std::int64_t e = static_cast<std::int64_t>(i128(chi.k) * lg % chi.mod);
  return std::polar(1.0, 2 * kPi * static_cast<double>(e) / static_cast<double>(chi.mod));
}

cplx eval_mult_char(const FieldPair& fp, const TameChar& chi, cplx s, const EElt& x) {
  if (x.x1.is_zero() && x.x2.is_zero()) throw std::invalid_argument("multiplicative character at 0");
  const std::int64_t lead = fp.leading_unit(x, chi.tag);
  const int w = chi.tag == FieldTag::F ? fp.val_F(x.x1) : fp.w_E(x);
  return eval_tame(fp, chi, lead) * qpow(static_cast<double>(fp.qF()), -static_cast<double>(w) * s);
}

TameChar restrict_char(const FieldPair& fp, const TameChar& chiE) {
  if (chiE.tag != FieldTag::E) throw std::invalid_argument("restrict_char expects a character of E");
  // The F generator is g_E^{q_F+1}, so chi(g_F) = exp(2 pi i k / (q_F - 1)).
  return make_char(fp, FieldTag::F, chiE.k);
}

Rat frac_p(const FieldPair& fp, const Rat& x) { return fp.reduce(x, 0); }

cplx additive_char(const FieldPair& fp, const Rat& x) {
  const Rat f = frac_p(fp, x);
  if (f.is_zero()) return {1.0, 0.0};
  return std::polar(1.0, 2 * kPi * f.to_double());
}

cplx additive_char(const FieldPair& fp, const EElt& x) { return additive_char(fp, x.x1); }

cplx sym_value(const SymParam& v, double q) { return {v.re.to_double(), v.im_units.to_double() * kPi / std::log(q)}; }

ParamTuple make_params(const FieldPair& fp, std::int64_t chi_k, std::int64_t eta_k, SymParam s, SymParam t) {
  s.im_units = mod2(s.im_units);
  t.im_units = mod2(t.im_units);
  ParamTuple pt;
  pt.chi = make_char(fp, FieldTag::E, chi_k);
  pt.eta = make_char(fp, FieldTag::F, eta_k);
  pt.s = sym_value(s, static_cast<double>(fp.qE()));
  pt.t = sym_value(t, static_cast<double>(fp.qF()));
  pt.s_sym = s;
  pt.t_sym = t;
  return pt;
}

ParamTuple make_params(const FieldPair& fp, std::int64_t chi_k, std::int64_t eta_k, cplx s, cplx t) {
  ParamTuple pt;
  pt.chi = make_char(fp, FieldTag::E, chi_k);
  pt.eta = make_char(fp, FieldTag::F, eta_k);
  pt.s = {s.real(), canon_imag(s.imag(), 2 * kPi / std::log(static_cast<double>(fp.qE())))};
  pt.t = {t.real(), canon_imag(t.imag(), 2 * kPi / std::log(static_cast<double>(fp.qF())))};
  return pt;
}

std::string to_string(RegimeKind r) {
  switch (r) {
    case RegimeKind::Generic: return "Generic";
    case RegimeKind::Backslash: return "Backslash";
    case RegimeKind::Slash: return "Slash";
    case RegimeKind::Both: return "Both";
    case RegimeKind::InL: return "InL";
  }
  return "?";
}

double lattice_defect(cplx z, double period) {
  const double k = std::round(z.imag() / period);
  return std::hypot(z.real(), z.imag() - k * period);
}

std::vector<std::pair<SymParam, SymParam>> l_set(const FieldPair& fp, const TameChar& chi, const TameChar& eta) {
  const TameChar r = restrict_char(fp, chi);
  if (!char_mul(r, eta).trivial() || !char_mul(r, char_inv(eta)).trivial()) return {};
  const Rat h(1, 2);
  const Rat zero(0);
  const Rat one(1);
  const bool sq = char_square_trivial(chi);
  const bool ram = fp.ext() == Ext::Ramified;
  auto sp = [](Rat re, Rat im) { return SymParam{re, im}; };
  std::vector<std::pair<SymParam, SymParam>> out;
  if (!sq) {
    out.push_back({sp(zero, zero), sp(h, zero)});
    if (!ram) {
      out.push_back({sp(zero, one), sp(h, one)});
    } else {
      out.push_back({sp(zero, one), sp(h, zero)});
      out.push_back({sp(zero, h), sp(h, one)});
      out.push_back({sp(zero, Rat(3, 2)), sp(h, one)});
    }
  } else {
    out.push_back({sp(-h, zero), sp(-h, zero)});
    if (!ram) {
      out.push_back({sp(-h, one), sp(-h, one)});
    } else {
      out.push_back({sp(-h, one), sp(-h, zero)});
      out.push_back({sp(zero, h), sp(h, one)});
      out.push_back({sp(zero, Rat(3, 2)), sp(h, one)});
    }
  }
  return out;
}

Regime regime(const FieldPair& fp, const ParamTuple& pt) {
  Regime r;
  const TameChar res = restrict_char(fp, pt.chi);
  r.chi_eta_trivial = char_mul(res, pt.eta).trivial();
  r.chi_eta_inv_trivial = char_mul(res, char_inv(pt.eta)).trivial();
  const double lnqF = std::log(static_cast<double>(fp.qF()));
  const double lnqE = std::log(static_cast<double>(fp.qE()));
  const double perF = 2 * kPi / lnqF;
  const double perE = 2 * kPi / lnqE;
  r.backslash_defect = lattice_defect(2.0 * pt.s + pt.t + 0.5, perF);
  r.slash_defect = lattice_defect(2.0 * pt.s - pt.t + 0.5, perF);
  const bool exact = pt.s_sym && pt.t_sym;
  r.tolerance_based = !exact;
  bool on_b, on_s;
  if (exact) {
    const SymParam& s = *pt.s_sym;
    const SymParam& t = *pt.t_sym;
    const Rat su = s.im_units / Rat(fp.f());  // in pi / ln q_F
    on_b = (Rat(2) * s.re + t.re + Rat(1, 2)).is_zero() && is_even_integer(Rat(2) * su + t.im_units);
    on_s = (Rat(2) * s.re - t.re + Rat(1, 2)).is_zero() && is_even_integer(Rat(2) * su - t.im_units);
  } else {
    on_b = r.backslash_defect <= kLatticeTol;
    on_s = r.slash_defect <= kLatticeTol;
  }
  r.backslash = r.chi_eta_trivial && on_b;
  r.slash = r.chi_eta_inv_trivial && on_s;
  for (const auto& [s0, t0] : l_set(fp, pt.chi, pt.eta)) {
    bool hit;
    if (exact) {
      hit = pt.s_sym->re == s0.re && is_even_integer(pt.s_sym->im_units - s0.im_units) && pt.t_sym->re == t0.re &&
            is_even_integer(pt.t_sym->im_units - t0.im_units);
    } else {
      hit = lattice_defect(pt.s - sym_value(s0, static_cast<double>(fp.qE())), perE) <= kLatticeTol &&
            lattice_defect(pt.t - sym_value(t0, static_cast<double>(fp.qF())), perF) <= kLatticeTol;
    }
    if (hit) r.in_l = true;
  }
  if (r.in_l && (!r.slash || r.backslash)) throw std::logic_error("L-set tuple outside Slash or inside Backslash");
  if (r.in_l)
    r.kind = RegimeKind::InL;
  else if (r.backslash && r.slash)
    r.kind = RegimeKind::Both;
  else if (r.backslash)
    r.kind = RegimeKind::Backslash;
  else if (r.slash)
    r.kind = RegimeKind::Slash;
  else
    r.kind = RegimeKind::Generic;
  return r;
}

}  // namespace sbk
