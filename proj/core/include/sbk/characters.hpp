#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbk/local_field.hpp"

namespace sbk {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLatticeTol = 1e-12;

/// q^z for real q > 0.
cplx qpow(double q, cplx z);

/// Depth-zero character of O^x: g -> exp(2 pi i k / (q-1)) on the recorded generator g.
struct TameChar {
  FieldTag tag = FieldTag::F;
  std::int64_t k = 0;
  std::int64_t mod = 1;  // q - 1

  bool trivial() const { return k == 0; }
  friend bool operator==(const TameChar&, const TameChar&) = default;
};

TameChar make_char(const FieldPair& fp, FieldTag tag, std::int64_t k);
TameChar char_mul(const TameChar& a, const TameChar& b);
TameChar char_pow(const TameChar& a, std::int64_t e);
TameChar char_inv(const TameChar& a);
/// chi^2 = 1.
bool char_square_trivial(const TameChar& a);

/// Value on a nonzero residue class (encoded as in FieldPair).
cplx eval_tame(const FieldPair& fp, const TameChar& chi, std::int64_t residue);
/// chi_s(x) = chi(leading unit of x) |x|^s.
cplx eval_mult_char(const FieldPair& fp, const TameChar& chi, cplx s, const EElt& x);
TameChar restrict_char(const FieldPair& fp, const TameChar& chiE);

/// p-adic fractional part in [0, 1).
Rat frac_p(const FieldPair& fp, const Rat& x);
/// psi(x1 + x2 alpha) = exp(2 pi i frac_p(x1)).
cplx additive_char(const FieldPair& fp, const EElt& x);
cplx additive_char(const FieldPair& fp, const Rat& x);

/// Exact parameter re + i * im_units * pi / ln q.
struct SymParam {
  Rat re;
  Rat im_units;
  friend bool operator==(const SymParam&, const SymParam&) = default;
};

cplx sym_value(const SymParam& v, double q);

struct ParamTuple {
  TameChar chi;  // on E
  cplx s;
  TameChar eta;  // on F
  cplx t;
  std::optional<SymParam> s_sym;  // im_units in pi / ln q_E
  std::optional<SymParam> t_sym;  // im_units in pi / ln q_F
};

/// Canonical tuple (imaginary parts reduced into [0, period)).
ParamTuple make_params(const FieldPair& fp, std::int64_t chi_k, std::int64_t eta_k, SymParam s, SymParam t);
ParamTuple make_params(const FieldPair& fp, std::int64_t chi_k, std::int64_t eta_k, cplx s, cplx t);

enum class RegimeKind { Generic, Backslash, Slash, Both, InL };
std::string to_string(RegimeKind r);

struct Regime {
  RegimeKind kind = RegimeKind::Generic;
  bool backslash = false;
  bool slash = false;
  bool in_l = false;
  bool chi_eta_trivial = false;
  bool chi_eta_inv_trivial = false;
  bool tolerance_based = false;
  double backslash_defect = 0;
  double slash_defect = 0;
};

/// Distance of z from the lattice i * period * Z.
double lattice_defect(cplx z, double period);

Regime regime(const FieldPair& fp, const ParamTuple& pt);

/// The finite set of (s, t) on which the normalized kernel vanishes (empty unless
/// chi|eta = chi|eta^{-1} = 1).
std::vector<std::pair<SymParam, SymParam>> l_set(const FieldPair& fp, const TameChar& chi, const TameChar& eta);

}  // namespace sbk
