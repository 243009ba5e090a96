#pragma once

#include "sbk/merorat.hpp"
#include "sbk/stepfn.hpp"

namespace sbk {

/// y -> chi0(leading unit of y) * (c X^a Y^b)^{w(y)}, where w = v_F on F and
/// w = v_F o N on E (so |y| = q_F^{-w(y)} in both cases).
struct ShellCharacter {
  FieldTag tag = FieldTag::F;
  TameChar chi0;
  cplx c = 1.0;
  int a = 0;
  int b = 0;
};

/// Value at y != 0 as a monomial coefficient * X^{a w} Y^{b w}.
Mono shell_char_monomial(const FieldPair& fp, const ShellCharacter& h, const EElt& y);

/// Meromorphic value of the integral of g(y) h(y) dy: an exact sum over the cosets of g
/// away from 0 plus g(0) times the geometric tail of the shells around 0 (present only
/// when chi0 is trivial).
MeroRational shell_char_integral(const FieldPair& fp, const ShellCharacter& h, const StepFunction& g);

/// Pairing of the normalized homogeneous family L(1, chi_{s-1})^{-1} chi_{s-1} with phi on F.
/// Univariate in X = q^{-s}.
MeroRational homog_pair_1d(const FieldPair& fp, const TameChar& chi, const StepFunction& phi);
/// Value at a given s.
cplx homog_pair_1d_value(const FieldPair& fp, const TameChar& chi, cplx s, const StepFunction& phi);

}  // namespace sbk
