#pragma once

#include <utility>

#include "sbk/merorat.hpp"
#include "sbk/stepfn.hpp"

namespace sbk {

// ---------------------------------------------------------------------------
// Fourier transforms. psi(x) = exp(2 pi i {x}_p) on F (conductor O), psi(x1 + x2 alpha) =
// psi(x1) on E, vol(O) = 1 on both fields.
// ---------------------------------------------------------------------------

/// f^(x) = int psi(x y) f(y) dy, exact (finite character sums, separable in the two
/// coordinates on E).
StepFunction fourier(const FieldPair& fp, const StepFunction& f);
/// int psi(omega(x, y)) f(y) dy with omega(x, y) = x1 y2 - x2 y1.
StepFunction symplectic_fourier(const FieldPair& fp, const StepFunction& f);
/// x -> f(-x2 + x1 alpha^{-1}) for f on E.
StepFunction symplectic_coordinates(const FieldPair& fp, const StepFunction& f);
/// (f * g)(x) = int f(y) g(x - y) dy.
StepFunction convolve(const FieldPair& fp, const StepFunction& f, const StepFunction& g);
/// x -> f(-x).
StepFunction reflect(const FieldPair& fp, const StepFunction& f);
/// int f(x) conj(g(x)) dx.
cplx inner_l2(const FieldPair& fp, const StepFunction& f, const StepFunction& g);

struct InversionConstants {
  double cF = 0;
  double cE = 0;
};
/// Measured from F F 1_O = c^{-1} 1_O on each field.
InversionConstants inversion_constants(const FieldPair& fp);

/// int g(x) |x|^e dx on F or E (|.|_E normalized, |x|_E = |N(x)|_F). The cell of g at 0
/// contributes a closed-form geometric tail; throws std::domain_error if that tail
/// diverges (Re e <= -1) and g(0) != 0.
cplx weighted_integral(const FieldPair& fp, const StepFunction& g, cplx e);

// ---------------------------------------------------------------------------
// Gamma factors: Gamma(chi0 |.|^z) = lim int psi(x) chi0(x) |x|^{z-1} dx.
// ---------------------------------------------------------------------------

enum class GammaMethod { ExactShells, Truncated };

struct GammaValue {
  /// Univariate in X = q_F^{-z}.
  MeroRational value;
  TameChar chi0;
  GammaMethod method = GammaMethod::ExactShells;
  /// Finite shell integrals int_{shell m} psi(x) chi0(x) dx, keyed by the field's own
  /// valuation m, for the shells that meet the nontrivial part of psi.
  std::vector<std::pair<int, cplx>> shells;
};

GammaValue gamma_factor(const FieldPair& fp, const TameChar& chi0);
/// Gamma(chi0 |.|^z) at a point; throws std::domain_error at a pole.
cplx gamma_value(const FieldPair& fp, const TameChar& chi0, cplx z);
/// Truncated integral over q^{-J} <= |x| <= q^{J} (field-normalized), for comparison.
cplx gamma_truncated(const FieldPair& fp, const TameChar& chi0, cplx z, int J);

/// Product of gamma values, evaluated as a limit when it has the form 0 * infinity
/// (symmetric difference in the shared parameter). Each entry is (chi0, z0, dz/dh).
cplx gamma_product(const FieldPair& fp, const std::vector<std::pair<TameChar, std::pair<cplx, cplx>>>& terms);

enum class GammaIntegralVersion { OnePlusYAlpha, YPlusAlpha };

/// Closed form of int_F chi(1 + y alpha) dy (or chi(y + alpha)) for chi = chi0 |.|_E^z:
/// c_F chi(-1) Gamma(chi^{-1}|_F |.|_F^{-1}) Gamma(chi |.|_E).
cplx gamma_integral(const FieldPair& fp, const TameChar& chi0E, cplx z, GammaIntegralVersion version);

struct TruncatedIntegral {
  cplx value;
  double tail_bound = 0;
};
/// Direct shell sum of the same integral over |y| <= q^J (requires Re z < -1/2).
TruncatedIntegral gamma_integral_truncated(const FieldPair& fp, const TameChar& chi0E, cplx z,
                                           GammaIntegralVersion version, int J);

// ---------------------------------------------------------------------------
// Invariant inner products on E-functions (complementary series and Steinberg).
// ---------------------------------------------------------------------------

/// c_E Gamma(|.|_E^{2s}) int f1^ conj(f2^) |x|_E^{-2s} dx for real s in (0, 1/2).
cplx inner_product(const FieldPair& fp, double s, const StepFunction& f1, const StepFunction& f2);
/// c_E int |f^|^2 |x|_E^{-1} dx for f with int f = 0.
cplx steinberg_norm(const FieldPair& fp, const StepFunction& f);

/// Norm of an F-function in the complementary series of PGL(2, F):
/// c_F Gamma(|.|_F^{2t}) int |f^|^2 |x|^{-2t} dx (t in (0, 1/2)); at t = 1/2 the
/// renormalized c_F int |f^|^2 |x|^{-1} dx.
cplx norm_F(const FieldPair& fp, double t, const StepFunction& f);

struct EmbedRatio {
  double s = 0;
  /// ||C^v f||^2_{chi,s} / int |f^|^2 |x|^{-2t} dx, measured from the inner F-integral.
  cplx measured;
  /// c_E c_F Gamma(|.|_F^{4s-1}) Gamma(|.|_E^{1-2s}) Gamma(|.|_E^{2s}) (at s = 1/2 without
  /// the last factor).
  cplx gamma_constant;
  /// ||C^v f||^2 / ||f||^2_{eta,t}.
  cplx norm_ratio;
};
/// s in (1/4, 1/2) or s = 1/2 (Steinberg, renormalized); f on F (int f = 0 at s = 1/2).
EmbedRatio embed_norm_ratio(const FieldPair& fp, double s, const StepFunction& f);

/// int_F |x1 + y alpha|_E^{-2s} dy at x1 = 1, by shells (s > 1/4).
double line_integral_abs_power(const FieldPair& fp, double s);

// ---------------------------------------------------------------------------
// Kernel constants built from gamma factors.
// ---------------------------------------------------------------------------

/// Coefficient c with K~ = c * delta on the slash variety (2s - t + 1/2 in the lattice,
/// chi|eta^{-1} = 1):
/// c_F (1 - 1/q) chi0(-alpha)^{-2} |alpha^2|^{-t+1/2} Gamma(chi0^2|_F |.|^{2t})
/// Gamma(chi0^{-2} |.|_E^{-t+1/2}) L(1/2, chi_s|_F eta_t)^{-1}.
cplx slash_delta_constant(const FieldPair& fp, const ParamTuple& pt);

}  // namespace sbk
