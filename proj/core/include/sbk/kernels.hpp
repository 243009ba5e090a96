#pragma once

#include <functional>
#include <string>

#include "sbk/homogeneous.hpp"
#include "sbk/merorat.hpp"
#include "sbk/stepfn.hpp"

namespace sbk {

// ---------------------------------------------------------------------------
// Pointwise kernel
// ---------------------------------------------------------------------------

/// K(x) = coeff * X^a * Y^b with X = q^{-s}, Y = q^{-t}.
struct KernelMonomial {
  cplx coeff;
  int a = 0;
  int b = 0;
};

/// Symbolic value of K_{s,t}^{chi,eta} at x (x2 != 0).
KernelMonomial kernel_monomial(const FieldPair& fp, const ParamTuple& pt, const EElt& x);

/// K(x) = chi_{s-1/2}(x^2) (chi_{s-1/2} eta_{t+1/2})(x2 / N(x)).
///
/// Also evaluates chi(x/xbar) chi(x2) eta(x2/N(x)) |x|_E^{-t-1/2} |x2|^{2s+t-1/2} and throws
/// std::logic_error if the two disagree beyond 1e-12 (relative).
cplx kernel_pointwise(const FieldPair& fp, const ParamTuple& pt, const EElt& x);
cplx kernel_product_form(const FieldPair& fp, const ParamTuple& pt, const EElt& x);
cplx kernel_norm_form(const FieldPair& fp, const ParamTuple& pt, const EElt& x);
/// |K(x)| = |x|_E^{-Re t - 1/2} |x2|^{Re(2s+t) - 1/2}.
double kernel_modulus(const FieldPair& fp, const ParamTuple& pt, const EElt& x);

using PointwiseKernel = std::function<cplx(const EElt&)>;
/// (kappa u)(x) = chi_{s-1/2}(x^2) u(1/x).
PointwiseKernel kappa_transform(const FieldPair& fp, const ParamTuple& pt, PointwiseKernel u);

/// L(s, eta_t) as a function of Y: 1 / (1 - q^{-s} Y) for trivial eta, else 1.
MeroRational l_factor(const FieldPair& fp, cplx s, const TameChar& eta);

/// Symbolic factors (1 - q^{-1/2} X^2 Y) and (1 - q^{-1/2} X^2 Y^{-1}).
Factor backslash_factor(const FieldPair& fp);
Factor slash_factor(const FieldPair& fp);

// ---------------------------------------------------------------------------
// Pairings
// ---------------------------------------------------------------------------

enum class KernelVariant { Raw, Normalized, Delta, ResidueLine, DoubleTilde };
std::string to_string(KernelVariant v);
KernelVariant variant_from_string(const std::string& s);

enum class Provenance { ClosedForm, Oracle };

struct PairingBreakdown {
  MeroRational term1;
  MeroRational term2_finite;
  MeroRational term2_tail;
  MeroRational term3_finite;
  MeroRational term3_single_tail;
  MeroRational term3_double_tail;
};

struct PairingResult {
  KernelVariant variant = KernelVariant::Raw;
  Provenance provenance = Provenance::ClosedForm;
  /// Closed form in X, Y (for DoubleTilde: the constant limit value).
  MeroRational value;
  /// Levels: n = level of phi, N = term-two constancy threshold, M = threshold of the
  /// integral over the unit annulus.
  int n = 0;
  int N = 0;
  int M = 0;
  bool numeric_limit = false;
  PairingBreakdown breakdown;
};

PairingResult pair(const FieldPair& fp, KernelVariant variant, const ParamTuple& pt, const StepFunction& phi);
/// pair(...) evaluated at (pt.s, pt.t); throws on a pole.
cplx pair_value(const FieldPair& fp, KernelVariant variant, const ParamTuple& pt, const StepFunction& phi);

struct OracleResult {
  cplx value;
  double tail_bound = 0;
  int J = 0;
};

/// Truncated shell sum of the defining integral (requires Re(2s +- t + 1/2) > 0).
OracleResult oracle_pair(const FieldPair& fp, const ParamTuple& pt, const StepFunction& phi, int J);

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class SupportClass { Empty, Point0, LineF, AllE };
std::string to_string(SupportClass s);
SupportClass classify_support(const FieldPair& fp, const ParamTuple& pt);

struct KernelBasis {
  int dimension = 1;
  std::vector<KernelVariant> variants;
};
KernelBasis kernel_space_basis(const FieldPair& fp, const ParamTuple& pt);

}  // namespace sbk
