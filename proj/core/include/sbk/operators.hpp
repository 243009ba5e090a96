#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbk/harmonic.hpp"
#include "sbk/kernels.hpp"

namespace sbk {

/// A vector of the principal series in N-bar coordinates: a compactly supported step
/// function on E, or the spherical vector of a character with chi^2 = 1.
struct InducedVector {
  enum class Form { StepRestricted, Spherical };
  Form form = Form::StepRestricted;
  StepFunction f;
  TameChar chi;
  cplx s;
};

InducedVector step_vector(const StepFunction& f);
/// Throws std::invalid_argument unless chi^2 = 1.
InducedVector spherical_vector(const TameChar& chi, cplx s);

/// max(1, |x|)^{-(2s+1)} on the field carrying chi (|.|_E normalized on E).
cplx spherical_eval(const FieldPair& fp, const TameChar& chi, cplx s, const EElt& x);

struct SphericalConstant {
  /// Normalized constant (zero when eta differs from chi|_F).
  MeroRational normalized;
  /// int K max(1, |x|)^{-(2s+1)} dx, i.e. the normalized constant over the two L-factor
  /// normalizers.
  MeroRational raw;
};
SphericalConstant sbo_spherical_constant(const FieldPair& fp, const ParamTuple& pt);

/// Truncated shell sum of the raw spherical integral over v(x1), v(x2) in [-J, J], with a
/// rigorous bound on the omitted shells. Requires Re(2s +- t + 1/2) > 0 and Re(2s + t + 3/2) > 0.
OracleResult spherical_oracle(const FieldPair& fp, const ParamTuple& pt, int J);
/// Largest J for which the shell representatives stay within 128-bit rationals.
int spherical_oracle_max_J(const FieldPair& fp);

/// (A f)(y) for y in F. Step inputs are paired against the kernel; spherical inputs use
/// the closed-form constant times the spherical vector of the target.
cplx apply_sbo(const FieldPair& fp, KernelVariant variant, const ParamTuple& pt, const InducedVector& v, const Rat& y);

/// (T f)(x') = int chi_{s-1/2}(y^2) f(x' - y) dy, univariate in X = q^{-s}.
MeroRational std_intertwiner(const FieldPair& fp, const TameChar& chi, const StepFunction& f, const EElt& x_prime);

/// c_F Gamma(|.|_F^{2t}) Gamma(chi^2 |.|_E^{-t+1/2}) for t in 1/2 + (pi i / ln q) Z, taken as a
/// limit in t when the product has the form 0 * infinity.
cplx composition_constant(const FieldPair& fp, const ParamTuple& pt);

/// int_F (A~ f)(y) dy as a closed form in X, Y (requires chi|eta = chi|eta^{-1} = 1 and
/// Re t > 0 so that the inner line integral converges).
MeroRational image_integral(const FieldPair& fp, const ParamTuple& pt, const StepFunction& f);
/// int_F K(y + alpha) dy for the un-normalized kernel at (s, t).
cplx line_kernel_integral(const FieldPair& fp, const ParamTuple& pt);

enum class ImageClass { Zero, ConstantsLine, Steinberg, Full };
std::string to_string(ImageClass c);

/// Image of the operator with the given kernel variant (Normalized: the four-case table;
/// Delta: Full; DoubleTilde: by the sign of Re t). Requires exact parameters.
ImageClass image_class(const FieldPair& fp, const ParamTuple& pt, KernelVariant variant = KernelVariant::Normalized);

/// |int g| <= 1e-9 * sum |coeffs| (the function lies in the kernel of integration over F).
bool steinberg_test(const FieldPair& fp, const StepFunction& g);
/// Max pairwise deviation <= tol.
bool constant_test(const std::vector<cplx>& values, double tol = 1e-9);

struct ImageEmpirics {
  ImageClass predicted = ImageClass::Full;
  int inputs = 0;
  /// Per input: outputs vanish at every point, are constant, and have zero integral over F.
  std::vector<bool> zero;
  std::vector<bool> constant;
  std::vector<std::optional<bool>> integral_zero;
  /// Every input behaves as the predicted row requires.
  bool pass = false;
  std::string detail;
};

/// Applies the operator to each input at the given points of F and checks the outcome
/// against image_class. The integral over F is available when t is in 1/2 + (pi i / ln q) Z
/// and chi|eta = chi|eta^{-1} = 1.
ImageEmpirics image_empirics(const FieldPair& fp, const ParamTuple& pt, KernelVariant variant,
                             const std::vector<StepFunction>& inputs, const std::vector<Rat>& points);

}  // namespace sbk
