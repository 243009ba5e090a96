#include "sbk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbk {

namespace {

bool units_integer(const Rat& u) { return u.is_integer(); }

bool sym_is(const SymParam& v, const Rat& re, const Rat& units) {
  // Units are canonical in [0, 2).
  return v.re == re && v.im_units == units;
}

void require_trivial_pairing(const FieldPair& fp, const ParamTuple& pt, const char* who) {
  const Regime reg = regime(fp, pt);
  if (!reg.chi_eta_trivial || !reg.chi_eta_inv_trivial)
    throw std::invalid_argument(std::string(who) + " requires chi|eta = chi|eta^{-1} = 1");
}

MeroRational normalizer(const FieldPair& fp) {
  MeroRational one = MeroRational::constant(static_cast<double>(fp.qF()), 1.0);
  return mul_factor(mul_factor(one, backslash_factor(fp)), slash_factor(fp));
}

// Sum over m >= 0 of r^m (r < 1) and over m < 0 of r^m (r > 1).
double geo_up(double r) {
  if (!(r < 1.0)) throw std::invalid_argument("spherical_oracle: outside the region of convergence");
  return 1.0 / (1.0 - r);
}
double geo_down(double r) {
  if (!(r > 1.0)) throw std::invalid_argument("spherical_oracle: outside the region of convergence");
  return (1.0 / r) / (1.0 - 1.0 / r);
}

// |integrand| integrated over the (m, n) shell, with w = v_F(N(x)) on that shell.
double shell_abs(double q, int m, int n, int v, double a, double b, double c) {
  const int w = n >= m ? 2 * m : 2 * n + v;
  const double u = 1.0 - 1.0 / q;
  const double mx = w >= 0 ? 1.0 : std::pow(q, w * c);
  return u * u * std::pow(q, -(m + n)) * std::pow(q, w * a) * std::pow(q, -n * b) * mx;
}

}  // namespace

InducedVector step_vector(const StepFunction& f) {
  InducedVector v;
  v.form = InducedVector::Form::StepRestricted;
  v.f = f;
  return v;
}

InducedVector spherical_vector(const TameChar& chi, cplx s) {
  if (!char_square_trivial(chi)) throw std::invalid_argument("spherical vector requires chi^2 = 1");
  InducedVector v;
  v.form = InducedVector::Form::Spherical;
  v.chi = chi;
  v.s = s;
  return v;
}

cplx spherical_eval(const FieldPair& fp, const TameChar& chi, cplx s, const EElt& x) {
  if (!char_square_trivial(chi)) throw std::invalid_argument("spherical vector requires chi^2 = 1");
  const double q = static_cast<double>(fp.qF());
  const bool onE = chi.tag == FieldTag::E;
  if (!onE && !x.x2.is_zero()) throw std::invalid_argument("spherical_eval: F-character at a non-F point");
  if (x.x1.is_zero() && x.x2.is_zero()) return 1.0;
  const int w = onE ? fp.w_E(x) : fp.val_F(x.x1);
  if (w >= 0) return 1.0;
  // |x| = q^{-w}, and the exponent is taken in the field's own normalization.
  return qpow(q, static_cast<double>(w) * (2.0 * s + 1.0));
}

SphericalConstant sbo_spherical_constant(const FieldPair& fp, const ParamTuple& pt) {
  const double q = static_cast<double>(fp.qF());
  SphericalConstant out;
  out.normalized = MeroRational(q);
  if (!char_square_trivial(pt.chi)) throw std::invalid_argument("spherical constant requires chi^2 = 1");
  if (!(pt.eta == restrict_char(fp, pt.chi))) {
    out.raw = MeroRational(q);
    return out;
  }
  const double u = 1.0 - 1.0 / q;
  MeroRational n(q);
  if (fp.ext() == Ext::Unramified) {
    // (1 - 1/q)(1 - q_E^{-(2s+1)}), q_E^{-2s} = X^4.
    n.add_term(u, 0, 0);
    n.add_term(-u / (q * q), 4, 0);
  } else {
    // (1 - 1/q)(1 - q^{-1} X^2)(1 + q^{-1/2} Y^{-1}).
    const double r = 1.0 / std::sqrt(q);
    n.add_term(u, 0, 0);
    n.add_term(-u / q, 2, 0);
    n.add_term(u * r, 0, -1);
    n.add_term(-u * r / q, 2, -1);
  }
  n.normalize();
  out.normalized = n;
  MeroRational raw = n;
  raw.add_den(backslash_factor(fp));
  raw.add_den(slash_factor(fp));
  out.raw = raw;
  return out;
}

int spherical_oracle_max_J(const FieldPair& fp) {
  // N(x) at v(x1) = -J, v(x2) = J has height about p^{4J}.
  return static_cast<int>(std::floor(116.0 / (4.0 * std::log2(static_cast<double>(fp.p())))));
}

OracleResult spherical_oracle(const FieldPair& fp, const ParamTuple& pt, int J) {
  if (J > spherical_oracle_max_J(fp)) throw std::invalid_argument("spherical_oracle: J exceeds the exact-arithmetic range");
  if (!char_square_trivial(pt.chi)) throw std::invalid_argument("spherical_oracle requires chi^2 = 1");
  const double q = static_cast<double>(fp.qF());
  const double a = pt.t.real() + 0.5;
  const double b = (2.0 * pt.s + pt.t).real() - 0.5;
  const double c = 2.0 * pt.s.real() + 1.0;
  const int v = fp.v_alpha_sq();
  const double rho = std::pow(q, -2.0 + 2.0 * a - b);
  const double rho_neg = rho * std::pow(q, 2.0 * c);
  if (!(1.0 + b > 0)) throw std::invalid_argument("spherical_oracle: outside the region of convergence");
  const double total_a = (geo_up(rho) + geo_down(rho_neg)) / (1.0 - std::pow(q, -(1.0 + b)));
  const double total_b = std::pow(q, v * a - 1.0) / (1.0 - 1.0 / q) * (geo_up(rho) + std::pow(q, v * c) * geo_down(rho_neg));
  const double u = 1.0 - 1.0 / q;
  const double total = u * u * (total_a + total_b);

  OracleResult out;
  out.J = J;
  double box_abs = 0;
  for (int m = -J; m <= J; ++m) {
    for (int n = -J; n <= J; ++n) {
      box_abs += shell_abs(q, m, n, v, a, b, c);
      const double vol = std::pow(q, -static_cast<double>(m + 1)) * std::pow(q, -static_cast<double>(n + 1));
      const Rat pm = fp.p_pow(m);
      const Rat pn = fp.p_pow(n);
      for (std::int64_t u1 = 1; u1 < fp.p(); ++u1) {
        for (std::int64_t u2 = 1; u2 < fp.p(); ++u2) {
          const EElt x{pm * Rat(u1), pn * Rat(u2)};
          const cplx k = kernel_pointwise(fp, pt, x) * spherical_eval(fp, pt.chi, pt.s, x);
          const EElt y{x.x1 + fp.p_pow(m + 1), x.x2 + fp.p_pow(n + 1)};
          const cplx ky = kernel_pointwise(fp, pt, y) * spherical_eval(fp, pt.chi, pt.s, y);
          if (std::abs(k - ky) > 1e-10 * std::max(1.0, std::abs(k)))
            throw std::logic_error("spherical_oracle: integrand not constant on a shell coset");
          out.value += k * vol;
        }
      }
    }
  }
  const double tail = total - box_abs;
  if (tail < -1e-10 * total) throw std::logic_error("spherical_oracle: negative tail mass");
  out.tail_bound = std::max(tail, 0.0) * (1.0 + 1e-9) + 1e-14 * total;
  return out;
}

cplx apply_sbo(const FieldPair& fp, KernelVariant variant, const ParamTuple& pt, const InducedVector& v, const Rat& y) {
  if (v.form == InducedVector::Form::StepRestricted) {
    const StepFunction shifted = translate(fp, v.f, EElt{-y, Rat(0)});
    return pair_value(fp, variant, pt, shifted);
  }
  if (std::abs(v.s - pt.s) > 1e-12 || !(v.chi == pt.chi))
    throw std::invalid_argument("apply_sbo: spherical vector does not match the source parameters");
  const EElt yF{y, Rat(0)};
  const cplx target = spherical_eval(fp, pt.eta, pt.t, yF);
  switch (variant) {
    case KernelVariant::Delta:
      return spherical_eval(fp, pt.chi, pt.s, yF);
    case KernelVariant::Normalized:
    case KernelVariant::Raw: {
      const SphericalConstant sc = sbo_spherical_constant(fp, pt);
      const EvalResult e = eval_at(variant == KernelVariant::Raw ? sc.raw : sc.normalized, pt.s, pt.t);
      if (e.pole) throw std::domain_error("apply_sbo: spherical constant has a pole");
      return e.value * target;
    }
    case KernelVariant::DoubleTilde: {
      if (!regime(fp, pt).in_l) throw std::invalid_argument("DoubleTilde requires parameters in the set L");
      const LimitResult lim = limit_along_line(sbo_spherical_constant(fp, pt).normalized, pt.s, pt.t);
      if (!lim.removable) throw std::runtime_error("DoubleTilde: non-removable singularity");
      return lim.value * target;
    }
    case KernelVariant::ResidueLine:
      break;
  }
  throw std::invalid_argument("apply_sbo: variant not available for spherical inputs");
}

MeroRational std_intertwiner(const FieldPair& fp, const TameChar& chi, const StepFunction& f, const EElt& x_prime) {
  if (f.tag != FieldTag::E || chi.tag != FieldTag::E) throw std::invalid_argument("std_intertwiner acts on E");
  const StepFunction g = translate(fp, reflect(fp, f), x_prime);
  ShellCharacter h;
  h.tag = FieldTag::E;
  h.chi0 = char_pow(chi, 2);
  h.c = static_cast<double>(fp.qF());
  h.a = 2;
  h.b = 0;
  return shell_char_integral(fp, h, g);
}

cplx composition_constant(const FieldPair& fp, const ParamTuple& pt) {
  const double q = static_cast<double>(fp.qF());
  if (lattice_defect(pt.t - 0.5, kPi / std::log(q)) > kLatticeTol)
    throw std::invalid_argument("composition_constant requires t in 1/2 + (pi i / ln q) Z");
  const InversionConstants ic = inversion_constants(fp);
  return ic.cF * gamma_product(fp, {{make_char(fp, FieldTag::F, 0), {2.0 * pt.t, 2.0}},
                                    {char_pow(pt.chi, 2), {-pt.t + 0.5, -1.0}}});
}

cplx line_kernel_integral(const FieldPair& fp, const ParamTuple& pt) {
  if (!(pt.t.real() > 0)) throw std::invalid_argument("line_kernel_integral requires Re t > 0");
  const double q = static_cast<double>(fp.qF());
  const Rat alpha_x2(1);
  auto k_at = [&](const Rat& y) { return kernel_pointwise(fp, pt, EElt{y, alpha_x2}); };
  auto checked = [&](const Rat& y, int lvl) {
    const cplx k = k_at(y);
    if (std::abs(k_at(y + fp.p_pow(lvl)) - k) > 1e-10 * std::max(1.0, std::abs(k)))
      throw std::logic_error("line_kernel_integral: kernel not constant on a coset");
    return k;
  };
  cplx total = 0;
  // O, at level 1.
  for (const Rat& y : fp.residues_between(0, 1)) total += checked(y, 1) / q;
  // Shells |y| = q^{-i}, i < 0.
  auto shell = [&](int i) {
    cplx s = 0;
    for (std::int64_t u = 1; u < fp.p(); ++u) s += checked(fp.p_pow(i) * Rat(u), i + 1);
    return s * std::pow(q, -static_cast<double>(i + 1));
  };
  const cplx s1 = shell(-1);
  const cplx s2 = shell(-2);
  const cplx s3 = shell(-3);
  const cplx r = qpow(q, -2.0 * pt.t);
  if (std::abs(s2 - s1 * r) > 1e-10 * std::abs(s1) || std::abs(s3 - s2 * r) > 1e-10 * std::abs(s1))
    throw std::logic_error("line_kernel_integral: shells are not geometric");
  return total + s1 / (1.0 - r);
}

MeroRational image_integral(const FieldPair& fp, const ParamTuple& pt, const StepFunction& f) {
  if (f.tag != FieldTag::E) throw std::invalid_argument("image_integral expects a function on E");
  require_trivial_pairing(fp, pt, "image_integral");
  const double q = static_cast<double>(fp.qF());
  // Marginal g(x2) = int f(x1, x2) dx1.
  StepFunction g = zero_function(FieldTag::F, f.level, f.support_M);
  const double vol1 = std::pow(q, -static_cast<double>(f.level));
  for (const auto& [k, c] : f.coeffs) g.coeffs[{k.second, Rat(0)}] += c * vol1;
  ShellCharacter h;
  h.tag = FieldTag::F;
  h.chi0 = char_mul(restrict_char(fp, pt.chi), char_inv(pt.eta));
  h.c = std::sqrt(q);
  h.a = 2;
  h.b = -1;
  const MeroRational u = scale(shell_char_integral(fp, h, g), line_kernel_integral(fp, pt));
  return mul(u, normalizer(fp));
}

std::string to_string(ImageClass c) {
  switch (c) {
    case ImageClass::Zero: return "Zero";
    case ImageClass::ConstantsLine: return "ConstantsLine";
    case ImageClass::Steinberg: return "Steinberg";
    case ImageClass::Full: return "Full";
  }
  return "?";
}

ImageClass image_class(const FieldPair& fp, const ParamTuple& pt, KernelVariant variant) {
  if (!pt.s_sym || !pt.t_sym) throw std::invalid_argument("image_class requires exact parameters");
  const Regime reg = regime(fp, pt);
  const SymParam& s = *pt.s_sym;
  const SymParam& t = *pt.t_sym;
  const Rat h(1, 2);
  const Rat zero(0);
  const Rat one(1);
  switch (variant) {
    case KernelVariant::Delta:
      if (!reg.slash) throw std::invalid_argument("the delta operator requires the Slash variety");
      return ImageClass::Full;
    case KernelVariant::DoubleTilde:
      if (!reg.in_l) throw std::invalid_argument("DoubleTilde requires parameters in the set L");
      return t.re == h ? ImageClass::Steinberg : ImageClass::ConstantsLine;
    case KernelVariant::Normalized:
      break;
    default:
      throw std::invalid_argument("image_class: unsupported variant " + to_string(variant));
  }
  if (!reg.chi_eta_trivial || !reg.chi_eta_inv_trivial) return ImageClass::Full;
  if (reg.in_l) return ImageClass::Zero;
  const bool sq = char_square_trivial(pt.chi);
  const bool ram = fp.ext() == Ext::Ramified;
  const bool t_half = t.re == h && units_integer(t.im_units);
  const bool t_neg_half = t.re == -h && units_integer(t.im_units);
  if (!sq) {
    bool constants;
    if (!ram) {
      constants = (sym_is(s, zero, zero) && sym_is(t, -h, zero)) || (sym_is(s, zero, one) && sym_is(t, -h, one));
    } else {
      constants = (sym_is(s, zero, zero) && sym_is(t, -h, zero)) || (sym_is(s, zero, one) && sym_is(t, -h, zero)) ||
                  (sym_is(s, zero, h) && sym_is(t, -h, one)) || (sym_is(s, zero, Rat(3, 2)) && sym_is(t, -h, one));
    }
    if (constants) return ImageClass::ConstantsLine;
    if (t_half) return ImageClass::Steinberg;
    return ImageClass::Full;
  }
  if (!ram) {
    if (t_neg_half) return ImageClass::ConstantsLine;
    if ((sym_is(s, -h, zero) && sym_is(t, h, zero)) || (sym_is(s, -h, one) && sym_is(t, h, one)))
      return ImageClass::Steinberg;
    return ImageClass::Full;
  }
  const bool special_s = sym_is(s, zero, h) || sym_is(s, zero, Rat(3, 2));
  if (sym_is(t, -h, zero) && !(s.re == -h && units_integer(s.im_units))) return ImageClass::ConstantsLine;
  if (special_s && sym_is(t, -h, one)) return ImageClass::ConstantsLine;
  if (sym_is(t, h, one) && !special_s) return ImageClass::Steinberg;
  if (sym_is(s, -h, zero) && sym_is(t, h, zero)) return ImageClass::Steinberg;
  if (sym_is(s, -h, one) && sym_is(t, h, zero)) return ImageClass::Steinberg;
  return ImageClass::Full;
}

bool steinberg_test(const FieldPair& fp, const StepFunction& g) {
  return std::abs(integrate(fp, g)) <= 1e-9 * coeff_l1(g);
}

bool constant_test(const std::vector<cplx>& values, double tol) {
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (std::abs(values[i] - values[j]) > tol) return false;
  return true;
}

}  // namespace sbk

namespace sbk {

namespace {

// lim_{z -> 0} int_F (A~_{s0+z,t0} f) / (1 - q^{-2z}). The line integral in image_integral is
// evaluated at a fixed s, so the limit is taken on full re-evaluations at s0 +- z
// (symmetric difference with one Richardson step).
cplx double_tilde_image_integral(const FieldPair& fp, const ParamTuple& pt, const StepFunction& f) {
  const double q = static_cast<double>(fp.qF());
  auto g = [&](double z) {
    ParamTuple shifted = pt;
    shifted.s = pt.s + z;
    shifted.s_sym.reset();
    const EvalResult e = eval_at(image_integral(fp, shifted, f), shifted.s, shifted.t);
    if (e.pole) throw std::domain_error("image_empirics: image integral has a pole near the line");
    return e.value / (1.0 - std::pow(q, -2.0 * z));
  };
  auto sym = [&](double z) { return 0.5 * (g(z) + g(-z)); };
  const double h = 1e-3;
  return (4.0 * sym(h / 2) - sym(h)) / 3.0;
}

}  // namespace

ImageEmpirics image_empirics(const FieldPair& fp, const ParamTuple& pt, KernelVariant variant,
                             const std::vector<StepFunction>& inputs, const std::vector<Rat>& points) {
  ImageEmpirics out;
  out.predicted = image_class(fp, pt, variant);
  out.inputs = static_cast<int>(inputs.size());
  const Regime reg = regime(fp, pt);
  const double q = static_cast<double>(fp.qF());
  const bool integrable = reg.chi_eta_trivial && reg.chi_eta_inv_trivial &&
                          lattice_defect(pt.t - 0.5, kPi / std::log(q)) <= kLatticeTol;
  for (const StepFunction& f : inputs) {
    const double tol = 1e-9 * std::max(1.0, coeff_l1(f));
    std::vector<cplx> values;
    bool all_zero = true;
    for (const Rat& y : points) {
      values.push_back(apply_sbo(fp, variant, pt, step_vector(f), y));
      all_zero = all_zero && std::abs(values.back()) <= tol;
    }
    out.zero.push_back(all_zero);
    out.constant.push_back(constant_test(values, tol));
    if (integrable) {
      cplx v;
      if (variant == KernelVariant::DoubleTilde) {
        v = double_tilde_image_integral(fp, pt, f);
      } else {
        const EvalResult e = eval_at(image_integral(fp, pt, f), pt.s, pt.t);
        if (e.pole) throw std::domain_error("image_empirics: image integral has a pole");
        v = e.value;
      }
      out.integral_zero.emplace_back(std::abs(v) <= tol);
    } else {
      out.integral_zero.emplace_back(std::nullopt);
    }
  }
  auto all = [](const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); };
  auto any_false = [](const std::vector<bool>& v) { return std::any_of(v.begin(), v.end(), [](bool b) { return !b; }); };
  std::vector<bool> integral_known;
  bool integral_all_zero = true;
  bool integral_some_nonzero = false;
  for (const auto& iz : out.integral_zero) {
    if (!iz) continue;
    integral_known.push_back(*iz);
    integral_all_zero = integral_all_zero && *iz;
    integral_some_nonzero = integral_some_nonzero || !*iz;
  }
  switch (out.predicted) {
    case ImageClass::Zero:
      out.pass = all(out.zero);
      out.detail = out.pass ? "all outputs vanish" : "nonzero output";
      break;
    case ImageClass::ConstantsLine:
      out.pass = all(out.constant) && any_false(out.zero);
      out.detail = out.pass ? "outputs constant and not all zero" : "non-constant or identically zero outputs";
      break;
    case ImageClass::Steinberg:
      out.pass = !integral_known.empty() && integral_all_zero && any_false(out.constant);
      out.detail = out.pass ? "zero integrals, non-constant outputs" : "nonzero integral, constant outputs or no integral";
      break;
    case ImageClass::Full:
      out.pass = any_false(out.constant) && (integral_known.empty() || integral_some_nonzero);
      out.detail = out.pass ? "non-constant outputs with nonzero integral where defined" : "image looks degenerate";
      break;
  }
  return out;
}

}  // namespace sbk
