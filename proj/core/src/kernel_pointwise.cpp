#include <cmath>
#include <stdexcept>

#include "sbk/kernels.hpp"

namespace sbk {

namespace {

cplx chi0_E(const FieldPair& fp, const TameChar& chi, const EElt& e) {
  return eval_tame(fp, chi, fp.lead_E(e));
}

}  // namespace

KernelMonomial kernel_monomial(const FieldPair& fp, const ParamTuple& pt, const EElt& x) {
  if (x.x2.is_zero()) throw std::invalid_argument("kernel evaluated on F (x2 = 0)");
  const int w = fp.w_E(x);
  const int v2 = fp.val_F(x.x2);
  const Rat z = x.x2 / fp.norm(x);
  const cplx phase = chi0_E(fp, pt.chi, fp.mul(x, x)) * chi0_E(fp, pt.chi, EElt{z, Rat(0)}) *
                     eval_tame(fp, pt.eta, fp.lead_F(z));
  const double q = static_cast<double>(fp.qF());
  return {phase * std::pow(q, 0.5 * (w + v2)), 2 * v2, v2 - w};
}

cplx kernel_product_form(const FieldPair& fp, const ParamTuple& pt, const EElt& x) {
  if (x.x2.is_zero()) throw std::invalid_argument("kernel evaluated on F (x2 = 0)");
  const EElt z{x.x2 / fp.norm(x), Rat(0)};
  return eval_mult_char(fp, pt.chi, pt.s - 0.5, fp.mul(x, x)) * eval_mult_char(fp, pt.chi, pt.s - 0.5, z) *
         eval_mult_char(fp, pt.eta, pt.t + 0.5, z);
}

cplx kernel_norm_form(const FieldPair& fp, const ParamTuple& pt, const EElt& x) {
  if (x.x2.is_zero()) throw std::invalid_argument("kernel evaluated on F (x2 = 0)");
  const double q = static_cast<double>(fp.qF());
  const Rat n = fp.norm(x);
  const EElt x_over_xbar = fp.mul(x, fp.inv(fp.conj(x)));
  const int w = fp.w_E(x);
  const int v2 = fp.val_F(x.x2);
  const cplx units = chi0_E(fp, pt.chi, x_over_xbar) * chi0_E(fp, pt.chi, EElt{x.x2, Rat(0)}) *
                     eval_tame(fp, pt.eta, fp.lead_F(x.x2 / n));
  return units * qpow(q, static_cast<double>(w) * (pt.t + 0.5)) *
         qpow(q, -static_cast<double>(v2) * (2.0 * pt.s + pt.t - 0.5));
}

cplx kernel_pointwise(const FieldPair& fp, const ParamTuple& pt, const EElt& x) {
  const cplx a = kernel_product_form(fp, pt, x);
  const cplx b = kernel_norm_form(fp, pt, x);
  if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
    throw std::logic_error("kernel forms disagree at x = (" + x.x1.str() + ", " + x.x2.str() + ")");
  return a;
}

double kernel_modulus(const FieldPair& fp, const ParamTuple& pt, const EElt& x) {
  const double q = static_cast<double>(fp.qF());
  const int w = fp.w_E(x);
  const int v2 = fp.val_F(x.x2);
  return std::pow(q, w * (pt.t.real() + 0.5)) * std::pow(q, -v2 * (2 * pt.s.real() + pt.t.real() - 0.5));
}

PointwiseKernel kappa_transform(const FieldPair& fp, const ParamTuple& pt, PointwiseKernel u) {
  return [&fp, pt, u = std::move(u)](const EElt& x) {
    return eval_mult_char(fp, pt.chi, pt.s - 0.5, fp.mul(x, x)) * u(fp.inv(x));
  };
}

MeroRational l_factor(const FieldPair& fp, cplx s, const TameChar& eta) {
  const double q = static_cast<double>(fp.qF());
  MeroRational u = MeroRational::constant(q, 1.0);
  if (eta.trivial()) u.add_den({qpow(q, -s), 0, 1});
  return u;
}

Factor backslash_factor(const FieldPair& fp) { return {std::pow(static_cast<double>(fp.qF()), -0.5), 2, 1}; }

Factor slash_factor(const FieldPair& fp) { return {std::pow(static_cast<double>(fp.qF()), -0.5), 2, -1}; }

}  // namespace sbk
