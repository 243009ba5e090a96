#include "sbk/homogeneous.hpp"

#include <cmath>
#include <stdexcept>

namespace sbk {

Mono shell_char_monomial(const FieldPair& fp, const ShellCharacter& h, const EElt& y) {
  const int w = h.tag == FieldTag::F ? fp.val_F(y.x1) : fp.w_E(y);
  const cplx phase = h.chi0.trivial() ? cplx(1.0) : eval_tame(fp, h.chi0, fp.leading_unit(y, h.tag));
  return {phase * std::pow(h.c, w), h.a * w, h.b * w};
}

MeroRational shell_char_integral(const FieldPair& fp, const ShellCharacter& h, const StepFunction& g) {
  if (g.tag != h.tag) throw std::invalid_argument("shell_char_integral: field mismatch");
  const double q = static_cast<double>(fp.qF());
  MeroRational out(q);
  const double vol = fp.coset_volume(g.tag, g.level).to_double();
  cplx at_zero{};
  for (const auto& [k, c] : g.coeffs) {
    if (k.first.is_zero() && k.second.is_zero()) {
      at_zero = c;
      continue;
    }
    const Mono m = shell_char_monomial(fp, h, EElt{k.first, k.second});
    out.add_term(c * vol * m.c, m.a, m.b);
  }
  out.normalize();
  if (at_zero != cplx{} && h.chi0.trivial()) {
    const int f = h.tag == FieldTag::F ? 1 : fp.f();
    const int m0 = h.tag == FieldTag::F ? g.level : (fp.ext() == Ext::Unramified ? g.level : 2 * g.level);
    // Shell m of the normalized valuation has w = f m and volume q^{-f m} (1 - q^{-f}).
    const cplx ratio = std::pow(h.c, f) * std::pow(q, -f);
    MeroRational tail = geometric_tail(q, ratio, h.a * f, h.b * f, m0);
    out = add(out, scale(tail, at_zero * (1.0 - std::pow(q, -f))));
  }
  return out;
}

MeroRational homog_pair_1d(const FieldPair& fp, const TameChar& chi, const StepFunction& phi) {
  if (chi.tag != FieldTag::F || phi.tag != FieldTag::F) throw std::invalid_argument("homog_pair_1d expects data on F");
  const double q = static_cast<double>(fp.qF());
  // |x|^{s-1} = (q X)^{v(x)}.
  const ShellCharacter h{FieldTag::F, chi, q, 1, 0};
  MeroRational u = shell_char_integral(fp, h, phi);
  if (chi.trivial()) u = mul_factor(u, Factor{1.0, 1, 0});
  return u;
}

cplx homog_pair_1d_value(const FieldPair& fp, const TameChar& chi, cplx s, const StepFunction& phi) {
  const auto r = eval_at(homog_pair_1d(fp, chi, phi), s, 0.0);
  if (r.pole) throw std::domain_error("homog_pair_1d: unexpected pole");
  return r.value;
}

}  // namespace sbk
