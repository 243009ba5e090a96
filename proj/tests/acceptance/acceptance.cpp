// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sbk/harmonic.hpp"
#include "sbk/homogeneous.hpp"
#include "sbk/kernels.hpp"
#include "sbk/operators.hpp"

using namespace sbk;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

const Rat h(1, 2);

std::vector<FieldPair> fields() {
  return {FieldPair::make_default(3, Ext::Unramified), FieldPair::make_default(3, Ext::Ramified),
          FieldPair::make_default(5, Ext::Unramified), FieldPair::make_default(5, Ext::Ramified)};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<StepFunction> battery(const FieldPair& fp, FieldTag tag, std::uint64_t seed, int n, RandomBounds b) {
  std::vector<StepFunction> out;
  for (int i = 0; i < n; ++i) out.push_back(random_step(fp, tag, seed + static_cast<std::uint64_t>(i), b));
  return out;
}

/// Drops the cosets meeting F.
StepFunction off_F(StepFunction f) {
  for (auto it = f.coeffs.begin(); it != f.coeffs.end();)
    it = it->first.second.is_zero() ? f.coeffs.erase(it) : std::next(it);
  return f;
}

/// Drops the coset of 0.
StepFunction vanish_at_0(StepFunction f) {
  f.coeffs.erase({Rat(0), Rat(0)});
  return f;
}

std::int64_t eta_of(const FieldPair& fp, std::int64_t chi_k, bool inverse) {
  const TameChar r = restrict_char(fp, make_char(fp, FieldTag::E, chi_k));
  return (inverse ? char_inv(r) : r).k;
}

/// 2s + t + 1/2 in the lattice and chi|eta = 1.
ParamTuple backslash_tuple(const FieldPair& fp, std::int64_t chi_k, SymParam t) {
  const SymParam s{(-t.re - h) / Rat(2), -Rat(fp.f()) * t.im_units / Rat(2)};
  return make_params(fp, chi_k, eta_of(fp, chi_k, true), s, t);
}

/// 2s - t + 1/2 in the lattice and chi|eta^{-1} = 1.
ParamTuple slash_tuple(const FieldPair& fp, std::int64_t chi_k, SymParam t) {
  const SymParam s{(t.re - h) / Rat(2), Rat(fp.f()) * t.im_units / Rat(2)};
  return make_params(fp, chi_k, eta_of(fp, chi_k, false), s, t);
}

std::vector<ParamTuple> l_tuples(const FieldPair& fp) {
  std::vector<ParamTuple> out;
  for (std::int64_t c = 0; c < fp.qE() - 1; ++c)
    for (std::int64_t e = 0; e < fp.qF() - 1; ++e)
      for (const auto& [s, t] : l_set(fp, make_char(fp, FieldTag::E, c), make_char(fp, FieldTag::F, e)))
        out.push_back(make_params(fp, c, e, s, t));
  return out;
}

std::vector<Rat> eval_points(const FieldPair& fp) {
  const Rat p(fp.p());
  return {Rat(0), Rat(1), Rat(1) / p, Rat(-1), p};
}

// ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
  Rng rng(101);
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_tail = 0;
  int n = 0;
  bool pass = true;
  const auto fps = fields();
  for (int i = 0; i < 52; ++i) {
    const FieldPair& fp = fps[i % 4];
    const double tre = rng.uniform() * 2 - 1;
    const double lo = (std::abs(tre) - 0.25) / 2 + 0.05;
    const double sre = lo + rng.uniform() * (1.5 - lo);
    const ParamTuple pt = make_params(fp, rng.range(0, fp.qE() - 2), rng.range(0, fp.qF() - 2),
                                      cplx(sre, rng.uniform() - 0.5), cplx(tre, rng.uniform() - 0.5));
    const StepFunction phi = random_step(fp, FieldTag::E, 1100 + i, {static_cast<int>(rng.range(0, 1)), 1, 1, 0.8});
    const cplx closed = pair_value(fp, KernelVariant::Raw, pt, phi);
    const OracleResult o = oracle_pair(fp, pt, phi, 12);
    const double excess = std::abs(closed - o.value) - (o.tail_bound + 1e-8);
    worst_excess = std::max(worst_excess, excess);
    worst_tail = std::max(worst_tail, o.tail_bound);
    pass = pass && excess <= 0;
    ++n;
  }
  return {pass, "tuples=" + std::to_string(n) + " worst(|diff|-tol)=" + fmt(worst_excess) + " max_tail=" + fmt(worst_tail)};
}

Outcome holomorphy() {
  Rng rng(202);
  const auto fps = fields();
  int with_den = 0, n = 0;
  double worst_jump = 0;
  for (int i = 0; i < 50; ++i) {
    const FieldPair& fp = fps[i % 4];
    const std::int64_t ck = rng.range(0, fp.qE() - 2);
    const cplx t(rng.uniform() * 2 - 1, rng.uniform() - 0.5);
    const double th = rng.uniform() * 2 * kPi;
    const cplx delta = 1e-3 * (0.1 + 0.9 * rng.uniform()) * cplx(std::cos(th), std::sin(th));
    ParamTuple pt;
    switch (i % 3) {
      case 0: pt = make_params(fp, ck, rng.range(0, fp.qF() - 2), cplx(rng.uniform() * 2 - 1, rng.uniform()), t); break;
      case 1: pt = make_params(fp, ck, eta_of(fp, ck, true), (-t - 0.5) / 2.0 + delta, t); break;
      default: pt = make_params(fp, ck, eta_of(fp, ck, false), (t - 0.5) / 2.0 + delta, t); break;
    }
    // Unit coefficient mass, so the step bound is a bound on the functional.
    const StepFunction raw = random_step(fp, FieldTag::E, 2200 + i, {static_cast<int>(rng.range(0, 1)), 1, 1, 0.8});
    const StepFunction phi = scale(raw, 1.0 / coeff_l1(raw));
    const PairingResult r = pair(fp, KernelVariant::Normalized, pt, phi);
    with_den += !r.value.den().empty();
    const cplx v0 = eval_at(r.value, pt.s, pt.t).value;
    const cplx vs = eval_at(r.value, pt.s + 1e-6, pt.t).value;
    const cplx vt = eval_at(r.value, pt.s, pt.t + 1e-6).value;
    worst_jump = std::max({worst_jump, std::abs(vs - v0), std::abs(vt - v0)});
    ++n;
  }
  return {with_den == 0 && worst_jump < 1e-4,
          "tuples=" + std::to_string(n) + " with_denominators=" + std::to_string(with_den) + " max_step_change=" + fmt(worst_jump)};
}

struct TupleCase {
  int field;
  std::int64_t chi;
  SymParam t;
};

Outcome residue_backslash() {
  const auto fps = fields();
  // (chi^2 = 1, unramified), (chi^2 != 1, unramified), (chi^2 = 1, ramified), (chi^2 != 1, ramified).
  const std::vector<TupleCase> cases = {
      {0, 0, {Rat(1, 3), 0}}, {2, 0, {Rat(2, 5), 1}}, {0, 4, {Rat(-3, 4), 0}},
      {0, 1, {Rat(1, 3), 0}}, {2, 3, {Rat(1, 5), 1}},
      {1, 0, {Rat(1, 3), 0}}, {1, 1, {Rat(-3, 4), 1}}, {3, 2, {Rat(1, 5), 0}},
      {3, 1, {Rat(1, 3), 0}}, {3, 3, {Rat(2, 5), 1}}};
  double worst = 0;
  int regimes_seen = 0, bad_regime = 0;
  bool seen[2][2] = {};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const FieldPair& fp = fps[cases[i].field];
    const ParamTuple pt = backslash_tuple(fp, cases[i].chi, cases[i].t);
    if (regime(fp, pt).kind != RegimeKind::Backslash) ++bad_regime;
    seen[char_square_trivial(pt.chi)][fp.ext() == Ext::Ramified] = true;
    for (const StepFunction& phi : battery(fp, FieldTag::E, 3000 + 10 * i, 10, {0, 1, 1, 0.8}))
      worst = std::max(worst, std::abs(pair_value(fp, KernelVariant::Normalized, pt, phi) -
                                       pair_value(fp, KernelVariant::ResidueLine, pt, phi)));
  }
  for (auto& a : seen)
    for (bool b : a) regimes_seen += b;
  return {worst <= 1e-8 && regimes_seen == 4 && bad_regime == 0,
          "tuples=10 regimes=" + std::to_string(regimes_seen) + "/4 max|diff|=" + fmt(worst)};
}

std::vector<std::pair<FieldPair, ParamTuple>> slash_cases() {
  const auto fps = fields();
  const std::vector<TupleCase> cases = {
      {0, 0, {Rat(1), 0}}, {0, 2, {Rat(3, 2), 0}}, {0, 1, {Rat(1, 3), 1}}, {1, 0, {Rat(1), 0}}, {1, 1, {Rat(2, 3), 1}},
      {2, 0, {Rat(4, 5), 0}}, {2, 12, {Rat(1), 1}}, {2, 5, {Rat(-1, 3), 0}}, {3, 2, {Rat(1), 0}}, {3, 1, {Rat(3, 4), 1}}};
  std::vector<std::pair<FieldPair, ParamTuple>> out;
  for (const TupleCase& c : cases) out.emplace_back(fps[c.field], slash_tuple(fps[c.field], c.chi, c.t));
  return out;
}

Outcome residue_slash() {
  double worst = 0;
  int bad_regime = 0, i = 0;
  for (const auto& [fp, pt] : slash_cases()) {
    if (regime(fp, pt).kind != RegimeKind::Slash) ++bad_regime;
    const cplx c = slash_delta_constant(fp, pt);
    for (const StepFunction& phi : battery(fp, FieldTag::E, 4000 + 10 * i, 3, {0, 1, 1, 1.0})) {
      const cplx at0 = value_at_zero(fp, phi);
      if (std::abs(at0) < 1e-3) continue;
      const cplx ratio = pair_value(fp, KernelVariant::Normalized, pt, phi) / at0;
      worst = std::max(worst, std::abs(ratio - c) / std::abs(c));
    }
    ++i;
  }
  return {worst <= 1e-6 && bad_regime == 0, "tuples=" + std::to_string(i) + " max_rel_err=" + fmt(worst)};
}

Outcome zero_set() {
  double worst = 0;
  int n = 0;
  std::vector<std::pair<FieldPair, ParamTuple>> all;
  for (const FieldPair& fp : fields())
    for (const ParamTuple& pt : l_tuples(fp)) all.emplace_back(fp, pt);
  for (const auto& [fp, pt] : all) {
    for (const StepFunction& phi : battery(fp, FieldTag::E, 5000 + 20 * n, 20, {0, 1, 1, 0.8}))
      worst = std::max(worst, std::abs(pair_value(fp, KernelVariant::Normalized, pt, phi)) / std::max(coeff_l1(phi), 1e-300));
    ++n;
  }
  // Near misses: t moved off the lattice by 1e-2.
  int near_ok = 0;
  double weakest = std::numeric_limits<double>::infinity();
  const std::size_t stride = std::max<std::size_t>(1, all.size() / 10);
  for (std::size_t k = 0; k < 10 && k * stride < all.size(); ++k) {
    const auto& [fp, pt] = all[k * stride];
    const ParamTuple moved = make_params(fp, pt.chi.k, pt.eta.k, pt.s, pt.t + 1e-2);
    double best = 0;
    for (const StepFunction& phi : battery(fp, FieldTag::E, 5500 + 20 * k, 20, {0, 1, 1, 0.8}))
      best = std::max(best, std::abs(pair_value(fp, KernelVariant::Normalized, moved, phi)));
    weakest = std::min(weakest, best);
    near_ok += best > 1e-6;
  }
  return {worst <= 1e-9 && near_ok == 10,
          "L_tuples=" + std::to_string(n) + " max|pair|/l1=" + fmt(worst) + " near_miss_nonzero=" + std::to_string(near_ok) +
              "/10 (weakest max|pair|=" + fmt(weakest) + ")"};
}

Outcome support() {
  const auto fps = fields();
  bool pass = true;
  std::ostringstream d;
  // Backslash without Slash.
  double off_worst = 0, on_best = 1e300;
  int leak = 0;
  const std::vector<TupleCase> bs = {{0, 0, {Rat(1, 3), 0}}, {1, 1, {Rat(-3, 4), 1}}, {2, 3, {Rat(1, 5), 1}}, {3, 1, {Rat(1, 3), 0}}};
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const FieldPair& fp = fps[bs[i].field];
    const ParamTuple pt = backslash_tuple(fp, bs[i].chi, bs[i].t);
    double on = 0;
    for (const StepFunction& raw : battery(fp, FieldTag::E, 6000 + 10 * i, 10, {1, 1, 1, 0.8})) {
      const StepFunction phi = off_F(raw);
      leak += coeff_l1(restrict_to_F(fp, phi)) != 0.0;
      off_worst = std::max(off_worst, std::abs(pair_value(fp, KernelVariant::Normalized, pt, phi)) / std::max(coeff_l1(phi), 1e-300));
      on = std::max(on, std::abs(pair_value(fp, KernelVariant::Normalized, pt, raw)));
    }
    on_best = std::min(on_best, on);
  }
  pass = pass && off_worst <= 1e-9 && on_best > 1e-6 && leak == 0;
  d << "backslash: off_F max=" << fmt(off_worst) << " meeting_F min(max)=" << fmt(on_best);
  // Slash without L.
  double sl_worst = 0;
  int i = 0;
  for (const auto& [fp, pt] : slash_cases()) {
    for (const StepFunction& raw : battery(fp, FieldTag::E, 6500 + 10 * i, 10, {1, 1, 1, 0.8})) {
      const StepFunction phi = vanish_at_0(raw);
      sl_worst = std::max(sl_worst, std::abs(pair_value(fp, KernelVariant::Normalized, pt, phi)) / std::max(coeff_l1(phi), 1e-300));
    }
    ++i;
  }
  pass = pass && sl_worst <= 1e-9;
  d << "; slash: phi(0)=0 max=" << fmt(sl_worst);
  // DoubleTilde at L is nonzero off F.
  double dt_weakest = 1e300;
  int dt_n = 0;
  for (const FieldPair& fp : fps) {
    const auto ls = l_tuples(fp);
    for (std::size_t k = 0; k < ls.size(); k += std::max<std::size_t>(1, ls.size() / 3)) {
      double best = 0;
      for (const StepFunction& raw : battery(fp, FieldTag::E, 7000 + 10 * dt_n, 10, {1, 1, 1, 0.8}))
        best = std::max(best, std::abs(pair_value(fp, KernelVariant::DoubleTilde, ls[k], off_F(raw))));
      dt_weakest = std::min(dt_weakest, best);
      ++dt_n;
    }
  }
  pass = pass && dt_weakest > 1e-6;
  d << "; double_tilde off_F tuples=" << dt_n << " min(max)=" << fmt(dt_weakest);
  return {pass, d.str()};
}

/// phi refined one level and cut to the cosets that 1 - b y keeps away from 0.
StepFunction mobius_domain(const FieldPair& fp, const StepFunction& phi, const Rat& b) {
  const int L = phi.level + 1;
  const int e = fp.ext() == Ext::Ramified ? 2 : 1;
  const StepFunction g = refine(fp, phi, L);
  StepFunction out = g;
  out.coeffs.clear();
  for (const auto& [k, c] : g.coeffs) {
    const EElt om = fp.sub({Rat(1), Rat(0)}, fp.mul({b, Rat(0)}, {k.first, k.second}));
    if (om.x1.is_zero() && om.x2.is_zero()) continue;
    if (fp.val_E(om) <= fp.val_E({b, Rat(0)}) + e * L - 1) out.coeffs[k] = c;
  }
  return out;
}

Outcome equivariance() {
  const auto fps = fields();
  Rng rng(707);
  const KernelVariant variants[] = {KernelVariant::Raw, KernelVariant::Normalized, KernelVariant::Delta, KernelVariant::DoubleTilde};
  std::vector<std::vector<ParamTuple>> ls, sls(4);
  for (const FieldPair& fp : fps) ls.push_back(l_tuples(fp));
  for (const auto& [fp, pt] : slash_cases())
    for (int f = 0; f < 4; ++f)
      if (fps[f].p() == fp.p() && fps[f].ext() == fp.ext()) sls[f].push_back(pt);
  double worst_a = 0, worst_b = 0;
  int counts[4] = {};
  for (int i = 0; i < 100; ++i) {
    const int fi = i % 4;
    const FieldPair& fp = fps[fi];
    const int vi = (i / 4) % 4;
    const KernelVariant v = variants[vi];
    ParamTuple pt;
    if (v == KernelVariant::Raw || (v == KernelVariant::Normalized && i % 8 < 4)) {
      pt = make_params(fp, rng.range(0, fp.qE() - 2), rng.range(0, fp.qF() - 2), cplx(rng.uniform() * 2 - 1, rng.uniform()),
                       cplx(rng.uniform() * 2 - 1, rng.uniform()));
    } else if (v == KernelVariant::Normalized) {
      pt = backslash_tuple(fp, rng.range(0, fp.qE() - 2), {Rat(rng.range(-4, 4), 5), Rat(rng.range(0, 1))});
    } else if (v == KernelVariant::Delta && i % 8 < 4) {
      pt = sls[fi][static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(sls[fi].size()) - 1))];
    } else {
      pt = ls[fi][static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(ls[fi].size()) - 1))];
    }
    const StepFunction phi = random_step(fp, FieldTag::E, 8000 + i, {0, 1, 1, 0.8});
    const Rat a = Rat(rng.range(1, fp.p() - 1)) * fp.p_pow(static_cast<int>(rng.range(-1, 1)));
    const Rat b = Rat(rng.range(1, fp.p() - 1)) * fp.p_pow(static_cast<int>(rng.range(0, 1)));

    const cplx base = pair_value(fp, v, pt, phi);
    const cplx fac = eval_mult_char(fp, restrict_char(fp, pt.chi), 2.0 * pt.s - pt.t + 0.5, {a, Rat(0)}) /
                     eval_mult_char(fp, pt.eta, 0.0, {a, Rat(0)});
    worst_a = std::max(worst_a, rel(pair_value(fp, v, pt, dilate(fp, phi, a)), fac * base));

    const StepFunction dom = mobius_domain(fp, phi, b);
    const cplx lhs = pair_value(fp, v, pt, mobius_pullback(fp, dom, b, -2));
    const StepFunction weighted = multiply_by(dom, [&](const EElt& y, int) {
      const EElt om = fp.sub({Rat(1), Rat(0)}, fp.mul({b, Rat(0)}, y));
      return 1.0 / eval_mult_char(fp, pt.chi, pt.s - 0.5, fp.mul(om, om));
    });
    worst_b = std::max(worst_b, rel(lhs, pair_value(fp, v, pt, weighted)));
    ++counts[vi];
  }
  std::ostringstream d;
  d << "cases=100 (Raw " << counts[0] << ", Normalized " << counts[1] << ", Delta " << counts[2] << ", DoubleTilde " << counts[3]
    << ") dilation max_rel=" << fmt(worst_a) << " mobius max_rel=" << fmt(worst_b);
  return {worst_a <= 1e-9 && worst_b <= 1e-9, d.str()};
}

Outcome spherical() {
  const auto fps = fields();
  struct Pt {
    int field;
    std::int64_t chi;
    cplx s, t;
  };
  const std::vector<Pt> pts = {{0, 0, 1.0, 0.0},          {0, 0, {0.8, 0.2}, 0.3}, {0, 0, 0.6, {-0.1, 0.3}},
                               {0, 4, 1.0, 0.2},          {1, 0, 1.0, 0.5},        {1, 1, 0.9, 0.1},
                               {2, 0, 1.0, 0.0},          {2, 12, 1.1, -0.2},      {3, 0, 1.0, 0.3},
                               {3, 2, 0.9, 0.0}};
  double worst = -1e300, worst_tail = 0, zero_worst = 0;
  int exact_zero = 0;
  for (const Pt& q : pts) {
    const FieldPair& fp = fps[q.field];
    const int J = std::min(14, spherical_oracle_max_J(fp));
    const ParamTuple pt = make_params(fp, q.chi, eta_of(fp, q.chi, false), q.s, q.t);
    const OracleResult o = spherical_oracle(fp, pt, J);
    const cplx closed = eval_at(sbo_spherical_constant(fp, pt).raw, pt.s, pt.t).value;
    worst = std::max(worst, std::abs(closed - o.value) - (o.tail_bound + 1e-6));
    worst_tail = std::max(worst_tail, o.tail_bound);

    const ParamTuple off = make_params(fp, q.chi, pt.eta.k == 0 ? (fp.qF() - 1) / 2 : 0, q.s, q.t);
    const bool zero = sbo_spherical_constant(fp, off).normalized.is_zero() &&
                      apply_sbo(fp, KernelVariant::Normalized, off, spherical_vector(off.chi, off.s), Rat(1, fp.p())) == cplx(0);
    exact_zero += zero;
    const OracleResult oz = spherical_oracle(fp, off, J);
    zero_worst = std::max(zero_worst, std::abs(oz.value) - (oz.tail_bound + 1e-6));
  }
  return {worst <= 0 && exact_zero == 10 && zero_worst <= 0,
          "points=10 worst(|diff|-tol)=" + fmt(worst) + " max_tail=" + fmt(worst_tail) + " exact_zeros=" +
              std::to_string(exact_zero) + "/10"};
}

Outcome composition() {
  const auto fps = fields();
  struct C {
    int field;
    std::int64_t chi;
    SymParam s, t;
  };
  const std::vector<C> cases = {{0, 0, {1, 0}, {h, 0}},       {0, 0, {-h, 0}, {h, 0}},        {0, 2, {1, 0}, {h, 0}},
                                {1, 0, {Rat(1, 4), 0}, {h, 1}}, {2, 4, {Rat(3, 4), 0}, {h, 0}}, {3, 2, {1, 0}, {h, 0}}};
  double worst = 0;
  int pattern_ok = 0, i = 0;
  for (const C& c : cases) {
    const FieldPair& fp = fps[c.field];
    const ParamTuple pt = make_params(fp, c.chi, eta_of(fp, c.chi, false), c.s, c.t);
    const ParamTuple pm = make_params(fp, c.chi, pt.eta.k, *pt.s_sym, SymParam{-pt.t_sym->re, -pt.t_sym->im_units});
    const cplx k = composition_constant(fp, pt);
    for (const StepFunction& f : battery(fp, FieldTag::E, 9000 + 10 * i, 5, {1, 1, 1, 0.8})) {
      const cplx lhs = eval_at(image_integral(fp, pt, f), pt.s, pt.t).value;
      for (const Rat& y : eval_points(fp))
        worst = std::max(worst, rel(k * apply_sbo(fp, KernelVariant::Normalized, pm, step_vector(f), y), lhs));
    }
    const ImageClass cls = image_class(fp, pt);
    const bool k_zero = std::abs(k) <= 1e-9;
    pattern_ok += k_zero ? (cls == ImageClass::Steinberg || cls == ImageClass::Zero)
                         : ((cls == ImageClass::Steinberg) == regime(fp, pm).in_l);
    ++i;
  }
  return {worst <= 1e-6 && pattern_ok == 6,
          "tuples=6 inputs=5 points=5 max_rel=" + fmt(worst) + " vanishing_pattern=" + std::to_string(pattern_ok) + "/6"};
}

Outcome fourier_layer() {
  const auto fps = fields();
  std::ostringstream d;
  bool pass = true;
  // Identities with the measured constants.
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const FieldPair& fp = fps[i % 4];
    const FieldTag tag = (i / 4) % 2 ? FieldTag::E : FieldTag::F;
    const InversionConstants ic = inversion_constants(fp);
    const double c = tag == FieldTag::F ? ic.cF : ic.cE;
    const StepFunction f = random_step(fp, tag, 10000 + i, {1, 1, 1, 0.8});
    const StepFunction g = random_step(fp, tag, 10100 + i, {0, 2, 1, 0.8});
    const StepFunction ff = fourier(fp, f), fg = fourier(fp, g);
    worst = std::max(worst, coeff_l1(prune(sub(fp, fourier(fp, ff), scale(reflect(fp, f), 1.0 / c)))));
    worst = std::max(worst, std::abs(inner_l2(fp, ff, fg) - inner_l2(fp, f, g) / c));
    worst = std::max(worst, coeff_l1(prune(sub(fp, fourier(fp, convolve(fp, f, g)), product(fp, ff, fg)))));
  }
  pass = pass && worst <= 1e-10;
  d << "identities max=" << fmt(worst);
  // Self-dual measures.
  std::string off;
  for (const FieldPair& fp : fps) {
    const InversionConstants ic = inversion_constants(fp);
    if (std::abs(ic.cF - 1) > 1e-12 || std::abs(ic.cE - 1) > 1e-12)
      off += " " + fp.describe() + ":(" + fmt(ic.cF) + "," + fmt(ic.cE) + ")";
  }
  pass = pass && off.empty();
  d << "; (cF,cE)=(1,1) " << (off.empty() ? "on all fields" : "fails on" + off);
  // Gamma structure and truncations.
  int structure_bad = 0;
  double trunc_excess = -1e300;
  for (const FieldPair& fp : fps) {
    for (FieldTag tag : {FieldTag::F, FieldTag::E}) {
      const std::int64_t n = (tag == FieldTag::F ? fp.qF() : fp.qE()) - 1;
      for (std::int64_t k = 0; k < n; ++k) {
        const TameChar chi = make_char(fp, tag, k);
        if (k == 0) {
          bool pole = false;
          try {
            gamma_value(fp, chi, 0.0);
          } catch (const std::domain_error&) {
            pole = true;
          }
          structure_bad += !pole || std::abs(gamma_value(fp, chi, 1.0)) > 1e-12;
        } else {
          for (double re : {-1.0, 0.0, 0.5, 1.0})
            for (double im : {0.0, 0.4}) {
              const cplx g = gamma_value(fp, chi, cplx(re, im));
              structure_bad += !std::isfinite(std::abs(g)) || std::abs(g) < 1e-12;
            }
        }
        for (double z : {1.3, 2.0}) trunc_excess = std::max(trunc_excess, std::abs(gamma_value(fp, chi, z) - gamma_truncated(fp, chi, z, 12)) - 1e-5);
        if (tag == FieldTag::E)
          for (cplx z : {cplx(-0.8, 0.1), cplx(-1.2, 0.0)})
            for (auto ver : {GammaIntegralVersion::OnePlusYAlpha, GammaIntegralVersion::YPlusAlpha}) {
              const TruncatedIntegral ti = gamma_integral_truncated(fp, chi, z, ver, 12);
              trunc_excess = std::max(trunc_excess, std::abs(gamma_integral(fp, chi, z, ver) - ti.value) - (ti.tail_bound + 1e-5));
            }
      }
    }
  }
  pass = pass && structure_bad == 0 && trunc_excess <= 0;
  d << "; gamma structure violations=" << structure_bad << " truncation worst(|diff|-tol)=" << fmt(trunc_excess);
  return {pass, d.str()};
}

Outcome homogeneous() {
  const auto fps = fields();
  Rng rng(1111);
  double at_lattice = 0, homog = 0;
  int i = 0;
  for (const FieldPair& fp : fps) {
    const double q = static_cast<double>(fp.qF());
    const TameChar triv = make_char(fp, FieldTag::F, 0);
    for (cplx s : {cplx(0.0), cplx(0.0, 2 * kPi / std::log(q))})
      for (const StepFunction& phi : battery(fp, FieldTag::F, 11000 + 10 * i++, 5, {1, 2, 1, 0.8}))
        at_lattice = std::max(at_lattice, std::abs(homog_pair_1d_value(fp, triv, s, phi) - (1 - 1 / q) * value_at_zero(fp, phi)));
    for (int k = 0; k < 10; ++k) {
      const TameChar chi = make_char(fp, FieldTag::F, rng.range(0, fp.qF() - 2));
      const cplx s(rng.uniform() * 3 - 1, rng.uniform() * 2 - 1);
      const StepFunction phi = random_step(fp, FieldTag::F, 11500 + 10 * i + k, {1, 2, 1, 0.8});
      const Rat a = Rat(rng.range(1, fp.p() - 1)) * fp.p_pow(static_cast<int>(rng.range(-2, 2)));
      const cplx base = homog_pair_1d_value(fp, chi, s, phi);
      const cplx fac = eval_mult_char(fp, chi, s - 1.0, {a, Rat(0)}) * fp.abs_F(a).to_double();
      homog = std::max(homog, rel(homog_pair_1d_value(fp, chi, s, dilate(fp, phi, a)), fac * base));
    }
  }
  return {at_lattice <= 1e-12 && homog <= 1e-9, "lattice max|diff|=" + fmt(at_lattice) + " homogeneity max_rel=" + fmt(homog)};
}

Outcome unitary() {
  std::ostringstream d;
  bool pass = true;
  double worst_spread = 0, worst_dev = 0, st_min = 1e300;
  int i = 0;
  for (const FieldPair& fp : fields()) {
    for (double s : {0.30, 0.35, 0.40, 0.45, 0.5}) {
      std::vector<cplx> ratios;
      cplx gc;
      for (StepFunction f : battery(fp, FieldTag::F, 12000 + 10 * i++, 5, {1, 1, 1, 0.8})) {
        if (s >= 0.5) f = sub(fp, f, scale(box_indicator(fp, FieldTag::F, 0, f.level), integrate(fp, f)));
        const EmbedRatio er = embed_norm_ratio(fp, s, f);
        ratios.push_back(er.measured);
        gc = er.gamma_constant;
      }
      double spread = 0;
      for (const cplx& x : ratios) spread = std::max(spread, std::abs(x - ratios.front()));
      worst_spread = std::max(worst_spread, spread);
      if (s < 0.5) {
        worst_dev = std::max(worst_dev, std::abs(ratios.front() - gc));
      } else {
        const double m = std::abs(ratios.front());
        pass = pass && std::isfinite(m);
        st_min = std::min(st_min, m);
      }
    }
  }
  pass = pass && worst_spread <= 1e-6 && worst_dev <= 1e-6 && st_min > 1e-12;
  d << "fields=4 max_spread=" << fmt(worst_spread) << " max|ratio-gamma_constant|=" << fmt(worst_dev)
    << " steinberg min|ratio|=" << fmt(st_min);
  return {pass, d.str()};
}

Outcome image_diagnostics() {
  const auto fps = fields();
  struct Row {
    int field;
    std::int64_t chi, eta;
    SymParam s, t;
    KernelVariant v;
    ImageClass expect;
  };
  using IC = ImageClass;
  const auto N = KernelVariant::Normalized;
  const auto D = KernelVariant::DoubleTilde;
  const Rat z(0), one(1);
  const std::vector<Row> rows = {
      {0, 0, 0, {one, z}, {-h, z}, N, IC::ConstantsLine},
      {0, 0, 0, {-h, z}, {h, z}, N, IC::Steinberg},
      {0, 0, 0, {one, z}, {h, z}, N, IC::Full},
      {0, 0, 0, {Rat(7, 10), z}, {Rat(3, 10), z}, N, IC::Full},
      {0, 0, 0, {-h, z}, {-h, z}, N, IC::Zero},
      {1, 0, 0, {one, z}, {-h, z}, N, IC::ConstantsLine},
      {1, 0, 0, {-h, z}, {h, z}, N, IC::Steinberg},
      {1, 0, 0, {Rat(1, 4), z}, {h, one}, N, IC::Steinberg},
      {1, 0, 0, {z, h}, {-h, one}, N, IC::ConstantsLine},
      {1, 0, 0, {one, z}, {Rat(3, 10), z}, N, IC::Full},
      {0, 2, 0, {z, z}, {-h, z}, N, IC::ConstantsLine},
      {0, 2, 0, {one, z}, {h, z}, N, IC::Steinberg},
      {0, 2, 0, {one, z}, {Rat(3, 10), z}, N, IC::Full},
      {2, 4, 0, {z, one}, {-h, one}, N, IC::ConstantsLine},
      {2, 4, 0, {Rat(3, 4), z}, {h, z}, N, IC::Steinberg},
      {3, 2, 2, {one, z}, {-h, z}, N, IC::ConstantsLine},
      {0, 4, 0, {-h, one}, {h, one}, N, IC::Steinberg},
      {0, 1, 0, {one, z}, {h, z}, N, IC::Full},
      {2, 4, 0, {z, z}, {-h, z}, N, IC::ConstantsLine},
      {0, 2, 0, {z, one}, {-h, one}, N, IC::ConstantsLine},
      {0, 2, 0, {-h, z}, {h, z}, N, IC::Steinberg},
      // The second kernel at L.
      {0, 0, 0, {-h, z}, {-h, z}, D, IC::ConstantsLine},
      {0, 2, 0, {z, z}, {h, z}, D, IC::Steinberg},
      {1, 0, 0, {z, h}, {h, one}, D, IC::Steinberg},
      {1, 0, 0, {-h, z}, {-h, z}, D, IC::ConstantsLine},
      {2, 4, 0, {z, z}, {h, z}, D, IC::Steinberg},
  };
  int ok = 0, i = 0;
  std::string failed;
  for (const Row& r : rows) {
    const FieldPair& fp = fps[r.field];
    const ParamTuple pt = make_params(fp, r.chi, r.eta, r.s, r.t);
    const std::vector<StepFunction> inputs = battery(fp, FieldTag::E, 13000 + 20 * i, 20, {1, 1, 1, 0.8});
    const ImageEmpirics ie = image_empirics(fp, pt, r.v, inputs, eval_points(fp));
    const bool row_ok = image_class(fp, pt, r.v) == r.expect && ie.predicted == r.expect && ie.pass;
    ok += row_ok;
    if (!row_ok) failed += " " + std::to_string(i);
    ++i;
  }
  // The restriction operator reproduces arbitrary step targets on F.
  double surj = 0;
  int j = 0;
  for (const FieldPair& fp : fps) {
    const ParamTuple pt = l_tuples(fp).front();
    for (const StepFunction& g : battery(fp, FieldTag::F, 14000 + 10 * j++, 5, {1, 2, 1, 0.9})) {
      const StepFunction f = tensor(fp, g, box_indicator(fp, FieldTag::F, 0, g.level));
      for (const Rat& y : eval_points(fp))
        surj = std::max(surj, std::abs(apply_sbo(fp, KernelVariant::Delta, pt, step_vector(f), y) - evaluate(fp, g, {y, Rat(0)})));
    }
  }
  std::ostringstream d;
  d << "rows=" << ok << "/" << rows.size() << " (inputs=20 each)" << (failed.empty() ? "" : " failed rows:" + failed)
    << "; restriction surjectivity max|diff|=" << fmt(surj);
  return {ok == static_cast<int>(rows.size()) && surj <= 1e-12, d.str()};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"holomorphy certificate", holomorphy},
      {"residue identity (backslash)", residue_backslash},
      {"residue identity (slash)", residue_slash},
      {"zero set", zero_set},
      {"support classification", support},
      {"equivariance", equivariance},
      {"spherical vector", spherical},
      {"composition", composition},
      {"fourier layer", fourier_layer},
      {"homogeneous distributions", homogeneous},
      {"unitary embedding", unitary},
      {"image diagnostics", image_diagnostics},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2zu %-30s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
