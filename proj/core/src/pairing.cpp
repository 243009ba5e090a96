#include <cmath>
#include <stdexcept>

#include "sbk/kernels.hpp"

namespace sbk {

namespace {

constexpr int kSearchCap = 12;

struct ShellSum {
  cplx coeff;
  int a = 0;
  int b = 0;
  double mass = 0;  // sum of |terms|, for relative zero tests
};

// Adds a kernel monomial to a shell accumulator, asserting a common exponent.
void accumulate(ShellSum& s, const KernelMonomial& km, bool first) {
  if (first) {
    s.a = km.a;
    s.b = km.b;
  } else if (s.a != km.a || s.b != km.b) {
    throw std::logic_error("shell sum with mixed exponents");
  }
  s.coeff += km.coeff;
  s.mass += std::abs(km.coeff);
}

// sum over u in (O/p)^x of K(y, p^j u) for y in F.
ShellSum shell_at(const FieldPair& fp, const ParamTuple& pt, const Rat& y, int j) {
  ShellSum s;
  const Rat pj = fp.p_pow(j);
  for (std::int64_t u = 1; u < fp.p(); ++u) accumulate(s, kernel_monomial(fp, pt, EElt{y, pj * Rat(u)}), u == 1);
  return s;
}

// Stability of the leading data of y + x2 alpha once x2 = p^j u is small against y.
bool stable_shell(const FieldPair& fp, const Rat& y, int j) {
  const Rat pj = fp.p_pow(j);
  const std::int64_t lead_y2 = fp.lead_F(y * y);
  for (std::int64_t u = 1; u < fp.p(); ++u) {
    const EElt x{y, pj * Rat(u)};
    const EElt ratio = fp.mul(x, fp.inv(fp.conj(x)));
    if (fp.lead_E(ratio) != 1) return false;
    if (fp.lead_F(fp.norm(x)) != lead_y2) return false;
  }
  return true;
}

// Smallest N >= start such that shells N, N+1, N+2 are stable for every y in ys.
int find_threshold(const FieldPair& fp, const std::vector<Rat>& ys, int start) {
  for (int N = start; N <= start + kSearchCap; ++N) {
    bool ok = true;
    for (const auto& y : ys) {
      for (int j = N; j <= N + 2 && ok; ++j) ok = stable_shell(fp, y, j);
      if (!ok) break;
    }
    if (ok) return N;
  }
  throw std::runtime_error("constancy threshold search exceeded cap (+12)");
}

bool close(cplx a, cplx b, double scale) { return std::abs(a - b) <= 1e-9 * std::max(1.0, scale); }

void check_tail_ratio(const ShellSum& s0, const ShellSum& s1, double q) {
  const cplx expected = s0.coeff * std::sqrt(q);
  if (s1.a != s0.a + 2 || s1.b != s0.b + 1 || !close(s1.coeff, expected, s0.mass * std::sqrt(q)))
    throw std::logic_error("shell recursion S_{N+1} = q^{1/2} X^2 Y S_N failed");
}

void check_vanishing(const ShellSum& s) {
  if (std::abs(s.coeff) > 1e-9 * std::max(1.0, s.mass)) throw std::logic_error("expected vanishing shell sum");
}

MeroRational mono(double q, cplx c, int a, int b) { return MeroRational::monomial(q, c, a, b); }

MeroRational raw_pair(const FieldPair& fp, const ParamTuple& pt, const StepFunction& phi, const Regime& reg,
                      PairingResult& res) {
  const double q = static_cast<double>(fp.qF());
  const int n = phi.level;
  res.n = n;
  res.N = n;
  res.M = 0;
  PairingBreakdown& bd = res.breakdown;
  bd = PairingBreakdown{MeroRational(q), MeroRational(q), MeroRational(q),
                        MeroRational(q), MeroRational(q), MeroRational(q)};
  const Factor sigma = backslash_factor(fp);
  const Factor rho = slash_factor(fp);
  const int start = n + fp.v_alpha_sq() + 1;

  // Term 1: x2 outside V = p^n O. K is constant on every level-n coset there.
  const double vol_n2 = std::pow(q, -2.0 * n);
  for (const auto& [k, c] : phi.coeffs) {
    if (k.second.is_zero()) continue;
    const KernelMonomial km = kernel_monomial(fp, pt, EElt{k.first, k.second});
    bd.term1.add_term(c * vol_n2 * km.coeff, km.a, km.b);
  }
  bd.term1.normalize();

  // Term 2: x1 outside V, x2 in V; shells x2 = p^j u, j >= n.
  std::vector<std::pair<Rat, cplx>> line;
  for (const auto& [k, c] : phi.coeffs)
    if (k.second.is_zero() && !k.first.is_zero()) line.emplace_back(k.first, c);
  if (!line.empty()) {
    std::vector<Rat> ys;
    for (const auto& [y, c] : line) ys.push_back(y);
    const int N = find_threshold(fp, ys, start);
    res.N = N;
    for (const auto& [y, c] : line) {
      for (int j = n; j < N; ++j) {
        const ShellSum s = shell_at(fp, pt, y, j);
        bd.term2_finite.add_term(c * std::pow(q, -static_cast<double>(n + j + 1)) * s.coeff, s.a, s.b);
      }
      const ShellSum sN = shell_at(fp, pt, y, N);
      const ShellSum sN1 = shell_at(fp, pt, y, N + 1);
      if (reg.chi_eta_trivial) {
        check_tail_ratio(sN, sN1, q);
        MeroRational t = mono(q, c * std::pow(q, -static_cast<double>(n + N + 1)) * sN.coeff, sN.a, sN.b);
        t.add_den(sigma);
        bd.term2_tail = add(bd.term2_tail, t);
      } else {
        check_vanishing(sN);
        check_vanishing(sN1);
      }
    }
    bd.term2_finite.normalize();
  }

  // Term 3: V x V. By homogeneity the integral over p^n O^2 is rho^n / (1 - rho) times the
  // integral I0 over O^2 \ pO^2.
  cplx phi0{};
  if (auto it = phi.coeffs.find({Rat(0), Rat(0)}); it != phi.coeffs.end()) phi0 = it->second;
  std::vector<Rat> units;
  for (std::int64_t u = 1; u < fp.p(); ++u) units.emplace_back(u);
  const int M = find_threshold(fp, units, 1 + fp.v_alpha_sq() + 1);
  res.M = M;
  if (phi0 != cplx{}) {
    MeroRational F0(q);
    double mass = 0;
    // x2 a unit, x1 in O: p x (p-1) cosets of level 1.
    for (std::int64_t a1 = 0; a1 < fp.p(); ++a1) {
      for (std::int64_t a2 = 1; a2 < fp.p(); ++a2) {
        const KernelMonomial km = kernel_monomial(fp, pt, EElt{Rat(a1), Rat(a2)});
        F0.add_term(km.coeff / (q * q), km.a, km.b);
        mass += std::abs(km.coeff) / (q * q);
      }
    }
    // x1 a unit, x2 = p^j u with 1 <= j < M.
    ShellSum tailN, tailN1;
    for (std::int64_t u1 = 1; u1 < fp.p(); ++u1) {
      for (int j = 1; j < M; ++j) {
        const ShellSum s = shell_at(fp, pt, Rat(u1), j);
        F0.add_term(std::pow(q, -static_cast<double>(j + 2)) * s.coeff, s.a, s.b);
        mass += std::pow(q, -static_cast<double>(j + 2)) * s.mass;
      }
      const ShellSum sM = shell_at(fp, pt, Rat(u1), M);
      const ShellSum sM1 = shell_at(fp, pt, Rat(u1), M + 1);
      if (u1 == 1) {
        tailN = sM;
        tailN1 = sM1;
      } else {
        accumulate(tailN, {sM.coeff, sM.a, sM.b}, false);
        accumulate(tailN1, {sM1.coeff, sM1.a, sM1.b}, false);
        tailN.mass += sM.mass - std::abs(sM.coeff);
        tailN1.mass += sM1.mass - std::abs(sM1.coeff);
      }
    }
    F0.normalize();
    if (reg.chi_eta_inv_trivial) {
      const MeroRational rho_n = mono(q, std::pow(q, -0.5 * n), 2 * n, -n);
      MeroRational single = mul(rho_n, F0);
      single.add_den(rho);
      bd.term3_single_tail = scale(single, phi0);
      if (reg.chi_eta_trivial) {
        check_tail_ratio(tailN, tailN1, q);
        MeroRational T0 = mono(q, std::pow(q, -static_cast<double>(M + 2)) * tailN.coeff, tailN.a, tailN.b);
        T0.add_den(sigma);
        MeroRational dbl = mul(rho_n, T0);
        dbl.add_den(rho);
        bd.term3_double_tail = scale(dbl, phi0);
      } else {
        check_vanishing(tailN);
        check_vanishing(tailN1);
      }
    } else {
      // The integral over O^2 \ pO^2 vanishes by orthogonality of chi|eta^{-1}.
      for (const auto& m : F0.num())
        if (std::abs(m.c) > 1e-9 * std::max(1.0, mass)) throw std::logic_error("expected vanishing integral over V x V");
    }
  }

  MeroRational total = bd.term1;
  total = add(total, bd.term2_finite);
  total = add(total, bd.term2_tail);
  total = add(total, bd.term3_finite);
  total = add(total, bd.term3_single_tail);
  total = add(total, bd.term3_double_tail);
  return total;
}

MeroRational normalize_raw(const FieldPair& fp, const MeroRational& raw, const Regime& reg) {
  MeroRational u = raw;
  if (reg.chi_eta_trivial) u = mul_factor(u, backslash_factor(fp));
  if (reg.chi_eta_inv_trivial) u = mul_factor(u, slash_factor(fp));
  if (!u.den().empty()) throw std::logic_error("normalized pairing retains a denominator factor: " + u.str());
  return u;
}

}  // namespace

std::string to_string(KernelVariant v) {
  switch (v) {
    case KernelVariant::Raw: return "Raw";
    case KernelVariant::Normalized: return "Normalized";
    case KernelVariant::Delta: return "Delta";
    case KernelVariant::ResidueLine: return "ResidueLine";
    case KernelVariant::DoubleTilde: return "DoubleTilde";
  }
  return "?";
}

KernelVariant variant_from_string(const std::string& s) {
  if (s == "Raw" || s == "raw") return KernelVariant::Raw;
  if (s == "Normalized" || s == "normalized") return KernelVariant::Normalized;
  if (s == "Delta" || s == "delta") return KernelVariant::Delta;
  if (s == "ResidueLine" || s == "residue_line") return KernelVariant::ResidueLine;
  if (s == "DoubleTilde" || s == "double_tilde") return KernelVariant::DoubleTilde;
  throw std::invalid_argument("unknown kernel variant '" + s + "'");
}

PairingResult pair(const FieldPair& fp, KernelVariant variant, const ParamTuple& pt, const StepFunction& phi) {
  if (phi.tag != FieldTag::E) throw std::invalid_argument("pair expects a test function on E");
  const double q = static_cast<double>(fp.qF());
  const Regime reg = regime(fp, pt);
  PairingResult res;
  res.variant = variant;
  res.n = phi.level;
  switch (variant) {
    case KernelVariant::Delta:
      res.value = MeroRational::constant(q, value_at_zero(fp, phi));
      return res;
    case KernelVariant::ResidueLine: {
      const StepFunction line = restrict_to_F(fp, phi);
      MeroRational u = homog_pair_1d(fp, char_pow(pt.eta, -2), line);
      // The family (eta^{-2})~_{s-1} at s = -2t: X -> Y^{-2}.
      u = substitute(u, 1.0, 0, -2, 1.0, 0, 1);
      res.value = scale(u, 1.0 - 1.0 / q);
      return res;
    }
    case KernelVariant::Raw:
      res.value = raw_pair(fp, pt, phi, reg, res);
      return res;
    case KernelVariant::Normalized:
      res.value = normalize_raw(fp, raw_pair(fp, pt, phi, reg, res), reg);
      return res;
    case KernelVariant::DoubleTilde: {
      if (!reg.in_l) throw std::invalid_argument("DoubleTilde requires parameters in the set L");
      const MeroRational u = normalize_raw(fp, raw_pair(fp, pt, phi, reg, res), reg);
      const LimitResult lim = limit_along_line(u, pt.s, pt.t);
      if (!lim.removable) throw std::runtime_error("DoubleTilde: non-removable singularity");
      res.numeric_limit = lim.numeric;
      res.value = MeroRational::constant(q, lim.value);
      return res;
    }
  }
  throw std::logic_error("unhandled variant");
}

cplx pair_value(const FieldPair& fp, KernelVariant variant, const ParamTuple& pt, const StepFunction& phi) {
  const PairingResult r = pair(fp, variant, pt, phi);
  const EvalResult e = eval_at(r.value, pt.s, pt.t);
  if (e.pole) throw std::domain_error("pairing evaluated at a pole (order " + std::to_string(e.order) + ")");
  return e.value;
}

}  // namespace sbk
