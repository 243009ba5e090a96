#include <cmath>
#include <stdexcept>

#include "sbk/kernels.hpp"

namespace sbk {

namespace {

// Sum over j > J of r^j, and of (j + c) r^j, for 0 < r < 1.
double geo_tail(double r, int J) { return std::pow(r, J + 1) / (1.0 - r); }
double arith_geo_tail(double r, int J, double c) {
  return std::pow(r, J + 1) * ((J + 1 + c) / (1.0 - r) + r / ((1.0 - r) * (1.0 - r)));
}

// Bound on the integral of |K| over { v(x2) > J, x1 in p^{-M} O }.
double tail_mass(const FieldPair& fp, const ParamTuple& pt, int M, int J) {
  const double q = static_cast<double>(fp.qF());
  const double a = pt.t.real() + 0.5;
  const double b = (2.0 * pt.s + pt.t).real() - 0.5;
  const double c = 2.0 * a - 1.0;
  const double r1 = std::pow(q, c - 1.0 - b);
  const double r2 = std::pow(q, -1.0 - b);
  const int ram = fp.ext() == Ext::Ramified ? 1 : 0;
  const double u = 1.0 - 1.0 / q;
  double outer;
  if (std::abs(c) < 1e-15) {
    // sum_{i=-M}^{j} 1 = j + M + 1
    outer = u * u * arith_geo_tail(r2, J, M + 1.0);
  } else {
    const double qc = std::pow(q, c);
    outer = u * u * (qc * geo_tail(r1, J) - std::pow(q, -c * M) * geo_tail(r2, J)) / (qc - 1.0);
  }
  const double inner = u / q * std::pow(q, ram * a) * geo_tail(r1, J);
  return outer + inner;
}

bool constant_on(const FieldPair& fp, const ParamTuple& pt, const EElt& rep, int l1, int l2, cplx k) {
  const EElt other{rep.x1 + fp.p_pow(l1), rep.x2 + fp.p_pow(l2)};
  if (other.x2.is_zero()) return true;
  return std::abs(kernel_pointwise(fp, pt, other) - k) <= 1e-10 * std::max(1.0, std::abs(k));
}

}  // namespace

OracleResult oracle_pair(const FieldPair& fp, const ParamTuple& pt, const StepFunction& phi, int J) {
  if (phi.tag != FieldTag::E) throw std::invalid_argument("oracle_pair expects a test function on E");
  const double plus = (2.0 * pt.s + pt.t).real() + 0.5;
  const double minus = (2.0 * pt.s - pt.t).real() + 0.5;
  if (!(plus > 0 && minus > 0)) throw std::invalid_argument("oracle_pair: Re(2s +- t + 1/2) must be > 0");
  const int n = phi.level;
  if (J < n) throw std::invalid_argument("oracle_pair: cutoff J below the level of phi");
  const double q = static_cast<double>(fp.qF());
  OracleResult out;
  out.J = J;

  // x2 outside p^n O: each level-n coset carries a constant kernel value.
  const double vol_n = std::pow(q, -2.0 * n);
  for (const auto& [k, c] : phi.coeffs) {
    if (k.second.is_zero()) continue;
    const EElt x{k.first, k.second};
    const cplx kv = kernel_pointwise(fp, pt, x);
    if (!constant_on(fp, pt, x, n, n, kv)) throw std::logic_error("oracle: kernel not constant on a level-n coset");
    out.value += c * kv * vol_n;
  }

  // x2 in p^n O: only phi(x1, 0) matters.
  std::vector<std::pair<Rat, cplx>> line;
  double sup_line = 0;
  for (const auto& [k, c] : phi.coeffs) {
    if (!k.second.is_zero()) continue;
    line.emplace_back(k.first, c);
    sup_line = std::max(sup_line, std::abs(c));
  }
  if (line.empty()) return out;
  const int M = phi.support_M;
  auto phi_line = [&](const Rat& x1) { return evaluate(fp, phi, EElt{x1, Rat(0)}); };

  for (int j = n; j <= J; ++j) {
    const Rat pj = fp.p_pow(j);
    const double vol2 = std::pow(q, -static_cast<double>(j + 1));
    for (std::int64_t u2 = 1; u2 < fp.p(); ++u2) {
      const Rat x2 = pj * Rat(u2);
      // v(x1) = i with -M <= i <= j, at level max(i + 1, n).
      for (int i = -M; i <= j; ++i) {
        const int lvl = std::max(i + 1, n);
        const double vol1 = std::pow(q, -static_cast<double>(lvl));
        for (const Rat& x1 : fp.residues_between(i, lvl)) {
          if (fp.val_F(x1) != i) continue;
          const cplx f = phi_line(x1);
          if (f == cplx{}) continue;
          const EElt x{x1, x2};
          const cplx kv = kernel_pointwise(fp, pt, x);
          if (!constant_on(fp, pt, x, lvl, j + 1, kv)) throw std::logic_error("oracle: kernel not constant on a shell coset");
          out.value += f * kv * vol1 * vol2;
        }
      }
      // x1 in p^{j+1} O.
      const cplx f = phi_line(Rat(0));
      if (f != cplx{}) {
        const EElt x{Rat(0), x2};
        const cplx kv = kernel_pointwise(fp, pt, x);
        if (!constant_on(fp, pt, x, j + 1, j + 1, kv)) throw std::logic_error("oracle: kernel not constant near the line");
        out.value += f * kv * std::pow(q, -static_cast<double>(j + 1)) * vol2;
      }
    }
  }
  out.tail_bound = sup_line * tail_mass(fp, pt, M, J) * (1.0 + 1e-12);
  return out;
}

}  // namespace sbk
