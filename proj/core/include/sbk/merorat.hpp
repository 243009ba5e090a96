#pragma once

#include <string>
#include <vector>

#include "sbk/characters.hpp"

namespace sbk {

/// c * X^a * Y^b.
struct Mono {
  cplx c;
  int a = 0;
  int b = 0;
};

/// (1 - c * X^a * Y^b).
struct Factor {
  cplx c;
  int a = 0;
  int b = 0;
};

bool same_factor(const Factor& f, const Factor& g);

/// Meromorphic rational value in X = q^{-s}, Y = q^{-t}: a Laurent polynomial numerator
/// over an explicit multiset of binomial factors.
class MeroRational {
public:
  MeroRational() = default;
  explicit MeroRational(double base) : base_(base) {}

  static MeroRational constant(double base, cplx c);
  static MeroRational monomial(double base, cplx c, int a, int b);

  double base() const { return base_; }
  const std::vector<Mono>& num() const { return num_; }
  const std::vector<Factor>& den() const { return den_; }
  bool is_zero() const { return num_.empty(); }

  /// Merges equal exponents and drops coefficients below 1e-14 of the largest.
  void normalize();
  void add_term(cplx c, int a, int b);
  void add_den(const Factor& f);
  std::string str() const;

  std::vector<Mono>& mutable_num() { return num_; }
  std::vector<Factor>& mutable_den() { return den_; }

private:
  double base_ = 0;
  std::vector<Mono> num_;
  std::vector<Factor> den_;
};

MeroRational add(const MeroRational& u, const MeroRational& v);
MeroRational sub(const MeroRational& u, const MeroRational& v);
MeroRational mul(const MeroRational& u, const MeroRational& v);
MeroRational scale(const MeroRational& u, cplx c);
/// u * (1 - c X^a Y^b); removes a matching denominator factor when present.
MeroRational mul_factor(const MeroRational& u, const Factor& f);

/// sum_{k >= k0} (c X^a Y^b)^k.
MeroRational geometric_tail(double base, cplx c, int a, int b, int k0);

struct CancelResult {
  MeroRational value;
  bool divisible = false;
};
CancelResult cancel_factor(const MeroRational& u, const Factor& f);
/// Attempts cancel_factor on every denominator factor until no further progress.
MeroRational cancel_all(const MeroRational& u);

/// X -> cx X^{xa} Y^{xb}, Y -> cy X^{ya} Y^{yb}.
MeroRational substitute(const MeroRational& u, cplx cx, int xa, int xb, cplx cy, int ya, int yb);

struct EvalResult {
  bool pole = false;
  int order = 0;
  std::vector<Factor> vanishing;
  cplx value;
};

/// Substitutes X = q^{-s}, Y = q^{-t}; poles (|factor| <= 1e-12) are reported.
EvalResult eval_at(const MeroRational& u, cplx s, cplx t);
/// Value of the numerator alone.
cplx eval_num(const MeroRational& u, cplx X, cplx Y);
cplx eval_factor(const Factor& f, cplx X, cplx Y);

/// lim (1 - c X^a Y^b) u at a point of the factor's zero set.
cplx residue_along(const MeroRational& u, const Factor& f, cplx s, cplx t);

struct LimitResult {
  bool removable = true;
  bool numeric = false;
  cplx value;
};

/// lim_{z -> 0} u(s0 + z, t0) / (1 - q^{-2z}) along the line s = s0 + z.
LimitResult limit_along_line(const MeroRational& u, cplx s0, cplx t0);

}  // namespace sbk
