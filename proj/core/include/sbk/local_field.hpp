#pragma once

#include <climits>
#include <cstdint>
#include <string>
#include <vector>

#include "sbk/rational.hpp"

namespace sbk {

enum class Ext { Unramified, Ramified };
enum class FieldTag { F, E };

inline constexpr int kValInf = INT_MAX;

std::string to_string(Ext e);
Ext ext_from_string(const std::string& s);

/// Element x1 + x2*alpha of E = F(alpha). F-elements have x2 = 0.
struct EElt {
  Rat x1;
  Rat x2;

  friend bool operator==(const EElt&, const EElt&) = default;
};

/// Coordinate-wise valuation box: coordinate i lies in p^{lo_i} O.
struct Box {
  int lo1 = 0;
  int lo2 = 0;
};

/// rep + p^level O (per coordinate). For tag F the second coordinate is zero.
struct Coset {
  FieldTag tag = FieldTag::F;
  Rat r1;
  Rat r2;
  int level = 0;
};

/// Q_p together with a quadratic extension E = Q_p(alpha).
///
/// The residue field of E is F_p (ramified) or F_p[u]/(u^2 - alpha^2) (unramified).
/// Residue classes are encoded as integers c0 + p*c1 in [0, q_E). The uniformizer
/// of F is p; the uniformizer of E is p (unramified) or alpha (ramified).
class FieldPair {
public:
  FieldPair(std::int64_t p, Ext ext, Rat alpha_sq);

  /// Smallest positive non-residue (unramified) or p itself (ramified).
  static FieldPair make_default(std::int64_t p, Ext ext);

  std::int64_t p() const { return p_; }
  Ext ext() const { return ext_; }
  const Rat& alpha_sq() const { return alpha_sq_; }
  std::int64_t qF() const { return p_; }
  std::int64_t qE() const { return ext_ == Ext::Unramified ? p_ * p_ : p_; }
  /// Residue degree of E/F.
  int f() const { return ext_ == Ext::Unramified ? 2 : 1; }
  /// v_F(alpha^2): 0 or 1.
  int v_alpha_sq() const { return ext_ == Ext::Unramified ? 0 : 1; }

  // Arithmetic in E.
  EElt add(const EElt& a, const EElt& b) const { return {a.x1 + b.x1, a.x2 + b.x2}; }
  EElt sub(const EElt& a, const EElt& b) const { return {a.x1 - b.x1, a.x2 - b.x2}; }
  EElt mul(const EElt& a, const EElt& b) const;
  EElt inv(const EElt& a) const;
  EElt conj(const EElt& a) const { return {a.x1, -a.x2}; }
  Rat norm(const EElt& a) const;

  // Valuations and absolute values.
  int val_F(const Rat& x) const;
  /// v_F(N(x)); |x|_E = q_F^{-w(x)}.
  int w_E(const EElt& x) const;
  /// Normalized valuation of E.
  int val_E(const EElt& x) const;
  int valuation(const EElt& x, FieldTag tag) const;
  Rat abs_F(const Rat& x) const;
  Rat abs_E(const EElt& x) const;
  Rat abs_value(const EElt& x, FieldTag tag) const;

  // Residue field.
  /// Reduction of a p-integral rational modulo p.
  std::int64_t residue(const Rat& x) const;
  std::int64_t lead_F(const Rat& x) const;
  std::int64_t lead_E(const EElt& x) const;
  std::int64_t leading_unit(const EElt& x, FieldTag tag) const;
  std::int64_t genF() const { return gen_F_; }
  std::int64_t genE() const { return gen_E_; }
  /// Discrete logarithm of a nonzero residue class w.r.t. the recorded generator.
  int logF(std::int64_t r) const;
  int logE(std::int64_t r) const;
  std::int64_t res_mul(std::int64_t a, std::int64_t b) const;
  std::int64_t res_pow(std::int64_t a, std::int64_t e) const;

  /// Canonical representative of x + p^N O: p-power denominator, value in [0, p^N).
  Rat reduce(const Rat& x, int N) const;
  Rat p_pow(int e) const;

  /// Complete, duplicate-free tiling of the box by level-N cosets.
  std::vector<Coset> coset_reps(FieldTag tag, const Box& box, int N) const;
  Rat coset_volume(FieldTag tag, int N) const;
  /// Elements of p^{lo} O / p^{N} O (as canonical representatives).
  std::vector<Rat> residues_between(int lo, int N) const;

  std::string describe() const;

private:
  std::int64_t p_;
  Ext ext_;
  Rat alpha_sq_;
  std::int64_t a_res_ = 0;      // alpha^2 mod p (unramified)
  std::int64_t u_res_ = 0;      // (alpha^2/p) mod p (ramified)
  std::int64_t u_res_inv_ = 0;
  std::int64_t gen_F_ = 0;
  std::int64_t gen_E_ = 0;
  std::vector<int> logF_;
  std::vector<int> logE_;
  std::vector<std::int64_t> expE_;
};

bool is_prime(std::int64_t n);
bool is_square_mod(std::int64_t a, std::int64_t p);

}  // namespace sbk
