#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <utility>

#include "sbk/characters.hpp"

namespace sbk {

using CosetKey = std::pair<Rat, Rat>;

/// Locally constant compactly supported function on F or E, stored as a map from
/// canonical level-N coset representatives to complex coefficients.
///
/// Support lies in p^{-support_M} O (coordinate-wise). Zero coefficients may be absent.
struct StepFunction {
  FieldTag tag = FieldTag::F;
  int level = 0;
  int support_M = 0;
  std::map<CosetKey, cplx> coeffs;

  int dim() const { return tag == FieldTag::F ? 1 : 2; }
};

StepFunction zero_function(FieldTag tag, int level, int support_M);
StepFunction indicator(const FieldPair& fp, const Coset& c);
/// Indicator of the box p^{lo} O (coordinate-wise), stored at level max(lo, level).
StepFunction box_indicator(const FieldPair& fp, FieldTag tag, int lo, int level);

cplx evaluate(const FieldPair& fp, const StepFunction& f, const EElt& x);
cplx integrate(const FieldPair& fp, const StepFunction& f);
/// Value at 0.
cplx value_at_zero(const FieldPair& fp, const StepFunction& f);
double coeff_l1(const StepFunction& f);

StepFunction refine(const FieldPair& fp, const StepFunction& f, int level);
StepFunction add(const FieldPair& fp, const StepFunction& f, const StepFunction& g);
StepFunction sub(const FieldPair& fp, const StepFunction& f, const StepFunction& g);
StepFunction scale(const StepFunction& f, cplx c);
StepFunction conj(const StepFunction& f);
/// Pointwise product.
StepFunction product(const FieldPair& fp, const StepFunction& f, const StepFunction& g);
/// Multiplies each coefficient by w(representative, level). The caller guarantees w is
/// constant on each coset.
StepFunction multiply_by(const StepFunction& f, const std::function<cplx(const EElt&, int)>& w);
/// Drops coefficients with |c| <= tol.
StepFunction prune(const StepFunction& f, double tol = 0.0);
bool approx_equal(const FieldPair& fp, const StepFunction& f, const StepFunction& g, double tol);

/// x -> f(x - y).
StepFunction translate(const FieldPair& fp, const StepFunction& f, const EElt& y);
/// x -> f(x / a) for a in F^x.
StepFunction dilate(const FieldPair& fp, const StepFunction& f, const Rat& a);
/// x -> |1 + b x|_E^{weight_power} f(x / (1 + b x)) for b in F^x.
///
/// Throws if the support of f meets 1/b (the pulled-back function would not be compactly
/// supported there).
StepFunction mobius_pullback(const FieldPair& fp, const StepFunction& f, const Rat& b, int weight_power = 0);
/// g(y) = f(y + 0 alpha).
StepFunction restrict_to_F(const FieldPair& fp, const StepFunction& f);
/// (x1, x2) -> f1(x1) f2(x2) for f1, f2 on F.
StepFunction tensor(const FieldPair& fp, const StepFunction& f1, const StepFunction& f2);

struct RandomBounds {
  int M = 0;             // support in p^{-M} O
  int N = 0;             // level
  double magnitude = 1;  // coefficient box [-magnitude, magnitude]^2
  double density = 1;    // probability a coset receives a nonzero coefficient
};

/// Reproducible pseudo-random step function (mt19937_64 stream seeded by `seed`).
StepFunction random_step(const FieldPair& fp, FieldTag tag, std::uint64_t seed, const RandomBounds& b);

/// mt19937_64 with platform-independent conversions (std distributions are not
/// portable across standard libraries).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace sbk
