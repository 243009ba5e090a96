#include <cmath>

#include "doctest.h"
#include "sbk/harmonic.hpp"

using namespace sbk;

namespace {

bool close(cplx a, cplx b, double tol = 1e-10) { return std::abs(a - b) <= tol; }

double c_of(const InversionConstants& ic, FieldTag tag) { return tag == FieldTag::F ? ic.cF : ic.cE; }

// Integral over F of y -> g(y) by summation over a box large enough to contain the support.
cplx sum_over_F(const FieldPair& fp, int lo, int level, const std::function<cplx(const Rat&)>& g) {
  cplx acc = 0;
  const double vol = fp.coset_volume(FieldTag::F, level).to_double();
  for (const Coset& c : fp.coset_reps(FieldTag::F, {lo, 0}, level)) acc += g(c.r1) * vol;
  return acc;
}

}  // namespace

TEST_CASE("Fourier transform of lattice indicators") {
  const FieldPair fp = FieldPair::make_default(3, Ext::Unramified);
  const StepFunction one = box_indicator(fp, FieldTag::F, 0, 0);
  CHECK(approx_equal(fp, fourier(fp, one), one, 1e-12));
  const StepFunction p_o = box_indicator(fp, FieldTag::F, 1, 1);
  CHECK(approx_equal(fp, fourier(fp, p_o), scale(box_indicator(fp, FieldTag::F, -1, 0), 1.0 / 3), 1e-12));
  CHECK(coeff_l1(fourier(fp, zero_function(FieldTag::E, 1, 1))) == 0.0);
}

TEST_CASE("inversion constants") {
  for (std::int64_t p : {3, 5}) {
    const InversionConstants u = inversion_constants(FieldPair::make_default(p, Ext::Unramified));
    CHECK(u.cF == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u.cE == doctest::Approx(1.0).epsilon(1e-12));
    // psi_E has conductor alpha^{-1} O_E on ramified E.
    const InversionConstants r = inversion_constants(FieldPair::make_default(p, Ext::Ramified));
    CHECK(r.cF == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.cE == doctest::Approx(1.0 / static_cast<double>(p)).epsilon(1e-12));
  }
}

TEST_CASE("inversion, Plancherel and convolution") {
  for (auto ext : {Ext::Unramified, Ext::Ramified}) {
    const FieldPair fp = FieldPair::make_default(3, ext);
    const InversionConstants ic = inversion_constants(fp);
    for (FieldTag tag : {FieldTag::F, FieldTag::E}) {
      const double c = c_of(ic, tag);
      for (int i = 0; i < 5; ++i) {
        const StepFunction f = random_step(fp, tag, 300 + i, {1, 1, 1, 0.8});
        const StepFunction g = random_step(fp, tag, 400 + i, {0, 2, 1, 0.8});
        const StepFunction ff = fourier(fp, f);
        CHECK(approx_equal(fp, fourier(fp, ff), scale(reflect(fp, f), 1.0 / c), 1e-10));
        CHECK(close(inner_l2(fp, ff, fourier(fp, g)), inner_l2(fp, f, g) / c));
        CHECK(approx_equal(fp, fourier(fp, convolve(fp, f, g)), product(fp, ff, fourier(fp, g)), 1e-10));
      }
    }
  }
}

TEST_CASE("symplectic Fourier transform in coordinates") {
  for (auto ext : {Ext::Unramified, Ext::Ramified}) {
    const FieldPair fp = FieldPair::make_default(3, ext);
    for (int i = 0; i < 20; ++i) {
      const StepFunction f = random_step(fp, FieldTag::E, 500 + i, {1, 1, 1, 0.7});
      CHECK(approx_equal(fp, symplectic_fourier(fp, f), symplectic_coordinates(fp, fourier(fp, f)), 1e-10));
    }
  }
}

TEST_CASE("line integral through the symplectic transform") {
  for (auto ext : {Ext::Unramified, Ext::Ramified}) {
    const FieldPair fp = FieldPair::make_default(3, ext);
    const InversionConstants ic = inversion_constants(fp);
    for (int i = 0; i < 3; ++i) {
      const StepFunction phi = random_step(fp, FieldTag::E, 600 + i, {1, 1, 1, 0.8});
      const StepFunction fs = symplectic_fourier(fp, phi);
      const cplx lhs = sum_over_F(fp, -3, 2, [&](const Rat& y) { return evaluate(fp, phi, {Rat(1), y}); });
      const cplx rhs = ic.cF * sum_over_F(fp, -4, 3, [&](const Rat& r) {
        return additive_char(fp, r) * evaluate(fp, fs, {Rat(0), r});
      });
      CHECK(close(lhs, rhs, 1e-10));
    }
  }
}

TEST_CASE("weighted integrals") {
  const FieldPair fp = FieldPair::make_default(3, Ext::Unramified);
  const StepFunction one = box_indicator(fp, FieldTag::F, 0, 0);
  const cplx e(0.3, 0.2);
  CHECK(close(weighted_integral(fp, one, e), (1.0 - 1.0 / 3) / (1.0 - std::pow(3.0, -1.0 - e)), 1e-12));
  CHECK_THROWS_AS(weighted_integral(fp, one, -1.5), std::domain_error);
}

TEST_CASE("gamma factors: structure") {
  for (auto ext : {Ext::Unramified, Ext::Ramified}) {
    const FieldPair fp = FieldPair::make_default(5, ext);
    for (FieldTag tag : {FieldTag::F, FieldTag::E}) {
      const TameChar triv = make_char(fp, tag, 0);
      CHECK_THROWS_AS(gamma_value(fp, triv, 0.0), std::domain_error);
      CHECK(std::abs(gamma_value(fp, triv, 1.0)) < 1e-12);
      CHECK(std::abs(gamma_value(fp, triv, cplx(1.0, 2 * kPi / std::log(5.0)))) < 1e-12);
      const TameChar chi = make_char(fp, tag, 1);
      for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) {
          const cplx g = gamma_value(fp, chi, cplx(-1.0 + 0.5 * a, 0.3 * b));
          CHECK(std::isfinite(std::abs(g)));
          CHECK(std::abs(g) > 1e-12);
        }
      }
    }
  }
}

TEST_CASE("gamma factors against truncated integrals") {
  for (auto ext : {Ext::Unramified, Ext::Ramified}) {
    const FieldPair fp = FieldPair::make_default(3, ext);
    for (FieldTag tag : {FieldTag::F, FieldTag::E}) {
      const std::int64_t n = (tag == FieldTag::F ? fp.qF() : fp.qE()) - 1;
      for (std::int64_t k = 0; k < n; ++k) {
        const TameChar chi = make_char(fp, tag, k);
        for (double z : {1.3, 2.0}) CHECK(close(gamma_value(fp, chi, z), gamma_truncated(fp, chi, z, 12), 1e-5));
      }
    }
  }
}

TEST_CASE("gamma integral closed form") {
  for (auto ext : {Ext::Unramified, Ext::Ramified}) {
    const FieldPair fp = FieldPair::make_default(3, ext);
    for (std::int64_t k = 0; k < fp.qE() - 1; ++k) {
      const TameChar chi = make_char(fp, FieldTag::E, k);
      const cplx z(-0.8, 0.1);
      const cplx a = gamma_integral(fp, chi, z, GammaIntegralVersion::OnePlusYAlpha);
      const cplx b = gamma_integral(fp, chi, z, GammaIntegralVersion::YPlusAlpha);
      const TruncatedIntegral ta = gamma_integral_truncated(fp, chi, z, GammaIntegralVersion::OnePlusYAlpha, 12);
      const TruncatedIntegral tb = gamma_integral_truncated(fp, chi, z, GammaIntegralVersion::YPlusAlpha, 12);
      CHECK(std::abs(a - ta.value) <= ta.tail_bound + 1e-5);
      CHECK(std::abs(b - tb.value) <= tb.tail_bound + 1e-5);
      const cplx factor = eval_mult_char(fp, chi, z, {Rat(0), Rat(1)}) * fp.abs_F(fp.alpha_sq()).to_double();
      CHECK(close(b, factor * a, 1e-10 * std::max(1.0, std::abs(b))));
    }
  }
}

TEST_CASE("complementary series inner product") {
  const FieldPair fp = FieldPair::make_default(3, Ext::Unramified);
  std::vector<StepFunction> fs;
  for (int i = 0; i < 20; ++i) fs.push_back(random_step(fp, FieldTag::E, 700 + i, {1, 1, 1, 0.6}));
  for (const StepFunction& f : fs) CHECK(inner_product(fp, 0.3, f, f).real() > 0);
  const cplx ab = inner_product(fp, 0.3, fs[0], fs[1]);
  const cplx ba = inner_product(fp, 0.3, fs[1], fs[0]);
  CHECK(close(ab, std::conj(ba)));
  const cplx lin = inner_product(fp, 0.3, add(fp, scale(fs[0], cplx(0, 2)), fs[2]), fs[1]);
  CHECK(close(lin, cplx(0, 2) * ab + inner_product(fp, 0.3, fs[2], fs[1])));
  const EElt y{Rat(1, 3), Rat(0)};
  CHECK(close(inner_product(fp, 0.3, translate(fp, fs[0], y), translate(fp, fs[1], y)), ab));
}

TEST_CASE("Steinberg norm") {
  const FieldPair fp = FieldPair::make_default(3, Ext::Ramified);
  const StepFunction one = box_indicator(fp, FieldTag::E, 0, 1);
  const StepFunction inner = box_indicator(fp, FieldTag::E, 1, 1);
  const StepFunction f = sub(fp, one, scale(inner, integrate(fp, one) / integrate(fp, inner)));
  REQUIRE(std::abs(integrate(fp, f)) < 1e-12);
  const cplx n = steinberg_norm(fp, f);
  CHECK(n.real() > 0);
  CHECK(close(steinberg_norm(fp, scale(f, cplx(2, 1))), 5.0 * n));
  CHECK(close(steinberg_norm(fp, zero_function(FieldTag::E, 1, 0)), 0.0));
}

TEST_CASE("unitary embedding ratio is independent of f") {
  const FieldPair fp = FieldPair::make_default(3, Ext::Unramified);
  for (double s : {0.3, 0.4}) {
    std::vector<cplx> r;
    cplx gc;
    for (int i = 0; i < 3; ++i) {
      const EmbedRatio e = embed_norm_ratio(fp, s, random_step(fp, FieldTag::F, 800 + i, {1, 1, 1, 0.8}));
      r.push_back(e.measured);
      gc = e.gamma_constant;
    }
    for (const cplx& x : r) CHECK(close(x, gc, 1e-6));
  }
}

TEST_CASE("slash delta constant is finite off the poles") {
  const FieldPair fp = FieldPair::make_default(3, Ext::Unramified);
  const ParamTuple pt = make_params(fp, 0, 0, SymParam{Rat(1, 4), 0}, SymParam{1, 0});
  const cplx c = slash_delta_constant(fp, pt);
  CHECK(std::isfinite(std::abs(c)));
  CHECK(std::abs(c) > 1e-12);
}
