#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

#include "sbk/harmonic.hpp"
#include "sbk/kernels.hpp"
#include "sbk/operators.hpp"

namespace sbk::cli {

const std::vector<std::string> kSuites = {"pair", "oracle", "residue", "classify", "spherical", "compose", "gamma", "unitary"};
const std::vector<std::string> kTables = {"l_set", "image_table", "gamma_table", "residue_table"};

namespace {

using Task = std::function<std::vector<CheckRecord>()>;

// Runs tasks on up to `jobs` threads; results keep task order.
std::vector<CheckRecord> run_tasks(const std::vector<Task>& tasks, int jobs) {
  std::vector<std::vector<CheckRecord>> out(tasks.size());
  const std::size_t n = std::max(1, jobs);
  if (n == 1 || tasks.size() < 2) {
    for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(n, tasks.size()); ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < tasks.size(); i += n) out[i] = tasks[i]();
      });
    }
    for (auto& th : pool) th.join();
  }
  std::vector<CheckRecord> flat;
  for (auto& v : out) flat.insert(flat.end(), v.begin(), v.end());
  return flat;
}

std::vector<StepFunction> battery(const FieldPair& fp, const BatterySpec& b, FieldTag tag) {
  std::vector<StepFunction> out;
  for (int i = 0; i < b.count; ++i)
    out.push_back(random_step(fp, tag, b.seed + static_cast<std::uint64_t>(i), {b.support, b.level, 1.0, b.density}));
  return out;
}

std::string tuple_str(const TupleSpec& t) {
  return "chi=" + std::to_string(t.chi) + " eta=" + std::to_string(t.eta) + " s=" + param_str(t.s) + " t=" + param_str(t.t);
}

json tuple_json(const TupleSpec& t) {
  return json{{"chi", t.chi}, {"eta", t.eta}, {"s", param_json(t.s)}, {"t", param_json(t.t)}};
}

CheckRecord make_record(const std::string& suite, const std::string& check, const TupleSpec* t) {
  CheckRecord r;
  r.suite = suite;
  r.check = check;
  if (t) {
    r.params = tuple_str(*t);
    r.inputs = json{{"tuple", tuple_json(*t)}};
  } else {
    r.inputs = json::object();
  }
  r.expected = nullptr;
  r.got = nullptr;
  return r;
}

CheckRecord error_record(CheckRecord r, const std::exception& e) {
  r.got = json{{"error", e.what()}};
  r.pass = false;
  return r;
}

bool exact_t_half(const ParamTuple& pt) {
  return pt.t_sym && pt.t_sym->re == Rat(1, 2) && pt.t_sym->im_units.is_integer();
}

std::vector<Rat> eval_points(const FieldPair& fp) {
  const Rat p(fp.p());
  return {Rat(0), Rat(1), Rat(1) / p, Rat(-1), p};
}

// ---------------------------------------------------------------------------

std::vector<Task> pair_tasks(const RunConfig& cfg) {
  std::vector<Task> tasks;
  for (const TupleSpec& ts : cfg.tuples) {
    tasks.push_back([&cfg, ts] {
      const FieldPair fp = make_field(cfg);
      const KernelVariant v = variant_from_string(cfg.variant);
      std::vector<CheckRecord> out;
      const auto phis = battery(fp, cfg.battery, FieldTag::E);
      for (std::size_t i = 0; i < phis.size(); ++i) {
        CheckRecord r = make_record("pair", "closed_form", &ts);
        r.inputs["phi_seed"] = cfg.battery.seed + i;
        r.inputs["variant"] = cfg.variant;
        try {
          const ParamTuple pt = make_tuple(fp, ts);
          const Regime reg = regime(fp, pt);
          const PairingResult pr = pair(fp, v, pt, phis[i]);
          const EvalResult e = eval_at(pr.value, pt.s, pt.t);
          r.got = json{{"regime", to_string(reg.kind)},
                       {"tolerance_based_regime", reg.tolerance_based},
                       {"denominators", pr.value.den().size()},
                       {"pole", e.pole},
                       {"value", e.pole ? json(nullptr) : cplx_json(e.value)}};
          if (v == KernelVariant::Normalized) {
            r.expected = json{{"denominators", 0}};
            r.pass = pr.value.den().empty();
          }
          out.push_back(r);
        } catch (const std::exception& e) {
          out.push_back(error_record(r, e));
        }
      }
      return out;
    });
  }
  return tasks;
}

std::vector<Task> oracle_tasks(const RunConfig& cfg) {
  std::vector<Task> tasks;
  for (const TupleSpec& ts : cfg.tuples) {
    tasks.push_back([&cfg, ts] {
      const FieldPair fp = make_field(cfg);
      std::vector<CheckRecord> out;
      const auto phis = battery(fp, cfg.battery, FieldTag::E);
      for (std::size_t i = 0; i < phis.size(); ++i) {
        CheckRecord r = make_record("oracle", "raw_vs_truncated_integral", &ts);
        r.inputs["phi_seed"] = cfg.battery.seed + i;
        r.inputs["J"] = cfg.oracle_J;
        try {
          const ParamTuple pt = make_tuple(fp, ts);
          const double plus = (2.0 * pt.s + pt.t).real() + 0.5;
          const double minus = (2.0 * pt.s - pt.t).real() + 0.5;
          if (!(plus > 0 && minus > 0)) {
            r.got = json{{"skipped", "outside the convergence region"}};
            out.push_back(r);
            continue;
          }
          const cplx closed = pair_value(fp, KernelVariant::Raw, pt, phis[i]);
          const OracleResult o = oracle_pair(fp, pt, phis[i], cfg.oracle_J);
          r.expected = cplx_json(o.value);
          r.got = cplx_json(closed);
          r.tolerance = o.tail_bound + cfg.tolerance;
          r.inputs["tail_bound"] = o.tail_bound;
          r.pass = std::abs(closed - o.value) <= r.tolerance;
          out.push_back(r);
        } catch (const std::exception& e) {
          out.push_back(error_record(r, e));
        }
      }
      return out;
    });
  }
  return tasks;
}

std::vector<Task> residue_tasks(const RunConfig& cfg) {
  std::vector<Task> tasks;
  for (const TupleSpec& ts : cfg.tuples) {
    tasks.push_back([&cfg, ts] {
      const FieldPair fp = make_field(cfg);
      std::vector<CheckRecord> out;
      const auto phis = battery(fp, cfg.battery, FieldTag::E);
      ParamTuple pt;
      Regime reg;
      try {
        pt = make_tuple(fp, ts);
        reg = regime(fp, pt);
      } catch (const std::exception& e) {
        out.push_back(error_record(make_record("residue", "setup", &ts), e));
        return out;
      }
      if (reg.backslash && !reg.slash) {
        for (std::size_t i = 0; i < phis.size(); ++i) {
          CheckRecord r = make_record("residue", "backslash_line_identity", &ts);
          r.inputs["phi_seed"] = cfg.battery.seed + i;
          try {
            const cplx lhs = pair_value(fp, KernelVariant::Normalized, pt, phis[i]);
            // The line variant already carries the factor 1 - 1/q.
            const cplx rhs = pair_value(fp, KernelVariant::ResidueLine, pt, phis[i]);
            r.expected = cplx_json(rhs);
            r.got = cplx_json(lhs);
            r.tolerance = cfg.tolerance;
            r.pass = std::abs(lhs - rhs) <= cfg.tolerance;
            out.push_back(r);
          } catch (const std::exception& e) {
            out.push_back(error_record(r, e));
          }
        }
      } else if (reg.slash && !reg.backslash && !reg.in_l) {
        for (std::size_t i = 0; i < phis.size(); ++i) {
          CheckRecord r = make_record("residue", "slash_delta_identity", &ts);
          r.inputs["phi_seed"] = cfg.battery.seed + i;
          try {
            const cplx lhs = pair_value(fp, KernelVariant::Normalized, pt, phis[i]);
            const cplx rhs = slash_delta_constant(fp, pt) * value_at_zero(fp, phis[i]);
            r.expected = cplx_json(rhs);
            r.got = cplx_json(lhs);
            r.tolerance = 1e-6;
            r.pass = std::abs(lhs - rhs) <= 1e-6 * std::max(std::abs(rhs), 1e-300) || std::abs(lhs - rhs) <= cfg.tolerance;
            out.push_back(r);
          } catch (const std::exception& e) {
            out.push_back(error_record(r, e));
          }
        }
      } else {
        CheckRecord r = make_record("residue", "regime", &ts);
        r.got = json{{"skipped", "not on a residue variety"}, {"regime", to_string(reg.kind)}};
        out.push_back(r);
      }
      return out;
    });
  }
  return tasks;
}

std::vector<Task> classify_tasks(const RunConfig& cfg) {
  std::vector<Task> tasks;
  for (const TupleSpec& ts : cfg.tuples) {
    tasks.push_back([&cfg, ts] {
      const FieldPair fp = make_field(cfg);
      std::vector<CheckRecord> out;
      CheckRecord r = make_record("classify", "support", &ts);
      ParamTuple pt;
      try {
        pt = make_tuple(fp, ts);
        const Regime reg = regime(fp, pt);
        const KernelBasis kb = kernel_space_basis(fp, pt);
        json variants = json::array();
        for (KernelVariant v : kb.variants) variants.push_back(to_string(v));
        r.got = json{{"regime", to_string(reg.kind)},
                     {"support", to_string(classify_support(fp, pt))},
                     {"dimension", kb.dimension},
                     {"variants", variants},
                     {"tolerance_based_regime", reg.tolerance_based}};
        out.push_back(r);
        const auto phis = battery(fp, cfg.battery, FieldTag::E);
        if (reg.in_l) {
          CheckRecord z = make_record("classify", "normalized_vanishes_on_L", &ts);
          double worst = 0;
          bool ok = true;
          for (const StepFunction& phi : phis) {
            const double v = std::abs(pair_value(fp, KernelVariant::Normalized, pt, phi));
            worst = std::max(worst, v);
            ok = ok && v <= 1e-9 * std::max(1.0, coeff_l1(phi));
          }
          z.expected = 0.0;
          z.got = worst;
          z.tolerance = 1e-9;
          z.pass = ok;
          out.push_back(z);
        }
        if (pt.s_sym && pt.t_sym) {
          std::vector<KernelVariant> vs;
          if (reg.in_l) {
            vs = {KernelVariant::DoubleTilde};
          } else {
            vs = {KernelVariant::Normalized};
          }
          for (KernelVariant v : vs) {
            CheckRecord im = make_record("classify", "image_" + to_string(v), &ts);
            const ImageEmpirics ie = image_empirics(fp, pt, v, phis, eval_points(fp));
            im.expected = to_string(ie.predicted);
            im.got = json{{"image_class", to_string(ie.predicted)}, {"empirical_checks", ie.pass ? "pass" : "fail"}, {"detail", ie.detail}};
            im.pass = ie.pass;
            out.push_back(im);
          }
        }
      } catch (const std::exception& e) {
        out.push_back(error_record(r, e));
      }
      return out;
    });
  }
  return tasks;
}

std::vector<Task> spherical_tasks(const RunConfig& cfg) {
  std::vector<Task> tasks;
  for (const TupleSpec& ts : cfg.tuples) {
    tasks.push_back([&cfg, ts] {
      const FieldPair fp = make_field(cfg);
      std::vector<CheckRecord> out;
      CheckRecord r = make_record("spherical", "closed_form_vs_oracle", &ts);
      try {
        const ParamTuple pt = make_tuple(fp, ts);
        if (!char_square_trivial(pt.chi)) {
          r.got = json{{"skipped", "chi^2 != 1"}};
          out.push_back(r);
          return out;
        }
        const SphericalConstant sc = sbo_spherical_constant(fp, pt);
        const EvalResult en = eval_at(sc.normalized, pt.s, pt.t);
        CheckRecord c = make_record("spherical", "normalized_constant", &ts);
        c.got = cplx_json(en.value);
        out.push_back(c);
        const bool eta_match = pt.eta == restrict_char(fp, pt.chi);
        const int J = std::min(cfg.spherical_J, spherical_oracle_max_J(fp));
        r.inputs["J"] = J;
        try {
          const OracleResult o = spherical_oracle(fp, pt, J);
          cplx closed = 0;
          if (eta_match) {
            const EvalResult er = eval_at(sc.raw, pt.s, pt.t);
            if (er.pole) throw std::domain_error("raw spherical constant has a pole");
            closed = er.value;
          }
          r.expected = cplx_json(o.value);
          r.got = cplx_json(closed);
          r.tolerance = o.tail_bound + 1e-6;
          r.pass = std::abs(closed - o.value) <= r.tolerance;
        } catch (const std::invalid_argument& e) {
          r.got = json{{"skipped", e.what()}};
        }
        out.push_back(r);
      } catch (const std::exception& e) {
        out.push_back(error_record(r, e));
      }
      return out;
    });
  }
  return tasks;
}

std::vector<Task> compose_tasks(const RunConfig& cfg) {
  std::vector<Task> tasks;
  for (const TupleSpec& ts : cfg.tuples) {
    tasks.push_back([&cfg, ts] {
      const FieldPair fp = make_field(cfg);
      std::vector<CheckRecord> out;
      CheckRecord r = make_record("compose", "std_intertwiner_composition", &ts);
      try {
        const ParamTuple pt = make_tuple(fp, ts);
        const Regime reg = regime(fp, pt);
        if (!exact_t_half(pt) || !reg.chi_eta_trivial || !reg.chi_eta_inv_trivial) {
          r.got = json{{"skipped", "requires exact t in 1/2 + lattice and chi|eta = chi|eta^{-1} = 1"}};
          out.push_back(r);
          return out;
        }
        SymParam tneg{-pt.t_sym->re, -pt.t_sym->im_units};
        const ParamTuple pm = make_params(fp, pt.chi.k, pt.eta.k, *pt.s_sym, tneg);
        const cplx c = composition_constant(fp, pt);
        double worst = 0;
        for (const StepFunction& f : battery(fp, cfg.battery, FieldTag::E)) {
          const EvalResult lhs = eval_at(image_integral(fp, pt, f), pt.s, pt.t);
          if (lhs.pole) throw std::domain_error("composition: pole on the left-hand side");
          for (const Rat& y : eval_points(fp)) {
            const cplx rhs = c * apply_sbo(fp, KernelVariant::Normalized, pm, step_vector(f), y);
            worst = std::max(worst, std::abs(lhs.value - rhs) / std::max(1.0, std::abs(lhs.value)));
          }
        }
        r.inputs["constant"] = cplx_json(c);
        r.expected = 0.0;
        r.got = worst;
        r.tolerance = 1e-6;
        r.pass = worst <= 1e-6;
        out.push_back(r);

        CheckRecord v = make_record("compose", "constant_vanishing_pattern", &ts);
        const ImageClass cls = image_class(fp, pt);
        const bool c_zero = std::abs(c) <= 1e-9;
        const bool target_zero = regime(fp, pm).in_l;
        v.got = json{{"constant_zero", c_zero}, {"image_class", to_string(cls)}};
        v.pass = c_zero ? (cls == ImageClass::Steinberg || cls == ImageClass::Zero)
                        : ((cls == ImageClass::Steinberg) == target_zero);
        out.push_back(v);
      } catch (const std::exception& e) {
        out.push_back(error_record(r, e));
      }
      return out;
    });
  }
  return tasks;
}

std::vector<Task> gamma_tasks(const RunConfig& cfg) {
  std::vector<Task> tasks;
  tasks.push_back([&cfg] {
    const FieldPair fp = make_field(cfg);
    std::vector<CheckRecord> out;
    CheckRecord r = make_record("gamma", "inversion_constants", nullptr);
    const InversionConstants ic = inversion_constants(fp);
    r.expected = json{{"cF", 1.0}, {"cE", 1.0}};
    r.got = json{{"cF", ic.cF}, {"cE", ic.cE}};
    r.tolerance = 1e-12;
    r.pass = std::abs(ic.cF - 1.0) <= 1e-12 && std::abs(ic.cE - 1.0) <= 1e-12;
    out.push_back(r);
    return out;
  });
  for (FieldTag tag : {FieldTag::F, FieldTag::E}) {
    const FieldPair fp0 = make_field(cfg);
    const std::int64_t n = (tag == FieldTag::F ? fp0.qF() : fp0.qE()) - 1;
    for (std::int64_t k = 0; k < n; ++k) {
      tasks.push_back([&cfg, tag, k] {
        const FieldPair fp = make_field(cfg);
        const TameChar chi = make_char(fp, tag, k);
        const std::string fname = tag == FieldTag::F ? "F" : "E";
        std::vector<CheckRecord> out;
        for (double z : cfg.gamma_z) {
          CheckRecord r = make_record("gamma", "gamma_vs_truncated", nullptr);
          r.params = "field=" + fname + " chi=" + std::to_string(k) + " z=" + std::to_string(z);
          r.inputs = json{{"field", fname}, {"chi", k}, {"z", z}, {"J", cfg.gamma_J}};
          try {
            if (z > 0) {
              const cplx closed = gamma_value(fp, chi, z);
              const cplx trunc = gamma_truncated(fp, chi, z, cfg.gamma_J);
              r.expected = cplx_json(trunc);
              r.got = cplx_json(closed);
              r.tolerance = 1e-5;
              r.pass = std::abs(closed - trunc) <= 1e-5;
              out.push_back(r);
            }
            if (tag == FieldTag::E && z < -0.5) {
              for (auto ver : {GammaIntegralVersion::OnePlusYAlpha, GammaIntegralVersion::YPlusAlpha}) {
                CheckRecord g = r;
                g.check = ver == GammaIntegralVersion::OnePlusYAlpha ? "gamma_integral_one_plus_y_alpha" : "gamma_integral_y_plus_alpha";
                const cplx closed = gamma_integral(fp, chi, z, ver);
                const TruncatedIntegral ti = gamma_integral_truncated(fp, chi, z, ver, cfg.gamma_J);
                g.expected = cplx_json(ti.value);
                g.got = cplx_json(closed);
                g.tolerance = ti.tail_bound + 1e-5;
                g.pass = std::abs(closed - ti.value) <= g.tolerance;
                out.push_back(g);
              }
            }
          } catch (const std::exception& e) {
            out.push_back(error_record(r, e));
          }
        }
        if (k == 0) {
          CheckRecord s = make_record("gamma", "trivial_pole_zero_structure", nullptr);
          s.params = "field=" + fname + " chi=0";
          const GammaValue gv = gamma_factor(fp, chi);
          const int f = tag == FieldTag::E ? fp.f() : 1;
          bool pole = false;
          for (const Factor& d : gv.value.den()) pole = pole || (d.a == f && d.b == 0 && std::abs(d.c - 1.0) < 1e-12);
          // A zero at z = 1 (X = 1/q), none at z = 1/2.
          const cplx at1 = eval_num(gv.value, std::pow(static_cast<double>(fp.qF()), -1.0), 1.0);
          s.got = json{{"pole_factor", pole}, {"numerator_at_z1", cplx_json(at1)}};
          s.pass = pole && std::abs(at1) <= 1e-12;
          out.push_back(s);
        }
        return out;
      });
    }
  }
  return tasks;
}

std::vector<Task> unitary_tasks(const RunConfig& cfg) {
  std::vector<Task> tasks;
  for (double s : cfg.unitary_s) {
    tasks.push_back([&cfg, s] {
      const FieldPair fp = make_field(cfg);
      std::vector<CheckRecord> out;
      CheckRecord r = make_record("unitary", s >= 0.5 ? "steinberg_embedding_ratio" : "embedding_ratio", nullptr);
      r.params = "s=" + std::to_string(s);
      r.inputs = json{{"s", s}};
      try {
        std::vector<cplx> ratios;
        cplx gc;
        for (StepFunction f : battery(fp, cfg.battery, FieldTag::F)) {
          if (s >= 0.5) {
            const StepFunction one = box_indicator(fp, FieldTag::F, 0, f.level);
            f = sub(fp, f, scale(one, integrate(fp, f)));
          }
          const EmbedRatio er = embed_norm_ratio(fp, s, f);
          ratios.push_back(er.measured);
          gc = er.gamma_constant;
        }
        double spread = 0;
        for (const cplx& x : ratios) spread = std::max(spread, std::abs(x - ratios.front()));
        const double dev = ratios.empty() ? 0.0 : std::abs(ratios.front() - gc);
        r.expected = cplx_json(gc);
        r.got = json{{"ratio", ratios.empty() ? json(nullptr) : cplx_json(ratios.front())}, {"spread", spread}};
        r.tolerance = 1e-6;
        r.pass = spread <= 1e-6 && dev <= 1e-6 && std::isfinite(dev) && std::abs(gc) > 1e-12;
        out.push_back(r);
      } catch (const std::exception& e) {
        out.push_back(error_record(r, e));
      }
      return out;
    });
  }
  return tasks;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt(v.get<double>());
  return v.dump();
}

}  // namespace

json cplx_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

int Report::failed() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return !r.pass; }));
}

Report run_suite(const std::string& suite, const RunConfig& cfg, int jobs) {
  Report rep;
  rep.name = suite;
  if (suite == "verify") {
    const std::vector<std::string>& names = cfg.suites.empty() ? kSuites : cfg.suites;
    for (const std::string& s : names) {
      if (s == "verify") throw ConfigError("/suites", "verify cannot include itself");
      Report sub = run_suite(s, cfg, jobs);
      rep.records.insert(rep.records.end(), sub.records.begin(), sub.records.end());
    }
    return rep;
  }
  std::vector<Task> tasks;
  if (suite == "pair") tasks = pair_tasks(cfg);
  else if (suite == "oracle") tasks = oracle_tasks(cfg);
  else if (suite == "residue") tasks = residue_tasks(cfg);
  else if (suite == "classify") tasks = classify_tasks(cfg);
  else if (suite == "spherical") tasks = spherical_tasks(cfg);
  else if (suite == "compose") tasks = compose_tasks(cfg);
  else if (suite == "gamma") tasks = gamma_tasks(cfg);
  else if (suite == "unitary") tasks = unitary_tasks(cfg);
  else throw ConfigError("/suites", "unknown suite '" + suite + "'");
  rep.records = run_tasks(tasks, jobs);
  return rep;
}

std::vector<json> emit_table(const std::string& kind, const RunConfig& cfg) {
  const FieldPair fp = make_field(cfg);
  const std::int64_t nE = fp.qE() - 1;
  const std::int64_t nF = fp.qF() - 1;
  std::vector<json> rows;
  if (kind == "l_set") {
    for (std::int64_t c = 0; c < nE; ++c) {
      for (std::int64_t e = 0; e < nF; ++e) {
        const TameChar chi = make_char(fp, FieldTag::E, c);
        int idx = 0;
        for (const auto& [s, t] : l_set(fp, chi, make_char(fp, FieldTag::F, e))) {
          rows.push_back(json{{"chi", c},
                              {"eta", e},
                              {"chi_squared_trivial", char_square_trivial(chi)},
                              {"index", idx++},
                              {"s_re", s.re.str()},
                              {"s_im_units", s.im_units.str()},
                              {"t_re", t.re.str()},
                              {"t_im_units", t.im_units.str()}});
        }
      }
    }
  } else if (kind == "image_table") {
    const Rat h(1, 2);
    const Rat third(1, 3);
    const Rat quarter(1, 4);
    const bool ram = fp.ext() == Ext::Ramified;
    for (std::int64_t c = 0; c < nE; ++c) {
      const TameChar chi = make_char(fp, FieldTag::E, c);
      const TameChar eta = restrict_char(fp, chi);
      if (!char_mul(eta, eta).trivial()) continue;
      const bool sq = char_square_trivial(chi);
      struct Row {
        const char* row;
        SymParam s, t;
      };
      std::vector<Row> samples;
      if (!sq) {
        samples = {{"L", {Rat(0), Rat(0)}, {h, Rat(0)}},
                   {"constants points", {Rat(0), Rat(0)}, {-h, Rat(0)}},
                   {"t in 1/2 + lattice minus L", {third, Rat(0)}, {h, Rat(0)}},
                   {"otherwise", {third, Rat(0)}, {quarter, Rat(0)}}};
      } else if (!ram) {
        samples = {{"L", {-h, Rat(0)}, {-h, Rat(0)}},
                   {"t in -1/2 + lattice minus L", {third, Rat(0)}, {-h, Rat(0)}},
                   {"two Steinberg points", {-h, Rat(0)}, {h, Rat(0)}},
                   {"otherwise", {third, Rat(0)}, {h, Rat(0)}}};
      } else {
        samples = {{"L", {-h, Rat(0)}, {-h, Rat(0)}},
                   {"t = -1/2 off the s-lattice, two points", {third, Rat(0)}, {-h, Rat(0)}},
                   {"t = 1/2 + pi i/ln q minus L, two points", {third, Rat(0)}, {h, Rat(1)}},
                   {"otherwise", {third, Rat(0)}, {h, Rat(0)}}};
      }
      for (const Row& row : samples) {
        const ParamTuple pt = make_params(fp, c, eta.k, row.s, row.t);
        rows.push_back(json{{"chi", c},
                            {"eta", eta.k},
                            {"chi_squared_trivial", sq},
                            {"ramified", ram},
                            {"row", row.row},
                            {"s_re", row.s.re.str()},
                            {"s_im_units", row.s.im_units.str()},
                            {"t_re", row.t.re.str()},
                            {"t_im_units", row.t.im_units.str()},
                            {"image_class", to_string(image_class(fp, pt))}});
      }
    }
  } else if (kind == "gamma_table") {
    for (FieldTag tag : {FieldTag::F, FieldTag::E}) {
      const std::int64_t n = tag == FieldTag::F ? nF : nE;
      for (std::int64_t k = 0; k < n; ++k) {
        for (double z : cfg.gamma_z) {
          const GammaValue gv = gamma_factor(fp, make_char(fp, tag, k));
          const EvalResult e = eval_at(gv.value, z, 0.0);
          rows.push_back(json{{"p", fp.p()},
                              {"ext", to_string(fp.ext())},
                              {"field", tag == FieldTag::F ? "F" : "E"},
                              {"chi_k", k},
                              {"s", z},
                              {"value_re", e.pole ? json(nullptr) : json(e.value.real())},
                              {"value_im", e.pole ? json(nullptr) : json(e.value.imag())},
                              {"method", gv.method == GammaMethod::ExactShells ? "ExactShells" : "Truncated"}});
        }
      }
    }
  } else if (kind == "residue_table") {
    const double q = static_cast<double>(fp.qF());
    for (std::int64_t c = 0; c < nE; ++c) {
      const TameChar chi = make_char(fp, FieldTag::E, c);
      const TameChar r = restrict_char(fp, chi);
      // Slash variety: eta = chi|_F; sample t = 3/10, s = (t - 1/2) / 2.
      {
        const SymParam t{Rat(3, 10), Rat(0)};
        const SymParam s{Rat(-1, 10), Rat(0)};
        const ParamTuple pt = make_params(fp, c, r.k, s, t);
        const cplx k = slash_delta_constant(fp, pt);
        rows.push_back(json{{"kind", "slash_delta"}, {"chi", c}, {"eta", r.k}, {"s", s.re.str()}, {"t", t.re.str()},
                            {"constant_re", k.real()}, {"constant_im", k.imag()}});
      }
      // Backslash variety: eta = chi|_F^{-1}; the line coefficient is 1 - 1/q.
      {
        const TameChar e = char_inv(r);
        rows.push_back(json{{"kind", "backslash_line"}, {"chi", c}, {"eta", e.k}, {"s", "-1/10"}, {"t", "-3/10"},
                            {"constant_re", 1.0 - 1.0 / q}, {"constant_im", 0.0}});
      }
    }
  } else {
    throw ConfigError("/table", "unknown table kind '" + kind + "'");
  }
  std::stable_sort(rows.begin(), rows.end(), [](const json& a, const json& b) { return a.dump() < b.dump(); });
  return rows;
}

std::string report_json(const Report& r, const RunConfig& cfg) {
  json j;
  j["suite"] = r.name;
  j["config"] = to_json(cfg);
  json recs = json::array();
  for (const CheckRecord& c : r.records) {
    recs.push_back(json{{"suite", c.suite},
                        {"check", c.check},
                        {"params", c.params},
                        {"inputs", c.inputs},
                        {"expected", c.expected},
                        {"got", c.got},
                        {"tolerance", c.tolerance},
                        {"pass", c.pass}});
  }
  j["records"] = recs;
  j["summary"] = json{{"total", r.records.size()}, {"failed", r.failed()}};
  return j.dump(2) + "\n";
}

std::string report_csv(const Report& r) {
  std::ostringstream os;
  os << "suite,check,params,expected,got,tolerance,pass\n";
  for (const CheckRecord& c : r.records) {
    os << csv_escape(c.suite) << ',' << csv_escape(c.check) << ',' << csv_escape(c.params) << ','
       << csv_escape(c.expected.dump()) << ',' << csv_escape(c.got.dump()) << ',' << fmt(c.tolerance) << ','
       << (c.pass ? "pass" : "FAIL") << '\n';
  }
  return os.str();
}

std::string table_json(const std::string& kind, const std::vector<json>& rows) {
  json j;
  j["table"] = kind;
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string table_csv(const std::vector<json>& rows) {
  std::ostringstream os;
  if (rows.empty()) return "";
  bool first = true;
  for (const auto& [k, v] : rows.front().items()) {
    (void)v;
    os << (first ? "" : ",") << k;
    first = false;
  }
  os << '\n';
  for (const json& row : rows) {
    first = true;
    for (const auto& [k, v] : row.items()) {
      (void)k;
      os << (first ? "" : ",") << csv_escape(cell(v));
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sbk::cli
