#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sbk::cli {

namespace {

const json& need(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "/" + key, "missing required key");
  return j.at(key);
}

std::int64_t get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

Rat get_rat(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
  if (!j.is_string()) throw ConfigError(path, "expected a rational string such as \"-1/2\"");
  try {
    return Rat::from_string(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

ParamSpec parse_param(const json& j, const std::string& path) {
  ParamSpec p;
  if (j.is_string() || j.is_number_integer()) {
    p.sym = SymParam{get_rat(j, path), Rat(0)};
    return p;
  }
  if (j.is_number()) {
    p.exact = false;
    p.z = cplx(j.get<double>(), 0.0);
    return p;
  }
  if (!j.is_object()) throw ConfigError(path, "expected a rational, a number or an object");
  if (j.contains("im_units")) {
    p.sym = SymParam{get_rat(need(j, "re", path), path + "/re"), get_rat(j.at("im_units"), path + "/im_units")};
    return p;
  }
  p.exact = false;
  p.z = cplx(get_double(need(j, "re", path), path + "/re"), j.contains("im") ? get_double(j.at("im"), path + "/im") : 0.0);
  return p;
}

std::vector<double> get_doubles(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_double(j[i], path + "/" + std::to_string(i)));
  return out;
}

const std::vector<std::string> kKnownKeys = {"field", "chi", "eta", "tuples", "battery", "variant", "oracle_J", "spherical_J",
                                             "unitary_s", "gamma_z", "gamma_J", "table", "suites", "tolerance"};

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), k) == kKnownKeys.end()) throw ConfigError("/" + k, "unknown key");
  }
  RunConfig c;
  const json& f = need(j, "field", "");
  c.p = get_int(need(f, "p", "/field"), "/field/p");
  if (!is_prime(c.p) || c.p == 2) throw ConfigError("/field/p", "expected an odd prime");
  const json& e = need(f, "ext", "/field");
  if (!e.is_string()) throw ConfigError("/field/ext", "expected \"unramified\" or \"ramified\"");
  c.ext = e.get<std::string>();
  try {
    ext_from_string(c.ext);
  } catch (const std::exception& ex) {
    throw ConfigError("/field/ext", ex.what());
  }
  if (f.contains("alpha_sq")) {
    get_rat(f.at("alpha_sq"), "/field/alpha_sq");
    c.alpha_sq = f.at("alpha_sq").is_string() ? f.at("alpha_sq").get<std::string>() : std::to_string(f.at("alpha_sq").get<std::int64_t>());
  }
  try {
    make_field(c);
  } catch (const std::exception& ex) {
    throw ConfigError("/field", ex.what());
  }

  const std::int64_t chi = j.contains("chi") ? get_int(j.at("chi"), "/chi") : 0;
  const std::int64_t eta = j.contains("eta") ? get_int(j.at("eta"), "/eta") : 0;
  if (j.contains("tuples")) {
    const json& ts = j.at("tuples");
    if (!ts.is_array()) throw ConfigError("/tuples", "expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string path = "/tuples/" + std::to_string(i);
      const json& t = ts[i];
      if (!t.is_object()) throw ConfigError(path, "expected an object");
      TupleSpec spec;
      spec.chi = t.contains("chi") ? get_int(t.at("chi"), path + "/chi") : chi;
      spec.eta = t.contains("eta") ? get_int(t.at("eta"), path + "/eta") : eta;
      spec.s = parse_param(need(t, "s", path), path + "/s");
      spec.t = parse_param(need(t, "t", path), path + "/t");
      c.tuples.push_back(spec);
    }
  }
  if (j.contains("battery")) {
    const json& b = j.at("battery");
    if (!b.is_object()) throw ConfigError("/battery", "expected an object");
    if (b.contains("count")) c.battery.count = static_cast<int>(get_int(b.at("count"), "/battery/count"));
    if (b.contains("seed")) c.battery.seed = static_cast<std::uint64_t>(get_int(b.at("seed"), "/battery/seed"));
    if (b.contains("level")) c.battery.level = static_cast<int>(get_int(b.at("level"), "/battery/level"));
    if (b.contains("support")) c.battery.support = static_cast<int>(get_int(b.at("support"), "/battery/support"));
    if (b.contains("density")) c.battery.density = get_double(b.at("density"), "/battery/density");
    if (c.battery.count < 0 || c.battery.level < 0 || c.battery.level > 3 || c.battery.support < 0 || c.battery.support > 3)
      throw ConfigError("/battery", "count >= 0 and level, support in [0, 3] required");
  }
  if (j.contains("variant")) {
    if (!j.at("variant").is_string()) throw ConfigError("/variant", "expected a string");
    c.variant = j.at("variant").get<std::string>();
    try {
      variant_from_string(c.variant);
    } catch (const std::exception& ex) {
      throw ConfigError("/variant", ex.what());
    }
  }
  if (j.contains("oracle_J")) c.oracle_J = static_cast<int>(get_int(j.at("oracle_J"), "/oracle_J"));
  if (j.contains("spherical_J")) c.spherical_J = static_cast<int>(get_int(j.at("spherical_J"), "/spherical_J"));
  if (j.contains("gamma_J")) c.gamma_J = static_cast<int>(get_int(j.at("gamma_J"), "/gamma_J"));
  if (j.contains("unitary_s")) c.unitary_s = get_doubles(j.at("unitary_s"), "/unitary_s");
  if (j.contains("gamma_z")) c.gamma_z = get_doubles(j.at("gamma_z"), "/gamma_z");
  if (j.contains("table")) {
    if (!j.at("table").is_string()) throw ConfigError("/table", "expected a string");
    c.table = j.at("table").get<std::string>();
  }
  if (j.contains("suites")) {
    const json& s = j.at("suites");
    if (!s.is_array()) throw ConfigError("/suites", "expected an array of strings");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_string()) throw ConfigError("/suites/" + std::to_string(i), "expected a string");
      c.suites.push_back(s[i].get<std::string>());
    }
  }
  if (j.contains("tolerance")) c.tolerance = get_double(j.at("tolerance"), "/tolerance");
  return c;
}

json param_json(const ParamSpec& p) {
  if (p.exact) return json{{"re", p.sym.re.str()}, {"im_units", p.sym.im_units.str()}};
  return json{{"re", p.z.real()}, {"im", p.z.imag()}};
}

std::string param_str(const ParamSpec& p) {
  std::ostringstream os;
  if (p.exact) {
    os << p.sym.re.str();
    if (!p.sym.im_units.is_zero()) os << "+" << p.sym.im_units.str() << "u";
  } else {
    os << p.z.real();
    if (p.z.imag() != 0.0) os << "+" << p.z.imag() << "i";
  }
  return os.str();
}

json to_json(const RunConfig& c) {
  json j;
  j["field"] = json{{"p", c.p}, {"ext", c.ext}};
  if (c.alpha_sq) j["field"]["alpha_sq"] = *c.alpha_sq;
  json ts = json::array();
  for (const auto& t : c.tuples) ts.push_back(json{{"chi", t.chi}, {"eta", t.eta}, {"s", param_json(t.s)}, {"t", param_json(t.t)}});
  j["tuples"] = ts;
  j["battery"] = json{{"count", c.battery.count},
                      {"seed", c.battery.seed},
                      {"level", c.battery.level},
                      {"support", c.battery.support},
                      {"density", c.battery.density}};
  j["variant"] = c.variant;
  j["oracle_J"] = c.oracle_J;
  j["spherical_J"] = c.spherical_J;
  j["unitary_s"] = c.unitary_s;
  j["gamma_z"] = c.gamma_z;
  j["gamma_J"] = c.gamma_J;
  j["table"] = c.table;
  j["suites"] = c.suites;
  j["tolerance"] = c.tolerance;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

FieldPair make_field(const RunConfig& c) {
  const Ext e = ext_from_string(c.ext);
  if (c.alpha_sq) return FieldPair(c.p, e, Rat::from_string(*c.alpha_sq));
  return FieldPair::make_default(c.p, e);
}

ParamTuple make_tuple(const FieldPair& fp, const TupleSpec& t) {
  if (t.s.exact && t.t.exact) return make_params(fp, t.chi, t.eta, t.s.sym, t.t.sym);
  const cplx s = t.s.exact ? sym_value(t.s.sym, static_cast<double>(fp.qE())) : t.s.z;
  const cplx tt = t.t.exact ? sym_value(t.t.sym, static_cast<double>(fp.qF())) : t.t.z;
  return make_params(fp, t.chi, t.eta, s, tt);
}

}  // namespace sbk::cli
