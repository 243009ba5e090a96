#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sbk/kernels.hpp"

namespace sbk::cli {

using json = nlohmann::ordered_json;

/// Raised for malformed configs; `path` is a JSON pointer to the offending key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string path, const std::string& msg)
      : std::runtime_error(path + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

/// Exact (rational real part, imaginary part in lattice units) or free-form complex.
struct ParamSpec {
  bool exact = true;
  SymParam sym{Rat(0), Rat(0)};
  cplx z;
};

struct TupleSpec {
  std::int64_t chi = 0;
  std::int64_t eta = 0;
  ParamSpec s;
  ParamSpec t;
};

struct BatterySpec {
  int count = 5;
  std::uint64_t seed = 1;
  int level = 1;
  int support = 1;
  double density = 0.8;
};

struct RunConfig {
  std::int64_t p = 3;
  std::string ext = "unramified";
  std::optional<std::string> alpha_sq;
  std::vector<TupleSpec> tuples;
  BatterySpec battery;
  std::string variant = "Normalized";
  int oracle_J = 12;
  int spherical_J = 14;
  std::vector<double> unitary_s{0.30, 0.35, 0.40, 0.45, 0.5};
  std::vector<double> gamma_z{-0.8, -0.6};
  int gamma_J = 12;
  std::string table = "l_set";
  std::vector<std::string> suites;
  double tolerance = 1e-8;
};

RunConfig parse_config(const json& j);
json to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

FieldPair make_field(const RunConfig& c);
ParamTuple make_tuple(const FieldPair& fp, const TupleSpec& t);

json param_json(const ParamSpec& p);
std::string param_str(const ParamSpec& p);

}  // namespace sbk::cli
