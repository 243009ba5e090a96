// sbk: batch driver for the symmetry breaking kernel library.
//
//   sbk <suite> --config run.json [--out DIR] [--format json|csv] [--jobs N]
//   sbk table --kind l_set --config run.json
//
// Exit status: 0 when every check passes, 1 when some check fails, 2 on usage errors.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "suites.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format = "json";
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::string kind;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

int run(const std::string& command, const Options& opt) {
  using namespace sbk::cli;
  RunConfig cfg;
  try {
    cfg = load_config(opt.config);
    if (opt.seed) cfg.battery.seed = *opt.seed;
    if (opt.tolerance) cfg.tolerance = *opt.tolerance;
    if (command == "table" && !opt.kind.empty()) cfg.table = opt.kind;
    if (command == "table" && std::find(kTables.begin(), kTables.end(), cfg.table) == kTables.end())
      throw ConfigError("/table", "unknown table kind '" + cfg.table + "'");
    for (std::size_t i = 0; i < cfg.suites.size(); ++i) {
      if (std::find(kSuites.begin(), kSuites.end(), cfg.suites[i]) == kSuites.end())
        throw ConfigError("/suites/" + std::to_string(i), "unknown suite '" + cfg.suites[i] + "'");
    }
    for (std::size_t i = 0; i < cfg.tuples.size(); ++i) {
      try {
        make_tuple(make_field(cfg), cfg.tuples[i]);
      } catch (const std::exception& e) {
        throw ConfigError("/tuples/" + std::to_string(i), e.what());
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "sbk: config error at " << (e.path().empty() ? "/" : e.path()) << ": " << e.what() << "\n";
    return 2;
  }

  std::string json_text;
  std::string csv_text;
  int failed = 0;
  std::size_t total = 0;
  if (command == "table") {
    const auto rows = emit_table(cfg.table, cfg);
    json_text = table_json(cfg.table, rows);
    csv_text = table_csv(rows);
    total = rows.size();
  } else {
    const Report rep = run_suite(command, cfg, opt.jobs);
    json_text = report_json(rep, cfg);
    csv_text = report_csv(rep);
    failed = rep.failed();
    total = rep.records.size();
  }

  if (!opt.out.empty()) {
    std::filesystem::create_directories(opt.out);
    const std::string stem = command == "table" ? cfg.table : command;
    write_file(std::filesystem::path(opt.out) / (stem + ".json"), json_text);
    write_file(std::filesystem::path(opt.out) / (stem + ".csv"), csv_text);
  } else {
    std::cout << (opt.format == "csv" ? csv_text : json_text);
  }
  std::cerr << "sbk " << command << ": " << total << " records, " << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry breaking kernels for PGL(2) over a quadratic extension of p-adic fields"};
  app.require_subcommand(1);
  Options opt;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  app.add_option("--config", opt.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", opt.out, "Directory for <name>.json and <name>.csv (stdout otherwise)");
  app.add_option("--format", opt.format, "Format written to stdout")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed of the test-function battery");
  app.add_option("--tolerance", tol, "Absolute tolerance override");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"pair", "Closed-form pairings on the test-function battery"},
      {"oracle", "Closed form against the truncated defining integral"},
      {"residue", "Residue identities on the Backslash and Slash varieties"},
      {"classify", "Regime, support, kernel dimension and image diagnostics"},
      {"spherical", "Spherical-vector constants against oracle integration"},
      {"compose", "Composition with the standard intertwining operator"},
      {"gamma", "Inversion constants and gamma factors"},
      {"unitary", "Norm ratios of the unitary embeddings"},
      {"verify", "All suites (or the config's suite list)"},
      {"table", "Emit l_set, image_table, gamma_table or residue_table"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (name == "table") sub->add_option("--kind", opt.kind, "Table kind");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.seed = seed;
  opt.tolerance = tol;
  try {
    return run(app.get_subcommands().front()->get_name(), opt);
  } catch (const std::exception& e) {
    std::cerr << "sbk: " << e.what() << "\n";
    return 2;
  }
}
