#include "config.hpp"
#include "doctest.h"
#include "suites.hpp"

using namespace sbk::cli;

namespace {

json sample() {
  return json::parse(R"({
    "field": {"p": 3, "ext": "unramified"},
    "chi": 0, "eta": 0,
    "tuples": [
      {"s": "-1/2", "t": "-1/2"},
      {"s": {"re": "0", "im_units": "1"}, "t": {"re": "-1/2", "im_units": "1"}},
      {"chi": 2, "s": 1.25, "t": {"re": 0.3, "im": 0.1}}
    ],
    "battery": {"count": 2, "seed": 3},
    "suites": ["pair", "classify"]
  })");
}

std::string error_path(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse_config(sample());
  CHECK(c.p == 3);
  REQUIRE(c.tuples.size() == 3);
  CHECK(c.tuples[0].s.exact);
  CHECK(c.tuples[0].s.sym.re == sbk::Rat(-1, 2));
  CHECK(c.tuples[1].t.sym.im_units == sbk::Rat(1));
  CHECK(c.tuples[2].chi == 2);
  CHECK_FALSE(c.tuples[2].s.exact);
  CHECK(c.tuples[2].t.z == sbk::cplx(0.3, 0.1));
  CHECK(c.battery.count == 2);
  CHECK(c.battery.seed == 3);
}

TEST_CASE("config round-trips through serialization") {
  const RunConfig c = parse_config(sample());
  const json j = to_json(c);
  const RunConfig d = parse_config(j);
  CHECK(to_json(d) == j);
}

TEST_CASE("malformed configs name the offending key") {
  json j = sample();
  j["field"]["p"] = 4;
  CHECK(error_path(j) == "/field/p");
  j = sample();
  j.erase("field");
  CHECK(error_path(j) == "/field");
  j = sample();
  j["tuples"][1]["t"]["re"] = "1/0";
  CHECK(error_path(j) == "/tuples/1/t/re");
  j = sample();
  j["colour"] = "blue";
  CHECK(error_path(j) == "/colour");
  j = sample();
  j["variant"] = "Tilde";
  CHECK(error_path(j) == "/variant");
  j = sample();
  j["battery"]["level"] = 9;
  CHECK(error_path(j) == "/battery");
  CHECK(error_path(json::array()) == "");
}

TEST_CASE("tables are deterministic") {
  RunConfig c = parse_config(sample());
  for (const std::string& kind : kTables) {
    const auto a = emit_table(kind, c);
    const auto b = emit_table(kind, c);
    CHECK(table_json(kind, a) == table_json(kind, b));
    CHECK(table_csv(a) == table_csv(b));
  }
}

TEST_CASE("classify sweep over the ramified L list") {
  const RunConfig c = parse_config(json::parse(R"({
    "field": {"p": 3, "ext": "ramified"},
    "tuples": [
      {"s": "-1/2", "t": "-1/2"},
      {"s": {"re": "-1/2", "im_units": "1"}, "t": "-1/2"},
      {"s": {"re": "0", "im_units": "1/2"}, "t": {"re": "1/2", "im_units": "1"}},
      {"s": {"re": "0", "im_units": "3/2"}, "t": {"re": "1/2", "im_units": "1"}}
    ],
    "battery": {"count": 2}
  })"));
  const Report r = run_suite("classify", c, 1);
  int empty = 0;
  for (const CheckRecord& rec : r.records)
    if (rec.check == "support" && rec.got["support"] == "Empty") ++empty;
  CHECK(empty == 4);
  CHECK(r.failed() == 0);
}

TEST_CASE("suite reports are independent of the worker count") {
  RunConfig c = parse_config(sample());
  c.suites = {"pair", "classify", "residue"};
  const Report one = run_suite("verify", c, 1);
  const Report two = run_suite("verify", c, 3);
  CHECK(report_json(one, c) == report_json(two, c));
}

TEST_CASE("sample config passes verification") {
  const RunConfig c = load_config(std::string(SBK_CONFIG_DIR) + "/p3_unramified.json");
  const Report r = run_suite("verify", c, 1);
  CHECK(r.failed() == 0);
}
