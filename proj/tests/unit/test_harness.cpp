#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "lsieve/harness/commands.hpp"
#include "lsieve/harness/config.hpp"
#include "lsieve/harness/report.hpp"

using namespace lsieve;
using namespace lsieve::harness;

namespace {

ExperimentConfig squares_grid() {
  ExperimentConfig c;
  c.family = {"squares"};
  c.Q = {2, 3, 4};
  c.N = {4, 16};
  c.coeffs = {"ones"};
  return c;
}

}  // namespace

TEST_CASE("config round-trips") {
  ExperimentConfig c = squares_grid();
  c.seeds = {3, 5};
  c.eps = 0.125;
  c.tol = 1e-7;
  c.associates = "units";
  c.out = "x.csv";
  c.format = "json";
  c.Q0 = {5, 7.5};
  CHECK(ExperimentConfig::from_flat(c.to_flat()) == c);
  CHECK(ExperimentConfig::from_flat(parse_flat(write_flat(c.to_flat()))) == c);
  CHECK(ExperimentConfig::from_json(nlohmann::json::parse(c.to_json().dump())) == c);
  CHECK(ExperimentConfig::from_flat({}) == ExperimentConfig{});
}

TEST_CASE("flat parsing") {
  const auto kv = parse_flat("# comment\nQ = 2, 3\n\nfamily=squares  # trailing\n");
  CHECK(kv.at("Q") == "2, 3");
  CHECK(kv.at("family") == "squares");
  const ExperimentConfig c = ExperimentConfig::from_flat(kv);
  CHECK(c.Q == std::vector<double>{2, 3});
  CHECK(c.family == std::vector<std::string>{"squares"});
}

TEST_CASE("config errors name the key") {
  ExperimentConfig c;
  c.Q.clear();
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "Q");
  }
  ExperimentConfig f;
  f.family = {"bogus"};
  CHECK_THROWS_AS(f.validate(), ConfigError);
  try {
    ExperimentConfig::from_flat({{"nonsense", "1"}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "nonsense");
  }
  ExperimentConfig t;
  t.tol = -1.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  std::ostringstream out, err;
  CHECK(run_command("sweep", c, out, err) == kConfigError);
  CHECK(err.str().find("Q") != std::string::npos);
}

TEST_CASE("hash ignores output-only keys") {
  ExperimentConfig a = squares_grid();
  ExperimentConfig b = a;
  b.out = "elsewhere.json";
  b.format = "json";
  b.timing = true;
  b.threads = 3;
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  b.N = {4};
  CHECK(a.hash() != b.hash());
}

TEST_CASE("sweep example grid") {
  const CommandResult r = cmd_sweep(squares_grid());
  CHECK(r.exit_code == kOk);
  REQUIRE(r.table.rows.size() == 6);
  const std::size_t ratio = r.table.column("ratio_ls_explicit");
  for (const auto& row : r.table.rows) CHECK(std::get<double>(row[ratio]) <= 1.0);
  const std::vector<std::string> head{"family", "k", "Q", "N", "seed", "R", "K_euclid", "K_sup", "K_norm", "T", "Z",
                                      "bound_huxley", "bound_thm1", "bound_thm2", "bound_conj", "bound_ls_explicit"};
  REQUIRE(r.table.columns.size() > head.size());
  CHECK(std::vector<std::string>(r.table.columns.begin(), r.table.columns.begin() + 16) == head);
  for (const char* c : {"config_hash", "seed", "version", "wall_time_ms"}) CHECK_NOTHROW(r.table.column(c));
}

TEST_CASE("sweep output is deterministic and CSV matches JSON") {
  ExperimentConfig c = squares_grid();
  c.coeffs = {"ones", "random", "extremal"};
  c.seeds = {1, 2};
  const CommandResult a = cmd_sweep(c);
  const CommandResult b = cmd_sweep(c);
  std::ostringstream ca, cb, ja;
  write_csv(ca, a.table);
  write_csv(cb, b.table);
  CHECK(ca.str() == cb.str());
  write_json(ja, a.table);
  const nlohmann::json j = nlohmann::json::parse(ja.str());
  REQUIRE(j.size() == a.table.rows.size());
  std::istringstream lines(ca.str());
  std::string line;
  std::getline(lines, line);
  for (std::size_t i = 0; i < a.table.rows.size(); ++i) {
    std::getline(lines, line);
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    REQUIRE(fields.size() == a.table.columns.size());
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const auto& v = j[i][a.table.columns[k]];
      if (v.is_number_float()) CHECK(std::stod(fields[k]) == v.get<double>());
      else if (v.is_number_integer()) CHECK(std::stoll(fields[k]) == v.get<std::int64_t>());
      else if (v.is_boolean()) CHECK(fields[k] == (v.get<bool>() ? "true" : "false"));
      else CHECK(fields[k] == v.get<std::string>());
    }
  }
}

TEST_CASE("extremal coefficients beat all ones on the Huxley ratio somewhere") {
  ExperimentConfig c = squares_grid();
  c.coeffs = {"ones", "extremal"};
  const std::vector<SieveReport> rows = sweep_reports(c);
  bool exceeded = false;
  for (const SieveReport& e : rows) {
    if (e.coeffs != "extremal") continue;
    for (const SieveReport& o : rows)
      if (o.coeffs == "ones" && o.Q == e.Q && o.N == e.N && o.family == e.family &&
          e.ratios.at("huxley") > o.ratios.at("huxley"))
        exceeded = true;
  }
  CHECK(exceeded);
}

TEST_CASE("budget overrun marks rows skipped and exits 3") {
  ExperimentConfig c = squares_grid();
  c.max_points = 10;
  const CommandResult r = cmd_sweep(c);
  CHECK(r.exit_code == kBudgetExceeded);
  const std::size_t st = r.table.column("status");
  bool skipped = false;
  for (const auto& row : r.table.rows)
    if (std::get<std::string>(row[st]).rfind("skipped", 0) == 0) skipped = true;
  CHECK(skipped);
  CHECK(r.table.rows.size() == 6);
}

TEST_CASE("duality command") {
  ExperimentConfig c;
  c.matrices = 4;
  c.rows = 4;
  c.cols = 6;
  const CommandResult r = cmd_duality(c);
  CHECK(r.exit_code == kOk);
  CHECK(r.table.rows.size() == 4);
}

TEST_CASE("weyl cases") {
  for (double Q0 : {5.0, 10.0, 20.0}) {
    const auto cases = weyl_cases(Q0);
    CHECK(cases.size() == 3);
    for (const WeylConfig& w : cases) CHECK_NOTHROW(w.validate());
  }
  CHECK_THROWS_AS(weyl_cases(1.9), ConfigError);
  CHECK(gauss_string({2, -1}) == "2-1i");
}

TEST_CASE("cell formatting") {
  CHECK(format_cell(Cell{0.1}) == "0.10000000000000001");
  CHECK(format_cell(Cell{std::int64_t{7}}) == "7");
  CHECK(format_cell(Cell{true}) == "true");
  Table t;
  t.columns = {"a"};
  CHECK_THROWS(t.add({Cell{1.0}, Cell{2.0}}));
}
