#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fsopc/commands.hpp"
#include "fsopc/config.hpp"
#include "fsopc/csv.hpp"
#include "fsopc/error.hpp"

using namespace fsopc;

namespace {

ConfigError config_error(std::string_view text, const ConfigOverrides& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("", 0, "");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / ("fsopc_cli_" + std::to_string(std::random_device{}()))) {
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("parse_config maps keys onto the run configuration") {
  const RunConfig cfg = parse_config(
      "# fading\n"
      "model = lognormal\n"
      "si = 0.5\n"
      "\n"
      "ns = 10, 20   # two points\n"
      "nb = 2\n"
      "lc = 5000\n"
      "receivers = genie, trellis:4, msd:8\n"
      "seed = 99\n");
  const auto& ln = std::get<LogNormalFading>(cfg.sweep.model.variant());
  CHECK(ln.sigma_x2 == doctest::Approx(std::log(1.5) / 4));
  CHECK(cfg.sweep.n_s_grid == std::vector<double>{10, 20});
  CHECK(cfg.sweep.base.n_b == 2.0);
  CHECK(cfg.sweep.base.coherence_length == 5000);
  REQUIRE(cfg.sweep.receivers.size() == 3);
  CHECK(cfg.sweep.receivers[1].kind == ReceiverKind::Trellis);
  CHECK(cfg.sweep.receivers[1].param == 4);
  CHECK(cfg.sweep.receivers[2].block_length() == 8);
  CHECK(cfg.sweep.seed == 99);
}

TEST_CASE("snr grid converts through the mapping") {
  const RunConfig cfg = parse_config("snr_db = 10, 20\nnb = 0.5\n");
  CHECK(cfg.sweep.n_s_grid[0] == doctest::Approx(5.0));
  CHECK(cfg.sweep.n_s_grid[1] == doctest::Approx(50.0));
}

TEST_CASE("command-line overrides win over the file") {
  const RunConfig cfg = parse_config("lm = 4\nreceivers = trellis\n", {{"lm", "8"}});
  REQUIRE(cfg.sweep.receivers.size() == 1);
  CHECK(cfg.sweep.receivers[0].param == 8);
}

TEST_CASE("config diagnostics name the key and line") {
  SUBCASE("range") {
    const ConfigError e = config_error("model = lognormal\nsi = -1\n");
    CHECK(e.key() == "si");
    CHECK(e.line() == 2);
  }
  SUBCASE("unknown key") {
    const ConfigError e = config_error("ns = 10\nfoo = 3\n");
    CHECK(e.key() == "foo");
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
  }
  SUBCASE("type mismatch") {
    const ConfigError e = config_error("\n\nnb = lots\n");
    CHECK(e.key() == "nb");
    CHECK(e.line() == 3);
  }
  SUBCASE("duplicate") {
    const ConfigError e = config_error("seed = 1\nseed = 2\n");
    CHECK(e.key() == "seed");
    CHECK(e.line() == 2);
  }
  SUBCASE("keys are case sensitive") { CHECK(config_error("NS = 10\n").key() == "NS"); }
  SUBCASE("syntax") { CHECK(config_error("ns 10\n").line() == 1); }
  SUBCASE("bad receiver") { CHECK(config_error("receivers = genie, viterbi\n").key() == "receivers"); }
  SUBCASE("override errors report the command line") {
    const ConfigError e = config_error("ns = 10\n", {{"shards", "zero"}});
    CHECK(e.key() == "shards");
    CHECK(e.line() == 0);
  }
}

TEST_CASE("csv round trip") {
  BerPoint p;
  p.receiver = "trellis";
  p.param = "8";
  p.n_s = 39.8107170553;
  p.n_b = 1.0;
  p.snr_db = 16.0;
  p.bits = 20'000'000;
  p.errors = 29339;
  finalize_ber(p);
  p.mean_d = 1.00033;
  p.forced_merges = 0;
  BerPoint g = p;
  g.receiver = "genie";
  g.param = "";
  g.mean_d.reset();
  g.forced_merges.reset();

  std::stringstream ss;
  const std::vector<BerPoint> points{p, g};
  write_csv(ss, points);
  const std::string text = ss.str();
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(text.find("1.46695e-03") != std::string::npos);
  CHECK(text.find("genie,,") != std::string::npos);

  const auto rows = parse_csv(ss);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].receiver == "trellis");
  CHECK(rows[0].bits == p.bits);
  CHECK(rows[0].errors == p.errors);
  CHECK(rows[0].ber == doctest::Approx(p.ber).epsilon(1e-6));
  CHECK(rows[0].ci95 == doctest::Approx(p.ci95).epsilon(1e-6));
  CHECK(rows[0].n_s == doctest::Approx(p.n_s).epsilon(1e-6));
  CHECK(*rows[0].mean_d == doctest::Approx(1.00033));
  CHECK(*rows[0].forced_merges == 0);
  CHECK_FALSE(rows[1].mean_d.has_value());
  CHECK(format_row(rows[0]) == format_row(to_row(p)));

  std::stringstream bad("receiver,ber\nx,1\n");
  CHECK_THROWS(parse_csv(bad));
}

TEST_CASE("command_sweep") {
  TempDir dir;
  const std::string text =
      "model = constant\nns = 5, 10, 15\nreceivers = genie\nmin_errors = 50\nmax_bits = 200000\n";
  std::ostringstream diag;

  RunConfig cfg = parse_config(text);
  cfg.out_path = (dir.path / "a.csv").string();
  REQUIRE(command_sweep(cfg, diag) == kExitOk);
  std::ifstream in(cfg.out_path);
  const auto rows = parse_csv(in);
  CHECK(rows.size() == 3);

  SUBCASE("rerun is byte-identical") {
    RunConfig again = parse_config(text);
    again.out_path = (dir.path / "b.csv").string();
    REQUIRE(command_sweep(again, diag) == kExitOk);
    CHECK(slurp(cfg.out_path) == slurp(again.out_path));
  }
  SUBCASE("run log has one record per point") {
    std::ifstream log(cfg.effective_log_path());
    std::string line;
    int points = 0, lines = 0;
    while (std::getline(log, line)) {
      ++lines;
      if (line.find("\"event\":\"point\"") != std::string::npos) ++points;
    }
    CHECK(points == 3);
    CHECK(lines == 5);
  }
  SUBCASE("unwritable output") {
    RunConfig bad = parse_config(text);
    bad.out_path = (dir.path / "missing" / "x.csv").string();
    std::ostringstream err;
    CHECK(command_sweep(bad, err) == kExitRuntime);
    CHECK(err.str().find("cannot write") != std::string::npos);
  }
  SUBCASE("simulation parameter errors map to the config exit code") {
    RunConfig bad = parse_config(text);
    bad.out_path = (dir.path / "c.csv").string();
    bad.sweep.receivers = {ReceiverSpec::brute(30)};
    CHECK(command_sweep(bad, diag) == kExitConfig);
  }
}

TEST_CASE("command_genie_bound writes the bound curve") {
  RunConfig cfg = parse_config("model = constant\nns = 10\n");
  cfg.out_path = "-";
  std::ostringstream out, diag;
  CHECK(command_genie_bound(cfg, out, diag) == kExitOk);
  CHECK(out.str() == "n_s,n_b,snr_db,genie_bep,std_error\n10,1,10,9.38222e-03,0.00000e+00\n");
}

TEST_CASE("command_validate") {
  std::ostringstream out;
  CHECK(command_validate({.quick = true}, out) == kExitOk);
  CHECK(out.str().find("FAIL") == std::string::npos);

  std::ostringstream faulty;
  CHECK(command_validate({.quick = true, .inject_fault = true}, faulty) == kExitRuntime);
  CHECK(faulty.str().find("validation failed: msd") != std::string::npos);
}
