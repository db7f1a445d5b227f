// End-to-end exit-code and output checks against the built CLI binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef HISTRATE_CLI_PATH
#error "HISTRATE_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string work_dir() {
  static std::string dir = [] {
    std::string tmpl = "/tmp/histrate_cli_XXXXXX";
    char* made = mkdtemp(tmpl.data());
    REQUIRE(made != nullptr);
    return std::string(made);
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  const std::string out_path = work_dir() + "/last_output.txt";
  const std::string command = std::string(HISTRATE_CLI_PATH) + " " + args +
                              " > " + out_path + " 2>&1";
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("fit: success, determinism, and config errors") {
  const std::string model = work_dir() + "/model.txt";
  const auto ok = run_cli(
      "fit --family linear --gamma 1 --d 1 --n 1000 --s 0.125 --seed 7 --out " +
      model);
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("cells ") != std::string::npos);
  CHECK(ok.output.find("training_risk ") != std::string::npos);
  const std::string first = read_file(model);

  const auto again = run_cli(
      "fit --family linear --gamma 1 --d 1 --n 1000 --s 0.125 --seed 7 --out " +
      model);
  CHECK(again.exit_code == 0);
  CHECK(read_file(model) == first);  // byte-identical refit

  const std::string data = work_dir() + "/points.csv";
  write_file(data, "0.5,1\n-0.5,-1\n");
  CHECK(run_cli("fit --data " + data + " --s 0 --out " + model).exit_code == 2);
  CHECK(run_cli("fit --data " + data + " --s 1.5 --out " + model).exit_code == 2);
  CHECK(run_cli("fit --data " + data + " --s 0.5 --out " + model).exit_code == 0);
  CHECK(run_cli("fit --s 0.5 --out " + model).exit_code == 2);  // no source
}

TEST_CASE("predict: row counts, risk, and dimension mismatch") {
  const std::string model = work_dir() + "/model1.txt";
  REQUIRE(run_cli("fit --family linear --gamma 1 --d 1 --n 500 --s 0.25 "
                  "--seed 3 --out " + model).exit_code == 0);

  const std::string labeled = work_dir() + "/labeled.csv";
  write_file(labeled, "0.5,1\n-0.5,-1\n0.9,1\n");
  const std::string preds = work_dir() + "/preds.txt";
  const auto ok = run_cli("predict --model " + model + " --data " + labeled +
                          " --out " + preds);
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("rows 3") != std::string::npos);
  CHECK(ok.output.find("empirical_risk ") != std::string::npos);
  const std::string written = read_file(preds);
  CHECK(std::count(written.begin(), written.end(), '\n') == 3);

  const std::string unlabeled = work_dir() + "/unlabeled.csv";
  write_file(unlabeled, "0.5\n-0.5\n");
  const auto bare = run_cli("predict --model " + model + " --data " + unlabeled);
  CHECK(bare.exit_code == 0);
  CHECK(bare.output.find("empirical_risk") == std::string::npos);

  const std::string wide = work_dir() + "/wide.csv";
  write_file(wide, "0.5,0.5,0.5,1\n");
  CHECK(run_cli("predict --model " + model + " --data " + wide).exit_code == 2);
}

TEST_CASE("verify: passes on linear, fails by design on far_noise") {
  const auto fast = run_cli(
      "verify --family linear --gamma 1 --d 2 --samples 20000 --trials 20 "
      "--checks lemma-sets,tube,variance,erm");
  CHECK(fast.exit_code == 0);
  CHECK(fast.output.find("PASS lemma-sets") != std::string::npos);
  CHECK(fast.output.find("PASS tube") != std::string::npos);
  CHECK(fast.output.find("PASS variance") != std::string::npos);
  CHECK(fast.output.find("PASS erm") != std::string::npos);
  CHECK(fast.output.find("FAIL") == std::string::npos);

  const auto broken = run_cli(
      "verify --family far_noise --gamma 1 --d 1 --samples 20000 "
      "--checks lower-control");
  CHECK(broken.exit_code == 1);
  CHECK(broken.output.find("FAIL lower-control") != std::string::npos);

  CHECK(run_cli("verify --family linear --checks no-such-check").exit_code == 2);
  CHECK(run_cli("verify --family martian --checks tube").exit_code == 2);
}

TEST_CASE("rates: exponent table, experiments, and config handling") {
  const auto table = run_cli("rates --exponents-only --alpha 1 --gamma 1 "
                             "--d 2 --q 1");
  CHECK(table.exit_code == 0);
  CHECK(table.output.find("0.4444444444") != std::string::npos);
  CHECK(table.output.find("svm") != std::string::npos);
  CHECK(table.output.find("0.4") != std::string::npos);

  CHECK(run_cli("rates --config /tmp/histrate_missing_config.json").exit_code ==
        2);

  const std::string bad_config = work_dir() + "/bad.json";
  write_file(bad_config, "{\"unknown_key\": 1}\n");
  CHECK(run_cli("rates --config " + bad_config).exit_code == 2);

  // Out-of-regime beta names the constraint and exits with a config error.
  const auto regime = run_cli("rates --family linear --gamma 1 --d 1 "
                              "--beta 10 --ns 128 --ns 256 --reps 2");
  CHECK(regime.exit_code == 2);
  CHECK(regime.output.find("kappa/gamma") != std::string::npos);

  const std::string csv = work_dir() + "/rates.csv";
  const std::string json = work_dir() + "/rates.json";
  const std::string config = work_dir() + "/run.json";
  write_file(config, R"({
    "family": {"kind": "linear", "d": 1, "gamma": 1.0},
    "ns": [128, 256, 512],
    "reps": 5,
    "seed": 11,
    "out_csv": ")" + csv + R"(",
    "out_json": ")" + json + R"("
  })");
  const auto run = run_cli("rates --config " + config);
  CHECK(run.exit_code == 0);
  const std::string csv_content = read_file(csv);
  CHECK(csv_content.rfind("n,mean_excess,std_excess,reps\n", 0) == 0);
  CHECK(read_file(json).find("theoretical_exponent") != std::string::npos);
  CHECK(run.output.find("slope ") != std::string::npos);

  // Identical config and seed: byte-identical outputs at any thread count.
  const auto rerun = run_cli("rates --config " + config + " --threads 1");
  CHECK(rerun.exit_code == 0);
  CHECK(read_file(csv) == csv_content);

  // Flags override the config file.
  const auto overridden =
      run_cli("rates --config " + config + " --ns 64 --ns 128 --reps 2");
  CHECK(overridden.exit_code == 0);
  CHECK(read_file(csv).find("\n64,") != std::string::npos);
}

TEST_CASE("unknown subcommands and missing arguments are config errors") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("fit").exit_code == 2);                 // --s required
  CHECK(run_cli("predict --model /nope").exit_code == 2);  // --data required
}
