// Copyright 2026 The smplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smplab/experiment.h"

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "smplab/io.h"

using namespace smplab;

namespace {

ExperimentConfig config(const std::string &experiment, std::initializer_list<std::pair<const char *, const char *>> kv) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    for (const auto &[k, v] : kv) {
        apply_config_entry(cfg, k, v);
    }
    return cfg;
}

std::size_t line_count(const std::string &s) {
    std::size_t n = 0;
    for (char c : s) {
        n += c == '\n';
    }
    return n;
}

#ifdef SMPLAB_CLI_PATH
int run_cli(const std::string &args) {
    std::string cmd = std::string(SMPLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}
#endif

std::string temp_dir(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("smplab_test_" + name);
    std::filesystem::remove_all(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("eq-public summary") {
    ExperimentReport r = run_experiment(config("eq-public", {{"n", "4"}, {"k", "2"}}));
    CHECK(r.passed());
    CHECK(r.summary_value("worst_case_error") == "0.25");
    CHECK(r.summary_value("total_bits") == "4");
    CHECK(r.csv_rows.size() == 256);
    CHECK(r.summary_text().find("assert.acceptance_exact=pass") != std::string::npos);
    CHECK(r.config_text().find("param.k = 2") != std::string::npos);
}

TEST_CASE("learn-state summary on the basis fixture") {
    ExperimentReport r = run_experiment(config("learn-state", {}));
    CHECK(r.passed());
    CHECK(r.summary_value("T") == "1");
    CHECK(r.csv_rows.size() == 2);
    CHECK(r.csv_columns[0] == "b");
}

TEST_CASE("compile summary on the toy fixture") {
    ExperimentReport r = run_experiment(config("compile", {{"r", "3"}}));
    CHECK(r.passed());
    CHECK(std::stod(r.summary_value("max_pair_increase")) <= 0.1);
    CHECK(r.summary_value("compiled_alice_bits") == r.summary_value("max_encoded_bits"));
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(run_experiment(config("no-such", {})), ConfigError);
    CHECK_THROWS_AS(run_experiment(config("eq-public", {{"bogus", "1"}})), ConfigError);
    CHECK_THROWS_AS(run_experiment(config("eq-public", {{"n", "four"}})), ConfigError);
    CHECK_THROWS_AS(run_experiment(config("eq-public", {{"n", "40"}})), CapExceeded);
    // Sampled runs need a seed.
    CHECK_THROWS_AS(run_experiment(config("matching-qc", {})), ConfigError);
    CHECK_THROWS_AS(run_experiment(config("eq-public", {{"trials", "10"}})), ConfigError);
    CHECK_THROWS_AS(run_experiment(config("eq-code", {{"trials", "10"}})), ConfigError);
    CHECK_THROWS_AS(run_experiment(config("eq-public", {{"tolerance.nonsense", "1"}})), ConfigError);
    CHECK_NOTHROW(run_experiment(config("eq-public", {{"tolerance.band_pad", "1e-10"}})));
}

TEST_CASE("runs are reproducible") {
    ExperimentConfig cfg = config("matching-qc", {{"seed", "5"}, {"trials", "400"}, {"instances", "4"}});
    ExperimentReport a = run_experiment(cfg);
    ExperimentReport b = run_experiment(cfg);
    CHECK(a.csv() == b.csv());
    CHECK(a.summary_text() == b.summary_text());
    cfg.seed = 6;
    CHECK(run_experiment(cfg).csv() != a.csv());
}

TEST_CASE("sweeps") {
    ExperimentConfig cfg = config("eq-public", {{"seed", "3"}});
    SweepResult empty = run_sweep(cfg, "k", {});
    CHECK(line_count(empty.csv("eq-public")) == 1);

    SweepResult one = run_sweep(cfg, "k", {"3"});
    ExperimentConfig direct = cfg;
    direct.params["k"] = "3";
    CHECK(one.runs[0].summary_text() == run_experiment(direct).summary_text());

    SweepResult dup = run_sweep(config("matching-classical", {{"seed", "3"}, {"trials", "200"}}), "subset_size",
                                {"12", "12"});
    CHECK(dup.seeds[0] != dup.seeds[1]);
    std::string csv = dup.csv("matching-classical");
    CHECK(line_count(csv) == 3);
    CHECK(csv.rfind("run,subset_size,seed,passed,success_rate", 0) == 0);

    SweepResult many = run_sweep(cfg, "k", {"1", "2", "3", "4"});
    for (std::size_t i = 0; i < 4; i++) {
        CHECK(std::stod(many.runs[i].summary_value("worst_case_error")) == std::ldexp(1.0, -static_cast<int>(i + 1)));
    }
}

TEST_CASE("config files") {
    std::string dir = temp_dir("config");
    std::filesystem::create_directories(dir);
    write_file(dir + "/run.conf", "experiment = eq-public\nparam.n = 3\nk = 1\nseed = 4\nout = somewhere\n");
    ExperimentConfig cfg = load_config_file(dir + "/run.conf");
    CHECK(cfg.experiment == "eq-public");
    CHECK(cfg.params.at("n") == "3");
    CHECK(cfg.params.at("k") == "1");
    CHECK(cfg.seed == 4u);
    CHECK(cfg.out_dir == "somewhere");
    CHECK_THROWS_AS(load_config_file(dir + "/missing.conf"), ConfigError);
    write_file(dir + "/bad.conf", "seed = x\n");
    CHECK_THROWS_AS(load_config_file(dir + "/bad.conf"), ConfigError);
}

#ifdef SMPLAB_CLI_PATH
TEST_CASE("command line exit codes and outputs") {
    std::string out = temp_dir("cli");
    CHECK(run_cli("--experiment eq-public --param n=4 --param k=2 --out " + out) == 0);
    CHECK(std::filesystem::exists(out + "/results.csv"));
    CHECK(std::filesystem::exists(out + "/config.txt"));
    CHECK(std::filesystem::exists(out + "/timing.txt"));
    std::string summary = read_file(out + "/summary.txt");
    CHECK(summary.find("worst_case_error=0.25\n") != std::string::npos);

    // Identical config and seed give identical files.
    std::string out2 = temp_dir("cli2");
    CHECK(run_cli("-e matching-qc --seed 11 --trials 300 -p instances=3 -o " + out) == 0);
    CHECK(run_cli("-e matching-qc --seed 11 --trials 300 -p instances=3 -o " + out2) == 0);
    for (const char *f : {"/results.csv", "/summary.txt", "/config.txt"}) {
        CHECK(read_file(out + f) == read_file(out2 + f));
    }

    std::string err = temp_dir("cli_err");
    CHECK(run_cli("-e eq-public -p nope=1 -o " + err) == 2);
    CHECK(read_file(err + "/error.txt").find("kind=config") != std::string::npos);
    CHECK(run_cli("-e matching-qc -o " + err) == 2);
    CHECK(run_cli("--bogus-flag") == 2);
    CHECK(run_cli("-e eq-public -p n=30 -o " + err) == 4);
    CHECK(read_file(err + "/error.txt").find("kind=cap") != std::string::npos);
    // A deliberately weak code fails the bounded-error assertion.
    CHECK(run_cli("-e eq-code -p reps=1 -o " + err) == 3);

    std::string conf = temp_dir("cli_conf");
    std::filesystem::create_directories(conf);
    write_file(conf + "/c.conf", "experiment = eq-public\nk = 3\n");
    CHECK(run_cli("--config " + conf + "/c.conf -o " + conf + "/out") == 0);
    CHECK(read_file(conf + "/out/summary.txt").find("worst_case_error=0.125\n") != std::string::npos);

    std::string sweep = temp_dir("cli_sweep");
    CHECK(run_cli("-e eq-public --seed 1 --sweep k=1,2 -o " + sweep) == 0);
    CHECK(line_count(read_file(sweep + "/sweep.csv")) == 3);
    CHECK(std::filesystem::exists(sweep + "/run1/summary.txt"));
    CHECK(run_cli("-e eq-public --seed 1 --sweep k= -o " + sweep) == 0);
    CHECK(line_count(read_file(sweep + "/sweep.csv")) == 1);
}
#endif
