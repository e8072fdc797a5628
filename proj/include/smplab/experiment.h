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

#ifndef SMPLAB_EXPERIMENT_H
#define SMPLAB_EXPERIMENT_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smplab/config.h"
#include "smplab/errors.h"

namespace smplab {

/// Malformed experiment configuration (unknown experiment or key, unparsable value, missing seed).
struct ConfigError : SmplabError {
    using SmplabError::SmplabError;
};

struct ExperimentConfig {
    std::string experiment;
    /// Raw overrides; defaults are filled in by resolve_config.
    std::map<std::string, std::string> params;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::string out_dir;
    /// Raw tolerance overrides (field name -> value).
    std::map<std::string, std::string> tolerance_overrides;
};

/// Applies one "key=value" to the config: recognized keys are experiment, seed, trials, out,
/// param.<name>, tolerance.<name>; anything else is treated as param.<name>.
void apply_config_entry(ExperimentConfig &cfg, const std::string &key, const std::string &value);

/// Reads a declarative config file of key = value lines (see apply_config_entry).
ExperimentConfig load_config_file(const std::string &path);

/// A hard assertion an experiment verified, with its margin (positive = held with room).
struct AssertionResult {
    std::string name;
    bool held = false;
    double margin = 0;
    std::string detail;
};

struct ExperimentReport {
    std::string experiment;
    /// Fully resolved parameters, including defaults, seed and trials.
    std::vector<std::pair<std::string, std::string>> resolved;
    std::vector<std::string> csv_columns;
    std::vector<std::vector<std::string>> csv_rows;
    /// Flat key-value summary, in a fixed order.
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<AssertionResult> assertions;

    bool passed() const;
    std::string csv() const;
    /// summary plus one "assert.<name>=pass|fail" and "margin.<name>=..." pair per assertion.
    std::string summary_text() const;
    std::string config_text() const;
    std::string summary_value(const std::string &key) const;
};

/// Names accepted by --experiment.
std::vector<std::string> experiment_names();
/// Default parameter record of an experiment, in display order.
std::vector<std::pair<std::string, std::string>> experiment_defaults(const std::string &name);

/// Validates the config (unknown keys, caps, seed presence) and runs the experiment.
ExperimentReport run_experiment(const ExperimentConfig &cfg);

/// Writes results.csv, summary.txt and config.txt to dir (created if needed).
void write_report(const ExperimentReport &report, const std::string &dir);

struct SweepResult {
    std::string key;
    std::vector<std::string> values;
    std::vector<std::uint64_t> seeds;
    std::vector<ExperimentReport> runs;

    /// One row per run: run, <key>, seed, passed, then the experiment's headline summary keys.
    std::string csv(const std::string &experiment) const;
    bool passed() const;
};

/// Runs the experiment once per value of `key`, concurrently. Run i uses seed
/// derive_seed(seed, i), so duplicate values yield distinct rows.
SweepResult run_sweep(const ExperimentConfig &cfg, const std::string &key, const std::vector<std::string> &values);

/// Summary keys shown in sweep CSVs for an experiment.
std::vector<std::string> headline_keys(const std::string &experiment);

/// Formats a double with 17 significant digits (bit-exact round trip).
std::string format_double(double v);

}  // namespace smplab

#endif
