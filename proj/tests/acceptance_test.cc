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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smplab/experiment.h"
#include "smplab/oracle.h"
#include "smplab/protocols.h"
#include "smplab/qcore.h"
#include "smplab/transforms.h"

using namespace smplab;

namespace {

constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
    bool pass = true;
    std::string detail;
    /// Everything the criterion computed, used to compare reruns.
    std::string fingerprint;
};

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

ExperimentReport run(const std::string &experiment, std::vector<std::pair<std::string, std::string>> params,
                     std::optional<std::uint64_t> seed = kSeed) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    for (const auto &[k, v] : params) {
        cfg.params[k] = v;
    }
    cfg.seed = seed;
    return run_experiment(cfg);
}

bool assertion_held(const ExperimentReport &r, const std::string &name) {
    for (const auto &a : r.assertions) {
        if (a.name == name) {
            return a.held;
        }
    }
    return false;
}

void absorb(Outcome &o, const ExperimentReport &r, std::initializer_list<const char *> required) {
    for (const char *name : required) {
        if (!assertion_held(r, name)) {
            o.pass = false;
            o.detail += std::string(" ") + r.experiment + ":" + name + "=fail";
        }
    }
    o.fingerprint += r.csv() + r.summary_text();
}

// Criteria 1 and 2 share their 50 instances.
struct LearnSweep {
    double max_error = 0;
    std::size_t error_violations = 0;
    std::size_t bound_violations = 0;
    std::size_t markov_violations = 0;
    double max_bad_trace = 0;
    std::string fingerprint;
};

LearnSweep learn_sweep() {
    const double delta = 0.1;
    const double eta = 1 - delta / 4;
    LearnSweep out;
    for (unsigned i = 0; i < 50; i++) {
        unsigned q = 1 + i % 2;
        unsigned c = 2 + (i / 2) % 2;
        Rng rng(derive_seed(kSeed, i), 0);
        DensityMatrix rho = random_density_matrix(std::size_t{1} << q, rng);
        std::vector<MeasurementOperator> elements;
        for (unsigned b = 0; b < (1u << c); b++) {
            elements.push_back(random_measurement_operator(std::size_t{1} << q, rng));
        }
        unsigned r = default_copies(q, delta);
        ObservableFamily family(elements, r);
        LearnResult res = learn_state_message(rho, family, delta);
        LearnRecord sent = LearnRecord::deserialize(res.record.serialize());
        std::vector<double> est = reconstruct_estimates(sent, family);
        for (unsigned b = 0; b < (1u << c); b++) {
            double err = std::abs(est[b] - acceptance_probability(elements[b], rho));
            out.max_error = std::max(out.max_error, err);
            out.error_violations += err > delta;
            out.fingerprint += format_double(est[b]) + ",";
        }
        out.bound_violations += sent.entries.size() > bad_count_bound(q * r, delta);
        for (const LearnStep &s : res.steps) {
            if (s.bad) {
                out.max_bad_trace = std::max(out.max_bad_trace, s.projection_trace);
                out.markov_violations += s.projection_trace > eta + 1e-6;
                out.fingerprint += format_double(s.projection_trace) + ",";
            }
        }
        out.fingerprint += sent.to_text() + "\n";
    }
    return out;
}

// Computed once per pass over the criteria.
std::optional<LearnSweep> shared_sweep;

const LearnSweep &cached_learn_sweep() {
    if (!shared_sweep) {
        shared_sweep = learn_sweep();
    }
    return *shared_sweep;
}

Outcome learn_round_trip() {
    const LearnSweep &s = cached_learn_sweep();
    Outcome o;
    o.pass = s.error_violations == 0;
    o.detail = " max_error=" + format_double(s.max_error) + " violations=" + std::to_string(s.error_violations);
    o.fingerprint = s.fingerprint;
    return o;
}

Outcome bad_count_bound_holds() {
    const LearnSweep &s = cached_learn_sweep();
    Outcome o;
    o.pass = s.bound_violations == 0 && s.markov_violations == 0;
    o.detail = " bound_violations=" + std::to_string(s.bound_violations) +
               " markov_violations=" + std::to_string(s.markov_violations) +
               " max_bad_trace=" + format_double(s.max_bad_trace);
    o.fingerprint = s.fingerprint;
    return o;
}

Outcome compiler_soundness() {
    Outcome o;
    for (const char *fixture : {"toy-equality", "toy-equality-public"}) {
        ExperimentReport r = run("compile", {{"fixture", fixture}, {"delta", "0.1"}, {"r", "0"}}, std::nullopt);
        absorb(o, r, {"error_increase_within_delta"});
        o.detail += std::string(" ") + fixture + ".max_pair_increase=" + r.summary_value("max_pair_increase");
    }
    for (const QuantumFixture &fx : {toy_quantum_equality(), toy_quantum_equality_public_coin()}) {
        ProtocolCost cost = protocol_cost(fx.protocol);
        if (cost.alice > 2 || cost.bob > 2) {
            o.pass = false;
            o.detail += " fixture_too_large";
        }
    }
    return o;
}

Outcome derandomization() {
    Outcome o;
    ExperimentReport r = run("derandomize", {{"n", "2"}, {"code", "hadamard"}, {"reps", "1"}, {"s", "12"}});
    absorb(o, r, {"deviation_within_tenth", "error_increase_within_tenth"});
    if (r.csv_rows.size() != 16) {
        o.pass = false;
    }
    o.detail += " max_deviation=" + r.summary_value("max_deviation") +
                " max_pair_increase=" + r.summary_value("max_pair_increase");
    return o;
}

Outcome equality_exactness() {
    Outcome o;
    std::size_t runs = 0;
    for (unsigned n = 1; n <= 4; n++) {
        for (unsigned k = 1; k <= 4; k++) {
            absorb(o, run("eq-public", {{"n", std::to_string(n)}, {"k", std::to_string(k)}}, std::nullopt),
                   {"acceptance_exact"});
            runs++;
        }
    }
    ExperimentReport code = run("eq-code", {{"n", "4"}, {"code", "hadamard"}, {"reps", "6"}}, std::nullopt);
    absorb(o, code, {"acceptance_matches_distance", "bounded_error"});
    o.detail += " eq_public_runs=" + std::to_string(runs) + " eq_code_worst=" + code.summary_value("worst_case_error");
    return o;
}

Outcome hidden_matching_exactness() {
    Outcome o;
    ExperimentReport r = run("hidden-matching", {{"n", "4"}}, std::nullopt);
    absorb(o, r, {"success_probability_one", "edge_marginal_uniform"});
    if (r.summary_value("inputs_checked") != "16") {
        o.pass = false;
    }
    o.detail += " inputs=" + r.summary_value("inputs_checked") +
                " min_success=" + r.summary_value("min_success_probability");
    return o;
}

Outcome matching_at_scale() {
    Outcome o;
    for (const char *name : {"matching-qc", "matching-classical"}) {
        ExperimentReport r = run(name, {{"n", "64"}, {"instances", "20"}, {"trials", "2000"}});
        absorb(o, r, {"success_rate_two_thirds", "ci_low_above_0.6"});
        o.detail += std::string(" ") + name + ".rate=" + r.summary_value("success_rate") +
                    " ci_low=" + r.summary_value("ci_low");
    }
    return o;
}

Outcome deterministic_ground_truth() {
    Outcome o;
    for (unsigned n = 1; n <= 3; n++) {
        FunctionTable f = equality_function(n);
        unsigned total = det_complexity_function(f).total();
        o.fingerprint += std::to_string(total) + ",";
        if (total != 2 * n) {
            o.pass = false;
        }
        if (n <= 2) {
            RelationSearchResult below = exhaustive_function_search(f, 2 * n - 1);
            RelationSearchResult at = exhaustive_function_search(f, 2 * n);
            if (below.cost || !at.cost || *at.cost != 2 * n) {
                o.pass = false;
            }
        }
        o.detail += " n=" + std::to_string(n) + ":" + std::to_string(total);
    }
    return o;
}

Outcome oracle_chain() {
    Outcome o;
    ExperimentReport r = run("oracle-suite", {{"toy_relations", "100"}});
    absorb(o, r, {"union_bound", "extracted_cost", "booleanize_decodes"});
    o.detail += " union_bound_violations=" + r.summary_value("union_bound_violations") +
                " booleanize_failures=" + r.summary_value("booleanize_failures");
    return o;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"state-learning round trip", 30, learn_round_trip},
        {"bad-count bound and Markov step", 30, bad_count_bound_holds},
        {"compiler soundness", 60, compiler_soundness},
        {"derandomization", 10, derandomization},
        {"equality exactness", 60, equality_exactness},
        {"hidden matching exactness", 5, hidden_matching_exactness},
        {"matching protocols at n=64", 300, matching_at_scale},
        {"deterministic complexity ground truth", 60, deterministic_ground_truth},
        {"extraction and booleanize chain", 60, oracle_chain},
    };

    bool all = true;
    std::vector<std::string> fingerprints;
    for (std::size_t i = 0; i < criteria.size(); i++) {
        const Criterion &c = criteria[i];
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string(" error: ") + e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool pass = o.pass && seconds <= c.budget_seconds;
        all = all && pass;
        fingerprints.push_back(o.fingerprint);
        std::printf("%s criterion %zu (%s):%s seconds=%.2f budget=%.0f\n", pass ? "PASS" : "FAIL", i + 1,
                    c.name.c_str(), o.detail.c_str(), seconds, c.budget_seconds);
    }

    shared_sweep.reset();
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < criteria.size(); i++) {
        try {
            mismatches += criteria[i].run().fingerprint != fingerprints[i];
        } catch (const std::exception &) {
            mismatches++;
        }
    }
    bool pass = mismatches == 0;
    all = all && pass;
    std::printf("%s criterion 10 (bit-identical reruns): mismatches=%zu of %zu\n", pass ? "PASS" : "FAIL", mismatches,
                criteria.size());
    return all ? 0 : 1;
}
