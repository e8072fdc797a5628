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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <future>
#include <sstream>

#include "smplab/codes.h"
#include "smplab/io.h"
#include "smplab/oracle.h"
#include "smplab/protocols.h"
#include "smplab/rng.h"
#include "smplab/smp.h"
#include "smplab/transforms.h"

namespace smplab {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

// ---------------------------------------------------------------------------
// Parameters.

class Params {
   public:
    explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {
    }

    const std::string &str(const std::string &key) const {
        auto it = values_.find(key);
        if (it == values_.end()) {
            throw ConfigError("missing parameter '" + key + "'");
        }
        return it->second;
    }
    std::uint64_t u64(const std::string &key) const {
        const std::string &s = str(key);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw ConfigError("parameter '" + key + "': expected a non-negative integer, got '" + s + "'");
        }
        return v;
    }
    unsigned uint(const std::string &key, std::uint64_t max) const {
        std::uint64_t v = u64(key);
        if (v > max) {
            throw CapExceeded("parameter '" + key + "' = " + std::to_string(v) + " exceeds the cap " + std::to_string(max));
        }
        return static_cast<unsigned>(v);
    }
    double real(const std::string &key) const {
        const std::string &s = str(key);
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size() || !std::isfinite(v)) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::exception &) {
            throw ConfigError("parameter '" + key + "': expected a number, got '" + s + "'");
        }
    }

   private:
    std::map<std::string, std::string> values_;
};

void set_tolerance(Tolerances &tol, const std::string &key, const std::string &value) {
    auto as_double = [&]() {
        try {
            std::size_t used = 0;
            double v = std::stod(value, &used);
            if (used != value.size() || !(v >= 0)) {
                throw std::invalid_argument(value);
            }
            return v;
        } catch (const std::exception &) {
            throw ConfigError("tolerance '" + key + "': expected a non-negative number, got '" + value + "'");
        }
    };
    auto as_uint = [&]() {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
            throw ConfigError("tolerance '" + key + "': expected an integer, got '" + value + "'");
        }
        return v;
    };
    if (key == "hermitian") {
        tol.hermitian = as_double();
    } else if (key == "trace") {
        tol.trace = as_double();
    } else if (key == "psd") {
        tol.psd = as_double();
    } else if (key == "imag_trace") {
        tol.imag_trace = as_double();
    } else if (key == "eigen_group") {
        tol.eigen_group = as_double();
    } else if (key == "band_pad") {
        tol.band_pad = as_double();
    } else if (key == "band_edge_flag") {
        tol.band_edge_flag = as_double();
    } else if (key == "zero_projection") {
        tol.zero_projection = as_double();
    } else if (key == "distribution_sum") {
        tol.distribution_sum = as_double();
    } else if (key == "max_dim") {
        tol.max_dim = static_cast<std::size_t>(as_uint());
    } else if (key == "enumeration_cap") {
        tol.enumeration_cap = as_uint();
    } else if (key == "learn_qubit_budget") {
        tol.learn_qubit_budget = static_cast<unsigned>(as_uint());
    } else {
        throw ConfigError("unknown tolerance '" + key + "'");
    }
}

std::string input_string(const Input &v) {
    bool binary = std::all_of(v.begin(), v.end(), [](std::uint32_t b) {
        return b <= 1;
    });
    std::string s;
    for (std::size_t k = 0; k < v.size(); k++) {
        if (!binary && k > 0) {
            s += '.';
        }
        s += std::to_string(v[k]);
    }
    return s;
}

double shortfall(std::uint64_t violations) {
    return violations == 0 ? 0.0 : -static_cast<double>(violations);
}

std::string yes_no(bool b) {
    return b ? "1" : "0";
}

struct Context {
    const Params &params;
    std::uint64_t seed;
    const Tolerances &tol;
    ExperimentReport &report;

    void add(const std::string &key, const std::string &value) {
        report.summary.emplace_back(key, value);
    }
    void add(const std::string &key, double value) {
        add(key, format_double(value));
    }
    void add_count(const std::string &key, std::uint64_t value) {
        add(key, std::to_string(value));
    }
    void check(const std::string &name, bool held, double margin, const std::string &detail = "") {
        report.assertions.push_back({name, held, margin, detail});
    }
    void row(std::vector<std::string> cells) {
        report.csv_rows.push_back(std::move(cells));
    }
};

LinearCode code_from_param(const std::string &spec, unsigned n) {
    if (spec == "hadamard") {
        return LinearCode::hadamard(n);
    }
    LinearCode code = LinearCode::load_text(spec);
    if (code.message_bits() != n) {
        throw ConfigError("generator file " + spec + " encodes " + std::to_string(code.message_bits()) + " bits, not n");
    }
    return code;
}

// Exact acceptance and error per pair for a Boolean function, as CSV rows and a worst case.
struct PairSweep {
    double worst_error = 0;
    std::vector<double> acceptance;  // row-major over the function table
};

PairSweep sweep_pairs(const SmpProtocol &p, const FunctionTable &f, const Tolerances &tol) {
    PairSweep out;
    out.acceptance.assign(f.num_x() * f.num_y(), 0);
    for (std::size_t i = 0; i < f.num_x(); i++) {
        for (std::size_t j = 0; j < f.num_y(); j++) {
            if (!f.in_domain(i, j)) {
                continue;
            }
            double acc = exact_acceptance(p, f.alice_inputs[i], f.bob_inputs[j], tol);
            out.acceptance[i * f.num_y() + j] = acc;
            out.worst_error = std::max(out.worst_error, std::abs(static_cast<double>(f.value(i, j)) - acc));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Experiments.

void run_eq_public(Context &ctx) {
    unsigned n = ctx.params.uint("n", 6);
    unsigned k = ctx.params.uint("k", 16);
    std::uint64_t trials = ctx.params.u64("trials");
    if (n == 0 || k == 0) {
        throw ConfigError("eq-public: n and k must be positive");
    }
    SmpProtocol p = equality_public(n, k);
    FunctionTable f = equality_function(n);
    PairSweep sw = sweep_pairs(p, f, ctx.tol);
    const double miss = std::pow(0.5, k);
    double max_dev = 0;
    ctx.report.csv_columns = {"x", "y", "f", "acceptance", "error"};
    for (std::size_t i = 0; i < f.num_x(); i++) {
        for (std::size_t j = 0; j < f.num_y(); j++) {
            double acc = sw.acceptance[i * f.num_y() + j];
            double expected = i == j ? 1.0 : miss;
            max_dev = std::max(max_dev, std::abs(acc - expected));
            ctx.row({input_string(f.alice_inputs[i]), input_string(f.bob_inputs[j]), std::to_string(f.value(i, j)),
                     format_double(acc), format_double(std::abs(static_cast<double>(f.value(i, j)) - acc))});
        }
    }
    ProtocolCost cost = protocol_cost(p);
    ctx.add("n", std::to_string(n));
    ctx.add("k", std::to_string(k));
    ctx.add("worst_case_error", sw.worst_error);
    ctx.add("expected_worst_case_error", n == 0 ? 0.0 : miss);
    ctx.add_count("alice_bits", cost.alice);
    ctx.add_count("bob_bits", cost.bob);
    ctx.add_count("total_bits", cost.total());
    ctx.check("acceptance_exact", max_dev <= 1e-12, 1e-12 - max_dev, "x=y accepts with 1, x!=y with 2^-k");
    if (trials > 0) {
        Input x = f.alice_inputs[0];
        Input y = f.bob_inputs[1];
        SampledAcceptance s = sampled_acceptance(p, x, y, trials, ctx.seed, ctx.tol);
        double gap = std::abs(s.estimate - miss);
        ctx.add("sampled_estimate", s.estimate);
        ctx.add("sampled_ci_low", s.interval.low);
        ctx.add("sampled_ci_high", s.interval.high);
        ctx.check("sampled_agrees_with_exact", gap <= 4 * s.half_width(), 4 * s.half_width() - gap);
    }
}

void run_eq_code(Context &ctx) {
    unsigned n = ctx.params.uint("n", 6);
    unsigned reps = ctx.params.uint("reps", 64);
    if (n == 0 || reps == 0) {
        throw ConfigError("eq-code: n and reps must be positive");
    }
    LinearCode code = code_from_param(ctx.params.str("code"), n);
    SmpProtocol p = equality_code(n, code, reps);
    FunctionTable f = equality_function(n);
    PairSweep sw = sweep_pairs(p, f, ctx.tol);
    const double m = code.block_bits();
    double max_dev = 0;
    ctx.report.csv_columns = {"x", "y", "f", "codeword_distance", "acceptance", "error"};
    for (std::size_t i = 0; i < f.num_x(); i++) {
        Codeword cx = code.encode(i);
        for (std::size_t j = 0; j < f.num_y(); j++) {
            unsigned d = hamming_distance(cx, code.encode(j));
            double acc = sw.acceptance[i * f.num_y() + j];
            double expected = std::pow(1 - d / m, reps);
            max_dev = std::max(max_dev, std::abs(acc - expected));
            ctx.row({input_string(f.alice_inputs[i]), input_string(f.bob_inputs[j]), std::to_string(f.value(i, j)),
                     std::to_string(d), format_double(acc),
                     format_double(std::abs(static_cast<double>(f.value(i, j)) - acc))});
        }
    }
    ProtocolCost cost = protocol_cost(p);
    ctx.add("n", std::to_string(n));
    ctx.add("reps", std::to_string(reps));
    ctx.add("block_bits", std::to_string(code.block_bits()));
    ctx.add("grid_rows", std::to_string(code.grid().rows));
    ctx.add("grid_cols", std::to_string(code.grid().cols));
    ctx.add("min_distance", std::to_string(min_distance_bruteforce(code)));
    ctx.add("worst_case_error", sw.worst_error);
    ctx.add_count("alice_bits", cost.alice);
    ctx.add_count("bob_bits", cost.bob);
    ctx.add_count("total_bits", cost.total());
    ctx.check("acceptance_matches_distance", max_dev <= 1e-12, 1e-12 - max_dev, "(1 - d/m)^reps on every pair");
    ctx.check("bounded_error", sw.worst_error <= 1.0 / 3, 1.0 / 3 - sw.worst_error);
}

void run_matching(Context &ctx, bool quantum) {
    unsigned n = ctx.params.uint("n", 1u << 16);
    unsigned instances = ctx.params.uint("instances", 1u << 20);
    std::uint64_t trials = ctx.params.u64("trials");
    if (n < 4 || (n & (n - 1)) != 0) {
        throw ConfigError("matching: n must be a power of two >= 4");
    }
    if (instances == 0 || trials < instances) {
        throw ConfigError("matching: need instances >= 1 and trials >= instances");
    }
    MatchingQcParams qp = default_matching_qc_params(n);
    unsigned classical_subset = 0;
    if (quantum) {
        if (auto v = ctx.params.uint("subset_size", n); v != 0) {
            qp.subset_size = v;
        }
        if (auto v = ctx.params.uint("copies", 1u << 12); v != 0) {
            qp.copies = v;
        }
        if (auto v = ctx.params.uint("edges_sent", n); v != 0) {
            qp.edges_sent = v;
        }
        if (qp.subset_size < 2) {
            throw ConfigError("matching-qc: subset_size must be at least 2");
        }
    } else {
        classical_subset = ctx.params.uint("subset_size", n);
        if (classical_subset == 0) {
            classical_subset = std::min(n, default_matching_classical_subset(n, ctx.params.real("subset_factor")));
        }
        if (classical_subset < 2) {
            throw ConfigError("matching-classical: subset_size must be at least 2");
        }
    }
    SmpProtocol proto = quantum ? matching_qc(n, qp) : matching_classical(n, classical_subset);

    ctx.report.csv_columns = {"instance", "value", "distance", "trials", "successes", "rate",
                              "mean_edges_in_subset", "mean_recovered", "abstentions"};
    std::uint64_t total_success = 0;
    std::uint64_t total_abstain = 0;
    std::uint64_t total_recovered = 0;
    for (unsigned inst_index = 0; inst_index < instances; inst_index++) {
        Rng inst_rng(derive_seed(ctx.seed, 0x1157a9ce), inst_index);
        MatchingInstance inst = random_matching_instance(n, inst_index % 2 == 0, inst_rng);
        bool value = matching_value(inst) == 1;
        std::uint64_t count = trials / instances + (inst_index < trials % instances ? 1 : 0);
        std::uint64_t successes = 0;
        std::uint64_t abstain = 0;
        std::uint64_t edges = 0;
        std::uint64_t recovered = 0;
        for (std::uint64_t t = 0; t < count; t++) {
            Rng rng(derive_seed(ctx.seed, inst_index), t);
            MatchingTrialStats st = quantum ? matching_qc_trial(inst, qp, rng)
                                            : matching_classical_trial(inst, classical_subset, rng);
            successes += st.output == value;
            abstain += st.abstained;
            edges += st.edges_in_subset;
            recovered += st.recovered;
        }
        total_success += successes;
        total_abstain += abstain;
        total_recovered += recovered;
        ctx.row({std::to_string(inst_index), yes_no(value), std::to_string(inst.distance()), std::to_string(count),
                 std::to_string(successes), format_double(static_cast<double>(successes) / count),
                 format_double(static_cast<double>(edges) / count), format_double(static_cast<double>(recovered) / count),
                 std::to_string(abstain)});
    }
    Interval ci = wilson_interval(total_success, trials);
    double rate = static_cast<double>(total_success) / trials;
    ProtocolCost cost = protocol_cost(proto);
    ctx.add("n", std::to_string(n));
    if (quantum) {
        ctx.add("subset_size", std::to_string(qp.subset_size));
        ctx.add("copies", std::to_string(qp.copies));
        ctx.add("edges_sent", std::to_string(qp.edges_sent));
        ctx.add_count("alice_qubits", cost.alice);
    } else {
        ctx.add("subset_size", std::to_string(classical_subset));
        ctx.add_count("alice_bits", cost.alice);
    }
    ctx.add_count("bob_bits", cost.bob);
    ctx.add("instances", std::to_string(instances));
    ctx.add_count("trials", trials);
    ctx.add_count("successes", total_success);
    ctx.add("success_rate", rate);
    ctx.add("ci_low", ci.low);
    ctx.add("ci_high", ci.high);
    ctx.add("abstention_rate", static_cast<double>(total_abstain) / trials);
    ctx.add("mean_recovered", static_cast<double>(total_recovered) / trials);
    ctx.check("success_rate_two_thirds", rate >= 2.0 / 3, rate - 2.0 / 3);
    ctx.check("ci_low_above_0.6", ci.low > 0.6, ci.low - 0.6);
}

void run_hidden_matching(Context &ctx) {
    unsigned n = ctx.params.uint("n", 1u << 10);
    std::uint64_t trials = ctx.params.u64("trials");
    HiddenMatchingProtocol hm(n);
    std::vector<std::uint64_t> xs;
    if (n <= 8) {
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); x++) {
            xs.push_back(x);
        }
    } else {
        Rng rng(derive_seed(ctx.seed, 0x4d4d), 0);
        for (int s = 0; s < 64; s++) {
            xs.push_back(rng.next_u64());
        }
    }
    ctx.report.csv_columns = {"x", "k", "i", "j", "parity", "probability", "valid"};
    double min_success = 1;
    double max_invalid = 0;
    double edge_min = 1;
    double edge_max = 0;
    std::uint64_t samples = 0;
    std::uint64_t sampled_invalid = 0;
    for (std::size_t xi = 0; xi < xs.size(); xi++) {
        Input x(n);
        for (unsigned b = 0; b < n; b++) {
            x[b] = static_cast<std::uint32_t>(b < 64 ? (xs[xi] >> b) & 1 : 0);
        }
        for (unsigned k = 1; k < n; k++) {
            auto dist = hm.output_distribution(x, k);
            double good = 0;
            double bad = 0;
            std::map<std::pair<std::uint32_t, std::uint32_t>, double> edge_mass;
            for (const auto &[out, prob] : dist) {
                bool valid = hm.is_valid(x, k, out);
                (valid ? good : bad) += prob;
                edge_mass[{out.i, out.j}] += prob;
                if (n <= 8) {
                    ctx.row({input_string(x), std::to_string(k), std::to_string(out.i), std::to_string(out.j),
                             std::to_string(out.parity), format_double(prob), yes_no(valid)});
                }
            }
            for (const auto &[e, mass] : edge_mass) {
                edge_min = std::min(edge_min, mass);
                edge_max = std::max(edge_max, mass);
            }
            if (edge_mass.size() != n / 2) {
                edge_min = 0;
            }
            min_success = std::min(min_success, good);
            max_invalid = std::max(max_invalid, bad);
            for (std::uint64_t t = 0; t < trials; t++) {
                Rng rng(derive_seed(ctx.seed, xi * n + k), t);
                samples++;
                sampled_invalid += !hm.is_valid(x, k, hm.sample(x, k, rng));
            }
        }
    }
    const double edge_target = 2.0 / n;
    double edge_dev = std::max(std::abs(edge_min - edge_target), std::abs(edge_max - edge_target));
    ctx.add("n", std::to_string(n));
    ctx.add("alice_qubits", std::to_string(hm.alice_qubits()));
    ctx.add("bob_bits", std::to_string(hm.bob_message_bits()));
    ctx.add("inputs_checked", std::to_string(xs.size()));
    ctx.add("min_success_probability", min_success);
    ctx.add("max_invalid_probability", max_invalid);
    ctx.add("edge_probability_min", edge_min);
    ctx.add("edge_probability_max", edge_max);
    ctx.add_count("samples", samples);
    ctx.add_count("sampled_invalid", sampled_invalid);
    ctx.check("success_probability_one", 1 - min_success <= 1e-9, 1e-9 - (1 - min_success));
    ctx.check("edge_marginal_uniform", edge_dev <= 1e-9, 1e-9 - edge_dev);
    if (trials > 0) {
        ctx.check("sampled_outputs_valid", sampled_invalid == 0, shortfall(sampled_invalid));
    }
}

QuantumFixture quantum_fixture(const Params &params, std::uint64_t seed) {
    const std::string &name = params.str("fixture");
    if (name == "toy-equality") {
        return toy_quantum_equality();
    }
    if (name == "toy-equality-public") {
        return toy_quantum_equality_public_coin();
    }
    if (name == "hidden-matching-verification") {
        return hidden_matching_verification(params.uint("n", 8));
    }
    if (name == "random") {
        return random_quantum_fixture(
            params.uint("q", 4), params.uint("c_b", 6), params.uint("num_x", 64), params.uint("num_y", 64), seed);
    }
    throw ConfigError("unknown quantum fixture '" + name + "'");
}

void run_compile(Context &ctx) {
    double delta = ctx.params.real("delta");
    unsigned r = ctx.params.uint("r", 64);
    QuantumFixture fx = quantum_fixture(ctx.params, ctx.seed);
    CompiledProtocol compiled = compile_qc_to_cc(fx.protocol, fx.function.alice_inputs, delta, r, ctx.tol);
    const FunctionTable &f = fx.function;
    PairSweep orig = sweep_pairs(fx.protocol, f, ctx.tol);
    PairSweep comp = sweep_pairs(compiled.protocol, f, ctx.tol);

    ctx.report.csv_columns = {"x", "y", "f", "original_acceptance", "compiled_acceptance",
                              "original_error", "compiled_error", "increase"};
    double max_increase = -1;
    for (std::size_t i = 0; i < f.num_x(); i++) {
        for (std::size_t j = 0; j < f.num_y(); j++) {
            if (!f.in_domain(i, j)) {
                continue;
            }
            double fv = f.value(i, j);
            double a0 = orig.acceptance[i * f.num_y() + j];
            double a1 = comp.acceptance[i * f.num_y() + j];
            double e0 = std::abs(fv - a0);
            double e1 = std::abs(fv - a1);
            max_increase = std::max(max_increase, e1 - e0);
            ctx.row({input_string(f.alice_inputs[i]), input_string(f.bob_inputs[j]), std::to_string(f.value(i, j)),
                     format_double(a0), format_double(a1), format_double(e0), format_double(e1),
                     format_double(e1 - e0)});
        }
    }
    ProtocolCost c0 = protocol_cost(fx.protocol);
    ProtocolCost c1 = protocol_cost(compiled.protocol);
    unsigned k = compiled.copies * std::max(fx.protocol.alice_qubits, 1u);
    std::uint64_t bound = bad_count_bound(k, delta);
    ctx.add("fixture", ctx.params.str("fixture"));
    ctx.add("delta", delta);
    ctx.add("copies", std::to_string(compiled.copies));
    ctx.add_count("alice_qubits", c0.alice);
    ctx.add_count("bob_bits", c0.bob);
    ctx.add_count("compiled_alice_bits", c1.alice);
    ctx.add_count("max_encoded_bits", compiled.max_encoded_bits);
    ctx.add_count("max_entries", compiled.max_entries);
    ctx.add_count("bad_count_bound", bound);
    ctx.add("original_worst_error", orig.worst_error);
    ctx.add("compiled_worst_error", comp.worst_error);
    ctx.add("error_increase", comp.worst_error - orig.worst_error);
    ctx.add("max_pair_increase", max_increase);
    ctx.check("error_increase_within_delta", max_increase <= delta + 1e-9, delta + 1e-9 - max_increase);
    ctx.check("cost_matches_encoding", c1.alice == compiled.max_encoded_bits * fx.protocol.repetitions,
              0.0 - std::abs(static_cast<double>(c1.alice) - static_cast<double>(compiled.max_encoded_bits)));
    ctx.check("entries_within_bound", compiled.max_entries <= bound,
              static_cast<double>(bound) - static_cast<double>(compiled.max_entries));
}

void run_learn_state(Context &ctx) {
    double delta = ctx.params.real("delta");
    unsigned r = ctx.params.uint("r", 64);
    const std::string &fixture = ctx.params.str("fixture");
    std::vector<MeasurementOperator> elements;
    std::optional<DensityMatrix> rho;
    if (fixture == "basis") {
        rho = DensityMatrix::pure(Vector{{1, 0}}, ctx.tol);
        elements.push_back(MeasurementOperator::projector_onto(Vector{{1, 0}}, ctx.tol));
        elements.push_back(MeasurementOperator::projector_onto(Vector{{0, 1}}, ctx.tol));
    } else if (fixture == "random") {
        unsigned q = ctx.params.uint("q", 6);
        unsigned c = ctx.params.uint("c", 10);
        if (q == 0) {
            throw ConfigError("learn-state: q must be positive");
        }
        Rng rng(ctx.seed, 0);
        rho = random_density_matrix(std::size_t{1} << q, rng, ctx.tol);
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << c); b++) {
            elements.push_back(random_measurement_operator(std::size_t{1} << q, rng, ctx.tol));
        }
    } else {
        throw ConfigError("learn-state: fixture must be 'basis' or 'random'");
    }
    unsigned q = rho->num_qubits();
    if (r == 0) {
        r = default_copies(q, delta, ctx.tol);
    }
    ObservableFamily family(std::move(elements), r, ctx.tol);
    LearnResult res = learn_state_message(*rho, family, delta, ctx.tol);
    std::vector<double> est = reconstruct_estimates(LearnRecord::deserialize(res.record.serialize()), family, ctx.tol);

    ctx.report.csv_columns = {"b", "p", "prediction", "p_prime", "abs_error", "bad",
                              "p_tilde", "projection_trace", "band_rank", "near_edge"};
    double max_err = 0;
    double max_trace = 0;
    std::size_t near_edges = 0;
    std::size_t entry = 0;
    for (const LearnStep &s : res.steps) {
        double err = std::abs(est[s.b] - s.p);
        max_err = std::max(max_err, err);
        std::string p_tilde = "";
        if (s.bad) {
            max_trace = std::max(max_trace, s.projection_trace);
            p_tilde = format_double(res.record.p_tilde(res.record.entries[entry++]));
        }
        near_edges += s.near_edge;
        ctx.row({std::to_string(s.b), format_double(s.p), format_double(s.prediction), format_double(est[s.b]),
                 format_double(err), yes_no(s.bad), p_tilde, format_double(s.projection_trace),
                 std::to_string(s.band_rank), yes_no(s.near_edge)});
    }
    const unsigned k = q * r;
    const std::uint64_t bound = bad_count_bound(k, delta);
    const double eta = 1 - delta / 4;
    const std::size_t t = res.record.entries.size();
    ctx.add("fixture", fixture);
    ctx.add("q", std::to_string(q));
    ctx.add("c", std::to_string(family.index_bits()));
    ctx.add("r", std::to_string(r));
    ctx.add("K", std::to_string(k));
    ctx.add("delta", delta);
    ctx.add("T", std::to_string(t));
    ctx.add_count("bad_count_bound", bound);
    ctx.add_count("encoded_bits", res.record.encoded_bits());
    ctx.add("max_abs_error", max_err);
    ctx.add("eta", eta);
    ctx.add("max_bad_projection_trace", max_trace);
    ctx.add("near_edge_steps", std::to_string(near_edges));
    ctx.check("round_trip_within_delta", max_err <= delta, delta - max_err);
    ctx.check("entries_within_bound", t <= bound, static_cast<double>(bound) - static_cast<double>(t));
    ctx.check("markov_claim", max_trace <= eta + 1e-6, eta + 1e-6 - max_trace);
}

void run_derandomize(Context &ctx) {
    unsigned n = ctx.params.uint("n", 4);
    unsigned reps = ctx.params.uint("reps", 16);
    unsigned s = ctx.params.uint("s", 1u << 12);
    unsigned attempts = ctx.params.uint("max_attempts", 1u << 20);
    if (n == 0 || reps == 0 || s == 0) {
        throw ConfigError("derandomize: n, reps and s must be positive");
    }
    LinearCode code = code_from_param(ctx.params.str("code"), n);
    SmpProtocol p = equality_code(n, code, reps);
    FunctionTable f = equality_function(n);
    DerandomizedProtocol d = derandomize_alice(p, f.alice_inputs, s, ctx.seed, attempts, ctx.tol);
    PairSweep orig = sweep_pairs(p, f, ctx.tol);
    PairSweep der = sweep_pairs(d.protocol, f, ctx.tol);
    ctx.report.csv_columns = {"x", "y", "f", "original_acceptance", "derandomized_acceptance",
                              "original_error", "derandomized_error"};
    double max_increase = -1;
    for (std::size_t i = 0; i < f.num_x(); i++) {
        for (std::size_t j = 0; j < f.num_y(); j++) {
            double fv = f.value(i, j);
            double a0 = orig.acceptance[i * f.num_y() + j];
            double a1 = der.acceptance[i * f.num_y() + j];
            max_increase = std::max(max_increase, std::abs(fv - a1) - std::abs(fv - a0));
            ctx.row({input_string(f.alice_inputs[i]), input_string(f.bob_inputs[j]), std::to_string(f.value(i, j)),
                     format_double(a0), format_double(a1), format_double(std::abs(fv - a0)),
                     format_double(std::abs(fv - a1))});
        }
    }
    ProtocolCost c0 = protocol_cost(p);
    ctx.add("n", std::to_string(n));
    ctx.add("reps", std::to_string(reps));
    ctx.add("s", std::to_string(s));
    ctx.add_count("original_alice_bits", c0.alice);
    ctx.add_count("declared_alice_bits", d.declared_bits * reps);
    ctx.add_count("bob_bits", c0.bob);
    ctx.add("max_deviation", d.max_deviation);
    ctx.add_count("attempts", d.attempts);
    ctx.add("original_worst_error", orig.worst_error);
    ctx.add("derandomized_worst_error", der.worst_error);
    ctx.add("error_increase", der.worst_error - orig.worst_error);
    ctx.add("max_pair_increase", max_increase);
    ctx.check("deviation_within_tenth", d.max_deviation <= 0.1, 0.1 - d.max_deviation);
    ctx.check("error_increase_within_tenth", max_increase <= 0.1 + 1e-12, 0.1 + 1e-12 - max_increase);
}

void run_oracle_suite(Context &ctx) {
    unsigned toy = ctx.params.uint("toy_relations", 100000);
    ctx.report.csv_columns = {"check", "instance", "observed", "expected", "passed"};
    std::uint64_t failures_eq = 0;
    for (unsigned n = 1; n <= 3; n++) {
        FunctionTable f = equality_function(n);
        DetComplexity dc = det_complexity_function(f);
        bool ok = dc.total() == 2 * n;
        failures_eq += !ok;
        ctx.row({"det_complexity_equality", "n=" + std::to_string(n), std::to_string(dc.total()),
                 std::to_string(2 * n), yes_no(ok)});
        if (n <= 2) {
            RelationSearchResult ex = exhaustive_function_search(f, 2 * n);
            bool ok2 = ex.cost && *ex.cost == 2 * n;
            failures_eq += !ok2;
            ctx.row({"exhaustive_equality", "n=" + std::to_string(n), ex.cost ? std::to_string(*ex.cost) : "none",
                     std::to_string(2 * n), yes_no(ok2)});
        }
        AlicePartitionCheck inj = check_zero_error_alice_maps(f);
        bool ok3 = inj.only_injective && inj.zero_error_partitions == 1;
        failures_eq += !ok3;
        ctx.row({"alice_map_injective", "n=" + std::to_string(n), std::to_string(inj.zero_error_partitions), "1",
                 yes_no(ok3)});
    }

    std::uint64_t union_violations = 0;
    std::uint64_t cost_violations = 0;
    for (unsigned s = 0; s < toy; s++) {
        Rng rng(derive_seed(ctx.seed, s), 0);
        std::size_t nx = 2 + rng.below(3);
        std::size_t ny = 2 + rng.below(3);
        auto outputs = static_cast<std::uint32_t>(2 + rng.below(3));
        RelationTable rel = random_toy_relation(nx, ny, outputs, rng);
        DeterministicSmpProtocol pb = random_deterministic_protocol(
            nx, ny, static_cast<unsigned>(rng.below(3)), static_cast<unsigned>(rng.below(3)), outputs, rng);
        ExtractedFunction ef = extract_function(pb, rel);
        RelationSearchResult rf = exhaustive_function_search(ef.function, pb.cost());
        bool cost_ok = rf.cost && *rf.cost <= pb.cost();
        cost_violations += !cost_ok;
        DeterministicSmpProtocol pa = random_deterministic_protocol(
            nx, ny, static_cast<unsigned>(rng.below(3)), static_cast<unsigned>(rng.below(3)), outputs, rng);
        UnionBoundCheck ub = union_bound_check(pa, ef.function, rel, std::max(ef.error.value(), 0.0));
        union_violations += !(ub.holds && ub.within_two_eps);
        ctx.row({"union_bound", std::to_string(s), ub.solve_error.to_string(),
                 "<= " + ub.compute_error.to_string() + " + " + ub.validity_error.to_string(), yes_no(ub.holds)});
        ctx.row({"extracted_cost", std::to_string(s), rf.cost ? std::to_string(*rf.cost) : "none",
                 "<= " + std::to_string(pb.cost()), yes_no(cost_ok)});
    }

    std::uint64_t decode_failures = 0;
    std::uint64_t cells = 0;
    {
        Rng rng(derive_seed(ctx.seed, 0xb001), 0);
        struct Case {
            LinearCode code;
            std::uint32_t outputs;
        };
        std::vector<Case> cases = {{LinearCode::repetition(10), 2}, {LinearCode::repeated(LinearCode::hadamard(2), 5), 4}};
        for (std::size_t c = 0; c < cases.size(); c++) {
            const LinearCode &g = cases[c].code;
            FunctionTable f;
            for (std::uint32_t i = 0; i < 4; i++) {
                f.alice_inputs.push_back({i});
                f.bob_inputs.push_back({i});
            }
            f.num_outputs = cases[c].outputs;
            for (int k = 0; k < 16; k++) {
                f.values.emplace_back(static_cast<std::uint32_t>(rng.below(cases[c].outputs)));
            }
            auto tables = booleanize(f, g);
            unsigned radius = (min_distance_bruteforce(g) - 1) / 2;
            for (std::size_t i = 0; i < 4; i++) {
                for (std::size_t j = 0; j < 4; j++) {
                    cells++;
                    bool ok = decode_booleanized(tables, g, i, j) == f.value(i, j);
                    // Corrupt `radius` positions of this cell and decode again.
                    auto corrupted = tables;
                    for (std::uint32_t pos : rng.subset(g.block_bits(), radius)) {
                        auto &v = corrupted[pos].values[i * 4 + j];
                        v = 1 - *v;
                    }
                    ok = ok && decode_booleanized(corrupted, g, i, j) == f.value(i, j);
                    decode_failures += !ok;
                }
            }
            ctx.row({"booleanize", "code=" + std::to_string(c), std::to_string(decode_failures), "0",
                     yes_no(decode_failures == 0)});
        }
    }

    ctx.add_count("toy_relations", toy);
    ctx.add_count("equality_check_failures", failures_eq);
    ctx.add_count("union_bound_violations", union_violations);
    ctx.add_count("extracted_cost_violations", cost_violations);
    ctx.add_count("booleanize_cells", cells);
    ctx.add_count("booleanize_failures", decode_failures);
    ctx.check("equality_complexity_2n", failures_eq == 0, shortfall(failures_eq));
    ctx.check("union_bound", union_violations == 0, shortfall(union_violations));
    ctx.check("extracted_cost", cost_violations == 0, shortfall(cost_violations));
    ctx.check("booleanize_decodes", decode_failures == 0, shortfall(decode_failures));
}

// ---------------------------------------------------------------------------
// Registry.

struct ExperimentSpec {
    std::string name;
    std::vector<std::pair<std::string, std::string>> defaults;
    std::vector<std::string> headline;
    std::function<bool(const Params &)> needs_seed;
    std::function<void(Context &)> run;
};

bool trials_positive(const Params &p) {
    return p.u64("trials") > 0;
}

const std::vector<ExperimentSpec> &registry() {
    static const std::vector<ExperimentSpec> specs = {
        {"eq-public",
         {{"n", "4"}, {"k", "2"}, {"trials", "0"}},
         {"worst_case_error", "total_bits"},
         trials_positive,
         run_eq_public},
        {"eq-code",
         {{"n", "4"}, {"code", "hadamard"}, {"reps", "6"}},
         {"worst_case_error", "total_bits"},
         [](const Params &) { return false; },
         run_eq_code},
        {"matching-qc",
         {{"n", "64"}, {"subset_size", "0"}, {"copies", "0"}, {"edges_sent", "0"}, {"instances", "20"},
          {"trials", "2000"}},
         {"success_rate", "ci_low", "alice_qubits", "bob_bits"},
         [](const Params &) { return true; },
         [](Context &c) { run_matching(c, true); }},
        {"matching-classical",
         {{"n", "64"}, {"subset_size", "0"}, {"subset_factor", "2"}, {"instances", "20"}, {"trials", "2000"}},
         {"success_rate", "ci_low", "alice_bits", "bob_bits"},
         [](const Params &) { return true; },
         [](Context &c) { run_matching(c, false); }},
        {"hidden-matching",
         {{"n", "4"}, {"trials", "0"}},
         {"min_success_probability", "sampled_invalid"},
         [](const Params &p) { return p.u64("trials") > 0 || p.u64("n") > 8; },
         run_hidden_matching},
        {"compile",
         {{"fixture", "toy-equality"}, {"delta", "0.1"}, {"r", "0"}, {"n", "4"}, {"q", "1"}, {"c_b", "2"},
          {"num_x", "4"}, {"num_y", "4"}},
         {"error_increase", "max_pair_increase", "compiled_alice_bits", "max_entries"},
         [](const Params &p) { return p.str("fixture") == "random"; },
         run_compile},
        {"learn-state",
         {{"fixture", "basis"}, {"delta", "0.1"}, {"r", "2"}, {"q", "1"}, {"c", "2"}},
         {"T", "bad_count_bound", "max_abs_error", "max_bad_projection_trace"},
         [](const Params &p) { return p.str("fixture") == "random"; },
         run_learn_state},
        {"derandomize",
         {{"n", "2"}, {"code", "hadamard"}, {"reps", "1"}, {"s", "12"}, {"max_attempts", "2000"}},
         {"max_deviation", "error_increase", "declared_alice_bits", "attempts"},
         [](const Params &) { return true; },
         run_derandomize},
        {"oracle-suite",
         {{"toy_relations", "100"}},
         {"union_bound_violations", "extracted_cost_violations", "booleanize_failures"},
         [](const Params &) { return true; },
         run_oracle_suite},
    };
    return specs;
}

const ExperimentSpec &find_spec(const std::string &name) {
    for (const auto &s : registry()) {
        if (s.name == name) {
            return s;
        }
    }
    std::string known;
    for (const auto &s : registry()) {
        known += (known.empty() ? "" : ", ") + s.name;
    }
    throw ConfigError("unknown experiment '" + name + "' (known: " + known + ")");
}

}  // namespace

// ---------------------------------------------------------------------------
// Config handling.

void apply_config_entry(ExperimentConfig &cfg, const std::string &key, const std::string &value) {
    auto parse_u64 = [&](const char *what) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
            throw ConfigError(std::string(what) + ": expected a non-negative integer, got '" + value + "'");
        }
        return v;
    };
    if (key == "experiment") {
        cfg.experiment = value;
    } else if (key == "seed") {
        cfg.seed = parse_u64("seed");
    } else if (key == "trials") {
        cfg.trials = parse_u64("trials");
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key.rfind("tolerance.", 0) == 0) {
        cfg.tolerance_overrides[key.substr(10)] = value;
    } else if (key.rfind("param.", 0) == 0) {
        cfg.params[key.substr(6)] = value;
    } else {
        cfg.params[key] = value;
    }
}

ExperimentConfig load_config_file(const std::string &path) {
    ExperimentConfig cfg;
    std::string text;
    try {
        text = read_file(path);
    } catch (const InvalidArgument &e) {
        throw ConfigError(e.what());
    }
    try {
        for (const auto &[k, v] : parse_key_values(text)) {
            apply_config_entry(cfg, k, v);
        }
    } catch (const InvalidArgument &e) {
        throw ConfigError(path + ": " + e.what());
    }
    return cfg;
}

std::vector<std::string> experiment_names() {
    std::vector<std::string> out;
    for (const auto &s : registry()) {
        out.push_back(s.name);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> experiment_defaults(const std::string &name) {
    return find_spec(name).defaults;
}

std::vector<std::string> headline_keys(const std::string &experiment) {
    return find_spec(experiment).headline;
}

ExperimentReport run_experiment(const ExperimentConfig &cfg) {
    if (cfg.experiment.empty()) {
        throw ConfigError("no experiment given");
    }
    const ExperimentSpec &spec = find_spec(cfg.experiment);
    std::map<std::string, std::string> values(spec.defaults.begin(), spec.defaults.end());
    for (const auto &[k, v] : cfg.params) {
        if (!values.count(k)) {
            throw ConfigError("experiment '" + spec.name + "' has no parameter '" + k + "'");
        }
        values[k] = v;
    }
    if (cfg.trials) {
        if (!values.count("trials")) {
            throw ConfigError("experiment '" + spec.name + "' takes no trials");
        }
        values["trials"] = std::to_string(*cfg.trials);
    }
    Params params(values);
    Tolerances tol = default_tolerances();
    for (const auto &[k, v] : cfg.tolerance_overrides) {
        set_tolerance(tol, k, v);
    }
    bool sampled = spec.needs_seed(params);
    if (sampled && !cfg.seed) {
        throw ConfigError("experiment '" + spec.name + "' samples randomness and needs --seed");
    }
    std::uint64_t seed = cfg.seed.value_or(0);

    ExperimentReport report;
    report.experiment = spec.name;
    report.resolved.emplace_back("experiment", spec.name);
    report.resolved.emplace_back("seed", cfg.seed ? std::to_string(seed) : "none");
    for (const auto &[k, v] : spec.defaults) {
        report.resolved.emplace_back("param." + k, values[k]);
    }
    for (const auto &[k, v] : cfg.tolerance_overrides) {
        report.resolved.emplace_back("tolerance." + k, v);
    }
    Context ctx{params, seed, tol, report};
    spec.run(ctx);
    return report;
}

// ---------------------------------------------------------------------------
// Reports.

bool ExperimentReport::passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const AssertionResult &a) {
        return a.held;
    });
}

std::string ExperimentReport::csv() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < csv_columns.size(); k++) {
        out << (k ? "," : "") << csv_columns[k];
    }
    out << "\n";
    for (const auto &row : csv_rows) {
        for (std::size_t k = 0; k < row.size(); k++) {
            out << (k ? "," : "") << row[k];
        }
        out << "\n";
    }
    return out.str();
}

std::string ExperimentReport::summary_text() const {
    std::ostringstream out;
    out << "experiment=" << experiment << "\n";
    for (const auto &[k, v] : summary) {
        out << k << "=" << v << "\n";
    }
    for (const auto &a : assertions) {
        out << "assert." << a.name << "=" << (a.held ? "pass" : "fail") << "\n";
        out << "margin." << a.name << "=" << format_double(a.margin) << "\n";
    }
    out << "passed=" << (passed() ? "true" : "false") << "\n";
    return out.str();
}

std::string ExperimentReport::config_text() const {
    std::ostringstream out;
    for (const auto &[k, v] : resolved) {
        out << k << " = " << v << "\n";
    }
    return out.str();
}

std::string ExperimentReport::summary_value(const std::string &key) const {
    for (const auto &[k, v] : summary) {
        if (k == key) {
            return v;
        }
    }
    throw InvalidArgument("summary has no key '" + key + "'");
}

void write_report(const ExperimentReport &report, const std::string &dir) {
    std::filesystem::create_directories(dir);
    write_file(dir + "/results.csv", report.csv());
    write_file(dir + "/summary.txt", report.summary_text());
    write_file(dir + "/config.txt", report.config_text());
}

std::string SweepResult::csv(const std::string &experiment) const {
    std::vector<std::string> keys = headline_keys(experiment);
    std::ostringstream out;
    out << "run," << key << ",seed,passed";
    for (const auto &k : keys) {
        out << "," << k;
    }
    out << "\n";
    for (std::size_t i = 0; i < runs.size(); i++) {
        out << i << "," << values[i] << "," << seeds[i] << "," << (runs[i].passed() ? "1" : "0");
        for (const auto &k : keys) {
            std::string v;
            for (const auto &[sk, sv] : runs[i].summary) {
                if (sk == k) {
                    v = sv;
                }
            }
            out << "," << v;
        }
        out << "\n";
    }
    return out.str();
}

bool SweepResult::passed() const {
    return std::all_of(runs.begin(), runs.end(), [](const ExperimentReport &r) {
        return r.passed();
    });
}

SweepResult run_sweep(const ExperimentConfig &cfg, const std::string &key, const std::vector<std::string> &values) {
    find_spec(cfg.experiment);
    SweepResult out;
    out.key = key;
    out.values = values;
    std::vector<ExperimentConfig> configs;
    for (std::size_t i = 0; i < values.size(); i++) {
        ExperimentConfig c = cfg;
        apply_config_entry(c, key, values[i]);
        c.seed = derive_seed(cfg.seed.value_or(0), i);
        out.seeds.push_back(*c.seed);
        configs.push_back(std::move(c));
    }
    std::vector<std::future<ExperimentReport>> futures;
    for (const auto &c : configs) {
        futures.push_back(std::async(std::launch::async, [&c] {
            return run_experiment(c);
        }));
    }
    for (auto &f : futures) {
        out.runs.push_back(f.get());
    }
    return out;
}

}  // namespace smplab
