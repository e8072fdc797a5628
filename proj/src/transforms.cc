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

#include "smplab/transforms.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include "smplab/errors.h"

namespace smplab {

namespace {

constexpr unsigned kRecordVersion = 1;

class BitWriter {
   public:
    void put(std::uint64_t value, unsigned bits) {
        for (unsigned k = bits; k-- > 0;) {
            if (used_ % 8 == 0) {
                bytes_.push_back(0);
            }
            if ((value >> k) & 1) {
                bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (used_ % 8));
            }
            used_++;
        }
    }
    std::vector<std::uint8_t> take() {
        return std::move(bytes_);
    }

   private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t used_ = 0;
};

class BitReader {
   public:
    explicit BitReader(const std::vector<std::uint8_t> &bytes) : bytes_(bytes) {
    }
    std::uint64_t get(unsigned bits) {
        std::uint64_t v = 0;
        for (unsigned k = 0; k < bits; k++) {
            if (pos_ / 8 >= bytes_.size()) {
                throw InvalidArgument("learn record: truncated encoding");
            }
            v = (v << 1) | ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u);
            pos_++;
        }
        return v;
    }
    std::size_t bytes_consumed() const {
        return (pos_ + 7) / 8;
    }

   private:
    const std::vector<std::uint8_t> &bytes_;
    std::uint64_t pos_ = 0;
};

void require_delta(double delta, const char *what) {
    if (!(delta > 0 && delta < 0.5)) {
        throw InvalidArgument(std::string(what) + ": delta must lie in (0, 1/2)");
    }
}

// Runs body(i) for i in [0, n) on up to hardware_concurrency threads; results are
// written by index, so the outcome does not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, Body body) {
    std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; i++) {
            body(i);
        }
        return;
    }
    std::vector<std::future<void>> futures;
    for (std::size_t w = 0; w < workers; w++) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                body(i);
            }
        }));
    }
    for (auto &f : futures) {
        f.get();
    }
}

std::uint64_t coin_count(const SmpProtocol &p, const Tolerances &tol) {
    if (p.coins.size == 0 || p.coins.size > tol.enumeration_cap) {
        throw CapExceeded("transform: coin space must be explicit and within the enumeration cap");
    }
    return p.coins.size;
}

}  // namespace

// ---------------------------------------------------------------------------
// LearnRecord.

unsigned LearnRecord::index_bits() const {
    return static_cast<unsigned>(std::ceil(std::log2(8 / delta))) + 3;
}

unsigned LearnRecord::entry_bits() const {
    return c + index_bits();
}

std::uint64_t LearnRecord::encoded_bits() const {
    return static_cast<std::uint64_t>(entries.size()) * entry_bits();
}

std::vector<std::uint8_t> LearnRecord::serialize() const {
    require_delta(delta, "learn record");
    if (q > 255 || c > 63 || r > 65535) {
        throw InvalidArgument("learn record: header field out of range");
    }
    int exponent = 0;
    double frac = std::frexp(delta, &exponent);
    auto mantissa = static_cast<std::uint64_t>(std::ldexp(frac, 53));
    exponent -= 53;

    BitWriter w;
    w.put(kRecordVersion, 8);
    w.put(q, 8);
    w.put(c, 8);
    w.put(r, 16);
    w.put(mantissa, 53);
    w.put(static_cast<std::uint16_t>(static_cast<std::int16_t>(exponent)), 16);
    w.put(entries.size(), 32);
    const unsigned ib = index_bits();
    for (const LearnEntry &e : entries) {
        w.put(e.b, c);
        w.put(e.index, ib);
    }
    return w.take();
}

LearnRecord LearnRecord::deserialize(const std::vector<std::uint8_t> &bytes) {
    BitReader in(bytes);
    if (in.get(8) != kRecordVersion) {
        throw InvalidArgument("learn record: unsupported version");
    }
    LearnRecord rec;
    rec.q = static_cast<unsigned>(in.get(8));
    rec.c = static_cast<unsigned>(in.get(8));
    rec.r = static_cast<unsigned>(in.get(16));
    std::uint64_t mantissa = in.get(53);
    auto exponent = static_cast<std::int16_t>(static_cast<std::uint16_t>(in.get(16)));
    rec.delta = std::ldexp(static_cast<double>(mantissa), exponent);
    require_delta(rec.delta, "learn record");
    std::uint64_t count = in.get(32);
    const unsigned ib = rec.index_bits();
    for (std::uint64_t k = 0; k < count; k++) {
        LearnEntry e;
        e.b = in.get(rec.c);
        e.index = static_cast<std::uint32_t>(in.get(ib));
        rec.entries.push_back(e);
    }
    if (in.bytes_consumed() != bytes.size()) {
        throw InvalidArgument("learn record: trailing bytes");
    }
    return rec;
}

std::string LearnRecord::to_text() const {
    std::ostringstream out;
    out.precision(17);
    out << "learn_record q=" << q << " c=" << c << " r=" << r << " delta=" << delta << " entries=" << entries.size()
        << " bits=" << encoded_bits() << "\n";
    for (const LearnEntry &e : entries) {
        out << "  b=" << e.b << " index=" << e.index << " p_tilde=" << p_tilde(e) << "\n";
    }
    return out.str();
}

std::uint32_t truncate_estimate(double p, double delta) {
    require_delta(delta, "truncate_estimate");
    double step = delta / 8;
    auto top = static_cast<std::int64_t>(std::floor(8 / delta));
    auto idx = static_cast<std::int64_t>(std::llround(p / step));
    return static_cast<std::uint32_t>(std::clamp<std::int64_t>(idx, 0, top));
}

// ---------------------------------------------------------------------------
// State learning.

ObservableFamily::ObservableFamily(std::vector<MeasurementOperator> elements, unsigned r, const Tolerances &tol)
    : elements_(std::move(elements)), r_(r) {
    if (elements_.empty() || (elements_.size() & (elements_.size() - 1)) != 0) {
        throw InvalidArgument("observable family: size must be a power of two");
    }
    if (r == 0) {
        throw InvalidArgument("observable family: r must be positive");
    }
    c_ = ceil_log2(elements_.size());
    std::size_t dim = elements_[0].dim();
    q_ = ceil_log2(dim);
    if (std::pow(static_cast<double>(dim), r) > static_cast<double>(tol.max_dim)) {
        throw CapExceeded(
            "observable family: dimension " + std::to_string(dim) + "^" + std::to_string(r) + " exceeds cap " +
            std::to_string(tol.max_dim));
    }
    for (const auto &e : elements_) {
        if (e.dim() != dim) {
            throw InvalidArgument("observable family: elements act on different dimensions");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(e.matrix());
        if (solver.info() != Eigen::Success) {
            throw SmplabError("observable family: eigendecomposition failed");
        }
        const Eigen::VectorXd &w = solver.eigenvalues();
        Eigen::VectorXd sums = w;
        for (unsigned k = 1; k < r; k++) {
            Eigen::VectorXd next(sums.size() * w.size());
            for (Eigen::Index a = 0; a < sums.size(); a++) {
                next.segment(a * w.size(), w.size()) = w.array() + sums[a];
            }
            sums = std::move(next);
        }
        bases_.push_back(solver.eigenvectors());
        values_.push_back(sums / static_cast<double>(r));
    }
}

Observable ObservableFamily::observable(std::size_t b, const Tolerances &tol) const {
    return average_observable(elements_.at(b), r_, tol);
}

namespace {

// m <- m (w (x) ... (x) w), with r factors of w acting on the column index.
//
// Factors are applied a few at a time as w^{(x) g}, each as a product of a contiguous
// slab of m with a small dense matrix.
void multiply_factors_right(Matrix &m, const Matrix &w, unsigned r) {
    const Eigen::Index d = w.rows();
    unsigned group = 1;
    while (group < r && std::pow(static_cast<double>(d), group + 1) <= 16) {
        group++;
    }
    Eigen::Index trailing = m.cols();
    Matrix tmp;
    for (unsigned k = 0; k < r; k += group) {
        unsigned g = std::min(group, r - k);
        Matrix wg = w;
        for (unsigned i = 1; i < g; i++) {
            wg = kron(wg, w);
        }
        const Eigen::Index width = wg.rows();
        trailing /= width;
        // Columns (h, a, l) with a the grouped factor: each h is a slab of `width` blocks of
        // `trailing` columns, stored as a (trailing * rows) x width matrix.
        const Eigen::Index slab_rows = trailing * m.rows();
        const Eigen::Index slabs = m.cols() / (width * trailing);
        for (Eigen::Index h = 0; h < slabs; h++) {
            Eigen::Map<Matrix> slab(m.data() + h * width * slab_rows, slab_rows, width);
            tmp.noalias() = slab * wg;
            slab = tmp;
        }
    }
}

// (v^{(x) r})^dagger m v^{(x) r} for Hermitian m.
Matrix conjugate_by_power(const Matrix &m, const Matrix &v, unsigned r) {
    Matrix a = m;
    multiply_factors_right(a, v, r);
    Matrix b = a.adjoint();
    multiply_factors_right(b, v, r);
    return b;
}

// Re Tr(F rho) for F = (1/r) sum_j E^{(j)}, from the single-copy marginals of rho.
double average_expectation(const Matrix &rho, const Matrix &e, unsigned r) {
    const Eigen::Index d = e.rows();
    const Eigen::Index dim = rho.rows();
    Complex total = 0;
    Eigen::Index inner = dim;
    for (unsigned j = 0; j < r; j++) {
        inner /= d;
        Matrix marginal = Matrix::Zero(d, d);
        for (Eigen::Index base = 0; base < dim; base += d * inner) {
            for (Eigen::Index a = 0; a < d; a++) {
                for (Eigen::Index b = 0; b < d; b++) {
                    marginal(a, b) += rho.block(base + a * inner, base + b * inner, inner, inner).trace();
                }
            }
        }
        total += e.cwiseProduct(marginal.transpose()).sum();
    }
    return total.real() / r;
}

struct ProductBand {
    std::vector<Eigen::Index> members;
    bool near_edge = false;
};

ProductBand product_band(const Eigen::VectorXd &values, double center, double halfwidth, const Tolerances &tol) {
    const double lo = center - halfwidth;
    const double hi = center + halfwidth;
    ProductBand band;
    for (Eigen::Index i = 0; i < values.size(); i++) {
        double v = values[i];
        if (std::abs(v - lo) <= tol.band_edge_flag || std::abs(v - hi) <= tol.band_edge_flag) {
            band.near_edge = true;
        }
        if (v >= lo - tol.band_pad && v <= hi + tol.band_pad) {
            band.members.push_back(i);
        }
    }
    return band;
}

// The hypothesis state of the learning loop, rho = V X V^dagger with V = frame^{(x) r}.
//
// After a bad step b the frame is the eigenbasis of E_b, where the band projector is diagonal,
// so every projection costs a single change of frame.
class Hypothesis {
   public:
    explicit Hypothesis(const ObservableFamily &family) : family_(family) {
        std::size_t d = family.element(0).dim();
        auto dim = static_cast<Eigen::Index>(std::pow(static_cast<double>(d), family.copies()));
        frame_ = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        state_ = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    }

    /// Tr(F_b rho).
    double predict(std::size_t b) const {
        Matrix e = frame_.adjoint() * family_.element(b).matrix() * frame_;
        return average_expectation(state_, e, family_.copies());
    }

    /// Replaces rho by M_b rho M_b / Tr(M_b rho) and returns Tr(M_b rho).
    double project(std::size_t b, const ProductBand &band, const Tolerances &tol) {
        Matrix rotated = conjugate_by_power(state_, frame_.adjoint() * family_.copy_basis(b), family_.copies());
        Eigen::VectorXd mask = Eigen::VectorXd::Zero(rotated.rows());
        for (Eigen::Index i : band.members) {
            mask[i] = 1;
        }
        double tr = rotated.diagonal().real().dot(mask);
        if (tr <= tol.zero_projection) {
            throw DegenerateProjection("projection has vanishing trace " + std::to_string(tr), b);
        }
        Matrix x = mask.asDiagonal() * rotated * mask.asDiagonal() / tr;
        state_ = (x + x.adjoint()) / 2.0;
        frame_ = family_.copy_basis(b);
        return tr;
    }

   private:
    const ObservableFamily &family_;
    Matrix frame_;
    Matrix state_;
};

}  // namespace

LearnResult learn_state_message(
    const DensityMatrix &rho, const ObservableFamily &family, double delta, const Tolerances &tol) {
    require_delta(delta, "learn_state_message");
    if (rho.dim() != family.element(0).dim()) {
        throw InvalidArgument("learn_state_message: state and family dimensions differ");
    }
    LearnResult out;
    LearnRecord &rec = out.record;
    rec.q = family.qubits();
    rec.c = family.index_bits();
    rec.r = family.copies();
    rec.delta = delta;

    Hypothesis current(family);
    for (std::uint64_t b = 0; b < family.size(); b++) {
        LearnStep step;
        step.b = b;
        step.p = acceptance_probability(family.element(b), rho, tol);
        step.prediction = current.predict(b);
        step.bad = std::abs(step.prediction - step.p) > delta;
        if (step.bad) {
            LearnEntry entry{b, truncate_estimate(step.p, delta)};
            ProductBand band = product_band(family.product_eigenvalues(b), rec.p_tilde(entry), delta / 2, tol);
            step.band_rank = band.members.size();
            step.near_edge = band.near_edge;
            if (band.members.empty()) {
                throw DegenerateProjection("learn_state_message: empty band at step b=" + std::to_string(b), b);
            }
            try {
                step.projection_trace = current.project(b, band, tol);
            } catch (const DegenerateProjection &e) {
                throw DegenerateProjection(
                    "learn_state_message: vanishing projection at step b=" + std::to_string(b) + " (" + e.what() +
                        ")",
                    b);
            }
            rec.entries.push_back(entry);
        }
        out.steps.push_back(step);
    }
    return out;
}

std::vector<double> reconstruct_estimates(
    const LearnRecord &record, const ObservableFamily &family, const Tolerances &tol) {
    if (record.q != family.qubits() || record.c != family.index_bits() || record.r != family.copies()) {
        throw VerificationFailure("reconstruct_estimates: record parameters do not match the family");
    }
    require_delta(record.delta, "reconstruct_estimates");
    for (std::size_t k = 1; k < record.entries.size(); k++) {
        if (record.entries[k].b <= record.entries[k - 1].b) {
            throw VerificationFailure("reconstruct_estimates: entries are not strictly increasing in b");
        }
    }
    std::vector<double> estimates(family.size());
    Hypothesis current(family);
    std::size_t next = 0;
    for (std::uint64_t b = 0; b < family.size(); b++) {
        double prediction = current.predict(b);
        if (next < record.entries.size() && record.entries[next].b == b) {
            const LearnEntry &entry = record.entries[next++];
            double p_tilde = record.p_tilde(entry);
            if (std::abs(prediction - p_tilde) <= 7 * record.delta / 8) {
                throw VerificationFailure(
                    "reconstruct_estimates: replay diverged at b=" + std::to_string(b) +
                    " (recorded step would have been good)");
            }
            ProductBand band = product_band(family.product_eigenvalues(b), p_tilde, record.delta / 2, tol);
            if (band.members.empty()) {
                throw DegenerateProjection("reconstruct_estimates: empty band at b=" + std::to_string(b), b);
            }
            try {
                current.project(b, band, tol);
            } catch (const DegenerateProjection &e) {
                throw DegenerateProjection(
                    "reconstruct_estimates: vanishing projection at b=" + std::to_string(b) + " (" + e.what() + ")", b);
            }
            estimates[b] = p_tilde;
        } else {
            estimates[b] = std::clamp(prediction, 0.0, 1.0);
        }
    }
    if (next != record.entries.size()) {
        throw VerificationFailure("reconstruct_estimates: record holds indices outside the family");
    }
    return estimates;
}

std::uint64_t bad_count_bound(unsigned k, double delta) {
    if (k == 0) {
        throw InvalidArgument("bad_count_bound: K must be positive");
    }
    require_delta(delta, "bad_count_bound");
    double eta = 1 - delta / 4;
    double t = std::ceil((k + 1.0) / std::log2(1 / eta));
    return static_cast<std::uint64_t>(t) + 1;
}

unsigned default_copies(unsigned q, double delta, const Tolerances &tol) {
    require_delta(delta, "default_copies");
    if (q == 0) {
        throw InvalidArgument("default_copies: q must be positive");
    }
    double want = std::ceil(8 * std::log(std::max(q, 2u)) / (delta * delta));
    unsigned r = static_cast<unsigned>(std::max(2.0, std::min(want, 1e6)));
    unsigned cap = std::max(1u, tol.learn_qubit_budget / q);
    return std::min(r, cap);
}

// ---------------------------------------------------------------------------
// Derandomization.

DerandomizedProtocol derandomize_alice(
    const SmpProtocol &p, const std::vector<Input> &alice_inputs, unsigned s, std::uint64_t seed,
    unsigned max_attempts, const Tolerances &tol) {
    if (p.is_quantum() || !p.alice || !p.referee) {
        throw InvalidArgument("derandomize_alice: needs a classical Alice and referee");
    }
    if (s == 0) {
        throw InvalidArgument("derandomize_alice: s must be positive");
    }
    const std::uint64_t coins = coin_count(p, tol);
    const unsigned c_b = p.bob_message_bits;
    if (c_b > 20) {
        throw CapExceeded("derandomize_alice: Bob messages longer than 20 bits cannot be verified exhaustively");
    }
    const std::uint64_t num_b = std::uint64_t{1} << c_b;
    const unsigned sample_size = s * std::max(c_b, 1u);

    DerandomizedProtocol out;
    out.multisets.assign(coins, std::vector<std::vector<Message>>(alice_inputs.size()));
    out.declared_bits = static_cast<std::uint64_t>(sample_size) * p.alice_message_bits;
    std::vector<std::uint64_t> attempts(coins * alice_inputs.size(), 0);
    std::vector<double> deviation(coins * alice_inputs.size(), 0);

    parallel_for(coins * alice_inputs.size(), [&](std::size_t job) {
        std::uint64_t coin = job / alice_inputs.size();
        std::size_t xi = job % alice_inputs.size();
        MessageDistribution dist = p.alice(alice_inputs[xi], coin);
        check_distribution(dist, p.alice_message_bits, tol, "alice");

        std::vector<double> target(num_b, 0);
        for (const auto &[a, w] : dist.outcomes) {
            for (std::uint64_t b = 0; b < num_b; b++) {
                target[b] += w * p.referee(coin, a, b);
            }
        }
        std::vector<double> weights;
        for (const auto &o : dist.outcomes) {
            weights.push_back(o.second);
        }

        double worst = 0;
        std::uint64_t worst_b = 0;
        for (unsigned attempt = 0; attempt < max_attempts; attempt++) {
            attempts[job]++;
            Rng rng(derive_seed(seed, job), attempt);
            std::vector<Message> sample(sample_size);
            for (auto &m : sample) {
                m = dist.outcomes[rng.weighted(weights)].first;
            }
            worst = 0;
            for (std::uint64_t b = 0; b < num_b; b++) {
                double mean = 0;
                for (Message m : sample) {
                    mean += p.referee(coin, m, b);
                }
                mean /= sample_size;
                double dev = std::abs(mean - target[b]);
                if (dev > worst) {
                    worst = dev;
                    worst_b = b;
                }
            }
            if (worst <= 0.1) {
                std::sort(sample.begin(), sample.end());
                out.multisets[coin][xi] = std::move(sample);
                deviation[job] = worst;
                return;
            }
        }
        throw VerificationFailure(
            "derandomize_alice: no verified multiset for input #" + std::to_string(xi) + " (coin " +
            std::to_string(coin) + ") after " + std::to_string(max_attempts) + " attempts; worst b=" +
            std::to_string(worst_b) + " deviates by " + std::to_string(worst) + "; increase s");
    });
    for (std::size_t job = 0; job < attempts.size(); job++) {
        out.attempts += attempts[job];
        out.max_deviation = std::max(out.max_deviation, deviation[job]);
    }

    // Alice sends the position of her multiset in the per-coin book of distinct multisets.
    auto books = std::make_shared<std::vector<std::vector<std::vector<Message>>>>(coins);
    auto index_of = std::make_shared<std::vector<std::map<Input, Message>>>(coins);
    std::size_t largest_book = 1;
    for (std::uint64_t coin = 0; coin < coins; coin++) {
        std::map<std::vector<Message>, Message> seen;
        for (std::size_t xi = 0; xi < alice_inputs.size(); xi++) {
            const auto &ms = out.multisets[coin][xi];
            auto [it, inserted] = seen.emplace(ms, (*books)[coin].size());
            if (inserted) {
                (*books)[coin].push_back(ms);
            }
            (*index_of)[coin][alice_inputs[xi]] = it->second;
        }
        largest_book = std::max(largest_book, (*books)[coin].size());
    }

    SmpProtocol &q = out.protocol;
    q.name = p.name + "+derandomized";
    q.coin_mode = p.coin_mode;
    q.coins = p.coins;
    q.repetitions = p.repetitions;
    q.alice_message_bits = static_cast<unsigned>(std::max<std::uint64_t>(out.declared_bits, ceil_log2(largest_book)));
    q.bob_message_bits = p.bob_message_bits;
    q.bob = p.bob;
    q.alice = [index_of](const Input &x, std::uint64_t coin) {
        auto it = (*index_of)[coin].find(x);
        if (it == (*index_of)[coin].end()) {
            throw InvalidArgument("derandomized protocol: input outside the compiled set");
        }
        return MessageDistribution::deterministic(it->second);
    };
    auto referee = p.referee;
    q.referee = [books, referee](std::uint64_t coin, Message a, Message b) {
        const auto &ms = (*books)[coin].at(a);
        double sum = 0;
        for (Message m : ms) {
            sum += referee(coin, m, b);
        }
        return std::clamp(sum / static_cast<double>(ms.size()), 0.0, 1.0);
    };
    return out;
}

// ---------------------------------------------------------------------------
// Quantum-classical to classical-classical compiler.

CompiledProtocol compile_qc_to_cc(
    const SmpProtocol &p, const std::vector<Input> &alice_inputs, double delta, unsigned r, const Tolerances &tol) {
    if (!p.is_quantum() || !p.referee_measurement || !p.bob) {
        throw InvalidArgument("compile_qc_to_cc: needs a quantum Alice, a classical Bob and a measurement family");
    }
    require_delta(delta, "compile_qc_to_cc");
    if (p.bob_message_bits > 16) {
        throw CapExceeded("compile_qc_to_cc: Bob messages longer than 16 bits");
    }
    const std::uint64_t coins = coin_count(p, tol);
    const std::uint64_t num_b = std::uint64_t{1} << p.bob_message_bits;
    CompiledProtocol out;
    out.copies = r == 0 ? default_copies(std::max(p.alice_qubits, 1u), delta, tol) : r;
    out.results.assign(coins, std::vector<LearnResult>(alice_inputs.size()));
    out.estimates.assign(coins, std::vector<std::vector<double>>(alice_inputs.size()));

    auto books = std::make_shared<std::vector<std::vector<std::vector<double>>>>(coins);
    auto index_of = std::make_shared<std::vector<std::map<Input, Message>>>(coins);
    std::size_t largest_book = 1;
    for (std::uint64_t coin = 0; coin < coins; coin++) {
        std::vector<MeasurementOperator> elements;
        for (std::uint64_t b = 0; b < num_b; b++) {
            elements.push_back(p.referee_measurement(coin, b));
        }
        ObservableFamily family(std::move(elements), out.copies, tol);
        std::vector<std::vector<std::uint8_t>> wire(alice_inputs.size());

        parallel_for(alice_inputs.size(), [&](std::size_t xi) {
            DensityMatrix rho = p.alice_state(alice_inputs[xi], coin);
            out.results[coin][xi] = learn_state_message(rho, family, delta, tol);
            wire[xi] = out.results[coin][xi].record.serialize();
            // The referee sees only the bits.
            out.estimates[coin][xi] = reconstruct_estimates(LearnRecord::deserialize(wire[xi]), family, tol);
        });

        std::map<std::vector<std::uint8_t>, Message> seen;
        for (std::size_t xi = 0; xi < alice_inputs.size(); xi++) {
            const LearnRecord &rec = out.results[coin][xi].record;
            out.max_encoded_bits = std::max(out.max_encoded_bits, rec.encoded_bits());
            out.max_entries = std::max(out.max_entries, rec.entries.size());
            auto [it, inserted] = seen.emplace(wire[xi], (*books)[coin].size());
            if (inserted) {
                (*books)[coin].push_back(out.estimates[coin][xi]);
            }
            (*index_of)[coin][alice_inputs[xi]] = it->second;
        }
        largest_book = std::max(largest_book, (*books)[coin].size());
    }

    SmpProtocol &q = out.protocol;
    q.name = p.name + "+compiled";
    q.coin_mode = p.coin_mode;
    q.coins = p.coins;
    q.repetitions = p.repetitions;
    q.alice_message_bits =
        static_cast<unsigned>(std::max<std::uint64_t>(out.max_encoded_bits, ceil_log2(largest_book)));
    q.bob_message_bits = p.bob_message_bits;
    q.bob = p.bob;
    q.alice = [index_of](const Input &x, std::uint64_t coin) {
        auto it = (*index_of)[coin].find(x);
        if (it == (*index_of)[coin].end()) {
            throw InvalidArgument("compiled protocol: input outside the compiled set");
        }
        return MessageDistribution::deterministic(it->second);
    };
    q.referee = [books](std::uint64_t coin, Message a, Message b) {
        return (*books)[coin].at(a).at(b);
    };
    return out;
}

}  // namespace smplab
