#include "recip/exact.hpp"

#include <cmath>
#include <sstream>

#include "recip/errors.hpp"
#include "recip/parallel.hpp"
#include "recip/rng.hpp"

namespace recip {
namespace {

void require_valid_dims(const HiddenReciprocalModel& model) {
    if (model.alphabet_size < 1 || model.num_nodes < 3 ||
        static_cast<int>(model.edge_potentials.size()) != model.num_nodes ||
        static_cast<int>(model.node_potentials.size()) != model.num_nodes)
        throw ValidationError("model has inconsistent dimensions");
}

// Unnormalized weight of one configuration; the multiplication order is
// pinned (node factors ascending, then edge factors ascending) so that every
// code path produces bit-identical weights.
inline double config_weight(const HiddenReciprocalModel& model, const int* x) {
    const int L = model.num_nodes;
    double w = 1.0;
    for (int k = 0; k < L; ++k) w *= model.node_potentials[k](x[k]);
    for (int k = 0; k < L; ++k) w *= model.edge_potentials[k](x[k], x[(k + 1) % L]);
    return w;
}

// Odometer increment over mixed-radix digits, node 0 fastest.
inline void advance_config(int* x, int alphabet_size, int num_nodes) {
    for (int k = 0; k < num_nodes; ++k) {
        if (++x[k] < alphabet_size) return;
        x[k] = 0;
    }
}

void fill_weights(const HiddenReciprocalModel& model, std::vector<double>& w) {
    const std::size_t n = w.size();
    const std::size_t nb = par::num_blocks(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * par::kBlockSize;
        const std::size_t hi = std::min(lo + par::kBlockSize, n);
        std::vector<int> x(model.num_nodes);
        decode_config(lo, model.alphabet_size, model.num_nodes, x.data());
        for (std::size_t i = lo; i < hi; ++i) {
            w[i] = config_weight(model, x.data());
            advance_config(x.data(), model.alphabet_size, model.num_nodes);
        }
    }
}

// Cumulative-threshold draw from unnormalized weights.
int draw_categorical(Rng& rng, const Vector& weights) {
    const double total = weights.sum();
    if (!(total > 0.0)) throw DegeneracyError("categorical draw over all-zero weights");
    const double threshold = rng.next_double() * total;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        acc += weights(i);
        if (threshold < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size() - 1);
}

// Backward tables closing the loop at x_0 = a: for k in [1, L-1],
// B_k(b) = sum over x_{k+1..L-1} of the remaining edge/node factors given
// x_k = b. Used to sample the conditioned (acyclic) chain exactly.
std::vector<std::vector<Vector>> backward_tables(const HiddenReciprocalModel& model) {
    const int D = model.alphabet_size;
    const int L = model.num_nodes;
    std::vector<std::vector<Vector>> tables(D);
    for (int a = 0; a < D; ++a) {
        std::vector<Vector> B(L);
        B[L - 1] = model.edge_potentials[L - 1].col(a);
        for (int k = L - 2; k >= 1; --k) {
            Vector next = model.node_potentials[k + 1].cwiseProduct(B[k + 1]);
            B[k] = model.edge_potentials[k] * next;
        }
        tables[a] = std::move(B);
    }
    return tables;
}

void sample_batch(const HiddenReciprocalModel& model, const Vector& marginal0,
                  const std::vector<std::vector<Vector>>& btab, std::uint64_t seed,
                  int batch_index, int lo, int hi, SampleMatrix& out) {
    const int L = model.num_nodes;
    Rng rng(Rng::batch_seed(seed, static_cast<std::uint64_t>(batch_index)));
    for (int s = lo; s < hi; ++s) {
        int* row = out.states.data() + static_cast<std::size_t>(s) * L;
        const int a = draw_categorical(rng, marginal0);
        row[0] = a;
        int prev = a;
        for (int k = 1; k < L; ++k) {
            Vector w = model.edge_potentials[k - 1].row(prev).transpose().cwiseProduct(
                model.node_potentials[k]);
            w = w.cwiseProduct(btab[a][k]);
            prev = draw_categorical(rng, w);
            row[k] = prev;
        }
    }
}

constexpr int kSampleBatch = 4096;

}  // namespace

std::size_t configuration_count(int alphabet_size, int num_nodes, std::size_t cap) {
    std::size_t n = 1;
    for (int k = 0; k < num_nodes; ++k) {
        if (n > cap / static_cast<std::size_t>(alphabet_size) + 1) {
            std::ostringstream msg;
            msg << "enumeration cap exceeded: " << alphabet_size << "^" << num_nodes
                << " > " << cap;
            throw DegeneracyError(msg.str());
        }
        n *= static_cast<std::size_t>(alphabet_size);
    }
    if (n > cap) {
        std::ostringstream msg;
        msg << "enumeration cap exceeded: " << alphabet_size << "^" << num_nodes
            << " = " << n << " > " << cap;
        throw DegeneracyError(msg.str());
    }
    return n;
}

void decode_config(std::size_t index, int alphabet_size, int num_nodes, int* states) {
    for (int k = 0; k < num_nodes; ++k) {
        states[k] = static_cast<int>(index % static_cast<std::size_t>(alphabet_size));
        index /= static_cast<std::size_t>(alphabet_size);
    }
}

JointTable joint_table(const HiddenReciprocalModel& model, std::size_t cap) {
    require_valid_dims(model);
    const std::size_t n = configuration_count(model.alphabet_size, model.num_nodes, cap);

    JointTable table;
    table.alphabet_size = model.alphabet_size;
    table.num_nodes = model.num_nodes;
    table.probabilities.resize(n);
    fill_weights(model, table.probabilities);

    const double z = par::blocked_sum(n, [&](std::size_t i) { return table.probabilities[i]; });
    if (!(z > 0.0)) throw DegeneracyError("partition function is zero: fully degenerate model");
    table.partition_function = z;
    const std::size_t nb = par::num_blocks(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * par::kBlockSize;
        const std::size_t hi = std::min(lo + par::kBlockSize, n);
        for (std::size_t i = lo; i < hi; ++i) table.probabilities[i] /= z;
    }
    return table;
}

BeliefSet marginals_bruteforce(const JointTable& table) {
    const int D = table.alphabet_size;
    const int L = table.num_nodes;
    const std::size_t n = table.size();
    const std::size_t nb = par::num_blocks(n);

    std::vector<Matrix> partial(nb, Matrix::Zero(L, D));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * par::kBlockSize;
        const std::size_t hi = std::min(lo + par::kBlockSize, n);
        Matrix& acc = partial[static_cast<std::size_t>(b)];
        std::vector<int> x(L);
        decode_config(lo, D, L, x.data());
        for (std::size_t i = lo; i < hi; ++i) {
            const double p = table.probabilities[i];
            for (int k = 0; k < L; ++k) acc(k, x[k]) += p;
            advance_config(x.data(), D, L);
        }
    }
    Matrix sums = par::tree_combine(partial, [](Matrix& a, const Matrix& b) { a += b; });

    BeliefSet out;
    out.beliefs.reserve(L);
    for (int k = 0; k < L; ++k) {
        Vector v = sums.row(k).transpose();
        const double s = v.sum();
        if (!(s > 0.0)) throw DegeneracyError("marginal sums to zero");
        out.beliefs.push_back(v / s);
    }
    return out;
}

BeliefSet marginals_transfer(const HiddenReciprocalModel& model) {
    require_valid_dims(model);
    const int D = model.alphabet_size;
    const int L = model.num_nodes;

    // Factors F_j = diag(node_j) * edge_j, rescaled to unit max entry; the
    // scale cancels after normalization.
    std::vector<Matrix> factor(L);
    for (int j = 0; j < L; ++j) {
        Matrix f = model.node_potentials[j].asDiagonal() * model.edge_potentials[j];
        const double s = f.maxCoeff();
        if (!(s > 0.0)) throw DegeneracyError("degenerate factor in transfer product");
        factor[j] = f / s;
    }

    // prefix[k] = F_0 ... F_{k-1}, suffix[k] = F_k ... F_{L-1}; the anchored
    // full-loop product is suffix[k] * prefix[k] and the marginal at k is its
    // normalized diagonal.
    std::vector<Matrix> prefix(L + 1), suffix(L + 1);
    prefix[0] = Matrix::Identity(D, D);
    for (int k = 0; k < L; ++k) {
        prefix[k + 1] = prefix[k] * factor[k];
        const double s = prefix[k + 1].maxCoeff();
        if (!(s > 0.0)) throw DegeneracyError("transfer product vanished");
        prefix[k + 1] /= s;
    }
    suffix[L] = Matrix::Identity(D, D);
    for (int k = L - 1; k >= 0; --k) {
        suffix[k] = factor[k] * suffix[k + 1];
        const double s = suffix[k].maxCoeff();
        if (!(s > 0.0)) throw DegeneracyError("transfer product vanished");
        suffix[k] /= s;
    }

    BeliefSet out;
    out.beliefs.reserve(L);
    for (int k = 0; k < L; ++k) {
        Vector diag(D);
        for (int a = 0; a < D; ++a) diag(a) = suffix[k].row(a).dot(prefix[k].col(a));
        const double s = diag.sum();
        if (!(s > 0.0)) {
            std::ostringstream msg;
            msg << "all-zero diagonal in transfer product anchored at node " << k;
            throw DegeneracyError(msg.str());
        }
        out.beliefs.push_back(diag / s);
    }
    return out;
}

Matrix edge_marginal_bruteforce(const JointTable& table, int k) {
    const int D = table.alphabet_size;
    const int L = table.num_nodes;
    Matrix m = Matrix::Zero(D, D);
    std::vector<int> x(L, 0);
    for (std::size_t i = 0; i < table.size(); ++i) {
        m(x[k], x[(k + 1) % L]) += table.probabilities[i];
        advance_config(x.data(), D, L);
    }
    return m;
}

SampleMatrix sample_joint(const HiddenReciprocalModel& model, int num_samples,
                          std::uint64_t seed) {
    require_valid_dims(model);
    const Vector marginal0 = marginals_transfer(model).beliefs[0];
    const auto btab = backward_tables(model);

    SampleMatrix out;
    out.num_samples = num_samples;
    out.num_nodes = model.num_nodes;
    out.states.resize(static_cast<std::size_t>(num_samples) * model.num_nodes);

    const int nb = (num_samples + kSampleBatch - 1) / kSampleBatch;
#pragma omp parallel for schedule(static)
    for (int b = 0; b < nb; ++b) {
        const int lo = b * kSampleBatch;
        const int hi = std::min(lo + kSampleBatch, num_samples);
        sample_batch(model, marginal0, btab, seed, b, lo, hi, out);
    }
    return out;
}

namespace serial {

JointTable joint_table(const HiddenReciprocalModel& model, std::size_t cap) {
    require_valid_dims(model);
    const std::size_t n = configuration_count(model.alphabet_size, model.num_nodes, cap);

    JointTable table;
    table.alphabet_size = model.alphabet_size;
    table.num_nodes = model.num_nodes;
    table.probabilities.resize(n);

    std::vector<int> x(model.num_nodes, 0);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = config_weight(model, x.data());
        table.probabilities[i] = w;
        z += w;
        advance_config(x.data(), model.alphabet_size, model.num_nodes);
    }
    if (!(z > 0.0)) throw DegeneracyError("partition function is zero: fully degenerate model");
    table.partition_function = z;
    for (std::size_t i = 0; i < n; ++i) table.probabilities[i] /= z;
    return table;
}

BeliefSet marginals_bruteforce(const JointTable& table) {
    const int D = table.alphabet_size;
    const int L = table.num_nodes;
    Matrix sums = Matrix::Zero(L, D);
    std::vector<int> x(L, 0);
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (int k = 0; k < L; ++k) sums(k, x[k]) += table.probabilities[i];
        advance_config(x.data(), D, L);
    }
    BeliefSet out;
    out.beliefs.reserve(L);
    for (int k = 0; k < L; ++k) {
        Vector v = sums.row(k).transpose();
        const double s = v.sum();
        if (!(s > 0.0)) throw DegeneracyError("marginal sums to zero");
        out.beliefs.push_back(v / s);
    }
    return out;
}

SampleMatrix sample_joint(const HiddenReciprocalModel& model, int num_samples,
                          std::uint64_t seed) {
    require_valid_dims(model);
    const Vector marginal0 = marginals_transfer(model).beliefs[0];
    const auto btab = backward_tables(model);

    SampleMatrix out;
    out.num_samples = num_samples;
    out.num_nodes = model.num_nodes;
    out.states.resize(static_cast<std::size_t>(num_samples) * model.num_nodes);

    const int nb = (num_samples + kSampleBatch - 1) / kSampleBatch;
    for (int b = 0; b < nb; ++b) {
        const int lo = b * kSampleBatch;
        const int hi = std::min(lo + kSampleBatch, num_samples);
        sample_batch(model, marginal0, btab, seed, b, lo, hi, out);
    }
    return out;
}

}  // namespace serial
}  // namespace recip
