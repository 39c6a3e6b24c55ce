#pragma once

#include <cstdint>
#include <vector>

#include "recip/model.hpp"

namespace recip {

/// Exhaustive joint distribution over all D^L configurations. Configuration
/// (x_0, ..., x_{L-1}) maps to index sum_k x_k * D^k, node 0 fastest.
struct JointTable {
    int alphabet_size = 0;
    int num_nodes = 0;
    std::vector<double> probabilities;  // length D^L, sums to 1
    double partition_function = 0.0;    // Z of the unnormalized product

    std::size_t size() const { return probabilities.size(); }
};

inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 24;

/// Number of configurations D^L; throws DegeneracyError when it exceeds `cap`.
std::size_t configuration_count(int alphabet_size, int num_nodes, std::size_t cap);

/// Decode configuration index into per-node states (node 0 fastest digit).
void decode_config(std::size_t index, int alphabet_size, int num_nodes, int* states);

/// Full enumeration of the normalized joint. Throws DegeneracyError when the
/// configuration count exceeds `cap` or the partition function is zero.
JointTable joint_table(const HiddenReciprocalModel& model,
                       std::size_t cap = kDefaultEnumerationCap);

/// Per-node marginals by direct summation over the table.
BeliefSet marginals_bruteforce(const JointTable& table);

/// Per-node marginals from the diagonal of the full-loop product of
/// node-potential diagonals and edge matrices anchored at each node.
/// O(L^2 D^3), never enumerates configurations.
BeliefSet marginals_transfer(const HiddenReciprocalModel& model);

/// Pairwise marginal of (node k, node k+1) from the table.
Matrix edge_marginal_bruteforce(const JointTable& table, int k);

struct SampleMatrix {
    int num_samples = 0;
    int num_nodes = 0;
    std::vector<int> states;  // row-major, num_samples x num_nodes

    int at(int sample, int node) const { return states[static_cast<std::size_t>(sample) * num_nodes + node]; }
};

/// Exact sampler: draws x_0 from its transfer marginal, then samples the
/// remaining chain (the loop conditioned on x_0 is acyclic) using
/// backward-accumulated transfer products. Deterministic per seed and
/// independent of the worker count (fixed batch seeding).
SampleMatrix sample_joint(const HiddenReciprocalModel& model, int num_samples,
                          std::uint64_t seed);

namespace serial {
/// Reference implementations without OpenMP, kept for tests and benchmarks.
JointTable joint_table(const HiddenReciprocalModel& model,
                       std::size_t cap = kDefaultEnumerationCap);
BeliefSet marginals_bruteforce(const JointTable& table);
SampleMatrix sample_joint(const HiddenReciprocalModel& model, int num_samples,
                          std::uint64_t seed);
}  // namespace serial

}  // namespace recip
