#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace recip {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Cyclic pairwise MRF over a loop of `num_nodes` discrete variables with
/// `alphabet_size` states each. Edge k joins node k and node (k+1) mod L;
/// edge_potentials[k](a, b) is the compatibility of (x_k = a, x_{k+1} = b).
/// Node potentials hold the per-node evidence factors. All values are
/// unnormalized nonnegative reals. Immutable by convention after
/// construction; safe to share across threads.
struct HiddenReciprocalModel {
    int alphabet_size = 0;                 // D
    int num_nodes = 0;                     // L
    std::vector<Matrix> edge_potentials;   // L matrices, D x D
    std::vector<Vector> node_potentials;   // L vectors, length D

    int next(int k) const { return (k + 1) % num_nodes; }
    int prev(int k) const { return (k + num_nodes - 1) % num_nodes; }
};

/// Observation channel: emission_matrix(a, o) = p(y = o | x = a), rows
/// summing to one, plus one observed symbol per node.
struct EmissionSpec {
    Matrix emission_matrix;        // D x D_obs
    std::vector<int> observations; // length L, values in [0, D_obs)
};

struct BeliefSet {
    std::vector<Vector> beliefs;  // L probability vectors of length D
};

/// All invariant violations of `model`, empty when valid.
std::vector<std::string> validate_model(const HiddenReciprocalModel& model);

/// Column read-off of the emission matrix at each node's observed symbol.
/// Throws ValidationError for out-of-range symbols or malformed rows.
std::vector<Vector> node_potentials_from_emissions(const EmissionSpec& spec);

/// Random model with all potential entries uniform in [positivity_floor, 1].
/// Deterministic for a fixed seed. Entirely-zero potentials (possible only
/// when the floor is 0) are resampled away.
HiddenReciprocalModel random_model(int alphabet_size, int num_nodes,
                                   std::uint64_t seed,
                                   double positivity_floor = 0.0);

/// Uniform model: every potential entry equal to 1.
HiddenReciprocalModel uniform_model(int alphabet_size, int num_nodes);

}  // namespace recip
