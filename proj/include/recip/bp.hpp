#pragma once

#include <cstdint>
#include <vector>

#include "recip/model.hpp"

namespace recip {

/// Directional messages for every loop edge, double-buffered by the sweep.
/// forward[k] is the message into node k from node k-1, backward[k] the
/// message into node k from node k+1. With normalization on (the default)
/// every vector is L1-normalized.
struct MessageSet {
    std::vector<Vector> forward;
    std::vector<Vector> backward;
    int iteration = 0;
};

enum class InitMode { Uniform, SeededRandom };

/// Uniform mode sets every message to the constant 1/D vector; seeded-random
/// draws positive entries and normalizes. t = 0 either way.
MessageSet init_messages(const HiddenReciprocalModel& model, InitMode mode,
                         std::uint64_t seed = 0);

/// One synchronous (Jacobi) sweep: every message is recomputed from the
/// previous iterate only. An all-zero update raises DegeneracyError naming
/// the edge. Independent per-node updates run under OpenMP; the result never
/// depends on the worker count.
MessageSet bp_sweep(const HiddenReciprocalModel& model, const MessageSet& msgs,
                    bool normalize = true);

struct BpRunResult {
    MessageSet messages;
    std::vector<double> trace;  // per-sweep max Hilbert distance over all messages
    bool converged = false;
};

int default_t_max(const HiddenReciprocalModel& model);  // 10 * L * D^2

/// Repeated sweeps until the largest Hilbert distance between successive
/// same-edge same-direction messages drops below tol, or t_max sweeps.
/// t_max < 0 selects the default budget.
BpRunResult bp_run(const HiddenReciprocalModel& model, const MessageSet& init,
                   double tol = 1e-10, int t_max = -1, bool normalize = true);

/// b_k = normalize(node potential ⊙ forward ⊙ backward).
BeliefSet compute_beliefs(const HiddenReciprocalModel& model, const MessageSet& msgs);

/// Full-loop message-recursion matrices per node: forward[k] drives the
/// period-L recursion of the message into k from k-1, backward[k] the one
/// from k+1, each the ordered product of edge-transition matrices
/// interleaved with node-potential diagonals once around the loop.
struct LoopTransferSet {
    std::vector<Matrix> forward;   // C_{k-1,k}
    std::vector<Matrix> backward;  // C_{k+1,k}
    // inf-norm residual of backward[k] - D_k^-1 forward[k]^T D_k, or NaN when
    // the node-potential diagonal is singular and the check is disabled
    std::vector<double> similarity_residual;
};

LoopTransferSet loop_transfer_matrices(const HiddenReciprocalModel& model);

/// BP fixed point without sweeping: per node, the normalized product of the
/// node potential with the Perron vectors of the two loop matrices. Requires
/// every loop matrix primitive; DegeneracyError names the first failing node.
BeliefSet steady_state_beliefs(const HiddenReciprocalModel& model);

/// Steady-state belief at a single node.
Vector steady_state_belief(const HiddenReciprocalModel& model, int node);

namespace serial {
MessageSet bp_sweep(const HiddenReciprocalModel& model, const MessageSet& msgs,
                    bool normalize = true);
}

}  // namespace recip
