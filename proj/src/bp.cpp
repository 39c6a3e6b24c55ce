#include "recip/bp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "recip/errors.hpp"
#include "recip/hilbert.hpp"
#include "recip/rng.hpp"

namespace recip {
namespace {

void require_message_shape(const HiddenReciprocalModel& model, const MessageSet& msgs) {
    const int L = model.num_nodes;
    if (static_cast<int>(msgs.forward.size()) != L ||
        static_cast<int>(msgs.backward.size()) != L)
        throw ValidationError("message set size does not match the model");
}

// forward update into node k; reads only the previous iterate
inline Vector forward_update(const HiddenReciprocalModel& model, const MessageSet& prev,
                             int k) {
    const int j = model.prev(k);  // sender
    return model.edge_potentials[j].transpose() *
           model.node_potentials[j].cwiseProduct(prev.forward[j]);
}

inline Vector backward_update(const HiddenReciprocalModel& model, const MessageSet& prev,
                              int k) {
    const int j = model.next(k);  // sender
    return model.edge_potentials[k] *
           model.node_potentials[j].cwiseProduct(prev.backward[j]);
}

Vector finish_message(Vector v, bool normalize, int from, int to) {
    const double s = v.sum();
    if (!(s > 0.0)) {
        std::ostringstream msg;
        msg << "message update produced the all-zero vector on edge (" << from << ","
            << to << ")";
        throw DegeneracyError(msg.str());
    }
    if (normalize) v /= s;
    return v;
}

}  // namespace

MessageSet init_messages(const HiddenReciprocalModel& model, InitMode mode,
                         std::uint64_t seed) {
    const int D = model.alphabet_size;
    const int L = model.num_nodes;
    MessageSet msgs;
    msgs.iteration = 0;
    if (mode == InitMode::Uniform) {
        msgs.forward.assign(L, Vector::Constant(D, 1.0 / D));
        msgs.backward.assign(L, Vector::Constant(D, 1.0 / D));
        return msgs;
    }
    Rng rng(seed);
    auto draw = [&]() {
        Vector v(D);
        for (int i = 0; i < D; ++i) v(i) = 1.0 - rng.next_double();  // (0, 1]
        return Vector(v / v.sum());
    };
    msgs.forward.reserve(L);
    msgs.backward.reserve(L);
    for (int k = 0; k < L; ++k) msgs.forward.push_back(draw());
    for (int k = 0; k < L; ++k) msgs.backward.push_back(draw());
    return msgs;
}

MessageSet bp_sweep(const HiddenReciprocalModel& model, const MessageSet& msgs,
                    bool normalize) {
    require_message_shape(model, msgs);
    const int L = model.num_nodes;
    MessageSet next;
    next.forward.resize(L);
    next.backward.resize(L);
    next.iteration = msgs.iteration + 1;

    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(static) if (L >= 64)
    for (int k = 0; k < L; ++k) {
        try {
            next.forward[k] =
                finish_message(forward_update(model, msgs, k), normalize, model.prev(k), k);
            next.backward[k] =
                finish_message(backward_update(model, msgs, k), normalize, model.next(k), k);
        } catch (const DegeneracyError& e) {
#pragma omp critical
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    if (failed) throw DegeneracyError(failure);
    return next;
}

int default_t_max(const HiddenReciprocalModel& model) {
    return 10 * model.num_nodes * model.alphabet_size * model.alphabet_size;
}

BpRunResult bp_run(const HiddenReciprocalModel& model, const MessageSet& init, double tol,
                   int t_max, bool normalize) {
    if (!(tol > 0.0)) throw ValidationError("bp_run: tol must be positive");
    if (t_max < 0) t_max = default_t_max(model);
    require_message_shape(model, init);

    BpRunResult result;
    result.messages = init;
    for (int t = 0; t < t_max; ++t) {
        MessageSet next = bp_sweep(model, result.messages, normalize);
        double dist = 0.0;
        for (int k = 0; k < model.num_nodes; ++k) {
            dist = std::max(dist,
                            hilbert_distance_support(result.messages.forward[k], next.forward[k]));
            dist = std::max(dist, hilbert_distance_support(result.messages.backward[k],
                                                           next.backward[k]));
        }
        result.trace.push_back(dist);
        result.messages = std::move(next);
        if (dist < tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

BeliefSet compute_beliefs(const HiddenReciprocalModel& model, const MessageSet& msgs) {
    require_message_shape(model, msgs);
    BeliefSet beliefs;
    beliefs.beliefs.reserve(model.num_nodes);
    for (int k = 0; k < model.num_nodes; ++k) {
        Vector b = model.node_potentials[k]
                       .cwiseProduct(msgs.forward[k])
                       .cwiseProduct(msgs.backward[k]);
        const double s = b.sum();
        if (!(s > 0.0)) {
            std::ostringstream msg;
            msg << "belief at node " << k << " is the all-zero vector";
            throw DegeneracyError(msg.str());
        }
        beliefs.beliefs.push_back(b / s);
    }
    return beliefs;
}

LoopTransferSet loop_transfer_matrices(const HiddenReciprocalModel& model) {
    const int D = model.alphabet_size;
    const int L = model.num_nodes;
    LoopTransferSet set;
    set.forward.resize(L);
    set.backward.resize(L);
    set.similarity_residual.resize(L);

    for (int k = 0; k < L; ++k) {
        // C_{k-1,k}: edge factors walked against the cycle direction
        Matrix cf = Matrix::Identity(D, D);
        for (int i = 0; i < L; ++i) {
            const int j = (k - 1 - i + 2 * L) % L;
            cf = cf * (model.edge_potentials[j].transpose() *
                       Matrix(model.node_potentials[j].asDiagonal()));
        }
        // C_{k+1,k}: edge factors walked with the cycle direction
        Matrix cb = Matrix::Identity(D, D);
        for (int i = 0; i < L; ++i) {
            const int j = (k + i) % L;
            cb = cb * (model.edge_potentials[j] *
                       Matrix(model.node_potentials[model.next(j)].asDiagonal()));
        }
        set.forward[k] = std::move(cf);
        set.backward[k] = std::move(cb);

        const Vector& d = model.node_potentials[k];
        if ((d.array() > 0.0).all()) {
            const Matrix similar = d.cwiseInverse().asDiagonal() *
                                   set.forward[k].transpose() * Matrix(d.asDiagonal());
            set.similarity_residual[k] = (similar - set.backward[k]).cwiseAbs().maxCoeff();
        } else {
            set.similarity_residual[k] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return set;
}

namespace {

Vector belief_from_transfer(const HiddenReciprocalModel& model,
                            const LoopTransferSet& transfer, int node) {
    const Matrix& cf = transfer.forward[node];
    const Matrix& cb = transfer.backward[node];
    if (!primitivity_index(cf) || !primitivity_index(cb)) {
        std::ostringstream msg;
        msg << "loop transfer matrix at node " << node << " is not primitive";
        throw DegeneracyError(msg.str());
    }
    const Vector vf = perron_pair(cf).vector;
    const Vector wf = perron_pair(cb).vector;
    Vector b = model.node_potentials[node].cwiseProduct(vf).cwiseProduct(wf);
    const double s = b.sum();
    if (!(s > 0.0)) throw DegeneracyError("steady-state belief vanished");
    return Vector(b / s);
}

}  // namespace

BeliefSet steady_state_beliefs(const HiddenReciprocalModel& model) {
    const LoopTransferSet transfer = loop_transfer_matrices(model);
    BeliefSet beliefs;
    beliefs.beliefs.reserve(model.num_nodes);
    for (int k = 0; k < model.num_nodes; ++k)
        beliefs.beliefs.push_back(belief_from_transfer(model, transfer, k));
    return beliefs;
}

Vector steady_state_belief(const HiddenReciprocalModel& model, int node) {
    return belief_from_transfer(model, loop_transfer_matrices(model), node);
}

namespace serial {

MessageSet bp_sweep(const HiddenReciprocalModel& model, const MessageSet& msgs,
                    bool normalize) {
    require_message_shape(model, msgs);
    const int L = model.num_nodes;
    MessageSet next;
    next.forward.resize(L);
    next.backward.resize(L);
    next.iteration = msgs.iteration + 1;
    for (int k = 0; k < L; ++k) {
        next.forward[k] =
            finish_message(forward_update(model, msgs, k), normalize, model.prev(k), k);
        next.backward[k] =
            finish_message(backward_update(model, msgs, k), normalize, model.next(k), k);
    }
    return next;
}

}  // namespace serial
}  // namespace recip
