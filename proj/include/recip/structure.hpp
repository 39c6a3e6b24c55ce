#pragma once

#include <set>
#include <utility>
#include <vector>

#include "recip/exact.hpp"
#include "recip/model.hpp"

namespace recip {

struct UndirectedGraphSkeleton {
    int num_nodes = 0;
    std::set<std::pair<int, int>> edges;  // normalized (i < j), no self-loops

    void add_edge(int i, int j) {
        if (i != j) edges.insert({std::min(i, j), std::max(i, j)});
    }
    bool has_edge(int i, int j) const {
        return edges.count({std::min(i, j), std::max(i, j)}) > 0;
    }
};

/// Marginal of the table onto `nodes` (sorted ascending); the result is
/// indexed mixed-radix with the first listed node fastest.
std::vector<double> marginalize(const JointTable& table, const std::vector<int>& nodes);

/// True iff X_A and X_B are conditionally independent given X_C at `tol`:
/// for every assignment of C with positive marginal, the max-abs difference
/// p(A,B|C) - p(A|C) p(B|C) stays within tol. Symmetric in A and B.
bool ci_test(const JointTable& table, const std::vector<int>& A,
             const std::vector<int>& B, const std::vector<int>& C, double tol = 1e-9);

struct MarkovBlanketResult {
    std::vector<int> blanket;   // sorted
    bool table_positive = true; // uniqueness only guaranteed for positive tables
};

/// Minimal node set U with X_k independent of the rest given U; minimality
/// is certified by re-testing every single-element deletion.
MarkovBlanketResult markov_blanket(const JointTable& table, int k, double tol = 1e-9);

enum class ImapMethod { Pairwise, Blanket };

/// Minimal I-map skeleton. Pairwise: edge (i,j) iff the pairwise CI given
/// all other nodes fails. Blanket: edge (i,j) iff j lies in the Markov
/// blanket of i (asymmetry of that relation raises DegeneracyError).
UndirectedGraphSkeleton minimal_imap(const JointTable& table, ImapMethod method,
                                     double tol = 1e-9);

/// Runs both I-map constructions and throws DegeneracyError when they
/// disagree.
UndirectedGraphSkeleton minimal_imap_both(const JointTable& table, double tol = 1e-9);

struct IntervalCheck {
    int t0 = 0;
    int t1 = 0;
    std::vector<int> interior;
    std::vector<int> exterior;
    bool passed = false;
};

struct PmapReport {
    std::vector<IntervalCheck> checks;
    bool all_passed = true;
};

/// For every cyclic interval [t0, t1] with nonempty interior and exterior,
/// tests interior independent of exterior given the endpoints. Requires
/// L >= 4 (every interval statement on a triangle is vacuous).
PmapReport pmap_check_reciprocal(const JointTable& table, double tol = 1e-9);

/// True iff every cycle longer than three has a chord, decided by perfect
/// elimination ordering search.
bool is_chordal(const UndirectedGraphSkeleton& g);

UndirectedGraphSkeleton cycle_skeleton(int num_nodes);

struct FactorGraph {
    struct Factor {
        std::vector<int> variables;
        bool unary = false;
        int index = 0;  // edge index for pairwise factors, node index for unary
    };
    int num_variables = 0;
    std::vector<Factor> factors;

    int num_incidences() const {
        int n = 0;
        for (const auto& f : factors) n += static_cast<int>(f.variables.size());
        return n;
    }
};

/// One pairwise factor per loop edge (the maximal cliques for L >= 4) plus,
/// unless suppressed, one unary factor per node potential.
FactorGraph build_factor_graph(const HiddenReciprocalModel& model,
                               bool include_unary = true);

}  // namespace recip
