#include "recip/structure.hpp"

#include <algorithm>
#include <cmath>

#include "recip/errors.hpp"

namespace recip {
namespace {

std::size_t pow_size(int base, std::size_t exp) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < exp; ++i) n *= static_cast<std::size_t>(base);
    return n;
}

bool disjoint_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return both.empty();
}

std::vector<int> sorted_copy(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::vector<double> marginalize(const JointTable& table, const std::vector<int>& nodes) {
    const int D = table.alphabet_size;
    const int L = table.num_nodes;
    const std::size_t cells = pow_size(D, nodes.size());

    std::vector<int> rest;
    for (int k = 0; k < L; ++k)
        if (!std::binary_search(nodes.begin(), nodes.end(), k)) rest.push_back(k);
    const std::size_t rest_cells = pow_size(D, rest.size());

    // strides of each node in the full table index (node 0 fastest)
    std::vector<std::size_t> stride(L);
    std::size_t s = 1;
    for (int k = 0; k < L; ++k) {
        stride[k] = s;
        s *= static_cast<std::size_t>(D);
    }

    std::vector<double> out(cells, 0.0);
    // gather per output cell: no write races, fixed ascending summation order
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(cells); ++c) {
        std::size_t base = 0;
        std::size_t rem = static_cast<std::size_t>(c);
        for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
            base += (rem % D) * stride[nodes[i]];
            rem /= D;
        }
        double acc = 0.0;
        for (std::size_t r = 0; r < rest_cells; ++r) {
            std::size_t idx = base;
            std::size_t rr = r;
            for (int i = 0; i < static_cast<int>(rest.size()); ++i) {
                idx += (rr % D) * stride[rest[i]];
                rr /= D;
            }
            acc += table.probabilities[idx];
        }
        out[static_cast<std::size_t>(c)] = acc;
    }
    return out;
}

bool ci_test(const JointTable& table, const std::vector<int>& A,
             const std::vector<int>& B, const std::vector<int>& C, double tol) {
    const int D = table.alphabet_size;
    const std::vector<int> a_nodes = sorted_copy(A);
    const std::vector<int> b_nodes = sorted_copy(B);
    const std::vector<int> c_nodes = sorted_copy(C);
    if (!disjoint_sorted(a_nodes, b_nodes) || !disjoint_sorted(a_nodes, c_nodes) ||
        !disjoint_sorted(b_nodes, c_nodes))
        throw ValidationError("ci_test: A, B, C must be disjoint");
    if (a_nodes.empty() || b_nodes.empty()) return true;

    // marginal over A ++ B ++ C, in that listing order (A fastest)
    std::vector<int> all = a_nodes;
    all.insert(all.end(), b_nodes.begin(), b_nodes.end());
    all.insert(all.end(), c_nodes.begin(), c_nodes.end());
    std::vector<int> order = all;
    std::sort(order.begin(), order.end());
    const std::vector<double> m_sorted = marginalize(table, order);

    const std::size_t na = pow_size(D, a_nodes.size());
    const std::size_t nb = pow_size(D, b_nodes.size());
    const std::size_t nc = pow_size(D, c_nodes.size());

    // remap the sorted-order marginal into (a, b, c) blocks
    std::vector<std::size_t> stride_sorted(order.size());
    std::size_t s = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        stride_sorted[i] = s;
        s *= static_cast<std::size_t>(D);
    }
    auto stride_of = [&](int node) {
        const auto it = std::lower_bound(order.begin(), order.end(), node);
        return stride_sorted[static_cast<std::size_t>(it - order.begin())];
    };
    std::vector<double> m(na * nb * nc);
    for (std::size_t ic = 0; ic < nc; ++ic)
        for (std::size_t ib = 0; ib < nb; ++ib)
            for (std::size_t ia = 0; ia < na; ++ia) {
                std::size_t idx = 0;
                std::size_t rem = ia;
                for (int v : a_nodes) { idx += (rem % D) * stride_of(v); rem /= D; }
                rem = ib;
                for (int v : b_nodes) { idx += (rem % D) * stride_of(v); rem /= D; }
                rem = ic;
                for (int v : c_nodes) { idx += (rem % D) * stride_of(v); rem /= D; }
                m[ia + na * (ib + nb * ic)] = m_sorted[idx];
            }

    for (std::size_t ic = 0; ic < nc; ++ic) {
        const double* slab = m.data() + na * nb * ic;
        double pc = 0.0;
        for (std::size_t i = 0; i < na * nb; ++i) pc += slab[i];
        if (!(pc > 0.0)) continue;

        std::vector<double> pa(na, 0.0), pb(nb, 0.0);
        for (std::size_t ib = 0; ib < nb; ++ib)
            for (std::size_t ia = 0; ia < na; ++ia) {
                const double p = slab[ia + na * ib] / pc;
                pa[ia] += p;
                pb[ib] += p;
            }
        for (std::size_t ib = 0; ib < nb; ++ib)
            for (std::size_t ia = 0; ia < na; ++ia) {
                const double p = slab[ia + na * ib] / pc;
                if (std::abs(p - pa[ia] * pb[ib]) > tol) return false;
            }
    }
    return true;
}

MarkovBlanketResult markov_blanket(const JointTable& table, int k, double tol) {
    const int L = table.num_nodes;
    MarkovBlanketResult result;
    result.table_positive =
        std::all_of(table.probabilities.begin(), table.probabilities.end(),
                    [](double p) { return p > 0.0; });

    std::vector<int> blanket;
    for (int i = 0; i < L; ++i)
        if (i != k) blanket.push_back(i);

    auto separated_by = [&](const std::vector<int>& u) {
        std::vector<int> rest;
        for (int i = 0; i < L; ++i)
            if (i != k && !std::binary_search(u.begin(), u.end(), i)) rest.push_back(i);
        if (rest.empty()) return true;
        return ci_test(table, {k}, rest, u, tol);
    };

    // shrink until no single deletion preserves the independence; the failed
    // re-tests on the final pass certify minimality
    bool shrunk = true;
    while (shrunk) {
        shrunk = false;
        for (std::size_t i = 0; i < blanket.size(); ++i) {
            std::vector<int> candidate = blanket;
            candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i));
            if (separated_by(candidate)) {
                blanket = std::move(candidate);
                shrunk = true;
                break;
            }
        }
    }
    result.blanket = std::move(blanket);
    return result;
}

UndirectedGraphSkeleton minimal_imap(const JointTable& table, ImapMethod method,
                                     double tol) {
    const int L = table.num_nodes;
    UndirectedGraphSkeleton g;
    g.num_nodes = L;

    if (method == ImapMethod::Pairwise) {
        for (int i = 0; i < L; ++i)
            for (int j = i + 1; j < L; ++j) {
                std::vector<int> rest;
                for (int v = 0; v < L; ++v)
                    if (v != i && v != j) rest.push_back(v);
                if (!ci_test(table, {i}, {j}, rest, tol)) g.add_edge(i, j);
            }
        return g;
    }

    std::vector<std::vector<int>> blankets(L);
    for (int i = 0; i < L; ++i) blankets[i] = markov_blanket(table, i, tol).blanket;
    for (int i = 0; i < L; ++i)
        for (int j : blankets[i]) {
            const bool mutual = std::binary_search(blankets[j].begin(), blankets[j].end(), i);
            if (!mutual)
                throw DegeneracyError("minimal_imap: asymmetric Markov-blanket relation, "
                                      "numerical instability suspected");
            g.add_edge(i, j);
        }
    return g;
}

UndirectedGraphSkeleton minimal_imap_both(const JointTable& table, double tol) {
    UndirectedGraphSkeleton pairwise = minimal_imap(table, ImapMethod::Pairwise, tol);
    UndirectedGraphSkeleton blanket = minimal_imap(table, ImapMethod::Blanket, tol);
    if (pairwise.edges != blanket.edges)
        throw DegeneracyError("minimal_imap: pairwise and blanket constructions disagree");
    return pairwise;
}

PmapReport pmap_check_reciprocal(const JointTable& table, double tol) {
    const int L = table.num_nodes;
    if (L < 4)
        throw ValidationError("pmap_check_reciprocal requires num_nodes >= 4");

    PmapReport report;
    for (int t0 = 0; t0 < L; ++t0) {
        for (int t1 = 0; t1 < L; ++t1) {
            if (t0 == t1) continue;
            IntervalCheck check;
            check.t0 = t0;
            check.t1 = t1;
            for (int v = (t0 + 1) % L; v != t1; v = (v + 1) % L) check.interior.push_back(v);
            for (int v = (t1 + 1) % L; v != t0; v = (v + 1) % L) check.exterior.push_back(v);
            if (check.interior.empty() || check.exterior.empty()) continue;
            check.passed = ci_test(table, check.interior, check.exterior, {t0, t1}, tol);
            report.all_passed = report.all_passed && check.passed;
            report.checks.push_back(std::move(check));
        }
    }
    return report;
}

bool is_chordal(const UndirectedGraphSkeleton& g) {
    const int n = g.num_nodes;
    std::vector<std::set<int>> adj(n);
    for (const auto& [i, j] : g.edges) {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    std::vector<bool> removed(n, false);
    for (int round = 0; round < n; ++round) {
        int simplicial = -1;
        for (int v = 0; v < n && simplicial < 0; ++v) {
            if (removed[v]) continue;
            bool clique = true;
            for (auto it = adj[v].begin(); it != adj[v].end() && clique; ++it)
                for (auto jt = std::next(it); jt != adj[v].end() && clique; ++jt)
                    if (!adj[*it].count(*jt)) clique = false;
            if (clique) simplicial = v;
        }
        if (simplicial < 0) return false;
        removed[simplicial] = true;
        for (int u : adj[simplicial]) adj[u].erase(simplicial);
        adj[simplicial].clear();
    }
    return true;
}

UndirectedGraphSkeleton cycle_skeleton(int num_nodes) {
    UndirectedGraphSkeleton g;
    g.num_nodes = num_nodes;
    for (int k = 0; k < num_nodes; ++k) g.add_edge(k, (k + 1) % num_nodes);
    return g;
}

FactorGraph build_factor_graph(const HiddenReciprocalModel& model, bool include_unary) {
    FactorGraph fg;
    fg.num_variables = model.num_nodes;
    for (int k = 0; k < model.num_nodes; ++k)
        fg.factors.push_back({{k, model.next(k)}, false, k});
    if (include_unary)
        for (int k = 0; k < model.num_nodes; ++k) fg.factors.push_back({{k}, true, k});
    return fg;
}

}  // namespace recip
