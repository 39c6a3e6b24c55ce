#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace recip::par {

// Reductions run over fixed-size blocks combined by a pairwise tree. The
// block layout depends only on the problem size, never on the worker count,
// so results are bit-identical for any number of OpenMP threads.

inline constexpr std::size_t kBlockSize = 4096;

inline std::size_t num_blocks(std::size_t n) {
    return n == 0 ? 0 : (n + kBlockSize - 1) / kBlockSize;
}

// In-place pairwise tree combine of per-block partials. `combine(a, b)`
// folds partial b into partial a.
template <typename T, typename Combine>
T tree_combine(std::vector<T>& partials, Combine&& combine) {
    if (partials.empty()) return T{};
    for (std::size_t stride = 1; stride < partials.size(); stride *= 2) {
        for (std::size_t i = 0; i + stride < partials.size(); i += 2 * stride) {
            combine(partials[i], partials[i + stride]);
        }
    }
    return partials[0];
}

// Sum of term(i) for i in [0, n), blocked and tree-combined.
template <typename Term>
double blocked_sum(std::size_t n, Term&& term) {
    const std::size_t nb = num_blocks(n);
    if (nb == 0) return 0.0;
    std::vector<double> partial(nb, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlockSize;
        const std::size_t hi = lo + kBlockSize < n ? lo + kBlockSize : n;
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[static_cast<std::size_t>(b)] = acc;
    }
    return tree_combine(partial, [](double& a, double b) { a += b; });
}

// Serial twin of blocked_sum with the identical block/tree order.
template <typename Term>
double blocked_sum_serial(std::size_t n, Term&& term) {
    const std::size_t nb = num_blocks(n);
    if (nb == 0) return 0.0;
    std::vector<double> partial(nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = b * kBlockSize;
        const std::size_t hi = lo + kBlockSize < n ? lo + kBlockSize : n;
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[b] = acc;
    }
    return tree_combine(partial, [](double& a, double b) { a += b; });
}

}  // namespace recip::par
