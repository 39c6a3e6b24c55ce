#pragma once

#include <optional>
#include <vector>

#include "recip/model.hpp"

namespace recip {

/// Hilbert projective distance on the positive orthant:
/// log(max_i(x_i/y_i) / min_i(x_i/y_i)). Both vectors must be entrywise
/// strictly positive; boundary input raises DegeneracyError.
double hilbert_distance(const Vector& x, const Vector& y);

/// Variant used for convergence traces: +infinity when the supports differ
/// or either vector is all-zero, otherwise the distance on the common
/// support face.
double hilbert_distance_support(const Vector& x, const Vector& y);

/// Hilbert distance on the positive-definite cone:
/// log(lambda_max(X Y^-1) / lambda_min(X Y^-1)), computed through the
/// symmetric-definite generalized eigenproblem rather than explicit
/// inversion.
double hilbert_distance_psd(const Matrix& X, const Matrix& Y);

/// Birkhoff projective diameter of a strictly positive matrix:
/// max over (i,j,p,q) of log(a_ij a_pq / (a_iq a_pj)).
double projective_diameter(const Matrix& A);

/// Smallest h with A^h entrywise positive, searched on the zero pattern by
/// boolean squaring up to the Wielandt bound (D-1)^2 + 1; nullopt when A is
/// not primitive.
std::optional<int> primitivity_index(const Matrix& A);

struct ContractionCertificate {
    double projective_diameter = 0.0;       // +infinity when A has zero entries
    double contraction_ratio = 0.0;         // tanh(diameter / 4); 1 when infinite
    std::optional<int> primitivity_index;   // nullopt when not primitive
};

/// Certificate for a nonnegative matrix: strict positivity yields the finite
/// diameter and the Birkhoff ratio tanh(diameter/4); zero entries yield an
/// infinite diameter and ratio 1 (weak contraction only).
ContractionCertificate contraction_certificate(const Matrix& A);

struct PowerIterationResult {
    Vector perron_vector;               // L1-normalized positive direction
    double perron_value = 0.0;          // Rayleigh-quotient estimate
    std::vector<double> distance_trace; // Hilbert distance per step, may start at +inf
    bool converged = false;
    int iterations = 0;
};

/// Normalized power iteration x <- Ax stopping when the Hilbert distance
/// between successive iterates drops below tol. Requires A primitive
/// (checked) and x0 nonnegative, nonzero. Exhausting max_iters returns the
/// partial trace with converged = false.
PowerIterationResult power_iteration(const Matrix& A, const Vector& x0,
                                     double tol = 1e-12, int max_iters = 10000);

struct PerronPair {
    double value = 0.0;
    Vector vector;  // L1-normalized, entrywise positive
};

/// Perron eigenpair of a primitive nonnegative matrix via dense
/// eigendecomposition (independent of the power-iteration path).
PerronPair perron_pair(const Matrix& A);

}  // namespace recip
