#pragma once

#include <Eigen/Dense>
#include <vector>

#include "recip/model.hpp"

namespace recip {

/// Full eigen-analysis of a loop transfer matrix. Eigenvalues are sorted by
/// decreasing magnitude (ties by decreasing real part); eigenvector columns
/// carry a pinned normalization: unit Euclidean norm with the largest-modulus
/// component rotated to the positive real axis.
struct SpectralReport {
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd eigenvectors;      // S
    Eigen::MatrixXcd eigenvectors_inv;  // S^-1, empty when flagged defective
    double perron_value = 0.0;          // lambda_1
    double beta = 0.0;                  // Re(lambda_1 / sum of eigenvalues)
    double beta_imag = 0.0;             // must vanish: the trace is real
    double subdominant_ratio = 0.0;     // |lambda_2| / lambda_1
    bool primitive = false;
    bool diagonalizable = true;         // false when S is numerically singular
};

SpectralReport spectral_report(const Matrix& C);

enum class LyapunovVerdict { Certified, Refuted, NotFound };

/// The four equivalent convergence conditions for a nonnegative iteration
/// matrix, each evaluated independently with its witness.
struct StabilityReport {
    double spectral_radius = 0.0;
    bool radius_lt_one = false;                // (i)
    std::vector<double> leading_minors;        // of I - C
    bool minors_positive = false;              // (ii)
    std::vector<double> charpoly_coeffs;       // det(sI - (C - I)), ascending, monic
    bool charpoly_positive = false;            // (iii)
    LyapunovVerdict lyapunov = LyapunovVerdict::NotFound;  // (iv)
    Vector lyapunov_diagonal;                  // P when certified
    double lyapunov_max_eig = 0.0;             // lambda_max(C^T P C - P) when certified
    // true when every decided verdict matches; a NotFound Lyapunov never
    // counts as disagreement
    bool conditions_agree = false;
};

StabilityReport stability_report(const Matrix& C);

/// Decomposition of the exact marginal into the BP belief and a residual
/// term weighted by the Perron-eigenvalue mass ratio beta. q is computed two
/// ways: from the printed spectral formula and as the residual
/// (p - beta b) / (1 - beta); their discrepancy is reported, not resolved.
struct AccuracyReport {
    int node = 0;
    double beta = 0.0;
    double beta_imag = 0.0;
    double subdominant_ratio = 0.0;
    Vector belief;               // BP steady state b_k
    Vector exact;                // transfer-oracle marginal p_k
    Vector q_residual;
    Vector q_printed;            // empty when the decomposition is withheld
    double reconstruction_error = 0.0;  // |beta b + (1-beta) q_residual - p|_inf
    double q_discrepancy = 0.0;         // |q_printed - q_residual|_inf, NaN when withheld
    bool beta_degenerate = false;       // beta == 1: residual undefined
    bool diagonalizable = true;
};

AccuracyReport accuracy_decomposition(const HiddenReciprocalModel& model, int node);

/// Exact local correction for binary alphabets:
/// p(x) = (lambda_1 b(x) + lambda_2 (1 - b(x))) / (lambda_1 + lambda_2).
struct BinaryCorrection {
    Vector corrected;
    Vector belief;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double subdominant_ratio = 0.0;  // r = lambda_2 / lambda_1
};

BinaryCorrection binary_correction(const HiddenReciprocalModel& model, int node);

}  // namespace recip
