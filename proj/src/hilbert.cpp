#include "recip/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>

#include "recip/errors.hpp"

namespace recip {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_size(const Vector& x, const Vector& y) {
    if (x.size() != y.size() || x.size() == 0)
        throw ValidationError("hilbert_distance: size mismatch or empty input");
}

// log-ratio extrema; inputs must be strictly positive
double log_ratio_spread(const Vector& x, const Vector& y) {
    double max_log = -kInf, min_log = kInf;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double r = std::log(x(i)) - std::log(y(i));
        max_log = std::max(max_log, r);
        min_log = std::min(min_log, r);
    }
    return max_log - min_log;
}

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

BoolMatrix bool_multiply(const BoolMatrix& a, const BoolMatrix& b) {
    const Eigen::Index n = a.rows();
    BoolMatrix c = BoolMatrix::Constant(n, n, false);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            if (a(i, k))
                for (Eigen::Index j = 0; j < n; ++j)
                    if (b(k, j)) c(i, j) = true;
    return c;
}

bool all_true(const BoolMatrix& a) { return a.all(); }

// boolean power via binary expansion over precomputed squarings
BoolMatrix bool_power(const std::vector<BoolMatrix>& squares, int exponent) {
    const Eigen::Index n = squares[0].rows();
    BoolMatrix acc = BoolMatrix::Constant(n, n, false);
    for (Eigen::Index i = 0; i < n; ++i) acc(i, i) = true;
    for (std::size_t bit = 0; exponent > 0; ++bit, exponent >>= 1)
        if (exponent & 1) acc = bool_multiply(acc, squares[bit]);
    return acc;
}

}  // namespace

double hilbert_distance(const Vector& x, const Vector& y) {
    require_same_size(x, y);
    if (!(x.array() > 0.0).all() || !(y.array() > 0.0).all())
        throw DegeneracyError("hilbert_distance: input on the cone boundary");
    return log_ratio_spread(x, y);
}

double hilbert_distance_support(const Vector& x, const Vector& y) {
    require_same_size(x, y);
    bool any = false;
    double max_log = -kInf, min_log = kInf;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const bool px = x(i) > 0.0, py = y(i) > 0.0;
        if (px != py) return kInf;
        if (!px) continue;
        any = true;
        const double r = std::log(x(i)) - std::log(y(i));
        max_log = std::max(max_log, r);
        min_log = std::min(min_log, r);
    }
    return any ? max_log - min_log : kInf;
}

double hilbert_distance_psd(const Matrix& X, const Matrix& Y) {
    if (X.rows() != X.cols() || Y.rows() != Y.cols() || X.rows() != Y.rows())
        throw ValidationError("hilbert_distance_psd: dimension mismatch");
    const double scale = std::max({1.0, X.cwiseAbs().maxCoeff(), Y.cwiseAbs().maxCoeff()});
    if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale ||
        (Y - Y.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ValidationError("hilbert_distance_psd: input not symmetric");
    if (Eigen::LLT<Matrix>(X).info() != Eigen::Success ||
        Eigen::LLT<Matrix>(Y).info() != Eigen::Success)
        throw DegeneracyError("hilbert_distance_psd: input not positive definite");

    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(X, Y, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw DegeneracyError("hilbert_distance_psd: generalized eigensolver failed");
    const Vector lambda = solver.eigenvalues();
    return std::log(lambda.maxCoeff()) - std::log(lambda.minCoeff());
}

double projective_diameter(const Matrix& A) {
    if (A.rows() != A.cols() || A.rows() == 0)
        throw ValidationError("projective_diameter: matrix must be square and nonempty");
    if (!(A.array() > 0.0).all())
        throw ValidationError("projective_diameter: matrix must be strictly positive");
    const Eigen::Index n = A.rows();
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index p = 0; p < n; ++p)
                for (Eigen::Index q = 0; q < n; ++q) {
                    const double v = std::log((A(i, j) * A(p, q)) / (A(i, q) * A(p, j)));
                    best = std::max(best, v);
                }
    return best;
}

std::optional<int> primitivity_index(const Matrix& A) {
    if (A.rows() != A.cols() || A.rows() == 0)
        throw ValidationError("primitivity_index: matrix must be square and nonempty");
    if ((A.array() < 0.0).any())
        throw ValidationError("primitivity_index: matrix has a negative entry");

    const Eigen::Index n = A.rows();
    BoolMatrix pattern(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) pattern(i, j) = A(i, j) > 0.0;

    if (all_true(pattern)) return 1;
    // a zero row or column can never fill in
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!pattern.row(i).any() || !pattern.col(i).any()) return std::nullopt;
    }

    // wielandt bound on the index of any primitive matrix
    const int bound = static_cast<int>((n - 1) * (n - 1) + 1);

    // positivity of powers is monotone once rows/columns are nonzero, so
    // bracket with squarings then binary-search using the stored squares
    std::vector<BoolMatrix> squares{pattern};
    int exponent = 1;
    while (exponent < bound && !all_true(squares.back())) {
        squares.push_back(bool_multiply(squares.back(), squares.back()));
        exponent *= 2;
    }
    // A^e with e >= bound still has zeros: not primitive
    if (!all_true(squares.back())) return std::nullopt;

    int lo = exponent / 2 + 1, hi = exponent;  // A^(exponent/2) not positive, A^exponent is
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (all_true(bool_power(squares, mid))) hi = mid;
        else lo = mid + 1;
    }
    return lo <= bound ? std::optional<int>(lo) : std::nullopt;
}

ContractionCertificate contraction_certificate(const Matrix& A) {
    if ((A.array() < 0.0).any())
        throw ValidationError("contraction_certificate: matrix has a negative entry");
    ContractionCertificate cert;
    cert.primitivity_index = primitivity_index(A);
    if ((A.array() > 0.0).all()) {
        cert.projective_diameter = projective_diameter(A);
        cert.contraction_ratio = std::tanh(0.25 * cert.projective_diameter);
    } else {
        cert.projective_diameter = kInf;
        cert.contraction_ratio = 1.0;
    }
    return cert;
}

PowerIterationResult power_iteration(const Matrix& A, const Vector& x0, double tol,
                                     int max_iters) {
    if (!primitivity_index(A))
        throw ValidationError("power_iteration: matrix is not primitive");
    if (x0.size() != A.rows() || (x0.array() < 0.0).any() || !(x0.array() > 0.0).any())
        throw ValidationError("power_iteration: x0 must be nonnegative and nonzero");

    PowerIterationResult result;
    Vector x = x0 / x0.sum();
    for (int t = 0; t < max_iters; ++t) {
        Vector y = A * x;
        const double s = y.sum();
        if (!(s > 0.0)) throw DegeneracyError("power_iteration: iterate vanished");
        y /= s;
        const double d = hilbert_distance_support(x, y);
        result.distance_trace.push_back(d);
        x = std::move(y);
        result.iterations = t + 1;
        if (d < tol) {
            result.converged = true;
            break;
        }
    }
    result.perron_vector = x;
    result.perron_value = x.dot(A * x) / x.dot(x);
    return result;
}

PerronPair perron_pair(const Matrix& A) {
    if (A.rows() != A.cols() || A.rows() == 0)
        throw ValidationError("perron_pair: matrix must be square and nonempty");
    Eigen::EigenSolver<Matrix> solver(A);
    if (solver.info() != Eigen::Success)
        throw DegeneracyError("perron_pair: eigensolver failed");

    const Eigen::VectorXcd values = solver.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i) {
        const double mi = std::abs(values(i)), mb = std::abs(values(best));
        if (mi > mb || (mi == mb && values(i).real() > values(best).real())) best = i;
    }
    Eigen::VectorXcd v = solver.eigenvectors().col(best);
    Vector real = v.real();
    if (real.sum() < 0.0) real = -real;
    if (!(real.array() > 0.0).all())
        throw DegeneracyError("perron_pair: leading eigenvector is not positive "
                              "(matrix not primitive?)");
    PerronPair pair;
    pair.value = values(best).real();
    pair.vector = real / real.sum();
    return pair;
}

}  // namespace recip
