#pragma once

#include <Eigen/Dense>
#include <vector>

namespace pseudonet {

// Dense symmetric matrix in double precision. Writes mirror across the
// diagonal so symmetry holds exactly, not just within tolerance; every
// operation downstream relies on that.
class SymMatrix {
  public:
    explicit SymMatrix(Eigen::Index dim) : mat_(Eigen::MatrixXd::Zero(dim, dim)) {}

    static SymMatrix identity(Eigen::Index dim);
    static SymMatrix diagonal(const Eigen::VectorXd& d);

    // Checks exact symmetry of the input; throws std::invalid_argument
    // naming the first offending pair otherwise.
    static SymMatrix from_dense(Eigen::MatrixXd m);

    // Trusted constructor for results whose symmetry is exact by
    // construction (e.g. P + P^T). Asserted in debug builds.
    static SymMatrix from_symmetric_unchecked(Eigen::MatrixXd m);

    Eigen::Index dim() const { return mat_.rows(); }

    double operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }

    void set(Eigen::Index i, Eigen::Index j, double v) {
        mat_(i, j) = v;
        mat_(j, i) = v;
    }

    const Eigen::MatrixXd& mat() const { return mat_; }

  private:
    Eigen::MatrixXd mat_;
};

// Observation matrix, n samples by p variables, plus a flag recording
// whether columns have been centered.
class DataMatrix {
  public:
    explicit DataMatrix(Eigen::MatrixXd values, bool centered = false)
        : mat_(std::move(values)), centered_(centered) {}

    Eigen::Index n() const { return mat_.rows(); }
    Eigen::Index p() const { return mat_.cols(); }
    bool centered() const { return centered_; }
    const Eigen::MatrixXd& mat() const { return mat_; }

  private:
    Eigen::MatrixXd mat_;
    bool centered_;
};

struct NormSet {
    double frobenius = 0.0;
    double frobenius_squared = 0.0;
    double op2 = 0.0;
    double elem_l1 = 0.0;
    double elem_linf = 0.0;
};

// Subtracts column means; idempotent up to roundoff.
DataMatrix center_columns(const DataMatrix& x);

// (1/n) X^T X. Warns on stderr when called with uncentered data but
// computes the product as defined regardless.
SymMatrix sample_covariance(const DataMatrix& x);

// Strictly-lower-triangle entries in column-major order, i.e. unordered
// pairs (2,1),(3,1),...,(p,1),(3,2),... Length p(p-1)/2.
std::vector<double> half_vectorize(const SymMatrix& m);

// Number of entries with |v| > tol.
long cardinality(const std::vector<double>& v, double tol);

// Spectral norm of a symmetric matrix: power iteration on M^2 (immune to
// +/- eigenvalue ties), deterministic seeded start, relative tolerance
// 1e-8, at most 10000 iterations.
double operator_norm_sym(const Eigen::MatrixXd& m);

NormSet matrix_norms(const SymMatrix& m);

// Lower-triangular Cholesky factor; throws NotPositiveDefinite when a
// pivot is not strictly positive.
Eigen::MatrixXd cholesky_spd(const SymMatrix& m);

// Inverse of an SPD matrix via its Cholesky factor.
SymMatrix spd_inverse(const SymMatrix& m);

}  // namespace pseudonet
