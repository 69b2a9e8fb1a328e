#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "pseudonet/sym_matrix.hpp"

namespace pseudonet {

// Penalized pseudolikelihood problem over symmetric matrices with positive
// diagonal:
//
//   f(W) = -sum_i log|W_ii| + (n/2) Tr(S W^2)
//          + lambda1 * sum_{i!=j} |W_ij| + (lambda2/2) ||W||_F^2
//
// with S the sample covariance (1/n) X^T X. The smooth part g is
// everything except the l1 term; its gradient is
//
//   grad g(W) = -diag(1/W_ii) + (n/2)(SW + WS) + lambda2 * W.
//
// lambda2 > 0 makes g strongly convex, hence a unique minimizer; lambda2 = 0
// recovers the unregularized baseline (solutions may be non-unique).
struct Problem {
    Problem(SymMatrix s, long n, double lambda1, double lambda2);

    SymMatrix s;
    long n;
    double lambda1;
    double lambda2;
};

struct SolverOptions {
    double epsilon = 1e-8;   // stop when ||grad g + z||_F / ||W||_F <= epsilon
    long max_iter = 50000;
    double tau_init = 1.0;
    double beta = 0.5;       // step shrink factor in the backtracking line search
    bool record_trace = false;
    // Diagnostic hook, called with each accepted iterate.
    std::function<void(const SymMatrix&)> iterate_observer;
};

struct Estimate {
    SymMatrix omega;
    long iterations = 0;
    double kkt_residual = 0.0;
    double objective_value = 0.0;
    bool converged = false;       // false means max_iter was hit; omega is the best iterate
    bool unique = true;           // lambda2 > 0 guarantees uniqueness
    std::vector<double> objective_trace;  // filled when record_trace is on

    Estimate() : omega(0) {}
};

struct BacktrackResult {
    SymMatrix omega_next;
    double tau;
};

double objective(const Problem& prob, const SymMatrix& omega);

// Symmetric gradient of the smooth part; throws ZeroDiagonal when any
// W_ii == 0.
SymMatrix smooth_gradient(const Problem& prob, const SymMatrix& omega);

// Soft-thresholds off-diagonal entries at level t >= 0; the diagonal passes
// through unchanged (it is not l1-penalized).
SymMatrix prox_offdiag_l1(const SymMatrix& v, double t);

// One proximal gradient step with backtracking: tries tau = tau_init * beta^k
// for k = 0,1,... and returns the first candidate
//   W~ = prox(W - tau grad, lambda1 tau)
// whose diagonal stays strictly positive and which satisfies the sufficient
// decrease condition
//   g(W~) <= g(W) + <grad, W~ - W> + ||W~ - W||_F^2 / (2 tau).
// Throws LineSearchFailed once tau < 1e-14.
BacktrackResult backtracking_step(const Problem& prob, const SymMatrix& omega,
                                  const SymMatrix& grad, const SolverOptions& opts);

// Stationarity residual ||grad g(W) + z||_F / ||W||_F with z the
// minimum-norm subgradient of the l1 term at W.
double kkt_residual(const Problem& prob, const SymMatrix& omega);

// Proximal gradient descent. Default start is the closed-form solution for
// diagonal S, diag(1/sqrt(n S_ii + lambda2)), falling back to the identity
// when any S_ii = 0. A supplied start must have a strictly positive
// diagonal. On convergence kkt_residual <= epsilon; when max_iter is hit
// the best iterate is returned with converged = false.
Estimate solve(const Problem& prob, const SolverOptions& opts = {},
               const std::optional<SymMatrix>& omega0 = std::nullopt);

// Step-size curvature bound 1/ell^2 + n ||S||_2 + lambda2, with ell a lower
// bound on the diagonal entries encountered along the iterate path.
double lipschitz_bound(const Problem& prob, double diag_lower_bound);

// Baseline at lambda2 = 0 (throws std::invalid_argument otherwise); result
// is flagged as possibly non-unique.
Estimate solve_concord_baseline(const Problem& prob, const SolverOptions& opts = {});

// Default start point, exposed because the tuning-grid code anchors its
// lambda1 ladder at this estimate.
SymMatrix diagonal_start(const SymMatrix& s, long n, double lambda2);

namespace detail {

// Shared engine behind solve() and the restricted solves used by the
// screening rules. `mask` is a 0/1 array over coordinates; zero entries are
// frozen at zero (the diagonal must be all ones in any mask).
Estimate solve_masked(const Problem& prob, const SolverOptions& opts,
                      const std::optional<SymMatrix>& omega0, const Eigen::ArrayXXd* mask,
                      const std::function<void(const SymMatrix&)>* observer = nullptr);

}  // namespace detail

}  // namespace pseudonet
