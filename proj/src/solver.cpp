#include "pseudonet/solver.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pseudonet/errors.hpp"

namespace pseudonet {

namespace {

// Smooth part value given the cached product SW. Uses log|W_ii| so the
// domain is any nonzero diagonal, matching the objective's definition.
double smooth_value(const Problem& prob, const Eigen::MatrixXd& w, const Eigen::MatrixXd& sw) {
    double log_term = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const double d = w(i, i);
        if (d == 0.0) {
            std::ostringstream msg;
            msg << "objective: diagonal entry " << i << " is zero";
            throw ZeroDiagonal(msg.str());
        }
        log_term += std::log(std::abs(d));
    }
    const double trace_term = sw.cwiseProduct(w).sum();  // Tr(S W^2), W symmetric
    return -log_term + 0.5 * static_cast<double>(prob.n) * trace_term +
           0.5 * prob.lambda2 * w.squaredNorm();
}

double offdiag_l1(const Eigen::MatrixXd& w) {
    return w.cwiseAbs().sum() - w.diagonal().cwiseAbs().sum();
}

Eigen::MatrixXd gradient_from(const Problem& prob, const Eigen::MatrixXd& w,
                              const Eigen::MatrixXd& sw) {
    // (SW + (SW)^T) is exactly symmetric entry-by-entry, so the result
    // needs no re-symmetrization.
    Eigen::MatrixXd grad =
        0.5 * static_cast<double>(prob.n) * (sw + sw.transpose()) + prob.lambda2 * w;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const double d = w(i, i);
        if (d == 0.0) {
            std::ostringstream msg;
            msg << "smooth_gradient: diagonal entry " << i << " is zero";
            throw ZeroDiagonal(msg.str());
        }
        grad(i, i) -= 1.0 / d;
    }
    return grad;
}

Eigen::MatrixXd soft_threshold_offdiag(const Eigen::MatrixXd& v, double t) {
    Eigen::MatrixXd out = v;
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            if (i == j) continue;
            const double x = v(i, j);
            out(i, j) = x > t ? x - t : (x < -t ? x + t : 0.0);
        }
    }
    return out;
}

// Residual of the stationarity condition restricted to the coordinates
// allowed by `mask` (nullptr means all of them). z is the minimum-norm
// subgradient of lambda1 * ||offdiag||_1 at w.
double kkt_from(const Problem& prob, const Eigen::MatrixXd& w, const Eigen::MatrixXd& grad,
                const Eigen::ArrayXXd* mask) {
    const double l1 = prob.lambda1;
    double num = 0.0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            if (mask && (*mask)(i, j) == 0.0) continue;
            double r = grad(i, j);
            if (i != j) {
                const double x = w(i, j);
                if (x != 0.0) {
                    r += x > 0.0 ? l1 : -l1;
                } else {
                    // min-norm element: clamp -grad into [-l1, l1]
                    const double z = std::min(l1, std::max(-l1, -r));
                    r += z;
                }
            }
            num += r * r;
        }
    }
    const double denom = w.norm();
    if (denom == 0.0) throw ZeroDiagonal("kkt_residual: zero iterate");
    return std::sqrt(num) / denom;
}

struct StepOutcome {
    Eigen::MatrixXd w_next;
    Eigen::MatrixXd sw_next;
    double tau = 0.0;
};

// Backtracking proximal step. The sufficient decrease test
//   g(W~) - g(W) <= <grad, D> + ||D||_F^2 / (2 tau),  D = W~ - W,
// is evaluated in difference form, term by term:
//   log part    sum_i log1p(D_ii / W_ii)
//   trace part  Tr(S W~^2) - Tr(S W^2) = <S W~ + S W, D>
//   ridge part  ||W~||^2 - ||W||^2 = <W~ + W, D>.
// Every piece scales with D, so the comparison stays meaningful however
// small the step gets; a plain g(W~) <= g(W) + ... check drowns in the
// rounding noise of the full objective near convergence.
//
// `grad` must already be masked when solving a restricted problem;
// candidates then never leave the restricted subspace because excluded
// coordinates of w are zero and keep zero gradient.
StepOutcome backtrack_impl(const Problem& prob, const Eigen::MatrixXd& w,
                           const Eigen::MatrixXd& sw, const Eigen::MatrixXd& grad,
                           double tau_start, double beta) {
    double tau = tau_start;
    while (tau >= 1e-14) {
        Eigen::MatrixXd cand = soft_threshold_offdiag(w - tau * grad, prob.lambda1 * tau);
        if (cand.diagonal().minCoeff() > 0.0) {
            Eigen::MatrixXd delta = cand - w;
            Eigen::MatrixXd sw_cand = prob.s.mat() * cand;

            double log_diff = 0.0;
            for (Eigen::Index i = 0; i < w.rows(); ++i)
                log_diff += std::log1p(delta(i, i) / w(i, i));
            const double trace_diff = (sw_cand + sw).cwiseProduct(delta).sum();
            const double ridge_diff = (cand + w).cwiseProduct(delta).sum();
            const double lhs = -log_diff + 0.5 * static_cast<double>(prob.n) * trace_diff +
                               0.5 * prob.lambda2 * ridge_diff;

            const double linear = grad.cwiseProduct(delta).sum();
            const double quad = delta.squaredNorm() / (2.0 * tau);
            const double rhs = linear + quad;
            const double slack = 1e-12 * (std::abs(lhs) + std::abs(linear) + quad);
            if (lhs <= rhs + slack) {
                StepOutcome out;
                out.w_next = std::move(cand);
                out.sw_next = std::move(sw_cand);
                out.tau = tau;
                return out;
            }
        }
        tau *= beta;
    }
    throw LineSearchFailed("backtracking_step: step size underflow below 1e-14");
}

void validate_options(const SolverOptions& opts) {
    if (!(opts.epsilon > 0.0)) throw std::invalid_argument("solver options: epsilon must be positive");
    if (opts.max_iter < 1) throw std::invalid_argument("solver options: max_iter must be >= 1");
    if (!(opts.tau_init > 0.0)) throw std::invalid_argument("solver options: tau_init must be positive");
    if (!(opts.beta > 0.0 && opts.beta < 1.0))
        throw std::invalid_argument("solver options: beta must lie in (0,1)");
}

}  // namespace

Problem::Problem(SymMatrix s_in, long n_in, double lambda1_in, double lambda2_in)
    : s(std::move(s_in)), n(n_in), lambda1(lambda1_in), lambda2(lambda2_in) {
    if (n < 1) throw std::invalid_argument("problem: n must be >= 1");
    if (!(lambda1 > 0.0)) throw std::invalid_argument("problem: lambda1 must be positive");
    if (!(lambda2 >= 0.0)) throw std::invalid_argument("problem: lambda2 must be nonnegative");
    if (s.dim() < 1) throw std::invalid_argument("problem: S is empty");
}

double objective(const Problem& prob, const SymMatrix& omega) {
    const Eigen::MatrixXd& w = omega.mat();
    Eigen::MatrixXd sw = prob.s.mat() * w;
    return smooth_value(prob, w, sw) + prob.lambda1 * offdiag_l1(w);
}

SymMatrix smooth_gradient(const Problem& prob, const SymMatrix& omega) {
    Eigen::MatrixXd sw = prob.s.mat() * omega.mat();
    return SymMatrix::from_symmetric_unchecked(gradient_from(prob, omega.mat(), sw));
}

SymMatrix prox_offdiag_l1(const SymMatrix& v, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("prox_offdiag_l1: threshold must be nonnegative");
    return SymMatrix::from_symmetric_unchecked(soft_threshold_offdiag(v.mat(), t));
}

BacktrackResult backtracking_step(const Problem& prob, const SymMatrix& omega,
                                  const SymMatrix& grad, const SolverOptions& opts) {
    validate_options(opts);
    if (omega.mat().diagonal().minCoeff() <= 0.0)
        throw std::invalid_argument("backtracking_step: iterate needs a strictly positive diagonal");
    Eigen::MatrixXd sw = prob.s.mat() * omega.mat();
    StepOutcome out =
        backtrack_impl(prob, omega.mat(), sw, grad.mat(), opts.tau_init, opts.beta);
    return {SymMatrix::from_symmetric_unchecked(std::move(out.w_next)), out.tau};
}

double kkt_residual(const Problem& prob, const SymMatrix& omega) {
    Eigen::MatrixXd sw = prob.s.mat() * omega.mat();
    Eigen::MatrixXd grad = gradient_from(prob, omega.mat(), sw);
    return kkt_from(prob, omega.mat(), grad, nullptr);
}

SymMatrix diagonal_start(const SymMatrix& s, long n, double lambda2) {
    const Eigen::Index p = s.dim();
    bool zero_diag = false;
    for (Eigen::Index i = 0; i < p; ++i)
        if (s(i, i) == 0.0) zero_diag = true;
    if (zero_diag) return SymMatrix::identity(p);
    Eigen::VectorXd d(p);
    for (Eigen::Index i = 0; i < p; ++i)
        d[i] = 1.0 / std::sqrt(static_cast<double>(n) * s(i, i) + lambda2);
    return SymMatrix::diagonal(d);
}

namespace detail {

Estimate solve_masked(const Problem& prob, const SolverOptions& opts,
                      const std::optional<SymMatrix>& omega0, const Eigen::ArrayXXd* mask,
                      const std::function<void(const SymMatrix&)>* observer) {
    validate_options(opts);
    const Eigen::Index p = prob.s.dim();

    Eigen::MatrixXd w;
    if (omega0) {
        if (omega0->dim() != p)
            throw std::invalid_argument("solve: start point dimension mismatch");
        if (omega0->mat().diagonal().minCoeff() <= 0.0)
            throw std::invalid_argument("solve: start point needs a strictly positive diagonal");
        w = omega0->mat();
    } else {
        w = diagonal_start(prob.s, prob.n, prob.lambda2).mat();
    }
    if (mask) w = (w.array() * (*mask)).matrix();  // project a warm start onto the subspace

    Eigen::MatrixXd sw = prob.s.mat() * w;

    Estimate est;
    est.unique = prob.lambda2 > 0.0;
    if (opts.record_trace)
        est.objective_trace.push_back(smooth_value(prob, w, sw) + prob.lambda1 * offdiag_l1(w));

    Eigen::MatrixXd best_w = w;
    double best_res = std::numeric_limits<double>::infinity();
    double tau_next = opts.tau_init;

    for (long it = 0; it <= opts.max_iter; ++it) {
        Eigen::MatrixXd grad = gradient_from(prob, w, sw);
        if (mask) grad = (grad.array() * (*mask)).matrix();
        const double res = kkt_from(prob, w, grad, mask);
        if (res < best_res) {
            best_res = res;
            best_w = w;
        }
        if (res <= opts.epsilon) {
            est.objective_value = smooth_value(prob, w, sw) + prob.lambda1 * offdiag_l1(w);
            est.omega = SymMatrix::from_symmetric_unchecked(std::move(w));
            est.iterations = it;
            est.kkt_residual = res;
            est.converged = true;
            return est;
        }
        if (it == opts.max_iter) break;

        StepOutcome step = backtrack_impl(prob, w, sw, grad, tau_next, opts.beta);
        w = std::move(step.w_next);
        sw = std::move(step.sw_next);
        tau_next = std::min(opts.tau_init, step.tau / opts.beta);
#ifndef NDEBUG
        assert(w.transpose() == w);
#endif
        if (opts.record_trace)
            est.objective_trace.push_back(smooth_value(prob, w, sw) + prob.lambda1 * offdiag_l1(w));
        if (observer && *observer) (*observer)(SymMatrix::from_symmetric_unchecked(w));
    }

    Eigen::MatrixXd best_sw = prob.s.mat() * best_w;
    est.objective_value = smooth_value(prob, best_w, best_sw) + prob.lambda1 * offdiag_l1(best_w);
    est.omega = SymMatrix::from_symmetric_unchecked(std::move(best_w));
    est.iterations = opts.max_iter;
    est.kkt_residual = best_res;
    est.converged = false;
    return est;
}

}  // namespace detail

Estimate solve(const Problem& prob, const SolverOptions& opts,
               const std::optional<SymMatrix>& omega0) {
    return detail::solve_masked(prob, opts, omega0, nullptr, &opts.iterate_observer);
}

double lipschitz_bound(const Problem& prob, double diag_lower_bound) {
    if (!(diag_lower_bound > 0.0))
        throw std::invalid_argument("lipschitz_bound: diagonal lower bound must be positive");
    return 1.0 / (diag_lower_bound * diag_lower_bound) +
           static_cast<double>(prob.n) * operator_norm_sym(prob.s.mat()) + prob.lambda2;
}

Estimate solve_concord_baseline(const Problem& prob, const SolverOptions& opts) {
    if (prob.lambda2 != 0.0)
        throw std::invalid_argument("solve_concord_baseline: requires lambda2 == 0");
    Estimate est = solve(prob, opts);
    est.unique = false;
    return est;
}

}  // namespace pseudonet
