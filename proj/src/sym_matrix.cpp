#include "pseudonet/sym_matrix.hpp"

#include <cassert>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "pseudonet/errors.hpp"
#include "pseudonet/rng.hpp"

namespace pseudonet {

SymMatrix SymMatrix::identity(Eigen::Index dim) {
    SymMatrix out(dim);
    out.mat_ = Eigen::MatrixXd::Identity(dim, dim);
    return out;
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
    SymMatrix out(d.size());
    out.mat_.diagonal() = d;
    return out;
}

SymMatrix SymMatrix::from_dense(Eigen::MatrixXd m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("from_dense: matrix is not square");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
            if (m(i, j) != m(j, i)) {
                std::ostringstream msg;
                msg << "from_dense: entry (" << i << "," << j << ") = " << m(i, j)
                    << " does not match its mirror " << m(j, i);
                throw std::invalid_argument(msg.str());
            }
        }
    }
    SymMatrix out(m.rows());
    out.mat_ = std::move(m);
    return out;
}

SymMatrix SymMatrix::from_symmetric_unchecked(Eigen::MatrixXd m) {
    assert(m.rows() == m.cols());
#ifndef NDEBUG
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = j + 1; i < m.rows(); ++i) assert(m(i, j) == m(j, i));
#endif
    SymMatrix out(m.rows());
    out.mat_ = std::move(m);
    return out;
}

DataMatrix center_columns(const DataMatrix& x) {
    Eigen::MatrixXd v = x.mat();
    const Eigen::RowVectorXd means = v.colwise().mean();
    v.rowwise() -= means;
    return DataMatrix(std::move(v), true);
}

SymMatrix sample_covariance(const DataMatrix& x) {
    if (x.n() == 0) throw std::invalid_argument("sample_covariance: no rows");
    if (!x.centered())
        std::cerr << "sample_covariance: warning: data not centered, computing (1/n) X^T X as is\n";
    const double inv_n = 1.0 / static_cast<double>(x.n());
    Eigen::MatrixXd prod = x.mat().transpose() * x.mat();
    Eigen::MatrixXd s = inv_n * (0.5 * (prod + prod.transpose()));
    return SymMatrix::from_symmetric_unchecked(std::move(s));
}

std::vector<double> half_vectorize(const SymMatrix& m) {
    const Eigen::Index p = m.dim();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(p * (p - 1) / 2));
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = j + 1; i < p; ++i) out.push_back(m(i, j));
    return out;
}

long cardinality(const std::vector<double>& v, double tol) {
    long count = 0;
    for (double value : v)
        if (std::abs(value) > tol) ++count;
    return count;
}

double operator_norm_sym(const Eigen::MatrixXd& m) {
    assert(m.rows() == m.cols());
    const Eigen::Index p = m.rows();
    if (p == 0) return 0.0;
    if (p == 1) return std::abs(m(0, 0));

    Rng rng(0x5ca1ab1eULL);
    Eigen::VectorXd v(p);
    for (Eigen::Index i = 0; i < p; ++i) v[i] = rng.normal();
    v.normalize();

    double estimate = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
        Eigen::VectorXd mv = m * v;
        const double sigma = mv.norm();  // |lambda| estimate at unit v
        if (sigma == 0.0) return 0.0;
        Eigen::VectorXd mmv = m * mv;
        const double next = mmv.norm() / sigma;  // Rayleigh step on M^2
        v = mmv / mmv.norm();
        if (std::abs(next - estimate) <= 1e-8 * std::max(next, 1e-300)) return next;
        estimate = next;
    }
    return estimate;
}

NormSet matrix_norms(const SymMatrix& m) {
    NormSet out;
    out.frobenius_squared = m.mat().squaredNorm();
    out.frobenius = std::sqrt(out.frobenius_squared);
    out.op2 = operator_norm_sym(m.mat());
    out.elem_l1 = m.mat().cwiseAbs().sum();
    out.elem_linf = m.dim() == 0 ? 0.0 : m.mat().cwiseAbs().maxCoeff();
    return out;
}

Eigen::MatrixXd cholesky_spd(const SymMatrix& m) {
    const Eigen::Index p = m.dim();
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double pivot = m(j, j);
        for (Eigen::Index k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
        if (!(pivot > 0.0)) {
            std::ostringstream msg;
            msg << "cholesky_spd: pivot " << pivot << " at index " << j
                << " is not strictly positive";
            throw NotPositiveDefinite(msg.str());
        }
        lower(j, j) = std::sqrt(pivot);
        for (Eigen::Index i = j + 1; i < p; ++i) {
            double acc = m(i, j);
            for (Eigen::Index k = 0; k < j; ++k) acc -= lower(i, k) * lower(j, k);
            lower(i, j) = acc / lower(j, j);
        }
    }
    return lower;
}

SymMatrix spd_inverse(const SymMatrix& m) {
    const Eigen::MatrixXd lower = cholesky_spd(m);
    const Eigen::Index p = m.dim();
    // M^-1 = L^-T L^-1 via triangular solves against the identity.
    Eigen::MatrixXd linv = lower.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(p, p));
    Eigen::MatrixXd prod = linv.transpose() * linv;
    Eigen::MatrixXd inv = 0.5 * (prod + prod.transpose());
    return SymMatrix::from_symmetric_unchecked(std::move(inv));
}

}  // namespace pseudonet
