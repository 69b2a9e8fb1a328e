#include "pseudonet/screening.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pseudonet {

namespace {

void require_decreasing(const std::vector<double>& seq, const char* name) {
    if (seq.empty()) throw std::invalid_argument(std::string(name) + " must be nonempty");
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!(seq[i] > 0.0))
            throw std::invalid_argument(std::string(name) + " must contain positive values");
        if (i > 0 && !(seq[i] < seq[i - 1]))
            throw std::invalid_argument(std::string(name) + " must be strictly decreasing");
    }
}

}  // namespace

LambdaGrid::LambdaGrid(std::vector<double> lambda1, std::vector<double> lambda2)
    : lambda1_seq(std::move(lambda1)), lambda2_seq(std::move(lambda2)) {
    require_decreasing(lambda1_seq, "lambda1_seq");
    require_decreasing(lambda2_seq, "lambda2_seq");
}

ActiveSet::ActiveSet(std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs)
    : pairs_(std::move(pairs)) {
    for (auto& pr : pairs_) {
        if (pr.first == pr.second)
            throw std::invalid_argument("active set: diagonal entries are never tracked");
        if (pr.first > pr.second) std::swap(pr.first, pr.second);
    }
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

ActiveSet ActiveSet::all_pairs(Eigen::Index p) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    pairs.reserve(static_cast<std::size_t>(p * (p - 1) / 2));
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
    return ActiveSet(std::move(pairs));
}

void ActiveSet::insert(Eigen::Index i, Eigen::Index j) {
    if (i == j) throw std::invalid_argument("active set: diagonal entries are never tracked");
    if (i > j) std::swap(i, j);
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::make_pair(i, j));
    if (it != pairs_.end() && *it == std::make_pair(i, j)) return;
    pairs_.insert(it, {i, j});
}

bool ActiveSet::contains(Eigen::Index i, Eigen::Index j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(pairs_.begin(), pairs_.end(), std::make_pair(i, j));
}

Eigen::ArrayXXd ActiveSet::mask(Eigen::Index p) const {
    Eigen::ArrayXXd m = Eigen::ArrayXXd::Zero(p, p);
    m.matrix().diagonal().setOnes();
    for (const auto& [i, j] : pairs_) {
        if (i >= p || j >= p) throw std::invalid_argument("active set: pair out of range");
        m(i, j) = 1.0;
        m(j, i) = 1.0;
    }
    return m;
}

const PathCell& PathResult::at(std::size_t k, std::size_t l) const {
    return cells.at(l * grid.lambda1_seq.size() + k);
}

PathCell& PathResult::at(std::size_t k, std::size_t l) {
    return cells.at(l * grid.lambda1_seq.size() + k);
}

SymMatrix screening_coefficients(const Problem& prob, const SymMatrix& omega_hat) {
    if (omega_hat.dim() != prob.s.dim())
        throw std::invalid_argument("screening_coefficients: dimension mismatch");
    Eigen::MatrixXd sw = prob.s.mat() * omega_hat.mat();
    Eigen::MatrixXd c = 0.5 * static_cast<double>(prob.n) * (sw + sw.transpose()) +
                        prob.lambda2 * omega_hat.mat();
    c.diagonal().setZero();
    return SymMatrix::from_symmetric_unchecked(std::move(c));
}

ActiveSet strong_rule_filter(const SymMatrix& coeffs, double lambda1_prev, double lambda1_next) {
    if (!(lambda1_next > 0.0) || !(lambda1_prev > 0.0))
        throw std::invalid_argument("strong_rule_filter: lambda values must be positive");
    if (!(lambda1_next <= lambda1_prev))
        throw std::invalid_argument("strong_rule_filter: lambda1_next must not exceed lambda1_prev");
    const double threshold = 2.0 * lambda1_next - lambda1_prev;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> kept;
    const Eigen::Index p = coeffs.dim();
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = i + 1; j < p; ++j)
            if (!(std::abs(coeffs(i, j)) < threshold)) kept.emplace_back(i, j);
    return ActiveSet(std::move(kept));
}

Estimate solve_restricted(const Problem& prob, const ActiveSet& active, const SolverOptions& opts,
                          const std::optional<SymMatrix>& warm) {
    const Eigen::ArrayXXd mask = active.mask(prob.s.dim());
    return detail::solve_masked(prob, opts, warm, &mask);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> check_violations(const Problem& prob,
                                                                    const Estimate& estimate,
                                                                    const ActiveSet& active) {
    const SymMatrix grad = smooth_gradient(prob, estimate.omega);
    const double bound = prob.lambda1 * (1.0 + 1e-8);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> violators;
    const Eigen::Index p = grad.dim();
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = i + 1; j < p; ++j)
            if (!active.contains(i, j) && std::abs(grad(i, j)) > bound) violators.emplace_back(i, j);
    return violators;
}

namespace {

// One lambda2 row of the grid: unrestricted solve at the largest lambda1,
// then screened warm-started solves with violation repair down the ladder.
void solve_row(const SymMatrix& s, long n, const LambdaGrid& grid, const SolverOptions& opts,
               std::size_t l, PathResult& out) {
    const auto& l1s = grid.lambda1_seq;
    const double l2 = grid.lambda2_seq[l];
    const double total_pairs = static_cast<double>(s.dim() * (s.dim() - 1) / 2);

    Problem first(s, n, l1s[0], l2);
    PathCell head;
    head.estimate = solve(first, opts);
    head.dropped_fraction = 0.0;
    out.at(0, l) = std::move(head);

    for (std::size_t k = 1; k < l1s.size(); ++k) {
        const Estimate& prev = out.at(k - 1, l).estimate;
        Problem prob(s, n, l1s[k], l2);
        const SymMatrix coeffs = screening_coefficients(prob, prev.omega);
        ActiveSet active = strong_rule_filter(coeffs, l1s[k - 1], l1s[k]);

        PathCell cell;
        cell.dropped_fraction =
            total_pairs == 0.0 ? 0.0 : 1.0 - static_cast<double>(active.size()) / total_pairs;

        SymMatrix warm = prev.omega;
        for (;;) {
            cell.estimate = solve_restricted(prob, active, opts, warm);
            const auto violators = check_violations(prob, cell.estimate, active);
            if (violators.empty()) break;
            cell.violation_count += static_cast<long>(violators.size());
            for (const auto& [i, j] : violators) active.insert(i, j);
            warm = cell.estimate.omega;
        }
        out.at(k, l) = std::move(cell);
    }
}

}  // namespace

PathResult solve_path(const SymMatrix& s, long n, const LambdaGrid& grid,
                      const SolverOptions& opts, int jobs) {
    if (jobs < 1) throw std::invalid_argument("solve_path: jobs must be >= 1");
    PathResult out{grid, {}};
    out.cells.resize(grid.lambda1_seq.size() * grid.lambda2_seq.size());

    const std::size_t rows = grid.lambda2_seq.size();
    if (jobs == 1 || rows == 1) {
        for (std::size_t l = 0; l < rows; ++l) solve_row(s, n, grid, opts, l, out);
        return out;
    }

    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    const int count = std::min<int>(jobs, static_cast<int>(rows));
    for (int t = 0; t < count; ++t) {
        workers.emplace_back([&] {
            for (std::size_t l = next.fetch_add(1); l < rows; l = next.fetch_add(1))
                solve_row(s, n, grid, opts, l, out);
        });
    }
    for (auto& w : workers) w.join();
    return out;
}

double lambda1_max(const SymMatrix& s, long n, double lambda2) {
    const SymMatrix start = diagonal_start(s, n, lambda2);
    // lambda1 plays no role in the coefficients; any positive value works.
    Problem prob(s, n, 1.0, lambda2);
    const SymMatrix coeffs = screening_coefficients(prob, start);
    double best = 0.0;
    for (Eigen::Index i = 0; i < s.dim(); ++i)
        for (Eigen::Index j = i + 1; j < s.dim(); ++j) best = std::max(best, std::abs(coeffs(i, j)));
    return best;
}

}  // namespace pseudonet
