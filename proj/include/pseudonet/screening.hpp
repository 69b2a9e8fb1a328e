#pragma once

#include <utility>
#include <vector>

#include "pseudonet/solver.hpp"
#include "pseudonet/sym_matrix.hpp"

namespace pseudonet {

// Tuning grid; both sequences must be strictly decreasing positive reals.
struct LambdaGrid {
    LambdaGrid(std::vector<double> lambda1, std::vector<double> lambda2);

    std::vector<double> lambda1_seq;
    std::vector<double> lambda2_seq;
};

// Unordered variable pairs (i < j) kept free by the screening rule; the
// diagonal is always free and never appears here.
class ActiveSet {
  public:
    ActiveSet() = default;
    explicit ActiveSet(std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs);

    static ActiveSet all_pairs(Eigen::Index p);

    void insert(Eigen::Index i, Eigen::Index j);
    bool contains(Eigen::Index i, Eigen::Index j) const;
    std::size_t size() const { return pairs_.size(); }
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs() const { return pairs_; }

    // 0/1 coordinate mask with free diagonal, for the restricted solver.
    Eigen::ArrayXXd mask(Eigen::Index p) const;

  private:
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs_;  // sorted, unique, i < j
};

struct PathCell {
    Estimate estimate;
    double dropped_fraction = 0.0;  // share of pairs excluded by the rule before violations
    long violation_count = 0;       // pairs re-admitted by the KKT check
};

// Estimates over the full grid, lambda1 fastest. Cell (k, l) refers to
// lambda1_seq[k], lambda2_seq[l].
struct PathResult {
    LambdaGrid grid;
    std::vector<PathCell> cells;  // size r * s, index l * r + k

    const PathCell& at(std::size_t k, std::size_t l) const;
    PathCell& at(std::size_t k, std::size_t l);
};

// Off-diagonal smooth-gradient coefficients at omega_hat,
//   c_ij = (n/2)(S W + W S)_ij + lambda2 W_ij,
// the quantity the sequential rule thresholds against lambda1. Diagonal of
// the returned matrix is zero.
SymMatrix screening_coefficients(const Problem& prob, const SymMatrix& omega_hat);

// Sequential strong rule: exclude pair (i,j) when
// |c_ij| < 2 * lambda1_next - lambda1_prev. Requires lambda1_next <= lambda1_prev.
ActiveSet strong_rule_filter(const SymMatrix& coeffs, double lambda1_prev, double lambda1_next);

// Solves the problem with all off-diagonal coordinates outside `active`
// frozen at zero. A warm start is projected onto that subspace first.
Estimate solve_restricted(const Problem& prob, const ActiveSet& active,
                          const SolverOptions& opts = {},
                          const std::optional<SymMatrix>& warm = std::nullopt);

// Excluded pairs whose smooth gradient exceeds lambda1 in magnitude
// (tolerance 1e-8 * lambda1); these must be re-admitted and the cell
// re-solved.
std::vector<std::pair<Eigen::Index, Eigen::Index>> check_violations(const Problem& prob,
                                                                    const Estimate& estimate,
                                                                    const ActiveSet& active);

// Warm-started sweep over the whole grid with sequential screening and
// violation repair. Rows (fixed lambda2) are independent; jobs > 1 runs
// them on that many threads with deterministic assembly.
PathResult solve_path(const SymMatrix& s, long n, const LambdaGrid& grid,
                      const SolverOptions& opts = {}, int jobs = 1);

// Smallest lambda1 whose solution is exactly diagonal: max |c_ij| at the
// closed-form diagonal start.
double lambda1_max(const SymMatrix& s, long n, double lambda2);

}  // namespace pseudonet
