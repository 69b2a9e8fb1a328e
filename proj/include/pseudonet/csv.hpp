#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pseudonet/sym_matrix.hpp"

namespace pseudonet {

// Shortest round-trippable decimal form of a double. All file output goes
// through this so reruns with identical inputs are byte-identical.
std::string format_double(double v);

// Raw comma-separated rows; no quoting support, fields are trimmed.
std::vector<std::vector<std::string>> read_csv_rows(const std::string& path);

// Strict finite-double parse; throws ParseError naming the 1-based row and
// column on failure or when the value is NaN/Inf.
double parse_csv_number(const std::string& cell, std::size_t row, std::size_t col);

// Observation CSV: one sample per row, optional single header row
// (detected when any field of the first row is non-numeric). Rejects
// ragged rows and non-finite values.
DataMatrix read_data_csv(const std::string& path);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

// Sidecar for a symmetric estimate: half-vectorized entries plus the list
// of nonzero off-diagonal pairs at the given tolerance.
void write_vech_csv(const std::string& path, const SymMatrix& m, double tol);

}  // namespace pseudonet
