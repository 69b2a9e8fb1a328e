#include "pseudonet/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pseudonet/errors.hpp"

namespace pseudonet {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

bool is_number(const std::string& cell) {
    if (cell.empty()) return false;
    char* end = nullptr;
    std::strtod(cell.c_str(), &end);
    return end == cell.c_str() + cell.size();
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shortest representation that round-trips.
    for (int precision = 1; precision < 17; ++precision) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", precision, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(std::move(cells));
    }
    return rows;
}

double parse_csv_number(const std::string& cell, std::size_t row, std::size_t col) {
    std::ostringstream where;
    where << "row " << row << ", column " << col;
    if (!is_number(cell))
        throw ParseError("not a number at " + where.str() + ": '" + cell + "'");
    const double v = std::strtod(cell.c_str(), nullptr);
    if (!std::isfinite(v))
        throw ParseError("non-finite value at " + where.str() + ": '" + cell + "'");
    return v;
}

DataMatrix read_data_csv(const std::string& path) {
    const auto rows = read_csv_rows(path);
    if (rows.empty()) throw ParseError("empty data file: " + path);

    bool has_header = false;
    for (const auto& cell : rows.front())
        if (!is_number(cell)) has_header = true;
    const std::size_t first = has_header ? 1 : 0;
    if (rows.size() <= first) throw ParseError("no data rows in " + path);

    const std::size_t p = rows[first].size();
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size() - first),
                           static_cast<Eigen::Index>(p));
    for (std::size_t r = first; r < rows.size(); ++r) {
        if (rows[r].size() != p) {
            std::ostringstream msg;
            msg << path << ": row " << (r + 1) << " has " << rows[r].size()
                << " fields, expected " << p;
            throw ParseError(msg.str());
        }
        for (std::size_t c = 0; c < p; ++c)
            values(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(c)) =
                parse_csv_number(rows[r][c], r + 1, c + 1);
    }
    return DataMatrix(std::move(values), false);
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

void write_vech_csv(const std::string& path, const SymMatrix& m, double tol) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "i,j,value,nonzero\n";
    const Eigen::Index p = m.dim();
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = j + 1; i < p; ++i)
            out << (i + 1) << ',' << (j + 1) << ',' << format_double(m(i, j)) << ','
                << (std::abs(m(i, j)) > tol ? 1 : 0) << '\n';
}

}  // namespace pseudonet
