#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "f2_linalg.hpp"
#include "grades.hpp"

namespace mpd {

/// Binary image of a homogeneous presentation matrix: an F2 matrix with a
/// grade on every row and column. A one at (i, j) stands for the monomial
/// t^(col_grade[j] - row_grade[i]), so it requires row_grade[i] <= col_grade[j].
class GradedMatrix
{
public:
    GradedMatrix() = default;

    GradedMatrix(F2Matrix mat, std::vector<Grade> row_grades, std::vector<Grade> col_grades,
                 std::vector<std::string> row_labels = {}, std::vector<std::string> col_labels = {},
                 std::optional<std::size_t> d = std::nullopt)
        : mat_(std::move(mat)), row_grades_(std::move(row_grades)), col_grades_(std::move(col_grades)),
          row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels))
    {
        if (mat_.n_rows() != row_grades_.size() || mat_.n_cols() != col_grades_.size())
            throw input_error("graded matrix is " + std::to_string(mat_.n_rows()) + "x" +
                              std::to_string(mat_.n_cols()) + " but has " + std::to_string(row_grades_.size()) +
                              " row grades and " + std::to_string(col_grades_.size()) + " column grades");
        if (d)
            d_ = *d;
        else if (!row_grades_.empty())
            d_ = row_grades_.front().dim();
        else if (!col_grades_.empty())
            d_ = col_grades_.front().dim();
        for (const auto& g : row_grades_)
            if (g.dim() != d_)
                throw input_error("row grade " + g.str() + " has dimension " + std::to_string(g.dim()) +
                                  ", expected " + std::to_string(d_));
        for (const auto& g : col_grades_)
            if (g.dim() != d_)
                throw input_error("column grade " + g.str() + " has dimension " + std::to_string(g.dim()) +
                                  ", expected " + std::to_string(d_));
        if (row_labels_.empty())
            for (std::size_t i = 0; i < n_rows(); ++i)
                row_labels_.push_back("r" + std::to_string(i));
        if (col_labels_.empty())
            for (std::size_t j = 0; j < n_cols(); ++j)
                col_labels_.push_back("c" + std::to_string(j));
        if (row_labels_.size() != n_rows() || col_labels_.size() != n_cols())
            throw input_error("label count does not match matrix shape");
        if (auto bad = homogeneity_violation())
            throw input_error("homogeneity violated at entry (" + std::to_string(bad->first) + "," +
                              std::to_string(bad->second) + "): row grade " + row_grades_[bad->first].str() +
                              " is not <= column grade " + col_grades_[bad->second].str());
    }

    std::size_t n_rows() const { return mat_.n_rows(); }
    std::size_t n_cols() const { return mat_.n_cols(); }
    std::size_t d() const { return d_; }

    const F2Matrix& mat() const { return mat_; }
    bool get(std::size_t i, std::size_t j) const { return mat_.get(i, j); }

    const std::vector<Grade>& row_grades() const { return row_grades_; }
    const std::vector<Grade>& col_grades() const { return col_grades_; }
    const Grade& row_grade(std::size_t i) const { return row_grades_[i]; }
    const Grade& col_grade(std::size_t j) const { return col_grades_[j]; }
    const std::vector<std::string>& row_labels() const { return row_labels_; }
    const std::vector<std::string>& col_labels() const { return col_labels_; }

    std::optional<std::pair<std::size_t, std::size_t>> homogeneity_violation() const
    {
        for (std::size_t j = 0; j < n_cols(); ++j)
            for (std::size_t i : mat_.col(j).ones())
                if (!leq(row_grades_[i], col_grades_[j]))
                    return std::pair{i, j};
        return std::nullopt;
    }

    /// c_j += c_i; requires grade(c_i) <= grade(c_j).
    void add_col(std::size_t i, std::size_t j)
    {
        if (i == j || i >= n_cols() || j >= n_cols() || !leq(col_grades_[i], col_grades_[j]))
            throw contract_error("column addition c" + std::to_string(i) + " -> c" + std::to_string(j) +
                                 " is not admissible");
        mat_.add_col(i, j);
    }

    /// r_k += r_l; requires grade(r_k) <= grade(r_l).
    void add_row(std::size_t l, std::size_t k)
    {
        if (l == k || l >= n_rows() || k >= n_rows() || !leq(row_grades_[k], row_grades_[l]))
            throw contract_error("row addition r" + std::to_string(l) + " -> r" + std::to_string(k) +
                                 " is not admissible");
        mat_.add_row(l, k);
    }

    F2Matrix restrict(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const
    {
        F2Matrix r(rows.size(), cols.size());
        for (std::size_t q = 0; q < cols.size(); ++q)
            for (std::size_t p = 0; p < rows.size(); ++p)
                if (mat_.get(rows[p], cols[q]))
                    r.set(p, q, true);
        return r;
    }

    /// Submatrix with grades and labels carried along.
    GradedMatrix sub(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const
    {
        std::vector<Grade> rg, cg;
        std::vector<std::string> rl, cl;
        for (std::size_t i : rows) {
            rg.push_back(row_grades_[i]);
            rl.push_back(row_labels_[i]);
        }
        for (std::size_t j : cols) {
            cg.push_back(col_grades_[j]);
            cl.push_back(col_labels_[j]);
        }
        return GradedMatrix(restrict(rows, cols), std::move(rg), std::move(cg), std::move(rl), std::move(cl), d_);
    }

    /// New row p is old row row_perm[p]; same for columns.
    GradedMatrix permuted(std::span<const std::size_t> row_perm, std::span<const std::size_t> col_perm) const
    {
        return sub(row_perm, col_perm);
    }

    void set_labels(std::vector<std::string> rows, std::vector<std::string> cols)
    {
        if (rows.size() != n_rows() || cols.size() != n_cols())
            throw input_error("label count does not match matrix shape");
        row_labels_ = std::move(rows);
        col_labels_ = std::move(cols);
    }

    /// Equality of matrix and grades; labels are display-only.
    friend bool operator==(const GradedMatrix& a, const GradedMatrix& b)
    {
        return a.d_ == b.d_ && a.mat_ == b.mat_ && a.row_grades_ == b.row_grades_ &&
               a.col_grades_ == b.col_grades_;
    }

private:
    F2Matrix mat_;
    std::vector<Grade> row_grades_;
    std::vector<Grade> col_grades_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
    std::size_t d_ = 0;
};

inline GradedMatrix new_graded(F2Matrix mat, std::vector<Grade> row_grades, std::vector<Grade> col_grades)
{
    return GradedMatrix(std::move(mat), std::move(row_grades), std::move(col_grades));
}

/// Admissible additions under the tie-broken grade order.
///   colop (i, j): c_i may be added to c_j   (grade c_i <= grade c_j)
///   rowop (l, k): r_l may be added to r_k   (grade r_k <= grade r_l)
struct AdmissibleOps
{
    std::vector<std::pair<std::size_t, std::size_t>> colop;
    std::vector<std::pair<std::size_t, std::size_t>> rowop;
    std::vector<std::vector<std::size_t>> col_sources; // col_sources[j] = {i : (i, j) in colop}
    std::vector<std::vector<std::size_t>> row_sources; // row_sources[k] = {l : (l, k) in rowop}

    bool has_col(std::size_t i, std::size_t j) const
    {
        return j < col_sources.size() && std::binary_search(col_sources[j].begin(), col_sources[j].end(), i);
    }

    bool has_row(std::size_t l, std::size_t k) const
    {
        return k < row_sources.size() && std::binary_search(row_sources[k].begin(), row_sources[k].end(), l);
    }
};

inline AdmissibleOps admissible_ops(const GradedMatrix& m, const GradeOrderContext& row_ctx = {},
                                    const GradeOrderContext& col_ctx = {})
{
    AdmissibleOps ops;
    const TieBrokenOrder cols(m.col_grades(), col_ctx);
    const TieBrokenOrder rows(m.row_grades(), row_ctx);
    ops.col_sources.resize(m.n_cols());
    ops.row_sources.resize(m.n_rows());
    for (std::size_t i = 0; i < m.n_cols(); ++i)
        for (std::size_t j = 0; j < m.n_cols(); ++j)
            if (cols.precedes(i, j)) {
                ops.colop.emplace_back(i, j);
                ops.col_sources[j].push_back(i);
            }
    // r_l -> r_k needs r_k to precede r_l
    for (std::size_t l = 0; l < m.n_rows(); ++l)
        for (std::size_t k = 0; k < m.n_rows(); ++k)
            if (rows.precedes(k, l)) {
                ops.rowop.emplace_back(l, k);
                ops.row_sources[k].push_back(l);
            }
    for (auto& v : ops.col_sources)
        std::sort(v.begin(), v.end());
    for (auto& v : ops.row_sources)
        std::sort(v.begin(), v.end());
    return ops;
}

} // namespace mpd
