#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "f2_linalg.hpp"
#include "graded_matrix.hpp"
#include "grades.hpp"

namespace mpd {

struct IndexBlock
{
    std::vector<std::size_t> rows; // sorted
    std::vector<std::size_t> cols; // sorted

    friend bool operator==(const IndexBlock&, const IndexBlock&) = default;
    friend auto operator<=>(const IndexBlock&, const IndexBlock&) = default;
};

using BlockSet = std::vector<IndexBlock>;

/// Sorts each block's indices, then the blocks by smallest row (row-free
/// blocks last, by smallest column).
inline void canonicalize(BlockSet& blocks)
{
    for (auto& b : blocks) {
        std::sort(b.rows.begin(), b.rows.end());
        std::sort(b.cols.begin(), b.cols.end());
    }
    std::sort(blocks.begin(), blocks.end(), [](const IndexBlock& a, const IndexBlock& b) {
        if (a.rows.empty() != b.rows.empty())
            return b.rows.empty();
        if (!a.rows.empty())
            return a.rows.front() < b.rows.front();
        return a.cols < b.cols;
    });
}

/// True iff the blocks partition rows and columns and cover every nonzero.
inline bool is_diagonalization(const F2Matrix& a, const BlockSet& blocks)
{
    std::vector<std::ptrdiff_t> row_block(a.n_rows(), -1), col_block(a.n_cols(), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (std::size_t i : blocks[b].rows) {
            if (i >= a.n_rows() || row_block[i] != -1)
                return false;
            row_block[i] = static_cast<std::ptrdiff_t>(b);
        }
        for (std::size_t j : blocks[b].cols) {
            if (j >= a.n_cols() || col_block[j] != -1)
                return false;
            col_block[j] = static_cast<std::ptrdiff_t>(b);
        }
    }
    if (std::count(row_block.begin(), row_block.end(), -1) || std::count(col_block.begin(), col_block.end(), -1))
        return false;
    for (std::size_t j = 0; j < a.n_cols(); ++j)
        for (std::size_t i : a.col(j).ones())
            if (row_block[i] != col_block[j])
                return false;
    return true;
}

enum class OpKind { row, col };

/// kind == col: c_target += c_source.  kind == row: r_target += r_source.
struct Op
{
    OpKind kind;
    std::size_t source;
    std::size_t target;

    friend bool operator==(const Op&, const Op&) = default;
};

struct OpCertificate
{
    std::vector<Op> ops;
};

/// Flattens a[rows, cols]: last column first, rows ascending within a column.
inline BitVector lin(const F2Matrix& a, std::span<const std::size_t> rows, std::span<const std::size_t> cols)
{
    BitVector v(rows.size() * cols.size());
    std::size_t pos = 0;
    for (std::size_t q = cols.size(); q-- > 0;)
        for (std::size_t i : rows)
            v.set(pos++, a.get(i, cols[q]));
    return v;
}

inline BitVector lin(const F2Matrix& a)
{
    std::vector<std::size_t> rows(a.n_rows()), cols(a.n_cols());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return lin(a, rows, cols);
}

/// Writes v back over a[rows, cols]; inverse of lin.
inline void lin_inv(const BitVector& v, std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                    F2Matrix& a)
{
    if (v.size() != rows.size() * cols.size())
        throw input_error("lin_inv: vector length " + std::to_string(v.size()) + " does not match block " +
                          std::to_string(rows.size()) + "x" + std::to_string(cols.size()));
    std::size_t pos = 0;
    for (std::size_t q = cols.size(); q-- > 0;)
        for (std::size_t i : rows)
            a.set(i, cols[q], v.get(pos++));
}

inline F2Matrix lin_inv(const BitVector& v, std::size_t n_rows, std::size_t n_cols)
{
    F2Matrix a(n_rows, n_cols);
    std::vector<std::size_t> rows(n_rows), cols(n_cols);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    lin_inv(v, rows, cols, a);
    return a;
}

namespace detail {

inline std::vector<std::size_t> complement(std::span<const std::size_t> sorted, std::size_t n)
{
    std::vector<std::size_t> out;
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p < sorted.size() && sorted[p] == i)
            ++p;
        else
            out.push_back(i);
    }
    return out;
}

} // namespace detail

/// Tries to clear a[Row(b), j] for every column j <= t outside Col(b), using
/// row additions from outside Row(b) and column additions from Col(b). The
/// reduced block on T = (Row(b), Col(a) - Col(b)) is written back, and the
/// operations realizing it are appended to cert. Returns whether the part of
/// T at columns <= t is now zero.
///
/// Indices must be in topological order, so "j <= t" is index comparison.
/// Assumes a restricted to columns < t is diagonalized with b among its
/// blocks; then every realized operation only touches entries inside T.
inline bool block_reduce(GradedMatrix& a, const AdmissibleOps& ops, const IndexBlock& b, std::size_t t,
                         OpCertificate* cert = nullptr)
{
    if (b.rows.empty())
        return true;
    const std::vector<std::size_t> t_cols = detail::complement(b.cols, a.n_cols());
    const std::vector<std::size_t>& t_rows = b.rows;
    std::vector<bool> in_rows(a.n_rows(), false);
    for (std::size_t i : t_rows)
        in_rows[i] = true;
    std::vector<bool> in_cols(a.n_cols(), false);
    for (std::size_t j : t_cols)
        in_cols[j] = true;

    std::vector<Op> cand;
    std::vector<BitVector> source;
    const std::size_t len = t_rows.size() * t_cols.size();

    // row additions r_l -> r_k: position of (k, j) gets a[l, j]
    for (std::size_t p = 0; p < t_rows.size(); ++p) {
        const std::size_t k = t_rows[p];
        for (std::size_t l : ops.row_sources[k]) {
            if (in_rows[l])
                continue;
            BitVector x(len);
            for (std::size_t q = 0; q < t_cols.size(); ++q)
                if (a.get(l, t_cols[q]))
                    x.set((t_cols.size() - 1 - q) * t_rows.size() + p, true);
            cand.push_back({OpKind::row, l, k});
            source.push_back(std::move(x));
        }
    }
    // column additions c_i -> c_j: position of (k, j) gets a[k, i]
    for (std::size_t q = 0; q < t_cols.size(); ++q) {
        const std::size_t j = t_cols[q];
        if (j > t)
            break;
        for (std::size_t i : ops.col_sources[j]) {
            if (in_cols[i])
                continue;
            BitVector y(len);
            for (std::size_t p = 0; p < t_rows.size(); ++p)
                if (a.get(t_rows[p], i))
                    y.set((t_cols.size() - 1 - q) * t_rows.size() + p, true);
            cand.push_back({OpKind::col, i, j});
            source.push_back(std::move(y));
        }
    }

    const BitVector c = lin(a.mat(), t_rows, t_cols);
    const ColReduceResult red = col_reduce(F2Matrix::from_columns(len, std::move(source)), c);

    for (std::size_t s : red.combination.ones()) {
        const Op& op = cand[s];
        if (op.kind == OpKind::row)
            a.add_row(op.source, op.target);
        else
            a.add_col(op.source, op.target);
        if (cert)
            cert->ops.push_back(op);
    }
    if (lin(a.mat(), t_rows, t_cols) != red.reduced)
        throw internal_error("block_reduce: realized operations disagree with the reduced block");

    for (std::size_t q = 0; q < t_cols.size() && t_cols[q] <= t; ++q)
        for (std::size_t i : t_rows)
            if (a.get(i, t_cols[q]))
                return false;
    return true;
}

struct DiagonalizeOptions
{
    bool perturb_ties = false;
    GradeOrderContext row_ctx;
    GradeOrderContext col_ctx;
    /// Called after each column t with the sorted matrix and current blocks.
    std::function<void(std::size_t t, const GradedMatrix&, const BlockSet&)> observer;
};

struct Diagonalization
{
    GradedMatrix matrix; // A*
    BlockSet blocks;
    OpCertificate certificate;
    bool perturbed = false;
};

/// Core loop on a matrix whose rows and columns are already in topological
/// order with ties broken by index.
inline Diagonalization tot_diagonalize_sorted(
    GradedMatrix a,
    const std::function<void(std::size_t, const GradedMatrix&, const BlockSet&)>& observer = {})
{
    const AdmissibleOps ops = admissible_ops(a);
    OpCertificate cert;
    BlockSet blocks;
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        blocks.push_back({{i}, {}});

    for (std::size_t t = 0; t < a.n_cols(); ++t) {
        IndexBlock merged{{}, {t}};
        BlockSet kept;
        std::sort(blocks.begin(), blocks.end(), [](const IndexBlock& x, const IndexBlock& y) {
            if (x.rows.empty() != y.rows.empty())
                return y.rows.empty();
            if (!x.rows.empty())
                return x.rows.front() < y.rows.front();
            return x.cols < y.cols;
        });
        for (auto& b : blocks) {
            if (block_reduce(a, ops, b, t, &cert)) {
                kept.push_back(std::move(b));
                continue;
            }
            merged.rows.insert(merged.rows.end(), b.rows.begin(), b.rows.end());
            merged.cols.insert(merged.cols.end(), b.cols.begin(), b.cols.end());
        }
        std::sort(merged.rows.begin(), merged.rows.end());
        std::sort(merged.cols.begin(), merged.cols.end());
        kept.push_back(std::move(merged));
        blocks = std::move(kept);
        if (observer)
            observer(t, a, blocks);
    }
    canonicalize(blocks);
    return {std::move(a), std::move(blocks), std::move(cert), false};
}

inline std::string describe_ties(const GradedMatrix& a)
{
    std::string msg;
    auto add = [&](const char* what, const std::vector<Grade>& g) {
        for (auto [i, j] : find_ties(g))
            msg += std::string(msg.empty() ? "" : "; ") + what + " " + std::to_string(i) + " and " +
                   std::to_string(j) + " share grade " + g[i].str();
    };
    add("rows", a.row_grades());
    add("columns", a.col_grades());
    return msg;
}

/// Total diagonalization of a in its own index space. Rows and columns are
/// sorted into topological order internally and everything is mapped back.
inline Diagonalization tot_diagonalize(const GradedMatrix& a, const DiagonalizeOptions& opt = {})
{
    const bool tied = !strictly_distinct(a.row_grades()) || !strictly_distinct(a.col_grades());
    if (tied && !opt.perturb_ties)
        throw tied_grades_error("tied grades: " + describe_ties(a));

    const auto rperm = topo_order(a.row_grades(), opt.row_ctx);
    const auto cperm = topo_order(a.col_grades(), opt.col_ctx);
    Diagonalization sorted = tot_diagonalize_sorted(a.permuted(rperm, cperm), opt.observer);

    Diagonalization out;
    out.perturbed = tied;
    F2Matrix m(a.n_rows(), a.n_cols());
    for (std::size_t q = 0; q < cperm.size(); ++q)
        for (std::size_t p : sorted.matrix.mat().col(q).ones())
            m.set(rperm[p], cperm[q], true);
    out.matrix = GradedMatrix(std::move(m), a.row_grades(), a.col_grades(), a.row_labels(), a.col_labels(), a.d());
    for (const auto& b : sorted.blocks) {
        IndexBlock ob;
        for (std::size_t p : b.rows)
            ob.rows.push_back(rperm[p]);
        for (std::size_t q : b.cols)
            ob.cols.push_back(cperm[q]);
        out.blocks.push_back(std::move(ob));
    }
    canonicalize(out.blocks);
    for (const Op& op : sorted.certificate.ops) {
        const auto& perm = op.kind == OpKind::row ? rperm : cperm;
        out.certificate.ops.push_back({op.kind, perm[op.source], perm[op.target]});
    }
    return out;
}

/// Applies cert to a, rejecting any operation outside the admissible set.
inline GradedMatrix replay_certificate(GradedMatrix a, const OpCertificate& cert,
                                       const GradeOrderContext& row_ctx = {}, const GradeOrderContext& col_ctx = {})
{
    const AdmissibleOps ops = admissible_ops(a, row_ctx, col_ctx);
    for (const Op& op : cert.ops) {
        if (op.kind == OpKind::row) {
            if (!ops.has_row(op.source, op.target))
                throw contract_error("certificate row addition r" + std::to_string(op.source) + " -> r" +
                                     std::to_string(op.target) + " is not admissible");
            a.add_row(op.source, op.target);
        } else {
            if (!ops.has_col(op.source, op.target))
                throw contract_error("certificate column addition c" + std::to_string(op.source) + " -> c" +
                                     std::to_string(op.target) + " is not admissible");
            a.add_col(op.source, op.target);
        }
    }
    return a;
}

} // namespace mpd
