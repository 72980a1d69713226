#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "diagonalize.hpp"
#include "error.hpp"
#include "f2_linalg.hpp"
#include "graded_matrix.hpp"
#include "grades.hpp"

namespace mpd::oracle {

/// Connected components of the bipartite graph of nonzero entries.
inline BlockSet block_partition(const F2Matrix& m)
{
    const std::size_t n = m.n_rows(), c = m.n_cols();
    std::vector<std::size_t> parent(n + c);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t i : m.col(j).ones())
            parent[find(i)] = find(n + j);
    std::vector<std::optional<std::size_t>> slot(n + c);
    BlockSet out;
    for (std::size_t x = 0; x < n + c; ++x) {
        const std::size_t r = find(x);
        if (!slot[r]) {
            slot[r] = out.size();
            out.emplace_back();
        }
        if (x < n)
            out[*slot[r]].rows.push_back(x);
        else
            out[*slot[r]].cols.push_back(x - n);
    }
    canonicalize(out);
    return out;
}

inline constexpr std::size_t kBudget = 20;

namespace detail {

/// Every P * M * Q with P = I + sum a[k,l] d[k,l] over the row relation and
/// Q = I + sum b[i,j] d[i,j] over the column relation, as row bitmasks.
template <class Visit>
void for_each_transform(const GradedMatrix& m, const AdmissibleOps& ops, Visit&& visit)
{
    const std::size_t nr = ops.rowop.size(), nc = ops.colop.size();
    if (nr + nc > kBudget)
        throw budget_error("oracle budget exceeded: " + std::to_string(nr + nc) + " admissible operations, limit " +
                           std::to_string(kBudget));
    if (m.n_cols() > 64)
        throw budget_error("oracle handles at most 64 columns");
    std::vector<std::uint64_t> rows(m.n_rows(), 0);
    for (std::size_t j = 0; j < m.n_cols(); ++j)
        for (std::size_t i : m.mat().col(j).ones())
            rows[i] |= std::uint64_t{1} << j;

    std::vector<std::uint64_t> pm(m.n_rows()), qrow(m.n_cols()), out(m.n_rows());
    for (std::uint64_t rmask = 0; rmask < (std::uint64_t{1} << nr); ++rmask) {
        pm = rows;
        for (std::size_t s = 0; s < nr; ++s)
            if (rmask >> s & 1) {
                const auto [l, k] = ops.rowop[s];
                pm[k] ^= rows[l];
            }
        for (std::uint64_t cmask = 0; cmask < (std::uint64_t{1} << nc); ++cmask) {
            for (std::size_t i = 0; i < m.n_cols(); ++i)
                qrow[i] = std::uint64_t{1} << i;
            for (std::size_t s = 0; s < nc; ++s)
                if (cmask >> s & 1) {
                    const auto [i, j] = ops.colop[s];
                    qrow[i] |= std::uint64_t{1} << j;
                }
            for (std::size_t r = 0; r < m.n_rows(); ++r) {
                std::uint64_t acc = 0, bits = pm[r];
                while (bits) {
                    const int i = __builtin_ctzll(bits);
                    acc ^= qrow[i];
                    bits &= bits - 1;
                }
                out[r] = acc;
            }
            visit(out);
        }
    }
}

inline F2Matrix from_row_masks(const std::vector<std::uint64_t>& rows, std::size_t n_cols)
{
    F2Matrix a(rows.size(), n_cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t j = 0; j < n_cols; ++j)
            if (rows[r] >> j & 1)
                a.set(r, j, true);
    return a;
}

} // namespace detail

/// Finest block partition over all admissible transforms P * M * Q. Throws
/// internal_error if two transforms reach the maximal block count with
/// different partitions.
inline BlockSet brute_force_finest(const GradedMatrix& m, const GradeOrderContext& row_ctx = {},
                                   const GradeOrderContext& col_ctx = {})
{
    const AdmissibleOps ops = admissible_ops(m, row_ctx, col_ctx);
    std::optional<BlockSet> best;
    bool ambiguous = false;
    detail::for_each_transform(m, ops, [&](const std::vector<std::uint64_t>& rows) {
        BlockSet part = block_partition(detail::from_row_masks(rows, m.n_cols()));
        if (!best || part.size() > best->size()) {
            best = std::move(part);
            ambiguous = false;
        } else if (part.size() == best->size() && part != *best) {
            ambiguous = true;
        }
    });
    if (ambiguous)
        throw internal_error("brute force: two maximal diagonalizations with different index blocks");
    return best ? *best : BlockSet{};
}

/// True iff b == P * a * Q for some admissible P, Q of a. Grades must agree.
inline bool admissibly_equivalent(const GradedMatrix& a, const GradedMatrix& b, const GradeOrderContext& row_ctx = {},
                                  const GradeOrderContext& col_ctx = {})
{
    if (a.row_grades() != b.row_grades() || a.col_grades() != b.col_grades())
        return false;
    std::vector<std::uint64_t> target(b.n_rows(), 0);
    for (std::size_t j = 0; j < b.n_cols(); ++j)
        for (std::size_t i : b.mat().col(j).ones())
            target[i] |= std::uint64_t{1} << j;
    bool found = false;
    detail::for_each_transform(a, admissible_ops(a, row_ctx, col_ctx),
                               [&](const std::vector<std::uint64_t>& rows) { found = found || rows == target; });
    return found;
}

/// Cokernel dimension at u via a byte-per-entry row echelon, kept apart from
/// the bit-packed routines it checks.
inline std::int64_t dim_oracle(const GradedMatrix& m, const Grade& u)
{
    std::vector<std::size_t> live_rows;
    for (std::size_t i = 0; i < m.n_rows(); ++i)
        if (leq(m.row_grade(i), u))
            live_rows.push_back(i);
    std::vector<std::vector<std::uint8_t>> a;
    for (std::size_t j = 0; j < m.n_cols(); ++j) {
        if (!leq(m.col_grade(j), u))
            continue;
        std::vector<std::uint8_t> v(m.n_rows());
        for (std::size_t i = 0; i < m.n_rows(); ++i)
            v[i] = m.get(i, j) ? 1 : 0;
        a.push_back(std::move(v));
    }
    std::size_t rk = 0;
    for (std::size_t piv = 0; piv < m.n_rows() && rk < a.size(); ++piv) {
        std::size_t sel = rk;
        while (sel < a.size() && !a[sel][piv])
            ++sel;
        if (sel == a.size())
            continue;
        std::swap(a[sel], a[rk]);
        for (std::size_t r = 0; r < a.size(); ++r)
            if (r != rk && a[r][piv])
                for (std::size_t x = 0; x < m.n_rows(); ++x)
                    a[r][x] ^= a[rk][x];
        ++rk;
    }
    return static_cast<std::int64_t>(live_rows.size()) - static_cast<std::int64_t>(rk);
}

} // namespace mpd::oracle
