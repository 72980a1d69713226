#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <thread>
#include <utility>
#include <vector>

#include "diagonalize.hpp"
#include "error.hpp"
#include "f2_linalg.hpp"
#include "graded_matrix.hpp"
#include "grades.hpp"
#include "presentation.hpp"

namespace mpd {

/// Graded Betti numbers: (degree, grade) -> multiplicity.
struct BettiTable
{
    std::map<std::pair<int, Grade>, std::size_t> entries;
    int max_degree_computed = -1;

    void add(int j, const Grade& g, std::size_t k = 1)
    {
        if (k)
            entries[{j, g}] += k;
    }

    std::size_t at(int j, const Grade& g) const
    {
        auto it = entries.find({j, g});
        return it == entries.end() ? 0 : it->second;
    }

    /// Grades in degree j, repeated by multiplicity, lexicographically sorted.
    std::vector<Grade> grades(int j) const
    {
        std::vector<Grade> out;
        for (const auto& [key, k] : entries)
            if (key.first == j)
                out.insert(out.end(), k, key.second);
        return out;
    }

    BettiTable& operator+=(const BettiTable& o)
    {
        for (const auto& [key, k] : o.entries)
            add(key.first, key.second, k);
        max_degree_computed = std::max(max_degree_computed, o.max_degree_computed);
        return *this;
    }

    friend bool operator==(const BettiTable& a, const BettiTable& b) { return a.entries == b.entries; }
};

/// beta_0 and beta_1 read off a minimal presentation.
inline BettiTable betti01(const GradedMatrix& block)
{
    if (has_unit_entry(block))
        throw contract_error("betti01 needs a minimized presentation");
    BettiTable t;
    for (const auto& g : block.row_grades())
        t.add(0, g);
    for (const auto& g : block.col_grades())
        t.add(1, g);
    t.max_degree_computed = 1;
    return t;
}

/// beta_2 for two parameters: the relations' kernel is free, and its basis
/// grades are the second Betti numbers.
inline void betti_higher_2param(const GradedMatrix& block, BettiTable& t)
{
    if (block.d() != 2)
        throw input_error("second Betti numbers are only computed for d == 2");
    for (const auto& k : kernel_gens(block, KernelMode::BASIS_2PARAM))
        t.add(2, k.grade);
    t.max_degree_computed = 2;
}

inline BettiTable betti_table(const GradedMatrix& block)
{
    BettiTable t = betti01(block);
    if (block.d() == 2)
        betti_higher_2param(block, t);
    return t;
}

inline std::vector<BettiTable> persistent_betti(const GradedMatrix& m, const BlockSet& blocks)
{
    std::vector<BettiTable> out;
    for (const auto& b : blocks)
        out.push_back(betti_table(m.sub(b.rows, b.cols)));
    return out;
}

/// Inclusive grade box.
struct Box
{
    Grade lo;
    Grade hi;

    std::vector<std::size_t> shape() const
    {
        std::vector<std::size_t> s;
        for (std::size_t k = 0; k < lo.dim(); ++k)
            s.push_back(static_cast<std::size_t>(hi[k] - lo[k] + 1));
        return s;
    }

    std::size_t size() const
    {
        std::size_t n = 1;
        for (auto s : shape())
            n *= s;
        return n;
    }

    /// Grade at a row-major flat index (last axis fastest).
    Grade at(std::size_t flat) const
    {
        const auto s = shape();
        Grade g = lo;
        for (std::size_t k = s.size(); k-- > 0;) {
            g[k] = lo[k] + static_cast<coord_t>(flat % s[k]);
            flat /= s[k];
        }
        return g;
    }

    bool contains(const Grade& g) const { return leq(lo, g) && leq(g, hi); }
};

/// Componentwise min of all grades to componentwise max plus one.
inline Box default_box(const GradedMatrix& m)
{
    std::vector<Grade> all = m.row_grades();
    all.insert(all.end(), m.col_grades().begin(), m.col_grades().end());
    if (all.empty()) {
        Grade z(std::vector<coord_t>(m.d(), 0));
        return {z, z};
    }
    Grade lo = all.front(), hi = all.front();
    for (const auto& g : all) {
        lo = meet(lo, g);
        hi = join(hi, g);
    }
    for (std::size_t k = 0; k < hi.dim(); ++k)
        hi[k] += 1;
    return {lo, hi};
}

struct DimArray
{
    Grade origin;
    std::vector<std::size_t> shape;
    std::vector<std::int64_t> values; // row-major, last axis fastest

    friend bool operator==(const DimArray&, const DimArray&) = default;
};

/// dim of the cokernel at u: rows born by u minus the rank of columns born by u.
inline std::int64_t dim_at(const GradedMatrix& m, const Grade& u)
{
    std::int64_t rows = 0;
    for (const auto& g : m.row_grades())
        rows += leq(g, u);
    std::vector<BitVector> cols;
    for (std::size_t j = 0; j < m.n_cols(); ++j)
        if (leq(m.col_grade(j), u))
            cols.push_back(m.mat().col(j));
    return rows - static_cast<std::int64_t>(rank(F2Matrix::from_columns(m.n_rows(), std::move(cols))));
}

inline DimArray dimension_function(const GradedMatrix& m, const Box& box, unsigned threads = 1)
{
    if (box.lo.dim() != m.d() || box.hi.dim() != m.d())
        throw input_error("box dimension does not match the presentation");
    for (const auto* gs : {&m.row_grades(), &m.col_grades()})
        for (const auto& g : *gs)
            if (!box.contains(g))
                throw input_error("box " + box.lo.str() + ".." + box.hi.str() + " does not cover grade " + g.str());
    DimArray out{box.lo, box.shape(), std::vector<std::int64_t>(box.size(), 0)};
    const std::size_t n = out.values.size();
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t f = first; f < n; f += stride)
            out.values[f] = dim_at(m, box.at(f));
    };
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        work(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k)
        pool.emplace_back(work, k, threads);
    for (auto& th : pool)
        th.join();
    return out;
}

inline std::vector<DimArray> blockcode(const GradedMatrix& m, const BlockSet& blocks, const Box& box,
                                       unsigned threads = 1)
{
    std::vector<DimArray> out;
    for (const auto& b : blocks)
        out.push_back(dimension_function(m.sub(b.rows, b.cols), box, threads));
    return out;
}

} // namespace mpd
