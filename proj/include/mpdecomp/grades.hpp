#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace mpd {

using coord_t = std::int64_t;

/// A point of Z^d. Comparison operators give the lexicographic order, which
/// is the total order used to sort rows and columns; the product partial
/// order is `leq`.
class Grade
{
public:
    Grade() = default;
    Grade(std::initializer_list<coord_t> c) : coords_(c) {}
    explicit Grade(std::vector<coord_t> c) : coords_(std::move(c)) {}

    std::size_t dim() const { return coords_.size(); }
    coord_t operator[](std::size_t i) const { return coords_[i]; }
    coord_t& operator[](std::size_t i) { return coords_[i]; }
    const std::vector<coord_t>& coords() const { return coords_; }

    friend bool operator==(const Grade&, const Grade&) = default;
    friend auto operator<=>(const Grade&, const Grade&) = default;

    std::string str() const
    {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < coords_.size(); ++i)
            os << (i ? "," : "") << coords_[i];
        os << ')';
        return os.str();
    }

private:
    std::vector<coord_t> coords_;
};

inline void check_same_dim(const Grade& a, const Grade& b)
{
    if (a.dim() != b.dim())
        throw input_error("grade dimension mismatch: " + a.str() + " vs " + b.str());
}

/// Product partial order: a <= b in every coordinate.
inline bool leq(const Grade& a, const Grade& b)
{
    check_same_dim(a, b);
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (a[i] > b[i])
            return false;
    return true;
}

inline Grade join(const Grade& a, const Grade& b)
{
    check_same_dim(a, b);
    Grade r = a;
    for (std::size_t i = 0; i < a.dim(); ++i)
        r[i] = std::max(a[i], b[i]);
    return r;
}

inline Grade meet(const Grade& a, const Grade& b)
{
    check_same_dim(a, b);
    Grade r = a;
    for (std::size_t i = 0; i < a.dim(); ++i)
        r[i] = std::min(a[i], b[i]);
    return r;
}

inline Grade operator-(const Grade& a, const Grade& b)
{
    check_same_dim(a, b);
    Grade r = a;
    for (std::size_t i = 0; i < a.dim(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

inline bool is_zero(const Grade& g)
{
    return std::all_of(g.coords().begin(), g.coords().end(), [](coord_t x) { return x == 0; });
}

/// Orders entities with equal grades. An empty tie_break means input index
/// order; otherwise indices listed earlier come first and unlisted indices
/// follow in index order.
struct GradeOrderContext
{
    std::vector<std::size_t> tie_break;

    std::vector<std::size_t> ranks(std::size_t n) const
    {
        std::vector<std::size_t> r(n);
        if (tie_break.empty()) {
            std::iota(r.begin(), r.end(), std::size_t{0});
            return r;
        }
        std::vector<bool> seen(n, false);
        std::size_t next = 0;
        for (std::size_t idx : tie_break) {
            if (idx >= n || seen[idx])
                throw input_error("tie_break is not a permutation fragment over " +
                                  std::to_string(n) + " indices");
            seen[idx] = true;
            r[idx] = next++;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (!seen[i])
                r[i] = next++;
        return r;
    }
};

/// Linear extension of the product order: lexicographic on coordinates,
/// ties broken by the context.
inline std::vector<std::size_t> topo_order(std::span<const Grade> grades,
                                           const GradeOrderContext& ctx = {})
{
    const auto rank = ctx.ranks(grades.size());
    std::vector<std::size_t> perm(grades.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        if (grades[a] != grades[b])
            return grades[a] < grades[b];
        return rank[a] < rank[b];
    });
    return perm;
}

/// Pairs (i, j), i < j, of coordinatewise equal grades.
inline std::vector<std::pair<std::size_t, std::size_t>> find_ties(std::span<const Grade> grades)
{
    const auto perm = topo_order(grades);
    std::vector<std::pair<std::size_t, std::size_t>> ties;
    for (std::size_t a = 0; a < perm.size(); ++a) {
        for (std::size_t b = a + 1; b < perm.size() && grades[perm[a]] == grades[perm[b]]; ++b)
            ties.emplace_back(std::min(perm[a], perm[b]), std::max(perm[a], perm[b]));
    }
    std::sort(ties.begin(), ties.end());
    return ties;
}

inline bool strictly_distinct(std::span<const Grade> grades)
{
    const auto perm = topo_order(grades);
    for (std::size_t a = 1; a < perm.size(); ++a)
        if (grades[perm[a - 1]] == grades[perm[a]])
            return false;
    return true;
}

/// Strict order used for admissible operations: grade i <= grade j, and if the
/// grades are equal, i comes first in the tie-break order.
class TieBrokenOrder
{
public:
    TieBrokenOrder(std::span<const Grade> grades, const GradeOrderContext& ctx = {})
        : grades_(grades.begin(), grades.end()), rank_(ctx.ranks(grades.size()))
    {
    }

    bool precedes(std::size_t i, std::size_t j) const
    {
        if (i == j || !leq(grades_[i], grades_[j]))
            return false;
        return grades_[i] != grades_[j] || rank_[i] < rank_[j];
    }

private:
    std::vector<Grade> grades_;
    std::vector<std::size_t> rank_;
};

} // namespace mpd
