#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "f2_linalg.hpp"
#include "filtration.hpp"
#include "graded_matrix.hpp"
#include "grades.hpp"

namespace mpd {

enum class CaseTag { H0, TWO_PARAM, D_PARAM, RAW };

inline const char* to_string(CaseTag c)
{
    switch (c) {
    case CaseTag::H0: return "H0";
    case CaseTag::TWO_PARAM: return "TWO_PARAM";
    case CaseTag::D_PARAM: return "D_PARAM";
    case CaseTag::RAW: return "RAW";
    }
    return "?";
}

/// Rows generate, columns relate; the module is the cokernel.
struct Presentation
{
    GradedMatrix matrix;
    CaseTag case_tag = CaseTag::RAW;
    bool minimized = false;
};

/// A kernel element of an ambient matrix M: coords selects columns of M
/// summing to zero, each of grade <= grade.
struct KernelElement
{
    Grade grade;
    BitVector coords;
};

enum class KernelMode { BASIS_2PARAM, GENSET_DPARAM };

/// Product grid of the coordinates appearing in the given grades, listed
/// lexicographically.
inline std::vector<Grade> grade_grid(const std::vector<Grade>& grades, std::size_t d)
{
    if (d == 0)
        return {};
    std::vector<std::vector<coord_t>> axes(d);
    for (const auto& g : grades)
        for (std::size_t k = 0; k < d; ++k)
            axes[k].push_back(g[k]);
    for (auto& a : axes) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        if (a.empty())
            return {};
    }
    std::vector<Grade> grid;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        std::vector<coord_t> z(d);
        for (std::size_t k = 0; k < d; ++k)
            z[k] = axes[k][idx[k]];
        grid.emplace_back(std::move(z));
        std::size_t k = d;
        while (k > 0) {
            --k;
            if (++idx[k] < axes[k].size())
                break;
            idx[k] = 0;
            if (k == 0)
                return grid;
        }
    }
}

/// Kernel of M as a graded module, by sweeping the grid of column grades in
/// lexicographic order and reducing the columns born by each grid point.
/// A column that reduces to zero yields a kernel element at that point:
/// once in BASIS_2PARAM mode, and in GENSET_DPARAM mode whenever no earlier
/// element for that column has grade below the point.
inline std::vector<KernelElement> kernel_gens(const GradedMatrix& m, KernelMode mode)
{
    if (mode == KernelMode::BASIS_2PARAM && m.d() != 2)
        throw input_error("kernel basis mode needs d == 2, got d == " + std::to_string(m.d()));
    const std::size_t n = m.n_cols();
    const auto order = topo_order(m.col_grades());
    std::vector<std::vector<Grade>> recorded(n);
    std::vector<KernelElement> out;

    for (const Grade& z : grade_grid(m.col_grades(), m.d())) {
        std::vector<BitVector> work, slave;
        std::vector<std::size_t> who;
        std::vector<std::optional<std::size_t>> pivot(m.n_rows());
        for (std::size_t j : order) {
            if (!leq(m.col_grade(j), z))
                continue;
            BitVector w = m.mat().col(j);
            BitVector s(n);
            s.set(j, true);
            while (auto l = w.low()) {
                if (!pivot[*l])
                    break;
                w ^= work[*pivot[*l]];
                s ^= slave[*pivot[*l]];
            }
            if (auto l = w.low()) {
                pivot[*l] = work.size();
                work.push_back(std::move(w));
                slave.push_back(std::move(s));
                who.push_back(j);
                continue;
            }
            auto& seen = recorded[j];
            const bool fresh = mode == KernelMode::BASIS_2PARAM
                                   ? seen.empty()
                                   : std::none_of(seen.begin(), seen.end(), [&](const Grade& g) { return leq(g, z); });
            if (fresh) {
                seen.push_back(z);
                out.push_back({z, std::move(s)});
            }
        }
    }
    return out;
}

/// Generators as columns over the ambient column basis, graded by the
/// ambient column grades.
inline GradedMatrix kernel_matrix(const GradedMatrix& ambient, const std::vector<KernelElement>& gens)
{
    F2Matrix mat(ambient.n_cols(), 0);
    std::vector<Grade> cg;
    std::vector<std::string> cl;
    for (std::size_t k = 0; k < gens.size(); ++k) {
        mat.append_col(gens[k].coords);
        cg.push_back(gens[k].grade);
        cl.push_back("z" + std::to_string(k));
    }
    return GradedMatrix(std::move(mat), ambient.col_grades(), std::move(cg), ambient.col_labels(), std::move(cl),
                        ambient.d());
}

/// Re-expresses every column of cols in the given kernel generators. Rows of
/// the result are the generators.
inline GradedMatrix rewrite_in_basis(const GradedMatrix& cols, const std::vector<KernelElement>& basis,
                                     const std::vector<std::string>& basis_labels = {})
{
    std::vector<Grade> rg;
    std::vector<std::string> rl;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (basis[k].coords.size() != cols.n_rows())
            throw input_error("kernel element has " + std::to_string(basis[k].coords.size()) +
                              " coordinates, matrix has " + std::to_string(cols.n_rows()) + " rows");
        rg.push_back(basis[k].grade);
        rl.push_back(k < basis_labels.size() ? basis_labels[k] : "z" + std::to_string(k));
    }
    F2Matrix out(basis.size(), 0);
    for (std::size_t j = 0; j < cols.n_cols(); ++j) {
        std::vector<std::size_t> avail;
        std::vector<BitVector> src;
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (leq(basis[k].grade, cols.col_grade(j))) {
                avail.push_back(k);
                src.push_back(basis[k].coords);
            }
        const auto red = col_reduce(F2Matrix::from_columns(cols.n_rows(), std::move(src)), cols.mat().col(j));
        if (!red.reduced.is_zero())
            throw internal_error("column " + cols.col_labels()[j] + " at grade " + cols.col_grade(j).str() +
                                 " is not in the span of the kernel generators");
        BitVector c(basis.size());
        for (std::size_t s : red.combination.ones())
            c.set(avail[s], true);
        out.append_col(std::move(c));
    }
    return GradedMatrix(std::move(out), std::move(rg), cols.col_grades(), std::move(rl), cols.col_labels(),
                        cols.d());
}

inline Presentation pres_h0(const Filtration& f) { return {boundary_matrix(f, 1), CaseTag::H0, false}; }

inline Presentation pres_2param(const Filtration& f, std::size_t p)
{
    if (f.d != 2)
        throw input_error("the two-parameter construction needs d == 2, got d == " + std::to_string(f.d));
    if (p < 1)
        throw input_error("homology dimension must be >= 1 here");
    const auto basis = kernel_gens(boundary_matrix(f, p), KernelMode::BASIS_2PARAM);
    return {rewrite_in_basis(boundary_matrix(f, p + 1), basis), CaseTag::TWO_PARAM, false};
}

/// Generators of the p-cycles with relations from the boundaries and from
/// the syzygies among the (possibly redundant) cycle generators.
inline Presentation pres_dparam(const Filtration& f, std::size_t p)
{
    if (p < 1)
        throw input_error("homology dimension must be >= 1 here");
    const GradedMatrix dp = boundary_matrix(f, p);
    const auto gens = kernel_gens(dp, KernelMode::GENSET_DPARAM);
    const GradedMatrix bar = rewrite_in_basis(boundary_matrix(f, p + 1), gens);
    const auto syz = kernel_gens(kernel_matrix(dp, gens), KernelMode::GENSET_DPARAM);

    F2Matrix mat = bar.mat();
    std::vector<Grade> cg = bar.col_grades();
    std::vector<std::string> cl = bar.col_labels();
    for (std::size_t k = 0; k < syz.size(); ++k) {
        mat.append_col(syz[k].coords);
        cg.push_back(syz[k].grade);
        cl.push_back("y" + std::to_string(k));
    }
    return {GradedMatrix(std::move(mat), bar.row_grades(), std::move(cg), bar.row_labels(), std::move(cl), f.d),
            CaseTag::D_PARAM, false};
}

/// Removes trivial summands: unit entries (row grade == column grade) are
/// eliminated together with their row and column, then relations generated
/// by the other relations are dropped.
inline Presentation minimize(const Presentation& p)
{
    GradedMatrix m = p.matrix;
    while (true) {
        std::optional<std::tuple<Grade, std::size_t, std::size_t>> best;
        for (std::size_t j = 0; j < m.n_cols(); ++j)
            for (std::size_t i : m.mat().col(j).ones())
                if (m.row_grade(i) == m.col_grade(j)) {
                    std::tuple<Grade, std::size_t, std::size_t> cand{m.row_grade(i), i, j};
                    if (!best || cand < *best)
                        best = cand;
                }
        if (!best)
            break;
        const auto [g, pi, pj] = *best;
        for (std::size_t k : m.mat().col(pj).ones())
            if (k != pi)
                m.add_row(pi, k);
        for (std::size_t l = 0; l < m.n_cols(); ++l)
            if (l != pj && m.get(pi, l))
                m.add_col(pj, l);
        std::vector<std::size_t> rows, cols;
        for (std::size_t i = 0; i < m.n_rows(); ++i)
            if (i != pi)
                rows.push_back(i);
        for (std::size_t j = 0; j < m.n_cols(); ++j)
            if (j != pj)
                cols.push_back(j);
        m = m.sub(rows, cols);
    }

    // latest columns first, so an earlier column is never dropped in favour of a later copy
    const auto order = topo_order(m.col_grades());
    std::vector<bool> alive(m.n_cols(), true);
    for (std::size_t q = order.size(); q-- > 0;) {
        const std::size_t j = order[q];
        std::vector<BitVector> src;
        for (std::size_t k = 0; k < m.n_cols(); ++k)
            if (k != j && alive[k] && leq(m.col_grade(k), m.col_grade(j)))
                src.push_back(m.mat().col(k));
        if (in_span(F2Matrix::from_columns(m.n_rows(), std::move(src)), m.mat().col(j)))
            alive[j] = false;
    }
    std::vector<std::size_t> rows(m.n_rows()), cols;
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    for (std::size_t j = 0; j < m.n_cols(); ++j)
        if (alive[j])
            cols.push_back(j);
    return {m.sub(rows, cols), p.case_tag, true};
}

inline bool has_unit_entry(const GradedMatrix& m)
{
    for (std::size_t j = 0; j < m.n_cols(); ++j)
        for (std::size_t i : m.mat().col(j).ones())
            if (m.row_grade(i) == m.col_grade(j))
                return true;
    return false;
}

inline GradedMatrix parse_presentation(std::string_view text)
{
    const auto lines = detail::logical_lines(text);
    detail::expect_header(lines, 0, "mppres");
    const std::size_t d = detail::expect_params(lines, 1);
    std::size_t li = 2;

    auto count_line = [&](std::string_view key) {
        if (li >= lines.size())
            throw input_error("missing '" + std::string(key) + " <count>' line");
        const auto& [ln, tok] = lines[li++];
        if (tok.size() != 2 || tok[0] != key)
            throw input_error("line " + std::to_string(ln) + ": expected '" + std::string(key) + " <count>'");
        return detail::parse_int<std::size_t>(tok[1], ln, "count");
    };
    auto grade_at = [&](const std::vector<std::string_view>& tok, std::size_t ln) {
        std::vector<coord_t> g;
        for (std::size_t k = 0; k < d; ++k)
            g.push_back(detail::parse_int<coord_t>(tok[1 + k], ln, "grade coordinate"));
        return Grade(std::move(g));
    };

    const std::size_t n = count_line("rows");
    std::vector<Grade> rg;
    for (std::size_t i = 0; i < n; ++i, ++li) {
        if (li >= lines.size())
            throw input_error("expected " + std::to_string(n) + " row lines, found " + std::to_string(i));
        const auto& [ln, tok] = lines[li];
        if (tok[0] != "r" || tok.size() != 1 + d)
            throw input_error("line " + std::to_string(ln) + ": expected 'r' and " + std::to_string(d) +
                              " grade coordinates");
        rg.push_back(grade_at(tok, ln));
    }
    const std::size_t m = count_line("cols");
    std::vector<Grade> cg;
    F2Matrix mat(n, 0);
    for (std::size_t j = 0; j < m; ++j, ++li) {
        if (li >= lines.size())
            throw input_error("expected " + std::to_string(m) + " column lines, found " + std::to_string(j));
        const auto& [ln, tok] = lines[li];
        if (tok[0] != "c" || tok.size() < 2 + d || tok[1 + d] != ":")
            throw input_error("line " + std::to_string(ln) + ": expected 'c', " + std::to_string(d) +
                              " grade coordinates and ':'");
        cg.push_back(grade_at(tok, ln));
        BitVector c(n);
        for (std::size_t k = 2 + d; k < tok.size(); ++k) {
            const auto r = detail::parse_int<std::size_t>(tok[k], ln, "row index");
            if (r >= n)
                throw input_error("line " + std::to_string(ln) + ": row index " + std::to_string(r) +
                                  " out of range");
            if (c.get(r))
                throw input_error("line " + std::to_string(ln) + ": repeated row index " + std::to_string(r));
            c.set(r, true);
            if (!leq(rg[r], cg.back()))
                throw input_error("line " + std::to_string(ln) + ": entry (" + std::to_string(r) + "," +
                                  std::to_string(j) + ") violates homogeneity, row grade " + rg[r].str() +
                                  " is not <= " + cg.back().str());
        }
        mat.append_col(std::move(c));
    }
    if (li < lines.size())
        throw input_error("line " + std::to_string(lines[li].first) + ": unexpected trailing content");
    return GradedMatrix(std::move(mat), std::move(rg), std::move(cg), {}, {}, d);
}

inline GradedMatrix load_presentation(const std::string& path)
{
    return parse_presentation(detail::read_file(path));
}

inline std::string write_presentation(const GradedMatrix& m)
{
    std::ostringstream os;
    os << "mppres 1\nparams " << m.d() << "\nrows " << m.n_rows() << "\n";
    for (const auto& g : m.row_grades()) {
        os << "r";
        for (coord_t x : g.coords())
            os << ' ' << x;
        os << "\n";
    }
    os << "cols " << m.n_cols() << "\n";
    for (std::size_t j = 0; j < m.n_cols(); ++j) {
        os << "c";
        for (coord_t x : m.col_grade(j).coords())
            os << ' ' << x;
        os << " :";
        for (std::size_t i : m.mat().col(j).ones())
            os << ' ' << i;
        os << "\n";
    }
    return os.str();
}

} // namespace mpd
