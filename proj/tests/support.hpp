#pragma once

// Shared generators and brute-force checks for the unit tests and the
// acceptance runner.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <mpdecomp/mpdecomp.hpp>

#ifndef MPD_DATA_DIR
#define MPD_DATA_DIR "data"
#endif

namespace mpdt {

using namespace mpd;

inline std::string data_path(const std::string& name) { return std::string(MPD_DATA_DIR) + "/" + name; }

/// The 3x3 example: three vertices, three edges of a triangle.
inline GradedMatrix working_example()
{
    return GradedMatrix(F2Matrix::from_rows({{1, 1, 0}, {1, 0, 1}, {0, 1, 1}}), {{0, 1}, {1, 0}, {1, 1}},
                        {{1, 1}, {1, 2}, {2, 1}}, {"vb", "vr", "vg"}, {"er", "eb", "eg"});
}

inline GradedMatrix working_example_diagonalized()
{
    return GradedMatrix(F2Matrix::from_rows({{1, 0, 0}, {1, 0, 0}, {0, 1, 1}}), {{0, 1}, {1, 0}, {1, 1}},
                        {{1, 1}, {1, 2}, {2, 1}});
}

/// The published 4x3 presentation of the hollow torus.
inline GradedMatrix torus_matrix()
{
    return GradedMatrix(F2Matrix::from_rows({{1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 0}}),
                        {{0, 1}, {1, 0}, {1, 1}, {2, 2}}, {{1, 1}, {1, 2}, {2, 1}});
}

inline Grade random_grade(std::mt19937_64& rng, std::size_t d, coord_t hi)
{
    std::uniform_int_distribution<coord_t> u(0, hi);
    std::vector<coord_t> c(d);
    for (auto& x : c)
        x = u(rng);
    return Grade(std::move(c));
}

/// n grades in {0..hi}^d; pairwise distinct when asked (needs (hi+1)^d >= n).
inline std::vector<Grade> random_grades(std::mt19937_64& rng, std::size_t n, std::size_t d, coord_t hi,
                                        bool distinct)
{
    std::vector<Grade> out;
    std::set<Grade> seen;
    while (out.size() < n) {
        Grade g = random_grade(rng, d, hi);
        if (distinct && !seen.insert(g).second)
            continue;
        out.push_back(std::move(g));
    }
    return out;
}

/// Random homogeneous matrix: each allowed entry is 1 with probability density.
inline GradedMatrix random_graded(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t d, coord_t hi,
                                  bool distinct, double density = 0.5)
{
    auto rg = random_grades(rng, n, d, hi, distinct);
    auto cg = random_grades(rng, m, d, hi, distinct);
    std::bernoulli_distribution coin(density);
    F2Matrix a(n, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (leq(rg[i], cg[j]) && coin(rng))
                a.set(i, j, true);
    return GradedMatrix(std::move(a), std::move(rg), std::move(cg), {}, {}, d);
}

/// Random 1-critical filtration in mpfilt text: vertices, edges on vertex
/// pairs, and triangles on edge triples that close up.
inline std::string random_filtration_text(std::mt19937_64& rng, std::size_t d, std::size_t n_vertices,
                                          double edge_p, double tri_p, coord_t hi = 3)
{
    std::ostringstream os;
    os << "mpfilt 1\nparams " << d << "\n";
    std::vector<Grade> grade;
    auto emit = [&](const Grade& g, const std::vector<std::size_t>& facets) {
        os << "s";
        for (auto x : g.coords())
            os << ' ' << x;
        os << " :";
        for (auto f : facets)
            os << ' ' << f;
        os << "\n";
        grade.push_back(g);
        return grade.size() - 1;
    };
    std::uniform_int_distribution<coord_t> bump(0, 1);
    auto above = [&](Grade g) {
        for (std::size_t k = 0; k < g.dim(); ++k)
            g[k] += bump(rng);
        return g;
    };
    std::bernoulli_distribution pe(edge_p), pt(tri_p);
    for (std::size_t v = 0; v < n_vertices; ++v)
        emit(random_grade(rng, d, hi), {});
    std::vector<std::vector<std::optional<std::size_t>>> edge(n_vertices,
                                                              std::vector<std::optional<std::size_t>>(n_vertices));
    for (std::size_t a = 0; a < n_vertices; ++a)
        for (std::size_t b = a + 1; b < n_vertices; ++b)
            if (pe(rng))
                edge[a][b] = emit(above(join(grade[a], grade[b])), {a, b});
    for (std::size_t a = 0; a < n_vertices; ++a)
        for (std::size_t b = a + 1; b < n_vertices; ++b)
            for (std::size_t c = b + 1; c < n_vertices; ++c)
                if (edge[a][b] && edge[b][c] && edge[a][c] && pt(rng)) {
                    const Grade g = join(join(grade[*edge[a][b]], grade[*edge[b][c]]), grade[*edge[a][c]]);
                    emit(above(g), {*edge[a][b], *edge[b][c], *edge[a][c]});
                }
    return os.str();
}

/// Nullity of the columns of m with grade <= u, by enumerating subsets.
inline std::size_t brute_nullity(const GradedMatrix& m, const Grade& u)
{
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < m.n_cols(); ++j)
        if (leq(m.col_grade(j), u))
            cols.push_back(j);
    std::size_t zero_sums = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cols.size()); ++mask) {
        BitVector s(m.n_rows());
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (mask >> k & 1)
                s ^= m.mat().col(cols[k]);
        zero_sums += s.is_zero();
    }
    std::size_t nullity = 0;
    while ((std::size_t{1} << nullity) < zero_sums)
        ++nullity;
    return nullity;
}

/// Rank of a set of vectors by counting distinct subset sums.
inline std::size_t brute_rank(const std::vector<BitVector>& vs)
{
    std::set<std::vector<std::size_t>> sums;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vs.size()); ++mask) {
        BitVector s(vs.empty() ? 0 : vs.front().size());
        for (std::size_t k = 0; k < vs.size(); ++k)
            if (mask >> k & 1)
                s ^= vs[k];
        sums.insert(s.ones());
    }
    std::size_t r = 0;
    while ((std::size_t{1} << r) < sums.size())
        ++r;
    return r;
}

inline std::vector<Grade> box_points(const Box& b)
{
    std::vector<Grade> out;
    for (std::size_t f = 0; f < b.size(); ++f)
        out.push_back(b.at(f));
    return out;
}

/// Minimal elements of a finite set of grades.
inline std::vector<Grade> minimal_elements(const std::vector<Grade>& gs)
{
    std::vector<Grade> out;
    for (const auto& g : gs) {
        bool minimal = true;
        for (const auto& h : gs)
            if (h != g && leq(h, g))
                minimal = false;
        if (minimal)
            out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Property checks. Each runs `cases` random instances from `seed` and returns
// a description of the first failure.
using Failure = std::optional<std::string>;

inline Failure prop_homogeneity(std::uint64_t seed, int cases)
{
    std::mt19937_64 rng(seed);
    for (int c = 0; c < cases; ++c) {
        GradedMatrix m = random_graded(rng, 1 + rng() % 6, 1 + rng() % 6, 2, 3, false);
        const AdmissibleOps ops = admissible_ops(m);
        for (int step = 0; step < 30; ++step) {
            const bool row = rng() % 2;
            if (row && !ops.rowop.empty()) {
                auto [l, k] = ops.rowop[rng() % ops.rowop.size()];
                m.add_row(l, k);
            } else if (!row && !ops.colop.empty()) {
                auto [i, j] = ops.colop[rng() % ops.colop.size()];
                m.add_col(i, j);
            }
            if (m.homogeneity_violation())
                return "case " + std::to_string(c) + ": homogeneity lost after step " + std::to_string(step);
        }
    }
    return std::nullopt;
}

inline Failure prop_replay(std::uint64_t seed, int cases)
{
    std::mt19937_64 rng(seed);
    for (int c = 0; c < cases; ++c) {
        const bool distinct = c % 2 == 0;
        const GradedMatrix m = random_graded(rng, 1 + rng() % 6, 1 + rng() % 7, 2, 3, distinct);
        DiagonalizeOptions opt;
        opt.perturb_ties = true;
        const Diagonalization dg = tot_diagonalize(m, opt);
        if (!(replay_certificate(m, dg.certificate) == dg.matrix))
            return "case " + std::to_string(c) + ": replay differs from the diagonalized matrix";
        if (!is_diagonalization(dg.matrix.mat(), dg.blocks))
            return "case " + std::to_string(c) + ": blocks are not a diagonalization";
    }
    return std::nullopt;
}

inline Failure prop_boundary_squared(std::uint64_t seed, int cases)
{
    std::mt19937_64 rng(seed);
    for (int c = 0; c < cases; ++c) {
        const std::size_t d = 2 + c % 2;
        const Filtration f = parse_filtration(random_filtration_text(rng, d, 3 + rng() % 4, 0.7, 0.7));
        for (std::size_t p = 1; p + 1 <= f.max_dim() + 1; ++p) {
            const GradedMatrix a = boundary_matrix(f, p), b = boundary_matrix(f, p + 1);
            if (!multiply(a.mat(), b.mat()).is_zero())
                return "case " + std::to_string(c) + ": boundary of boundary is nonzero at p=" + std::to_string(p);
        }
    }
    return std::nullopt;
}

/// Kernel elements are cycles, supported below their grade, and at every box
/// grade span the null space found by subset enumeration.
inline Failure check_kernel(const GradedMatrix& m, KernelMode mode)
{
    const auto gens = kernel_gens(m, mode);
    for (const auto& g : gens) {
        BitVector s(m.n_rows());
        for (std::size_t j : g.coords.ones()) {
            s ^= m.mat().col(j);
            if (!leq(m.col_grade(j), g.grade))
                return std::string("kernel element uses a column born after its grade");
        }
        if (!s.is_zero())
            return std::string("kernel element is not a cycle");
    }
    Box box = default_box(m);
    for (const auto& u : box_points(box)) {
        std::vector<BitVector> live;
        for (const auto& g : gens)
            if (leq(g.grade, u))
                live.push_back(g.coords);
        const std::size_t r = rank(F2Matrix::from_columns(m.n_cols(), live));
        if (r != brute_nullity(m, u))
            return "kernel rank " + std::to_string(r) + " != nullity " + std::to_string(brute_nullity(m, u)) +
                   " at " + u.str();
    }
    if (mode == KernelMode::BASIS_2PARAM && gens.size() > m.n_cols())
        return std::string("kernel basis larger than the column count");
    return std::nullopt;
}

inline Failure prop_kernel(std::uint64_t seed, int cases)
{
    std::mt19937_64 rng(seed);
    for (int c = 0; c < cases; ++c) {
        const bool two = c % 2 == 0;
        const GradedMatrix m = random_graded(rng, 1 + rng() % 4, 1 + rng() % 6, two ? 2 : 3, 2, false, 0.6);
        if (auto f = check_kernel(m, two ? KernelMode::BASIS_2PARAM : KernelMode::GENSET_DPARAM))
            return "case " + std::to_string(c) + ": " + *f;
    }
    return std::nullopt;
}

inline BettiTable global_betti(const GradedMatrix& m) { return betti_table(m); }

inline Failure prop_additivity(std::uint64_t seed, int cases)
{
    std::mt19937_64 rng(seed);
    for (int c = 0; c < cases; ++c) {
        const GradedMatrix raw = random_graded(rng, 1 + rng() % 5, 1 + rng() % 6, 2, 3, true);
        const Presentation p = minimize({raw, CaseTag::RAW, false});
        const Diagonalization dg = tot_diagonalize(p.matrix);
        BettiTable sum;
        for (const auto& t : persistent_betti(dg.matrix, dg.blocks))
            sum += t;
        if (!(sum == global_betti(p.matrix)))
            return "case " + std::to_string(c) + ": Betti tables are not additive over blocks";
        const Box box = default_box(p.matrix);
        const DimArray whole = dimension_function(p.matrix, box);
        std::vector<std::int64_t> acc(whole.values.size(), 0);
        for (const auto& b : blockcode(dg.matrix, dg.blocks, box))
            for (std::size_t k = 0; k < acc.size(); ++k)
                acc[k] += b.values[k];
        if (acc != whole.values)
            return "case " + std::to_string(c) + ": dimension functions are not additive over blocks";
        for (const auto& b : dg.blocks)
            if (b.rows.empty())
                return "case " + std::to_string(c) + ": block without generators in a minimized presentation";
    }
    return std::nullopt;
}

inline Failure prop_hilbert(std::uint64_t seed, int cases)
{
    std::mt19937_64 rng(seed);
    for (int c = 0; c < cases; ++c) {
        const GradedMatrix raw = random_graded(rng, 1 + rng() % 5, 1 + rng() % 6, 2, 3, false);
        const Presentation p = minimize({raw, CaseTag::RAW, false});
        const BettiTable t = betti_table(p.matrix);
        const Box box = default_box(p.matrix);
        const DimArray dm = dimension_function(p.matrix, box);
        for (std::size_t f = 0; f < dm.values.size(); ++f) {
            const Grade u = box.at(f);
            std::int64_t alt = 0;
            for (const auto& [key, k] : t.entries)
                if (leq(key.second, u))
                    alt += (key.first % 2 ? -1 : 1) * static_cast<std::int64_t>(k);
            if (alt != dm.values[f])
                return "case " + std::to_string(c) + ": alternating Betti sum " + std::to_string(alt) +
                       " != dim " + std::to_string(dm.values[f]) + " at " + u.str();
        }
    }
    return std::nullopt;
}

} // namespace mpdt
