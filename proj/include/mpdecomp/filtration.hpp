#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "f2_linalg.hpp"
#include "graded_matrix.hpp"
#include "grades.hpp"

namespace mpd {

struct Simplex
{
    std::size_t id = 0;
    Grade grade;
    std::vector<std::size_t> facets;   // sorted simplex ids
    std::vector<std::size_t> vertices; // sorted vertex ids
    std::size_t dim = 0;
};

struct Filtration
{
    std::size_t d = 0;
    std::vector<Simplex> simplices;

    std::size_t max_dim() const
    {
        std::size_t m = 0;
        for (const auto& s : simplices)
            m = std::max(m, s.dim);
        return m;
    }

    std::vector<std::size_t> of_dim(std::size_t p) const
    {
        std::vector<std::size_t> ids;
        for (const auto& s : simplices)
            if (s.dim == p)
                ids.push_back(s.id);
        return ids;
    }
};

namespace detail {

/// Whitespace tokens of one logical line, with '#' comments removed.
inline std::vector<std::string_view> tokens(std::string_view line)
{
    if (auto h = line.find('#'); h != std::string_view::npos)
        line = line.substr(0, h);
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

/// line_no 0 means the token did not come from a file.
template <class Int>
Int parse_int(std::string_view tok, std::size_t line_no, const char* what)
{
    const std::string at = line_no ? "line " + std::to_string(line_no) + ": " : "";
    Int v{};
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec == std::errc::result_out_of_range)
        throw input_error(at + what + " '" + std::string(tok) + "' is out of range");
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw input_error(at + "expected " + what + ", got '" + std::string(tok) + "'");
    return v;
}

/// Non-empty lines as (line number, tokens).
inline std::vector<std::pair<std::size_t, std::vector<std::string_view>>> logical_lines(std::string_view text)
{
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> out;
    std::size_t line_no = 0, start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        auto tok = tokens(text.substr(start, end - start));
        if (!tok.empty())
            out.emplace_back(line_no, std::move(tok));
        start = end + 1;
    }
    return out;
}

inline void expect_header(const std::vector<std::pair<std::size_t, std::vector<std::string_view>>>& lines,
                          std::size_t idx, std::string_view magic)
{
    if (lines.size() <= idx)
        throw input_error("missing '" + std::string(magic) + " 1' header");
    const auto& [ln, tok] = lines[idx];
    if (tok.size() != 2 || tok[0] != magic || tok[1] != "1")
        throw input_error("line " + std::to_string(ln) + ": unknown header, expected '" + std::string(magic) + " 1'");
}

inline std::size_t expect_params(const std::vector<std::pair<std::size_t, std::vector<std::string_view>>>& lines,
                                 std::size_t idx)
{
    if (lines.size() <= idx)
        throw input_error("missing 'params <d>' line");
    const auto& [ln, tok] = lines[idx];
    if (tok.size() != 2 || tok[0] != "params")
        throw input_error("line " + std::to_string(ln) + ": expected 'params <d>'");
    const auto d = parse_int<std::size_t>(tok[1], ln, "parameter count");
    if (d < 1)
        throw input_error("line " + std::to_string(ln) + ": parameter count must be at least 1");
    return d;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw input_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

inline Filtration parse_filtration(std::string_view text)
{
    const auto lines = detail::logical_lines(text);
    detail::expect_header(lines, 0, "mpfilt");
    Filtration f;
    f.d = detail::expect_params(lines, 1);
    std::map<std::vector<std::size_t>, std::size_t> by_vertices;

    for (std::size_t li = 2; li < lines.size(); ++li) {
        const auto& [ln, tok] = lines[li];
        const std::string at = "line " + std::to_string(ln) + ": ";
        if (tok[0] != "s")
            throw input_error(at + "expected a simplex line 's <grade> : <facets>'");
        if (tok.size() < 2 + f.d || tok[1 + f.d] != ":")
            throw input_error(at + "expected " + std::to_string(f.d) + " grade coordinates followed by ':'");
        Simplex s;
        s.id = f.simplices.size();
        std::vector<coord_t> g;
        for (std::size_t k = 0; k < f.d; ++k)
            g.push_back(detail::parse_int<coord_t>(tok[1 + k], ln, "grade coordinate"));
        s.grade = Grade(std::move(g));
        for (std::size_t k = 2 + f.d; k < tok.size(); ++k) {
            const auto id = detail::parse_int<std::size_t>(tok[k], ln, "facet id");
            if (id >= s.id)
                throw input_error(at + "facet id " + std::to_string(id) + " does not refer to an earlier simplex");
            s.facets.push_back(id);
        }
        std::sort(s.facets.begin(), s.facets.end());
        if (std::adjacent_find(s.facets.begin(), s.facets.end()) != s.facets.end())
            throw input_error(at + "repeated facet id");

        if (s.facets.empty()) {
            s.vertices = {s.id};
        } else {
            const std::size_t fd = f.simplices[s.facets[0]].dim;
            for (std::size_t id : s.facets)
                if (f.simplices[id].dim != fd)
                    throw input_error(at + "facets have different dimensions");
            s.dim = fd + 1;
            if (s.facets.size() != s.dim + 1)
                throw input_error(at + "a " + std::to_string(s.dim) + "-simplex needs " + std::to_string(s.dim + 1) +
                                  " facets, got " + std::to_string(s.facets.size()));
            for (std::size_t id : s.facets) {
                const auto& fv = f.simplices[id].vertices;
                s.vertices.insert(s.vertices.end(), fv.begin(), fv.end());
            }
            std::sort(s.vertices.begin(), s.vertices.end());
            s.vertices.erase(std::unique(s.vertices.begin(), s.vertices.end()), s.vertices.end());
            if (s.vertices.size() != s.dim + 1)
                throw input_error(at + "facets do not form the boundary of a simplex");
            // each facet is the vertex set minus one vertex; distinct facets then cover all of them
            for (std::size_t id : s.facets)
                if (f.simplices[id].vertices.size() != s.dim)
                    throw input_error(at + "facets do not form the boundary of a simplex");
            for (std::size_t id : s.facets)
                if (!leq(f.simplices[id].grade, s.grade))
                    throw input_error(at + "facet " + std::to_string(id) + " has grade " +
                                      f.simplices[id].grade.str() + " which is not <= " + s.grade.str());
            auto [it, fresh] = by_vertices.emplace(s.vertices, s.id);
            if (!fresh)
                throw input_error(at + "simplex repeats simplex " + std::to_string(it->second) +
                                  "; multi-critical filtrations are not supported (convert them with a "
                                  "mapping telescope first)");
        }
        f.simplices.push_back(std::move(s));
    }
    return f;
}

inline Filtration load_filtration(const std::string& path) { return parse_filtration(detail::read_file(path)); }

inline std::string simplex_label(const Simplex& s)
{
    const char* prefix = s.dim == 0 ? "v" : s.dim == 1 ? "e" : "s";
    return prefix + std::to_string(s.id);
}

/// Graded matrix of the boundary map from p-simplices to (p-1)-simplices,
/// both in id order.
inline GradedMatrix boundary_matrix(const Filtration& f, std::size_t p)
{
    if (p < 1)
        throw input_error("boundary_matrix needs p >= 1");
    const auto rows = f.of_dim(p - 1);
    const auto cols = f.of_dim(p);
    std::vector<std::size_t> row_pos(f.simplices.size(), 0);
    for (std::size_t r = 0; r < rows.size(); ++r)
        row_pos[rows[r]] = r;
    F2Matrix m(rows.size(), cols.size());
    std::vector<Grade> rg, cg;
    std::vector<std::string> rl, cl;
    for (std::size_t id : rows) {
        rg.push_back(f.simplices[id].grade);
        rl.push_back(simplex_label(f.simplices[id]));
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& s = f.simplices[cols[c]];
        cg.push_back(s.grade);
        cl.push_back(simplex_label(s));
        for (std::size_t id : s.facets)
            m.set(row_pos[id], c, true);
    }
    return GradedMatrix(std::move(m), std::move(rg), std::move(cg), std::move(rl), std::move(cl), f.d);
}

} // namespace mpd
