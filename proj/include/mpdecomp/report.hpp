#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "diagonalize.hpp"
#include "error.hpp"
#include "filtration.hpp"
#include "graded_matrix.hpp"
#include "grades.hpp"
#include "invariants.hpp"
#include "oracle.hpp"
#include "presentation.hpp"

namespace mpd {

enum class Command { decompose, diagonalize, betti, blockcode, check, export_pres };
enum class InputKind { automatic, filtration, presentation };
enum class Format { json, text, csv };

struct RunConfig
{
    Command command = Command::decompose;
    std::string input;
    InputKind kind = InputKind::automatic;
    std::optional<std::size_t> p;
    bool perturb_ties = false;
    bool emit_betti = true;
    bool emit_blockcode = true;
    std::optional<Box> box;
    Format format = Format::json;
    unsigned threads = 1;
};

struct RunResult
{
    int exit_code = 0;
    std::string output;
    std::string diagnostic;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input = 2;
inline constexpr int tied = 3;
inline constexpr int internal = 4;
} // namespace exit_code

inline Presentation build_presentation(std::string_view text, InputKind kind, std::optional<std::size_t> p)
{
    if (kind == InputKind::automatic) {
        const auto lines = detail::logical_lines(text);
        if (lines.empty())
            throw input_error("empty input");
        const auto magic = lines.front().second.front();
        if (magic == "mpfilt")
            kind = InputKind::filtration;
        else if (magic == "mppres")
            kind = InputKind::presentation;
        else
            throw input_error("line " + std::to_string(lines.front().first) + ": unknown header '" +
                              std::string(magic) + "'");
    }
    if (kind == InputKind::presentation)
        return {parse_presentation(text), CaseTag::RAW, false};
    const Filtration f = parse_filtration(text);
    if (!p)
        throw input_error("filtration input needs a homology dimension (--dim)");
    if (*p == 0)
        return pres_h0(f);
    if (f.d == 2)
        return pres_2param(f, *p);
    return pres_dparam(f, *p);
}

namespace detail {

inline nlohmann::json grade_json(const Grade& g) { return g.coords(); }

inline nlohmann::json grades_json(const std::vector<Grade>& gs)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto& g : gs)
        a.push_back(grade_json(g));
    return a;
}

inline std::string monomial(const Grade& e)
{
    return is_zero(e) ? "" : "t^" + e.str();
}

/// Basis expressions of the current rows and columns in terms of the
/// original ones, e.g. "v2+t^(0,1)v1".
inline std::pair<std::vector<std::string>, std::vector<std::string>> basis_expressions(const GradedMatrix& m,
                                                                                       const OpCertificate& cert)
{
    std::vector<BitVector> er, ec;
    for (std::size_t i = 0; i < m.n_rows(); ++i)
        er.push_back(BitVector::from_indices(m.n_rows(), std::vector<std::size_t>{i}));
    for (std::size_t j = 0; j < m.n_cols(); ++j)
        ec.push_back(BitVector::from_indices(m.n_cols(), std::vector<std::size_t>{j}));
    for (const Op& op : cert.ops) {
        if (op.kind == OpKind::col)
            ec[op.target] ^= ec[op.source];
        else
            er[op.source] ^= er[op.target]; // r_k += r_l rewrites the basis element of l
    }
    auto render = [](const std::vector<BitVector>& e, const std::vector<Grade>& g, const std::vector<std::string>& l) {
        std::vector<std::string> out;
        for (std::size_t x = 0; x < e.size(); ++x) {
            std::string s = l[x];
            for (std::size_t y : e[x].ones())
                if (y != x)
                    s += "+" + monomial(g[x] - g[y]) + l[y];
            out.push_back(s);
        }
        return out;
    };
    return {render(er, m.row_grades(), m.row_labels()), render(ec, m.col_grades(), m.col_labels())};
}

inline std::string matrix_text(const GradedMatrix& m, const OpCertificate& cert)
{
    const auto [rl, cl] = basis_expressions(m, cert);
    std::vector<std::vector<std::string>> cells(m.n_rows() + 1, std::vector<std::string>(m.n_cols() + 1));
    for (std::size_t j = 0; j < m.n_cols(); ++j)
        cells[0][j + 1] = cl[j] + " @" + m.col_grade(j).str();
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        cells[i + 1][0] = rl[i] + " @" + m.row_grade(i).str();
        for (std::size_t j = 0; j < m.n_cols(); ++j) {
            if (!m.get(i, j)) {
                cells[i + 1][j + 1] = "0";
                continue;
            }
            const std::string t = monomial(m.col_grade(j) - m.row_grade(i));
            cells[i + 1][j + 1] = t.empty() ? "1" : t;
        }
    }
    std::vector<std::size_t> width(m.n_cols() + 1, 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    std::ostringstream os;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "  " : "") << row[c] << std::string(width[c] - row[c].size(), ' ');
        os << "\n";
    }
    return os.str();
}

inline nlohmann::json blocks_json(const BlockSet& blocks)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto& b : blocks)
        a.push_back({{"rows", b.rows}, {"cols", b.cols}});
    return a;
}

} // namespace detail

inline RunResult run_check(const Presentation& pres, const RunConfig& cfg)
{
    const GradedMatrix& m = pres.matrix;
    const Diagonalization diag = tot_diagonalize(m, {cfg.perturb_ties, {}, {}, {}});
    const BlockSet brute = oracle::brute_force_finest(m);
    const bool agree = brute == diag.blocks;
    const AdmissibleOps ops = admissible_ops(m);
    RunResult r;
    r.exit_code = agree ? exit_code::ok : exit_code::internal;
    if (cfg.format == Format::json) {
        nlohmann::json j = {{"agree", agree},
                            {"algorithm_blocks", detail::blocks_json(diag.blocks)},
                            {"oracle_blocks", detail::blocks_json(brute)},
                            {"num_rowops", ops.rowop.size()},
                            {"num_colops", ops.colop.size()},
                            {"perturbed", diag.perturbed}};
        r.output = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << (agree ? "agree" : "DISAGREE") << ": algorithm " << diag.blocks.size() << " blocks, oracle "
           << brute.size() << " blocks (" << ops.rowop.size() << " row ops, " << ops.colop.size()
           << " column ops enumerated)\n";
        r.output = os.str();
    }
    if (!agree)
        r.diagnostic = "oracle and algorithm disagree";
    return r;
}

inline RunResult run_report(const Presentation& pres, const RunConfig& cfg)
{
    const GradedMatrix& m = pres.matrix;
    const Diagonalization diag = tot_diagonalize(m, {cfg.perturb_ties, {}, {}, {}});
    const bool want_betti =
        cfg.emit_betti && (cfg.command == Command::decompose || cfg.command == Command::betti);
    const bool want_dim =
        cfg.emit_blockcode && (cfg.command == Command::decompose || cfg.command == Command::blockcode);
    const Box box = cfg.box ? *cfg.box : default_box(m);

    std::vector<BettiTable> betti;
    std::vector<DimArray> dims;
    for (const auto& b : diag.blocks) {
        const GradedMatrix blk = diag.matrix.sub(b.rows, b.cols);
        if (want_betti)
            betti.push_back(pres.minimized ? betti_table(blk) : BettiTable{});
        if (want_dim)
            dims.push_back(dimension_function(blk, box, cfg.threads));
    }

    RunResult r;
    if (cfg.format == Format::csv) {
        if (!want_dim)
            throw input_error("csv output is only available for dimension functions");
        std::ostringstream os;
        for (std::size_t k = 0; k < m.d(); ++k)
            os << "x" << k + 1 << ",";
        os << "block_id,dim\n";
        for (std::size_t b = 0; b < dims.size(); ++b)
            for (std::size_t f = 0; f < dims[b].values.size(); ++f) {
                for (coord_t x : box.at(f).coords())
                    os << x << ",";
                os << b << "," << dims[b].values[f] << "\n";
            }
        r.output = os.str();
        return r;
    }

    if (cfg.format == Format::text) {
        std::ostringstream os;
        os << "case " << to_string(pres.case_tag) << ", " << m.n_rows() << "x" << m.n_cols() << ", "
           << diag.blocks.size() << " blocks, " << diag.certificate.ops.size() << " operations"
           << (diag.perturbed ? ", perturbed" : "") << "\n\n";
        os << detail::matrix_text(diag.matrix, diag.certificate);
        for (std::size_t b = 0; b < diag.blocks.size(); ++b) {
            const auto& blk = diag.blocks[b];
            os << "\nblock " << b << ": rows {";
            for (std::size_t k = 0; k < blk.rows.size(); ++k)
                os << (k ? "," : "") << m.row_labels()[blk.rows[k]];
            os << "} cols {";
            for (std::size_t k = 0; k < blk.cols.size(); ++k)
                os << (k ? "," : "") << m.col_labels()[blk.cols[k]];
            os << "}\n";
            if (want_betti && pres.minimized)
                for (int j = 0; j <= betti[b].max_degree_computed; ++j) {
                    os << "  beta" << j << ":";
                    for (const auto& g : betti[b].grades(j))
                        os << " " << g.str();
                    os << "\n";
                }
            if (want_dim) {
                os << "  dim over " << box.lo.str() << ".." << box.hi.str() << ":";
                for (auto v : dims[b].values)
                    os << " " << v;
                os << "\n";
            }
        }
        r.output = os.str();
        return r;
    }

    nlohmann::json j;
    j["case_tag"] = to_string(pres.case_tag);
    j["perturbed"] = diag.perturbed;
    j["minimized"] = pres.minimized;
    j["num_ops_applied"] = diag.certificate.ops.size();
    j["d"] = m.d();
    j["row_labels"] = m.row_labels();
    j["col_labels"] = m.col_labels();
    j["row_grades"] = detail::grades_json(m.row_grades());
    j["col_grades"] = detail::grades_json(m.col_grades());
    nlohmann::json mat = nlohmann::json::array();
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.n_cols(); ++c)
            row.push_back(diag.matrix.get(i, c) ? 1 : 0);
        mat.push_back(std::move(row));
    }
    j["matrix"] = std::move(mat);
    if (want_dim)
        j["box"] = {{"lo", detail::grade_json(box.lo)}, {"hi", detail::grade_json(box.hi)}};
    nlohmann::json blocks = nlohmann::json::array();
    for (std::size_t b = 0; b < diag.blocks.size(); ++b) {
        const auto& blk = diag.blocks[b];
        nlohmann::json jb;
        jb["rows"] = blk.rows;
        jb["cols"] = blk.cols;
        std::vector<Grade> rg, cg;
        std::vector<std::string> rl, cl;
        for (std::size_t i : blk.rows) {
            rg.push_back(m.row_grade(i));
            rl.push_back(m.row_labels()[i]);
        }
        for (std::size_t c : blk.cols) {
            cg.push_back(m.col_grade(c));
            cl.push_back(m.col_labels()[c]);
        }
        jb["row_grades"] = detail::grades_json(rg);
        jb["col_grades"] = detail::grades_json(cg);
        jb["row_labels"] = rl;
        jb["col_labels"] = cl;
        if (want_betti && pres.minimized) {
            nlohmann::json bj = nlohmann::json::object();
            for (int d = 0; d <= betti[b].max_degree_computed; ++d)
                bj[std::to_string(d)] = detail::grades_json(betti[b].grades(d));
            jb["betti"] = std::move(bj);
            jb["max_degree_computed"] = betti[b].max_degree_computed;
        }
        if (want_dim)
            jb["dim_function"] = {{"origin", detail::grade_json(dims[b].origin)},
                                  {"shape", dims[b].shape},
                                  {"values", dims[b].values}};
        blocks.push_back(std::move(jb));
    }
    j["blocks"] = std::move(blocks);
    r.output = j.dump(2) + "\n";
    return r;
}

/// Runs one command on already-loaded input text.
inline RunResult run_text(const RunConfig& cfg, std::string_view text)
{
    try {
        Presentation pres = build_presentation(text, cfg.kind, cfg.p);
        if (cfg.command == Command::check)
            return run_check(pres, cfg);
        if (cfg.command != Command::diagonalize)
            pres = minimize(pres);
        if (cfg.command == Command::export_pres)
            return {exit_code::ok, write_presentation(pres.matrix), ""};
        return run_report(pres, cfg);
    } catch (const tied_grades_error& e) {
        return {exit_code::tied, "", std::string(e.what()) + " (pass --perturb-ties to break ties by index)"};
    } catch (const input_error& e) {
        return {exit_code::input, "", e.what()};
    } catch (const budget_error& e) {
        return {exit_code::input, "", e.what()};
    } catch (const std::exception& e) {
        return {exit_code::internal, "", std::string("internal error: ") + e.what()};
    }
}

inline RunResult run(const RunConfig& cfg)
{
    std::string text;
    try {
        text = detail::read_file(cfg.input);
    } catch (const input_error& e) {
        return {exit_code::input, "", e.what()};
    }
    return run_text(cfg, text);
}

} // namespace mpd
