#include <gtest/gtest.h>

#include <json.hpp>

#include <mpdecomp/report.hpp>

#include "support.hpp"

using namespace mpd;

namespace {

RunConfig config(Command c, const char* file, std::optional<std::size_t> p = std::nullopt, Format f = Format::json)
{
    RunConfig cfg;
    cfg.command = c;
    cfg.input = mpdt::data_path(file);
    cfg.p = p;
    cfg.format = f;
    return cfg;
}

} // namespace

TEST(Cli, DecomposeWorkingJson)
{
    const RunResult r = run(config(Command::decompose, "working.mpfilt", 0));
    ASSERT_EQ(r.exit_code, 0) << r.diagnostic;
    const auto j = nlohmann::json::parse(r.output);
    EXPECT_EQ(j["case_tag"], "H0");
    EXPECT_EQ(j["perturbed"], false);
    EXPECT_EQ(j["num_ops_applied"], 2);
    ASSERT_EQ(j["blocks"].size(), 2u);
    EXPECT_EQ(j["blocks"][0]["row_labels"], (std::vector<std::string>{"v0", "v1"}));
    EXPECT_EQ(j["blocks"][0]["col_labels"], (std::vector<std::string>{"e3"}));
    EXPECT_EQ(j["blocks"][1]["betti"]["2"], nlohmann::json::parse("[[2,2]]"));
    EXPECT_EQ(j["blocks"][1]["dim_function"]["shape"], nlohmann::json::parse("[4,4]"));
    EXPECT_EQ(j["matrix"], nlohmann::json::parse("[[1,0,0],[1,0,0],[0,1,1]]"));
}

TEST(Cli, Deterministic)
{
    const RunResult a = run(config(Command::decompose, "torus.mpfilt", 1));
    const RunResult b = run(config(Command::decompose, "torus.mpfilt", 1));
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.output, b.output);
}

TEST(Cli, TextShowsBasisChange)
{
    const RunResult r = run(config(Command::decompose, "working.mpfilt", 0, Format::text));
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("v2+t^(0,1)v1"), std::string::npos);
    EXPECT_NE(r.output.find("e4+t^(0,1)e3"), std::string::npos);
}

TEST(Cli, CsvHeader)
{
    const RunResult r = run(config(Command::blockcode, "working.mppres", std::nullopt, Format::csv));
    ASSERT_EQ(r.exit_code, 0) << r.diagnostic;
    EXPECT_EQ(r.output.substr(0, r.output.find('\n')), "x1,x2,block_id,dim");
    EXPECT_EQ(std::count(r.output.begin(), r.output.end(), '\n'), 1 + 2 * 16);
}

TEST(Cli, DiagonalizeRaw)
{
    const RunResult r = run(config(Command::diagonalize, "working.mppres"));
    ASSERT_EQ(r.exit_code, 0);
    const auto j = nlohmann::json::parse(r.output);
    EXPECT_EQ(j["case_tag"], "RAW");
    EXPECT_FALSE(j["blocks"][0].contains("betti"));
    EXPECT_FALSE(j["blocks"][0].contains("dim_function"));
}

TEST(Cli, CheckAgrees)
{
    const RunResult r = run(config(Command::check, "working.mppres"));
    ASSERT_EQ(r.exit_code, 0) << r.diagnostic;
    EXPECT_EQ(nlohmann::json::parse(r.output)["agree"], true);
}

TEST(Cli, ExportRoundTrip)
{
    const RunResult r = run(config(Command::export_pres, "torus.mpfilt", 1));
    ASSERT_EQ(r.exit_code, 0);
    const GradedMatrix m = parse_presentation(r.output);
    EXPECT_EQ(write_presentation(m), r.output);
    EXPECT_EQ(m.n_rows(), 4u);
    EXPECT_EQ(m.n_cols(), 3u);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run(config(Command::decompose, "missing.mpfilt", 0)).exit_code, exit_code::input);
    EXPECT_EQ(run(config(Command::decompose, "working.mpfilt")).exit_code, exit_code::input);
    RunConfig tied;
    tied.command = Command::decompose;
    const std::string text = "mppres 1\nparams 2\nrows 2\nr 0 0\nr 0 0\ncols 1\nc 1 1 : 0 1\n";
    EXPECT_EQ(run_text(tied, text).exit_code, exit_code::tied);
    tied.perturb_ties = true;
    EXPECT_EQ(run_text(tied, text).exit_code, exit_code::ok);
    EXPECT_EQ(run_text(tied, "garbage\n").exit_code, exit_code::input);
    RunConfig small_box;
    small_box.box = Box{{0, 0}, {0, 0}};
    small_box.perturb_ties = true;
    EXPECT_EQ(run_text(small_box, text).exit_code, exit_code::input);
}

TEST(Cli, PerturbedFlagReported)
{
    RunConfig cfg;
    cfg.perturb_ties = true;
    cfg.command = Command::diagonalize;
    const RunResult r = run_text(cfg, "mppres 1\nparams 2\nrows 2\nr 0 0\nr 0 0\ncols 1\nc 1 1 : 0 1\n");
    ASSERT_EQ(r.exit_code, 0) << r.diagnostic;
    EXPECT_EQ(nlohmann::json::parse(r.output)["perturbed"], true);
}
