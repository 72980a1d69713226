#include <gtest/gtest.h>

#include "support.hpp"

using namespace mpd;

namespace {

std::string expect_error(const std::string& text)
{
    try {
        parse_filtration(text);
    } catch (const input_error& e) {
        return e.what();
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return "";
}

} // namespace

TEST(Filtration, WorkingExampleFile)
{
    const Filtration f = load_filtration(mpdt::data_path("working.mpfilt"));
    EXPECT_EQ(f.d, 2u);
    EXPECT_EQ(f.simplices.size(), 6u);
    const GradedMatrix d1 = boundary_matrix(f, 1);
    EXPECT_EQ(d1, mpdt::working_example());
    EXPECT_EQ(d1.row_labels(), (std::vector<std::string>{"v0", "v1", "v2"}));
    EXPECT_EQ(d1.col_labels(), (std::vector<std::string>{"e3", "e4", "e5"}));
}

TEST(Filtration, VertexOnly)
{
    const Filtration f = parse_filtration("mpfilt 1\nparams 2\ns 0 0 :\ns 1 0 :\n");
    EXPECT_EQ(boundary_matrix(f, 1).n_cols(), 0u);
    EXPECT_EQ(boundary_matrix(f, 1).n_rows(), 2u);
}

TEST(Filtration, FilledTriangleBoundary)
{
    const Filtration f =
        parse_filtration("mpfilt 1\nparams 2\ns 0 0 :\ns 0 0 :\ns 0 0 :\ns 0 0 : 0 1\ns 0 0 : 1 2\n"
                         "s 0 0 : 0 2\ns 0 0 : 3 4 5\n");
    const GradedMatrix d2 = boundary_matrix(f, 2);
    EXPECT_EQ(d2.mat(), F2Matrix::from_rows({{1}, {1}, {1}}));
    EXPECT_EQ(boundary_matrix(f, 5).n_cols(), 0u);
}

TEST(Filtration, CommentsAndBlankLines)
{
    const Filtration f = parse_filtration("# leading comment\n\nmpfilt 1 # header\nparams 1\n\ns 3 :  # v\n");
    EXPECT_EQ(f.simplices.size(), 1u);
    EXPECT_EQ(f.simplices[0].grade, (Grade{3}));
}

TEST(Filtration, Rejections)
{
    EXPECT_NE(expect_error("mpfilt 2\nparams 2\n").find("header"), std::string::npos);
    EXPECT_NE(expect_error("mpfilt 1\nparams 2\ns 2 1 :\ns 0 0 :\ns 1 1 : 0 1\n").find("line 5"),
              std::string::npos);
    EXPECT_NE(expect_error("mpfilt 1\nparams 2\ns 0 0 :\ns 0 0 : 0 7\n").find("earlier"), std::string::npos);
    EXPECT_NE(expect_error("mpfilt 1\nparams 2\ns 0 0 :\ns 0 0 :\ns 0 0 :\ns 0 0 : 0 1 2\n").find("facets"),
              std::string::npos);
    const std::string dup = expect_error("mpfilt 1\nparams 2\ns 0 0 :\ns 0 0 :\ns 0 1 : 0 1\ns 1 0 : 0 1\n");
    EXPECT_NE(dup.find("mapping telescope"), std::string::npos);
    EXPECT_NE(expect_error("mpfilt 1\nparams 2\ns 99999999999999999999 0 :\n").find("out of range"),
              std::string::npos);
    EXPECT_NE(expect_error("mpfilt 1\nparams 2\ns 0 :\n").find("line 3"), std::string::npos);
    // edges 3 and 4 share vertex 1 but with 0-1, 1-2 and 0-1 again there is no triangle
    expect_error("mpfilt 1\nparams 1\ns 0 :\ns 0 :\ns 0 :\ns 0 : 0 1\ns 0 : 1 2\ns 0 : 0 2\ns 0 : 3 4 4\n");
    expect_error("mpfilt 1\nparams 1\ns 0 :\ns 0 :\ns 0 :\ns 0 :\ns 0 : 0 1\ns 0 : 2 3\ns 0 : 1 2\n"
                 "s 0 : 4 5 6\n");
}

TEST(FiltrationProperty, BoundarySquaredIsZero)
{
    auto f = mpdt::prop_boundary_squared(51, 500);
    EXPECT_FALSE(f) << *f;
}

TEST(FiltrationProperty, BoundaryMatricesHomogeneous)
{
    std::mt19937_64 rng(52);
    for (int c = 0; c < 500; ++c) {
        const Filtration f = parse_filtration(mpdt::random_filtration_text(rng, 2, 2 + rng() % 4, 0.6, 0.6));
        for (std::size_t p = 1; p <= 3; ++p)
            EXPECT_FALSE(boundary_matrix(f, p).homogeneity_violation());
    }
}

TEST(Filtration, DataFilesParse)
{
    for (const char* name : {"working.mpfilt", "torus.mpfilt", "fig5.mpfilt"}) {
        const Filtration f = load_filtration(mpdt::data_path(name));
        for (std::size_t p = 1; p <= f.max_dim(); ++p)
            EXPECT_TRUE(multiply(boundary_matrix(f, p).mat(), boundary_matrix(f, p + 1).mat()).is_zero()) << name;
    }
    const Filtration torus = load_filtration(mpdt::data_path("torus.mpfilt"));
    EXPECT_EQ(torus.of_dim(0).size(), 9u);
    EXPECT_EQ(torus.of_dim(1).size(), 27u);
    EXPECT_EQ(torus.of_dim(2).size(), 18u);
}
