#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <mpdecomp/mpdecomp.hpp>
#include <mpdecomp/report.hpp>

namespace {

mpd::Grade parse_point(const std::string& s)
{
    std::vector<mpd::coord_t> c;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(',', start);
        if (end == std::string::npos)
            end = s.size();
        c.push_back(mpd::detail::parse_int<mpd::coord_t>(std::string_view(s).substr(start, end - start), 0,
                                                         "box coordinate"));
        start = end + 1;
    }
    return mpd::Grade(std::move(c));
}

// "x1,..,xd:y1,..,yd"
mpd::Box parse_box(const std::string& s)
{
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw mpd::input_error("--box expects lo:hi, e.g. 0,0:3,3");
    mpd::Box b{parse_point(s.substr(0, colon)), parse_point(s.substr(colon + 1))};
    if (b.lo.dim() != b.hi.dim() || !mpd::leq(b.lo, b.hi))
        throw mpd::input_error("--box corners must have equal dimension and lo <= hi");
    return b;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Decompose multi-parameter persistence modules over F2"};
    app.require_subcommand(1);

    mpd::RunConfig cfg;
    std::string format = "json";
    std::string box;
    std::size_t dim = 0;
    bool no_betti = false, no_blockcode = false;

    struct Sub
    {
        const char* name;
        const char* help;
        mpd::Command cmd;
    };
    const Sub subs[] = {
        {"decompose", "diagonalize and report Betti numbers and dimension functions", mpd::Command::decompose},
        {"diagonalize", "diagonalize the presentation as given and report blocks", mpd::Command::diagonalize},
        {"betti", "report persistent graded Betti numbers", mpd::Command::betti},
        {"blockcode", "report dimension functions of the blocks", mpd::Command::blockcode},
        {"check", "compare against the brute-force oracle (small inputs)", mpd::Command::check},
        {"export-pres", "write the minimized presentation in mppres format", mpd::Command::export_pres},
    };
    std::vector<std::pair<CLI::App*, mpd::Command>> apps;
    std::vector<CLI::Option*> dim_opts;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("input", cfg.input, "filtration (mpfilt) or presentation (mppres) file")->required();
        dim_opts.push_back(sub->add_option("-p,--dim", dim, "homology dimension for filtration input"));
        sub->add_option("-f,--format", format, "json, text or csv")
            ->check(CLI::IsMember({"json", "text", "csv"}));
        sub->add_flag("--perturb-ties", cfg.perturb_ties, "break tied grades by input index");
        sub->add_option("--box", box, "grade box lo:hi for dimension functions, e.g. 0,0:3,3");
        sub->add_option("--threads", cfg.threads, "threads for dimension functions")->check(CLI::PositiveNumber);
        sub->add_flag("--no-betti", no_betti, "omit Betti numbers");
        sub->add_flag("--no-blockcode", no_blockcode, "omit dimension functions");
        apps.emplace_back(sub, s.cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : mpd::exit_code::input;
    }

    for (std::size_t k = 0; k < apps.size(); ++k)
        if (apps[k].first->parsed()) {
            cfg.command = apps[k].second;
            if (dim_opts[k]->count())
                cfg.p = dim;
        }
    cfg.format = format == "text" ? mpd::Format::text : format == "csv" ? mpd::Format::csv : mpd::Format::json;
    cfg.emit_betti = !no_betti;
    cfg.emit_blockcode = !no_blockcode;
    if (!box.empty()) {
        try {
            cfg.box = parse_box(box);
        } catch (const mpd::input_error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return mpd::exit_code::input;
        }
    }

    const mpd::RunResult r = mpd::run(cfg);
    std::cout << r.output;
    if (!r.diagnostic.empty())
        std::cerr << "error: " << r.diagnostic << "\n";
    return r.exit_code;
}
