// Command-line front end: gen, rigidity, flatten, probe, render.
// Exit codes: 0 ok, 2 invalid input, 3 probe expectation failed, 64 usage.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "linklock/constructions.hpp"
#include "linklock/io.hpp"
#include "linklock/probe.hpp"
#include "linklock/render.hpp"

using namespace linklock;

namespace {

constexpr int EXIT_INVALID = 2, EXIT_EXPECTATION = 3, EXIT_USAGE = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned long default_seed() {
    if (const char* s = std::getenv("LINKLOCK_SEED")) {
        try {
            return std::stoul(s);
        } catch (...) {
            throw UsageError("LINKLOCK_SEED: not an unsigned integer");
        }
    }
    return 1;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_file(path, text);
}

struct GenArgs {
    std::string fixture, out;
    double scale = 1, delta = 0.01;
    std::optional<double> h, g;
    std::optional<unsigned long> seed;
};

Json generate(const GenArgs& a) {
    unsigned long seed = a.seed ? *a.seed : default_seed();
    const std::string& f = a.fixture;
    if (f == "fig2") return to_json(fig2(a.scale));
    if (f == "fig2-zero") return to_json(fig2_zero(a.scale));
    if (f == "fig3") return to_json(fig3(a.h.value_or(a.scale / 100), a.g.value_or(a.scale / 100), a.scale));
    if (f == "comb") return to_json(comb(a.scale));
    if (f == "fig2-cut") return to_json(fig2_cut(a.delta, seed, a.scale));
    if (f.rfind("chain-", 0) == 0) {
        int n = 0;
        try {
            n = std::stoi(f.substr(6));
        } catch (...) {
        }
        if (n >= 1) return to_json(chain(n, seed, a.scale));
    }
    throw UsageError("unknown fixture '" + f + "'");
}

TouchingConfig touching_fixture(const std::string& name, double scale) {
    if (name == "fig2") return fig2(scale);
    if (name == "fig2-zero") return fig2_zero(scale);
    throw UsageError("probe: unknown touching fixture '" + name + "' (fig2, fig2-zero)");
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw 0;
        } catch (...) {
            throw UsageError("--deltas: '" + item + "' is not a number");
        }
    }
    return out;
}

std::string with_suffix(const std::string& path, int k, int width) {
    auto dot = path.rfind('.');
    std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
    char buf[16];
    std::snprintf(buf, sizeof buf, "-%0*d", width, k);
    return stem + buf + ".svg";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Locked-tree toolkit: fixtures, rigidity reduction, flattening, probes, SVG."};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print help");  // frees -h for gen's --h

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Write a fixture as JSON");
    g->add_option("fixture", gen.fixture, "fig2, fig2-zero, fig3, chain-N, comb, fig2-cut")->required();
    g->add_option("--scale", gen.scale, "Half-height of the vertical segment")->check(CLI::PositiveNumber);
    g->add_option("--h", gen.h, "fig3 horizontal unit");
    g->add_option("--g", gen.g, "fig3 vertical gap");
    g->add_option("--delta", gen.delta, "fig2-cut perturbation size");
    g->add_option("--seed", gen.seed, "Seed (default LINKLOCK_SEED or 1)");
    g->add_option("-o,--out", gen.out, "Output file (default stdout)");

    std::string rig_in, rig_out;
    auto* r = app.add_subcommand("rigidity", "Reduce a touching configuration; print the proof log");
    r->add_option("file", rig_in, "Touching configuration JSON")->required();
    r->add_option("-o,--out", rig_out, "Trace JSON");

    std::string fl_in, fl_out, fl_root;
    long fl_budget = 100000;
    int fl_restarts = 20;
    std::optional<unsigned long> fl_seed;
    auto* f = app.add_subcommand("flatten", "Search for a flattening motion");
    f->add_option("file", fl_in, "Configuration JSON")->required();
    f->add_option("--root", fl_root, "Root vertex (default: vertex nearest the centroid)");
    f->add_option("--budget", fl_budget, "Solver steps per restart")->check(CLI::PositiveNumber);
    f->add_option("--restarts", fl_restarts, "Random restarts")->check(CLI::PositiveNumber);
    f->add_option("--seed", fl_seed, "Seed (default LINKLOCK_SEED or 1)");
    f->add_option("-o,--out", fl_out, "Result JSON");

    std::string pr_fixture, pr_out, pr_deltas = "0.1,0.05,0.01", pr_csv;
    double pr_scale = 1;
    ProbeOptions popt;
    std::optional<unsigned long> pr_seed;
    auto* p = app.add_subcommand("probe", "Perturb, flatten, and report displacement by delta");
    p->add_option("fixture", pr_fixture, "fig2 or fig2-zero")->required();
    p->add_option("--deltas", pr_deltas, "Comma-separated, strictly decreasing (units of scale)");
    p->add_option("--trials", popt.trials, "Trials per delta")->check(CLI::PositiveNumber);
    p->add_option("--budget", popt.budget, "Solver steps per restart")->check(CLI::PositiveNumber);
    p->add_option("--restarts", popt.flatten.restarts, "Restarts per trial")->check(CLI::PositiveNumber);
    p->add_option("--scale", pr_scale, "Fixture scale")->check(CLI::PositiveNumber);
    p->add_option("--seed", pr_seed, "Seed (default LINKLOCK_SEED or 1)");
    p->add_option("--threads", popt.threads, "Worker threads (0: all cores)");
    p->add_option("--csv", pr_csv, "Also write rows as CSV");
    p->add_option("-o,--out", pr_out, "Report JSON");

    std::string re_in, re_out;
    bool re_motion = false, re_nolabels = false;
    std::optional<double> re_eps;
    auto* rd = app.add_subcommand("render", "Draw a configuration, touching configuration, or motion as SVG");
    rd->add_option("file", re_in, "JSON document (configuration, touching, motion, or flatten result)")->required();
    rd->add_flag("--motion", re_motion, "Also write one numbered frame per sample");
    rd->add_option("--epsilon", re_eps, "Pull-apart amount for touching input (default epsilon0/2)");
    rd->add_flag("--no-labels", re_nolabels, "Omit vertex labels");
    rd->add_option("-o,--out", re_out, "SVG file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EXIT_USAGE;
    }

    try {
        if (*g) {
            emit(gen.out, dump(generate(gen)));
        } else if (*r) {
            Json j = read_json_file(rig_in);
            TouchingConfig tc = j.contains("offsets") ? touching_from_json(j) : as_touching(configuration_from_json(j));
            auto tr = reduce(tc);
            std::cout << proof_log(tc, tr);
            if (!rig_out.empty()) write_file(rig_out, dump(to_json(tr, tc.linkage())));
        } else if (*f) {
            Json j = read_json_file(fl_in);
            if (j.contains("offsets")) throw ValidationError("flatten: input is a touching configuration; perturb it first");
            auto c = configuration_from_json(j);
            std::string root = fl_root.empty() ? central_vertex(c) : fl_root;
            if (!c.linkage->has_vertex(root)) throw ValidationError("--root: unknown vertex '" + root + "'");
            FlattenOptions o;
            o.restarts = fl_restarts;
            auto res = flatten(c, root, fl_budget, fl_seed ? *fl_seed : default_seed(), o);
            std::cout << "root " << root << ": " << to_string(res.status) << ", flatness " << res.finalFlatness
                      << ", max displacement " << res.maxDisplacement << "\n";
            if (!fl_out.empty()) write_file(fl_out, dump(to_json(res)));
        } else if (*p) {
            auto tc = touching_fixture(pr_fixture, pr_scale);
            auto deltas = parse_list(pr_deltas);
            for (auto& d : deltas) d *= pr_scale;
            popt.seed = pr_seed ? *pr_seed : default_seed();
            popt.monotone_slack = 0.05 * pr_scale;
            auto rep = probe(tc, pr_fixture, deltas, popt);
            std::cout << to_table(rep);
            if (!pr_out.empty()) write_file(pr_out, dump(to_json(rep)));
            if (!pr_csv.empty()) write_file(pr_csv, to_csv(rep));
            if (!rep.monotone || !rep.stayedUnflat) return EXIT_EXPECTATION;
        } else if (*rd) {
            Json j = read_json_file(re_in);
            RenderStyle st;
            st.labels = !re_nolabels;
            if (j.contains("motion") && j.contains("status")) j = j["motion"];
            if (j.contains("samples")) {
                auto m = motion_from_json(j);
                emit(re_out, render_animated(m, st));
                if (re_motion) {
                    if (re_out.empty() || re_out == "-") throw UsageError("--motion needs -o to name the frame files");
                    auto frames = render_frames(m, st);
                    int width = int(std::to_string(frames.size()).size());
                    for (std::size_t k = 0; k < frames.size(); ++k) write_file(with_suffix(re_out, int(k), width), frames[k]);
                }
            } else if (j.contains("offsets")) {
                auto tc = touching_from_json(j);
                emit(re_out, render_svg(tc, re_eps.value_or(tc.reference_epsilon()), st));
            } else {
                if (re_eps) throw UsageError("--epsilon applies to touching configurations only");
                emit(re_out, render_svg(configuration_from_json(j), st));
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return EXIT_USAGE;
    } catch (const PerturbRefused& e) {
        std::cerr << "error: " << e.what() << " (safe delta " << e.safe_delta << ")\n";
        return EXIT_INVALID;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INVALID;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
