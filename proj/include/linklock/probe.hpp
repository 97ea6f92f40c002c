#pragma once
// Empirical lock probe: perturb a touching fixture, try to flatten it, and
// record how far anything moved.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "flatten.hpp"
#include "io.hpp"
#include "touching.hpp"

namespace linklock {

struct ProbeRow {
    double delta = 0;
    int trial = 0;
    double maxDisplacement = 0;
    double finalFlatness = 0;
    std::string status;
};

struct ProbeReport {
    std::string fixture;
    std::string root;
    int trials = 0;
    long budget = 0;
    std::vector<double> deltas;  // strictly decreasing
    std::vector<ProbeRow> rows;
    std::vector<double> maxByDelta;          // parallel to deltas
    std::vector<double> maxFlatnessByDelta;  // parallel to deltas
    bool monotone = true;      // max displacement does not grow as delta shrinks
    bool stayedUnflat = true;  // every trial ended with flatness >= 100 FLAT_TOL

    std::string verdict_summary() const {
        std::ostringstream os;
        os << "empirical: max displacement " << (monotone ? "non-increasing" : "NOT non-increasing")
           << " as delta shrinks; " << (stayedUnflat ? "no trial came near flat" : "some trial came near flat (review)");
        return os.str();
    }
};

struct ProbeOptions {
    int trials = 10;
    long budget = 100000;
    unsigned long seed = 1;
    double monotone_slack = 0.05;
    FlattenOptions flatten;
    unsigned threads = 0;  // 0: hardware concurrency
};

inline unsigned long trial_seed(unsigned long seed, std::size_t di, int trial) {
    std::seed_seq sq{seed, static_cast<unsigned long>(di), static_cast<unsigned long>(trial)};
    std::vector<std::uint32_t> out(2);
    sq.generate(out.begin(), out.end());
    return (static_cast<unsigned long>(out[0]) << 32) | out[1];
}

// The root is the central vertex of the reference pull-apart drawing, the
// same for every trial.
inline ProbeReport probe(const TouchingConfig& tc, const std::string& name, const std::vector<double>& deltas,
                         const ProbeOptions& opt = {}) {
    if (deltas.empty()) throw ValidationError("probe: no deltas");
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1])) throw ValidationError("probe: deltas must be strictly decreasing");
    if (opt.trials < 1) throw ValidationError("probe: trials must be >= 1");
    ProbeReport rep;
    rep.fixture = name;
    rep.root = central_vertex(Configuration{tc.base.linkage, tc.pulled_apart(tc.reference_epsilon())});
    rep.trials = opt.trials;
    rep.budget = opt.budget;
    rep.deltas = deltas;
    std::vector<Configuration> starts;
    for (std::size_t di = 0; di < deltas.size(); ++di)
        for (int k = 0; k < opt.trials; ++k) starts.push_back(perturb(tc, deltas[di], trial_seed(opt.seed, di, k)));

    rep.rows.resize(starts.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < starts.size();) {
            std::size_t di = i / opt.trials;
            int k = int(i % opt.trials);
            auto r = flatten(starts[i], rep.root, opt.budget, trial_seed(opt.seed ^ 0x9e3779b97f4a7c15UL, di, k), opt.flatten);
            rep.rows[i] = {deltas[di], k, r.maxDisplacement, r.finalFlatness, to_string(r.status)};
        }
    };
    unsigned n = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t + 1 < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    rep.maxByDelta.assign(deltas.size(), 0);
    rep.maxFlatnessByDelta.assign(deltas.size(), 0);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        std::size_t di = i / opt.trials;
        rep.maxByDelta[di] = std::max(rep.maxByDelta[di], r.maxDisplacement);
        rep.maxFlatnessByDelta[di] = std::max(rep.maxFlatnessByDelta[di], r.finalFlatness);
        if (r.finalFlatness < 100 * FLAT_TOL) rep.stayedUnflat = false;
    }
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (rep.maxByDelta[i] > rep.maxByDelta[i - 1] + opt.monotone_slack) rep.monotone = false;
    return rep;
}

inline Json to_json(const ProbeReport& r) {
    Json rows = Json::array();
    for (const auto& x : r.rows)
        rows.push_back(Json{{"delta", x.delta},
                            {"trial", x.trial},
                            {"maxDisplacement", x.maxDisplacement},
                            {"finalFlatness", x.finalFlatness},
                            {"status", x.status}});
    Json sweep = Json::array();
    for (std::size_t i = 0; i < r.deltas.size(); ++i)
        sweep.push_back(Json{{"delta", r.deltas[i]},
                             {"trials", r.trials},
                             {"budget", r.budget},
                             {"maxDisplacement", r.maxByDelta[i]},
                             {"maxFinalFlatness", r.maxFlatnessByDelta[i]}});
    return Json{{"fixture", r.fixture},  {"root", r.root},         {"sweep", sweep},
                {"rows", rows},         {"monotone", r.monotone}, {"verdictSummary", r.verdict_summary()}};
}

inline std::string to_csv(const ProbeReport& r) {
    std::ostringstream os;
    os << std::setprecision(17) << "fixture,delta,trial,maxDisplacement,finalFlatness,status\n";
    for (const auto& x : r.rows)
        os << r.fixture << ',' << x.delta << ',' << x.trial << ',' << x.maxDisplacement << ',' << x.finalFlatness << ','
           << x.status << '\n';
    return os.str();
}

inline std::string to_table(const ProbeReport& r) {
    std::ostringstream os;
    os << "fixture " << r.fixture << ", root " << r.root << ", budget " << r.budget << "\n";
    os << std::left << std::setw(10) << "delta" << std::setw(7) << "trial" << std::setw(16) << "maxDisp" << std::setw(16)
       << "flatness" << "status\n";
    for (const auto& x : r.rows)
        os << std::setw(10) << x.delta << std::setw(7) << x.trial << std::setw(16) << x.maxDisplacement << std::setw(16)
           << x.finalFlatness << x.status << "\n";
    for (std::size_t i = 0; i < r.deltas.size(); ++i)
        os << "max displacement at delta " << r.deltas[i] << ": " << r.maxByDelta[i] << "\n";
    os << r.verdict_summary() << "\n";
    return os.str();
}

}  // namespace linklock
