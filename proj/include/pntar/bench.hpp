#pragma once

// Benchmark harness: run a set of engines over a set of nets, record sizes,
// timings and rule-hit counters, and cross-check that the exact engines
// agree.  Each engine row times its own full pipeline (graph construction for
// rg, a fresh unfolding for the prefix engines), so rows are self-contained.

#include <atomic>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pntar/engines.hpp"
#include "pntar/netgen.hpp"
#include "pntar/reachability.hpp"
#include "pntar/unfold.hpp"

namespace pntar {

struct BenchRecord {
    std::string net_id;
    std::string generator;
    std::string params;
    std::size_t places = 0;
    std::size_t transitions = 0;
    std::size_t rg_nodes = 0;
    std::size_t rg_edges = 0;
    bool rg_capped = false;
    std::size_t cfp_conditions = 0;
    std::size_t cfp_events = 0;
    std::size_t cfp_cutoffs = 0;
    std::string engine;
    double time_ms = 0.0;
    long pairs_found = -1;  // -1 while refused
    EngineStats stats;
    bool refused = false;
    std::string refusal;
};

struct BenchInput {
    std::string net_id;
    std::string generator;
    std::string params;
    NetSystem system;
};

struct BenchConfig {
    std::vector<std::string> engines{"rg", "general", "improved"};
    RgLimits rg_limits;
    UnfoldLimits unfold_limits;
    unsigned jobs = 1;
};

struct BenchResult {
    std::vector<BenchRecord> records;
    std::vector<std::string> disagreements;  // among exact engines, per net
};

inline const char* bench_csv_header() {
    return "net_id,generator,params,|P|,|T|,rg_nodes,rg_edges,rg_capped,"
           "cfp_conditions,cfp_events,cfp_cutoffs,engine,time_ms,pairs_found,"
           "co_hits,mea_hits,corr_mea_hits,cut_enum_calls";
}

// Quotes a free-form cell when it would break the row apart (params strings
// like "b=5,d=2" carry commas).
inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

inline std::string bench_csv_row(const BenchRecord& r) {
    std::ostringstream out;
    out << csv_cell(r.net_id) << "," << csv_cell(r.generator) << "," << csv_cell(r.params)
        << "," << r.places << ","
        << r.transitions << "," << r.rg_nodes << "," << r.rg_edges << ","
        << (r.rg_capped ? 1 : 0) << "," << r.cfp_conditions << "," << r.cfp_events << ","
        << r.cfp_cutoffs << "," << r.engine << ",";
    if (r.refused) {
        out << ",,,,,";  // time, pairs, four counters stay empty
    } else {
        out << std::fixed << std::setprecision(3) << r.time_ms << "," << r.pairs_found << ","
            << r.stats.co_hits << "," << r.stats.mea_hits << "," << r.stats.corr_mea_hits
            << "," << r.stats.cut_enum_calls;
    }
    return out.str();
}

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// Runs every requested engine on one net; appends records and an optional
// disagreement note.
inline void bench_one(const BenchInput& in, const BenchConfig& cfg,
                      std::vector<BenchRecord>& records, std::vector<std::string>& notes) {
    BenchRecord base;
    base.net_id = in.net_id;
    base.generator = in.generator;
    base.params = in.params;
    base.places = in.system.net.num_places();
    base.transitions = in.system.net.num_transitions();

    bool need_rg = false;
    bool need_prefix = false;
    for (const std::string& e : cfg.engines) {
        if (e == "rg")
            need_rg = true;
        else
            need_prefix = true;
    }

    ReachabilityGraph rg;
    double rg_ms = 0;
    if (need_rg) {
        auto t0 = std::chrono::steady_clock::now();
        rg = build_rg(in.system, cfg.rg_limits);
        rg_ms = ms_since(t0);
        base.rg_nodes = rg.nodes.size();
        base.rg_edges = rg.edges.size();
        base.rg_capped = !rg.exhausted();
    }

    Prefix px;
    if (need_prefix) {
        px = unfold(in.system, cfg.unfold_limits);
        base.cfp_conditions = px.conditions.size();
        base.cfp_events = px.events.size();
        base.cfp_cutoffs = px.num_cutoffs();
    }

    // (engine, relation) pairs of the exact engines that actually ran.
    std::vector<std::pair<std::string, TarRelation>> exact;

    for (const std::string& name : cfg.engines) {
        BenchRecord rec = base;
        rec.engine = name;
        try {
            if (name == "rg") {
                if (!rg.exhausted()) {
                    rec.refused = true;
                    rec.refusal = rg_status_name(rg.status);
                } else {
                    auto t0 = std::chrono::steady_clock::now();
                    TarRelation tar = tar_from_rg(in.system, rg);
                    rec.time_ms = rg_ms + ms_since(t0);
                    rec.pairs_found = static_cast<long>(tar.size());
                    exact.emplace_back(name, std::move(tar));
                }
            } else {
                auto t0 = std::chrono::steady_clock::now();
                Prefix own = unfold(in.system, cfg.unfold_limits);
                if (!own.complete) {
                    rec.refused = true;
                    rec.refusal = "event-cap-exceeded";
                } else {
                    TarRelation tar(0);
                    if (name == "general")
                        tar = tar_general(own, &rec.stats);
                    else if (name == "improved")
                        tar = tar_improved(own, &rec.stats);
                    else if (name == "bounded-improved")
                        tar = tar_bounded_improved(own, &rec.stats);
                    else if (name == "jin")
                        tar = tar_jin(own, &rec.stats);
                    else
                        throw std::invalid_argument("unknown engine '" + name + "'");
                    rec.time_ms = ms_since(t0);
                    rec.pairs_found = static_cast<long>(tar.size());
                    if (name != "jin") exact.emplace_back(name, std::move(tar));
                }
            }
        } catch (const std::invalid_argument& e) {
            rec.refused = true;
            rec.refusal = e.what();
        }
        records.push_back(std::move(rec));
    }

    for (std::size_t i = 1; i < exact.size(); ++i)
        if (exact[i].second != exact[0].second)
            notes.push_back(in.net_id + ": " + exact[i].first + " disagrees with " +
                            exact[0].first);
}

} // namespace detail

inline BenchResult run_bench(const std::vector<BenchInput>& nets, const BenchConfig& cfg = {}) {
    for (const std::string& e : cfg.engines)
        if (e != "rg" && e != "general" && e != "improved" && e != "bounded-improved" &&
            e != "jin")
            throw std::invalid_argument("unknown engine '" + e + "'");
    BenchResult out;
    const unsigned jobs = std::max(1u, cfg.jobs);
    if (jobs == 1 || nets.size() <= 1) {
        for (const BenchInput& in : nets)
            detail::bench_one(in, cfg, out.records, out.disagreements);
        return out;
    }

    // Parallel over nets only; each worker fills its own slot so record order
    // stays deterministic.
    std::vector<std::vector<BenchRecord>> recs(nets.size());
    std::vector<std::vector<std::string>> notes(nets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= nets.size()) return;
            detail::bench_one(nets[i], cfg, recs[i], notes[i]);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < std::min<std::size_t>(jobs, nets.size()); ++j)
        pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < nets.size(); ++i) {
        out.records.insert(out.records.end(), recs[i].begin(), recs[i].end());
        out.disagreements.insert(out.disagreements.end(), notes[i].begin(), notes[i].end());
    }
    return out;
}

// Fixed-width text summary for terminals; CSV stays the machine format.
inline std::string render_bench_table(const BenchResult& res) {
    std::ostringstream out;
    out << std::left << std::setw(18) << "net" << std::setw(18) << "engine" << std::right
        << std::setw(10) << "rg_nodes" << std::setw(10) << "events" << std::setw(9)
        << "cutoffs" << std::setw(11) << "time_ms" << std::setw(8) << "pairs" << std::setw(6)
        << "co" << std::setw(6) << "mea" << std::setw(6) << "corr" << std::setw(6) << "cuts"
        << "\n";
    for (const BenchRecord& r : res.records) {
        out << std::left << std::setw(18) << r.net_id << std::setw(18) << r.engine
            << std::right << std::setw(10) << r.rg_nodes << std::setw(10) << r.cfp_events
            << std::setw(9) << r.cfp_cutoffs;
        if (r.refused) {
            out << "  refused (" << r.refusal << ")";
        } else {
            out << std::setw(11) << std::fixed << std::setprecision(2) << r.time_ms
                << std::setw(8) << r.pairs_found << std::setw(6) << r.stats.co_hits
                << std::setw(6) << r.stats.mea_hits << std::setw(6) << r.stats.corr_mea_hits
                << std::setw(6) << r.stats.cut_enum_calls;
        }
        out << "\n";
    }
    if (res.disagreements.empty()) {
        out << "agreement: exact engines agree on every net\n";
    } else {
        for (const std::string& d : res.disagreements) out << "DISAGREEMENT: " << d << "\n";
    }
    return out.str();
}

} // namespace pntar
