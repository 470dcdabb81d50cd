// pntar: command line front end for the transition adjacency toolkit.
//
// Subcommands:
//   tar      compute the transition adjacency relation of a bounded net
//   unfold   build the complete finite prefix and report or dump it
//   rg       build the reachability graph and report or dump it
//   gen      emit a generated net in the textual format
//   bench    run a benchmark suite and write CSV
//   compare  diff the relations two engines produce on the same net
//
// Exit status: 0 when every requested artifact was produced, 2 when engines
// that should agree did not (tar --engine all, compare, bench), 1 otherwise.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pntar/bench.hpp"
#include "pntar/engines.hpp"
#include "pntar/json_out.hpp"
#include "pntar/net.hpp"
#include "pntar/net_io.hpp"
#include "pntar/netgen.hpp"
#include "pntar/reachability.hpp"
#include "pntar/tar_relation.hpp"
#include "pntar/unfold.hpp"

namespace {

using namespace pntar;

// ---------------------------------------------------------------------------
// Plumbing
// ---------------------------------------------------------------------------

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

NetSystem load_system(const std::string& path) {
    ParseResult res = parse_any(read_all(path));
    for (const std::string& w : res.warnings) std::cerr << "warning: " << w << "\n";
    return std::move(res.system);
}

// Writes to --out when given, stdout otherwise.  Kept open for the lifetime
// of the command so every artifact of one invocation lands in one place.
class Sink {
public:
    std::ostream& open(const std::string& out_path) {
        if (out_path.empty()) return std::cout;
        file_.open(out_path, std::ios::binary);
        if (!file_) throw std::runtime_error("cannot write " + out_path);
        return file_;
    }

private:
    std::ofstream file_;
};

struct Caps {
    std::size_t state_cap = RgLimits{}.state_cap;
    uint32_t bound_cap = RgLimits{}.bound_cap;
    std::size_t event_cap = UnfoldLimits{}.event_cap;

    RgLimits rg() const { return {state_cap, bound_cap}; }
    UnfoldLimits unfold() const { return {event_cap}; }
};

void check_format(const std::string& fmt, std::initializer_list<const char*> allowed,
                  const char* command) {
    for (const char* a : allowed)
        if (fmt == a) return;
    std::ostringstream msg;
    msg << "format '" << fmt << "' is not valid for '" << command << "' (expected";
    const char* sep = " ";
    for (const char* a : allowed) {
        msg << sep << a;
        sep = ", ";
    }
    msg << ")";
    throw std::runtime_error(msg.str());
}

// Explains why a prefix could not be completed under the event cap.  An
// unbounded net never has a complete prefix, so a quick capped graph walk
// distinguishes "raise the cap" from "give up".
int diagnose_incomplete(const NetSystem& sys, const Caps& caps, std::size_t events_built) {
    ReachabilityGraph probe = build_rg(sys, caps.rg());
    if (probe.status == RgStatus::bound_cap_exceeded) {
        std::cerr << "error: unbounded-suspected: place "
                  << sys.net.place_label(*probe.overflow_place) << " exceeded "
                  << caps.bound_cap << " tokens; no complete prefix exists\n";
    } else {
        std::cerr << "error: event-cap-exceeded: prefix truncated at " << events_built
                  << " events; raise --event-cap\n";
    }
    return 1;
}

// ---------------------------------------------------------------------------
// Engine dispatch shared by tar and compare
// ---------------------------------------------------------------------------

struct EngineOutcome {
    std::optional<TarRelation> tar;
    EngineStats stats;
    std::string error;  // set when tar is absent
};

// Runs one named engine.  The prefix and graph are built lazily and cached in
// the caller so compare does not unfold twice.
EngineOutcome run_engine(const std::string& name, const NetSystem& sys, const Caps& caps,
                         bool fallback, std::optional<Prefix>& px_cache,
                         std::optional<ReachabilityGraph>& rg_cache) {
    EngineOutcome out;
    if (name == "rg") {
        if (!rg_cache) rg_cache = build_rg(sys, caps.rg());
        if (!rg_cache->exhausted()) {
            out.error = rg_status_name(rg_cache->status);
            return out;
        }
        out.tar = tar_from_rg(sys, *rg_cache);
        return out;
    }
    if (!px_cache) px_cache = unfold(sys, caps.unfold());
    const Prefix& px = *px_cache;
    if (!px.complete) {
        out.error = "event-cap-exceeded";
        return out;
    }
    if (name == "general") {
        out.tar = tar_general(px, &out.stats);
    } else if (name == "improved") {
        if (!px.one_safe && !fallback) {
            out.error = "net is not 1-safe; use --engine bounded-improved or pass --fallback";
            return out;
        }
        out.tar = tar_improved(px, &out.stats);
        if (out.stats.fallback_used)
            std::cerr << "note: improved fell back to the general procedure"
                         " (net is not 1-safe)\n";
    } else if (name == "bounded-improved") {
        out.tar = tar_bounded_improved(px, &out.stats);
    } else if (name == "jin") {
        if (!sys.net.is_free_choice())
            std::cerr << "warning: jin on a non-free-choice net may report"
                         " pairs outside the true relation\n";
        out.tar = tar_jin(px, &out.stats);
    } else {
        out.error = "unknown engine '" + name + "'";
    }
    return out;
}

std::vector<std::pair<TransitionId, TransitionId>> pairs_minus(const TarRelation& a,
                                                               const TarRelation& b) {
    std::vector<std::pair<TransitionId, TransitionId>> out;
    for (auto [x, y] : a.pairs())
        if (!b.contains(x, y)) out.emplace_back(x, y);
    return out;
}

std::string pair_list(const std::vector<std::pair<TransitionId, TransitionId>>& ps,
                      const PetriNet& net) {
    std::ostringstream s;
    const char* sep = "";
    for (auto [a, b] : ps) {
        s << sep << net.transition_label(a) << " -> " << net.transition_label(b);
        sep = ", ";
    }
    return s.str();
}

void print_relation(std::ostream& out, const std::string& fmt, const TarRelation& tar,
                    const PetriNet& net, const std::string& engine) {
    if (fmt == "pairs")
        out << format_pairs(tar, net);
    else if (fmt == "matrix")
        out << format_matrix(tar, net);
    else
        out << tar_to_json(tar, net, engine).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// tar
// ---------------------------------------------------------------------------

int cmd_tar(const std::string& input, const std::string& engine, const std::string& fmt,
            const Caps& caps, bool fallback, const std::string& out_path) {
    check_format(fmt, {"pairs", "matrix", "json"}, "tar");
    NetSystem sys = load_system(input);
    Sink sink;
    std::ostream& out = sink.open(out_path);

    std::optional<Prefix> px_cache;
    std::optional<ReachabilityGraph> rg_cache;

    if (engine != "all") {
        EngineOutcome r = run_engine(engine, sys, caps, fallback, px_cache, rg_cache);
        if (!r.tar) {
            if (r.error == "event-cap-exceeded")
                return diagnose_incomplete(sys, caps, px_cache->events.size());
            if (r.error == "unbounded-suspected" && rg_cache && rg_cache->overflow_place) {
                std::cerr << "error: unbounded-suspected: place "
                          << sys.net.place_label(*rg_cache->overflow_place) << " exceeded "
                          << caps.bound_cap << " tokens\n";
                return 1;
            }
            std::cerr << "error: " << r.error << "\n";
            return 1;
        }
        print_relation(out, fmt, *r.tar, sys.net, engine);
        return 0;
    }

    // --engine all: run every exact engine that applies, check they agree,
    // and list jin separately since it only bounds the relation from above.
    px_cache = unfold(sys, caps.unfold());
    if (!px_cache->complete) return diagnose_incomplete(sys, caps, px_cache->events.size());

    struct Row {
        std::string name;
        std::optional<TarRelation> tar;
        std::string note;  // "reference", "agree", "differ", "skipped: ...", "report-only..."
        bool exact = true;
    };
    std::vector<Row> rows;

    EngineOutcome rg_run = run_engine("rg", sys, caps, fallback, px_cache, rg_cache);
    rows.push_back({"rg", rg_run.tar, rg_run.tar ? "" : "skipped: " + rg_run.error, true});

    EngineOutcome gen_run = run_engine("general", sys, caps, fallback, px_cache, rg_cache);
    rows.push_back({"general", gen_run.tar, "reference", true});
    const TarRelation& ref = *gen_run.tar;

    const std::string improved_name = px_cache->one_safe ? "improved" : "bounded-improved";
    EngineOutcome imp_run = run_engine(improved_name, sys, caps, fallback, px_cache, rg_cache);
    rows.push_back({improved_name, imp_run.tar, "", true});

    EngineOutcome jin_run = run_engine("jin", sys, caps, fallback, px_cache, rg_cache);
    rows.push_back({"jin", jin_run.tar, "", false});

    bool disagreement = false;
    for (Row& row : rows) {
        if (!row.tar || !row.note.empty()) continue;
        if (!row.exact) {
            auto extra = pairs_minus(*row.tar, ref);
            auto missing = pairs_minus(ref, *row.tar);
            std::ostringstream n;
            n << "report-only, " << extra.size() << " extra, " << missing.size() << " missing";
            row.note = n.str();
        } else if (*row.tar == ref) {
            row.note = "agree";
        } else {
            row.note = "differ";
            disagreement = true;
        }
    }

    if (fmt == "json") {
        nlohmann::json j = tar_to_json(ref, sys.net, "all");
        j["agreement"] = !disagreement;
        j["engines"] = nlohmann::json::array();
        for (const Row& row : rows) {
            nlohmann::json e;
            e["name"] = row.name;
            if (row.tar) e["pairs"] = row.tar->size();
            e["note"] = row.note;
            j["engines"].push_back(e);
        }
        out << j.dump(2) << "\n";
    } else {
        out << "agreement report (reference: general)\n";
        for (const Row& row : rows) {
            out << "  " << row.name << std::string(18 - row.name.size(), ' ');
            if (row.tar)
                out << row.tar->size() << " pairs   " << row.note << "\n";
            else
                out << "-        " << row.note << "\n";
        }
        out << "exact engines agree: " << (disagreement ? "no" : "yes") << "\n\n";
        print_relation(out, fmt, ref, sys.net, "general");
    }

    if (disagreement) {
        for (const Row& row : rows) {
            if (row.note != "differ") continue;
            std::cerr << "disagreement: " << row.name << " vs general";
            auto extra = pairs_minus(*row.tar, ref);
            auto missing = pairs_minus(ref, *row.tar);
            if (!extra.empty()) std::cerr << "; extra: " << pair_list(extra, sys.net);
            if (!missing.empty()) std::cerr << "; missing: " << pair_list(missing, sys.net);
            std::cerr << "\n";
        }
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// unfold
// ---------------------------------------------------------------------------

int cmd_unfold(const std::string& input, const std::string& fmt, const Caps& caps,
               const std::string& out_path) {
    check_format(fmt, {"stats", "dot", "json"}, "unfold");
    NetSystem sys = load_system(input);
    Prefix px = unfold(sys, caps.unfold());
    Sink sink;
    std::ostream& out = sink.open(out_path);

    if (fmt == "stats") {
        out << "conditions: " << px.conditions.size() << "\n"
            << "events: " << px.events.size() << "\n"
            << "cutoffs: " << px.num_cutoffs() << "\n"
            << "complete: " << (px.complete ? "yes" : "no") << "\n";
        if (px.complete) out << "one-safe: " << (px.one_safe ? "yes" : "no") << "\n";
    } else if (fmt == "dot") {
        px.to_dot(out);
    } else {
        out << prefix_to_json(px).dump(2) << "\n";
    }

    if (!px.complete) return diagnose_incomplete(sys, caps, px.events.size());
    return 0;
}

// ---------------------------------------------------------------------------
// rg
// ---------------------------------------------------------------------------

int cmd_rg(const std::string& input, const std::string& fmt, const Caps& caps,
           const std::string& out_path) {
    check_format(fmt, {"stats", "dot", "csv", "json"}, "rg");
    NetSystem sys = load_system(input);
    ReachabilityGraph rg = build_rg(sys, caps.rg());
    Sink sink;
    std::ostream& out = sink.open(out_path);

    if (fmt == "stats") {
        out << "nodes: " << rg.nodes.size() << "\n"
            << "edges: " << rg.edges.size() << "\n"
            << "status: " << rg_status_name(rg.status) << "\n";
        if (rg.exhausted()) {
            NetClass cls = classify(rg);
            if (cls.kind == NetClass::Kind::one_safe)
                out << "class: 1-safe\n";
            else
                out << "class: " << cls.bound << "-bounded\n";
        }
    } else if (fmt == "dot") {
        rg_to_dot(sys, rg, out);
    } else if (fmt == "csv") {
        out << rg_to_csv(rg);
    } else {
        out << rg_to_json(sys, rg).dump(2) << "\n";
    }

    if (rg.status == RgStatus::bound_cap_exceeded) {
        std::cerr << "error: unbounded-suspected: place "
                  << sys.net.place_label(*rg.overflow_place) << " exceeded " << caps.bound_cap
                  << " tokens\n";
        return 1;
    }
    if (rg.status == RgStatus::state_cap_exceeded) {
        std::cerr << "error: state-cap-exceeded: graph truncated at " << rg.nodes.size()
                  << " markings; raise --state-cap\n";
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenArgs {
    std::optional<uint32_t> n;
    std::optional<uint32_t> branches;
    std::optional<uint32_t> depth;
    std::optional<uint64_t> seed;
    uint32_t extra_tokens = 0;
    uint32_t max_transitions = GenOptions{}.max_transitions;
    bool no_nfc = false;
};

int cmd_gen(const GenArgs& a, const std::string& out_path) {
    const int picked = (a.n ? 1 : 0) + (a.branches || a.depth ? 1 : 0) + (a.seed ? 1 : 0);
    if (picked != 1)
        throw std::runtime_error(
            "pick one generator: --n (breadth), --branches with --depth, or --seed (random)");

    NetSystem sys;
    if (a.n) {
        sys = gen_breadth(*a.n);
    } else if (a.branches || a.depth) {
        if (!a.branches || !a.depth)
            throw std::runtime_error("--branches and --depth go together");
        sys = gen_depth(*a.branches, *a.depth);
    } else {
        GenOptions opt;
        opt.extra_tokens = a.extra_tokens;
        opt.max_transitions = a.max_transitions;
        opt.allow_nfc = !a.no_nfc;
        sys = gen_random_safe(*a.seed, opt);
    }

    Sink sink;
    render_net(sys, sink.open(out_path));
    return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

std::vector<std::string> split_engines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_bench(const std::string& suite, uint32_t max_n, uint32_t branches, uint32_t max_depth,
              uint32_t seeds, uint64_t seed_base, uint32_t extra_tokens,
              const std::string& engines_csv, unsigned jobs, const Caps& caps,
              const std::string& out_path) {
    std::vector<BenchInput> inputs;
    if (suite == "testA") {
        for (uint32_t n = 2; n <= max_n; ++n) {
            std::ostringstream id, params;
            id << "breadth-" << n;
            params << "n=" << n;
            inputs.push_back({id.str(), "breadth", params.str(), gen_breadth(n)});
        }
    } else if (suite == "testB") {
        for (uint32_t d = 1; d <= max_depth; ++d) {
            std::ostringstream id, params;
            id << "depth-" << branches << "x" << d;
            params << "b=" << branches << ",d=" << d;
            inputs.push_back({id.str(), "depth", params.str(), gen_depth(branches, d)});
        }
    } else if (suite == "corpus") {
        GenOptions opt;
        opt.extra_tokens = extra_tokens;
        for (uint32_t i = 0; i < seeds; ++i) {
            const uint64_t seed = seed_base + i;
            std::ostringstream id, params;
            id << "rand-" << seed;
            params << "seed=" << seed;
            inputs.push_back({id.str(), "random", params.str(), gen_random_safe(seed, opt)});
        }
    } else {
        throw std::runtime_error("unknown suite '" + suite + "' (expected testA, testB, corpus)");
    }

    BenchConfig cfg;
    cfg.engines = split_engines(engines_csv);
    cfg.rg_limits = caps.rg();
    cfg.unfold_limits = caps.unfold();
    cfg.jobs = jobs;

    BenchResult res = run_bench(inputs, cfg);

    Sink sink;
    std::ostream& csv = sink.open(out_path);
    csv << bench_csv_header() << "\n";
    for (const BenchRecord& r : res.records) csv << bench_csv_row(r) << "\n";

    // The summary table goes wherever the CSV is not.
    std::ostream& table = out_path.empty() ? std::cerr : std::cout;
    table << render_bench_table(res);

    for (const std::string& d : res.disagreements) std::cerr << "disagreement: " << d << "\n";
    return res.disagreements.empty() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

int cmd_compare(const std::string& input, const std::string& engine_a,
                const std::string& engine_b, const Caps& caps, bool fallback,
                const std::string& out_path) {
    NetSystem sys = load_system(input);
    std::optional<Prefix> px_cache;
    std::optional<ReachabilityGraph> rg_cache;

    EngineOutcome ra = run_engine(engine_a, sys, caps, fallback, px_cache, rg_cache);
    if (!ra.tar) {
        std::cerr << "error: " << engine_a << ": " << ra.error << "\n";
        return 1;
    }
    EngineOutcome rb = run_engine(engine_b, sys, caps, fallback, px_cache, rg_cache);
    if (!rb.tar) {
        std::cerr << "error: " << engine_b << ": " << rb.error << "\n";
        return 1;
    }

    Sink sink;
    std::ostream& out = sink.open(out_path);
    out << engine_a << ": " << ra.tar->size() << " pairs\n"
        << engine_b << ": " << rb.tar->size() << " pairs\n";
    auto only_a = pairs_minus(*ra.tar, *rb.tar);
    auto only_b = pairs_minus(*rb.tar, *ra.tar);
    for (auto [x, y] : only_a)
        out << "only in " << engine_a << ": " << sys.net.transition_label(x) << " -> "
            << sys.net.transition_label(y) << "\n";
    for (auto [x, y] : only_b)
        out << "only in " << engine_b << ": " << sys.net.transition_label(x) << " -> "
            << sys.net.transition_label(y) << "\n";
    const bool same = only_a.empty() && only_b.empty();
    out << (same ? "relations are identical\n" : "relations differ\n");
    return same ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transition adjacency relations from complete finite prefixes"};
    app.require_subcommand(1);

    // Options shared across subcommands; subcommands let unmatched flags
    // fall through to these.
    Caps caps;
    std::string format;
    std::string engine = "general";
    std::string out_path;
    bool fallback = false;
    app.add_option("--state-cap", caps.state_cap, "graph search stops after this many markings");
    app.add_option("--bound-cap", caps.bound_cap,
                   "tokens on one place above this flag the net unbounded-suspected");
    app.add_option("--event-cap", caps.event_cap, "prefix construction stops at this many events");
    app.add_option("--format", format, "output format (default depends on the subcommand)");
    app.add_option("--engine", engine, "rg, general, improved, bounded-improved, jin, or all")
        ->check(CLI::IsMember({"rg", "general", "improved", "bounded-improved", "jin", "all"}));
    app.add_option("--out", out_path, "write the main artifact to this file instead of stdout");
    app.add_flag("--fallback", fallback,
                 "let --engine improved fall back to general on nets that are not 1-safe");

    std::string tar_input, unfold_input, rg_input, cmp_input, cmp_a, cmp_b;

    CLI::App* tar_cmd = app.add_subcommand("tar", "compute the adjacency relation");
    tar_cmd->fallthrough();
    tar_cmd->add_option("input", tar_input, "net file, or - for stdin")->required();

    CLI::App* unfold_cmd = app.add_subcommand("unfold", "build the complete finite prefix");
    unfold_cmd->fallthrough();
    unfold_cmd->add_option("input", unfold_input, "net file, or - for stdin")->required();

    CLI::App* rg_cmd = app.add_subcommand("rg", "build the reachability graph");
    rg_cmd->fallthrough();
    rg_cmd->add_option("input", rg_input, "net file, or - for stdin")->required();

    GenArgs gen_args;
    CLI::App* gen_cmd = app.add_subcommand("gen", "emit a generated net");
    gen_cmd->fallthrough();
    gen_cmd->add_option("--n", gen_args.n, "breadth net with n parallel branches");
    gen_cmd->add_option("--branches", gen_args.branches, "depth net branch count");
    gen_cmd->add_option("--depth", gen_args.depth, "depth net chain length");
    gen_cmd->add_option("--seed", gen_args.seed, "random 1-safe workflow net");
    gen_cmd->add_option("--extra-tokens", gen_args.extra_tokens,
                        "extra initial tokens (random nets; breaks 1-safety)");
    gen_cmd->add_option("--max-transitions", gen_args.max_transitions,
                        "cap on generated transitions (random nets)");
    gen_cmd->add_flag("--no-nfc", gen_args.no_nfc,
                      "keep the random net free-choice");

    std::string bench_suite;
    uint32_t bench_max = 12, bench_branches = 5, bench_max_depth = 8, bench_seeds = 100;
    uint64_t bench_seed_base = 1;
    uint32_t bench_extra_tokens = 0;
    std::string bench_engines = "rg,general,improved";
    unsigned bench_jobs = 1;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
    bench_cmd->fallthrough();
    bench_cmd->add_option("suite", bench_suite, "testA, testB, or corpus")->required();
    bench_cmd->add_option("--max", bench_max, "testA: largest branch count (from 2)");
    bench_cmd->add_option("--branches", bench_branches, "testB: branch count");
    bench_cmd->add_option("--max-depth", bench_max_depth, "testB: largest depth (from 1)");
    bench_cmd->add_option("--seeds", bench_seeds, "corpus: number of seeded nets");
    bench_cmd->add_option("--seed-base", bench_seed_base, "corpus: first seed");
    bench_cmd->add_option("--extra-tokens", bench_extra_tokens,
                          "corpus: extra initial tokens per net");
    bench_cmd->add_option("--engines", bench_engines, "comma separated engine list");
    bench_cmd->add_option("--jobs", bench_jobs, "parallelism across nets");

    CLI::App* cmp_cmd = app.add_subcommand("compare", "diff two engines on one net");
    cmp_cmd->fallthrough();
    cmp_cmd->add_option("input", cmp_input, "net file, or - for stdin")->required();
    cmp_cmd->add_option("engine_a", cmp_a, "first engine")->required();
    cmp_cmd->add_option("engine_b", cmp_b, "second engine")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (tar_cmd->parsed())
            return cmd_tar(tar_input, engine, format.empty() ? "pairs" : format, caps, fallback,
                           out_path);
        if (unfold_cmd->parsed())
            return cmd_unfold(unfold_input, format.empty() ? "stats" : format, caps, out_path);
        if (rg_cmd->parsed())
            return cmd_rg(rg_input, format.empty() ? "stats" : format, caps, out_path);
        if (gen_cmd->parsed()) return cmd_gen(gen_args, out_path);
        if (bench_cmd->parsed())
            return cmd_bench(bench_suite, bench_max, bench_branches, bench_max_depth, bench_seeds,
                             bench_seed_base, bench_extra_tokens, bench_engines, bench_jobs, caps,
                             out_path);
        if (cmp_cmd->parsed()) return cmd_compare(cmp_input, cmp_a, cmp_b, caps, fallback, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
