#pragma once

// Explicit-state reachability graph.  This is the ground-truth side of the
// project: tar_from_rg reads the adjacency relation directly off the graph,
// and every prefix-based engine is measured against it.

#include <deque>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "pntar/net.hpp"
#include "pntar/tar_relation.hpp"

namespace pntar {

struct RgEdge {
    uint32_t src;
    TransitionId transition;
    uint32_t dst;
};

struct RgLimits {
    // Caps keep the search total on huge or unbounded inputs.  state_cap stops
    // the BFS after that many distinct markings; bound_cap flags a place
    // accumulating implausibly many tokens as unbounded-suspected.
    std::size_t state_cap = 1'000'000;
    uint32_t bound_cap = 64;
};

enum class RgStatus : uint8_t {
    exhausted,           // full graph
    state_cap_exceeded,  // too many markings; graph is a truncation
    bound_cap_exceeded,  // some place exceeded bound_cap: unbounded-suspected
};

inline const char* rg_status_name(RgStatus s) {
    switch (s) {
        case RgStatus::exhausted: return "exhausted";
        case RgStatus::state_cap_exceeded: return "state-cap-exceeded";
        case RgStatus::bound_cap_exceeded: return "unbounded-suspected";
    }
    return "?";
}

struct ReachabilityGraph {
    std::vector<Marking> nodes;  // nodes[0] == m0
    std::vector<RgEdge> edges;
    RgStatus status = RgStatus::exhausted;
    // Place whose token count tripped bound_cap, if any.
    std::optional<PlaceId> overflow_place;

    bool exhausted() const { return status == RgStatus::exhausted; }
};

inline ReachabilityGraph build_rg(const NetSystem& sys, const RgLimits& limits = {}) {
    const PetriNet& net = sys.net;
    ReachabilityGraph rg;
    std::unordered_map<Marking, uint32_t, MarkingHash> seen;

    rg.nodes.push_back(sys.m0);
    seen.emplace(sys.m0, 0);
    if (sys.m0.max_count() > limits.bound_cap) {
        rg.status = RgStatus::bound_cap_exceeded;
        return rg;
    }

    std::deque<uint32_t> work{0};
    while (!work.empty()) {
        uint32_t cur = work.front();
        work.pop_front();
        // Copy: rg.nodes may reallocate while we expand.
        const Marking m = rg.nodes[cur];
        for (TransitionId t = 0; t < net.num_transitions(); ++t) {
            if (!enabled(net, m, t)) continue;
            Marking next = fire(net, m, t);
            if (next.max_count() > limits.bound_cap) {
                for (const auto& [p, n] : next.entries())
                    if (n > limits.bound_cap) rg.overflow_place = p;
                rg.status = RgStatus::bound_cap_exceeded;
                return rg;
            }
            auto [it, inserted] = seen.emplace(next, static_cast<uint32_t>(rg.nodes.size()));
            if (inserted) {
                rg.nodes.push_back(std::move(next));
                work.push_back(it->second);
                if (rg.nodes.size() > limits.state_cap) {
                    rg.status = RgStatus::state_cap_exceeded;
                    return rg;
                }
            }
            rg.edges.push_back({cur, t, it->second});
        }
    }
    return rg;
}

// ---------------------------------------------------------------------------
// Boundedness classification
// ---------------------------------------------------------------------------

struct NetClass {
    enum Kind : uint8_t { one_safe, bounded, unknown } kind = unknown;
    uint32_t bound = 0;  // max tokens seen on any place (valid unless unknown)

    bool is_one_safe() const { return kind == one_safe; }
};

inline const char* net_class_name(const NetClass& c) {
    switch (c.kind) {
        case NetClass::one_safe: return "1-safe";
        case NetClass::bounded: return "bounded";
        case NetClass::unknown: return "unknown";
    }
    return "?";
}

// Only an exhausted graph can prove a bound; a capped search leaves the class
// unknown.
inline NetClass classify(const ReachabilityGraph& rg) {
    NetClass out;
    if (!rg.exhausted()) return out;
    uint32_t k = 0;
    for (const Marking& m : rg.nodes) k = std::max(k, m.max_count());
    out.bound = k;
    out.kind = k <= 1 ? NetClass::one_safe : NetClass::bounded;
    return out;
}

// ---------------------------------------------------------------------------
// The oracle
// ---------------------------------------------------------------------------

// t1 is adjacent to t2 iff some edge fires t1 into a marking where t2 is
// enabled.  Only valid on a complete graph.
inline TarRelation tar_from_rg(const NetSystem& sys, const ReachabilityGraph& rg) {
    if (!rg.exhausted())
        throw std::invalid_argument(std::string("tar_from_rg: graph is not exhausted (") +
                                    rg_status_name(rg.status) + ")");
    const PetriNet& net = sys.net;
    // Memoize the enabled set per node; most nodes feed several edges.
    std::vector<std::vector<TransitionId>> enabled_at(rg.nodes.size());
    std::vector<bool> computed(rg.nodes.size(), false);
    TarRelation tar(net.num_transitions());
    for (const RgEdge& e : rg.edges) {
        if (!computed[e.dst]) {
            enabled_at[e.dst] = enabled_transitions(net, rg.nodes[e.dst]);
            computed[e.dst] = true;
        }
        for (TransitionId t2 : enabled_at[e.dst]) tar.add(e.transition, t2, Rule::rg);
    }
    return tar;
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

inline std::string marking_to_string(const PetriNet& net, const Marking& m) {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& [p, n] : m.entries()) {
        if (!first) out << ",";
        first = false;
        out << net.place_label(p);
        if (n > 1) out << ":" << n;
    }
    out << "}";
    return out.str();
}

inline void rg_to_dot(const NetSystem& sys, const ReachabilityGraph& rg, std::ostream& out) {
    out << "digraph rg {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n";
    for (std::size_t i = 0; i < rg.nodes.size(); ++i) {
        out << "  n" << i << " [label=\"" << marking_to_string(sys.net, rg.nodes[i]) << "\"";
        if (i == 0) out << ", style=bold";
        out << "];\n";
    }
    for (const RgEdge& e : rg.edges)
        out << "  n" << e.src << " -> n" << e.dst << " [label=\""
            << sys.net.transition_label(e.transition) << "\"];\n";
    out << "}\n";
}

// One summary row; the bench harness and the rg subcommand share it.
inline std::string rg_to_csv(const ReachabilityGraph& rg) {
    std::ostringstream out;
    out << "nodes,edges,status\n"
        << rg.nodes.size() << "," << rg.edges.size() << "," << rg_status_name(rg.status) << "\n";
    return out.str();
}

} // namespace pntar
