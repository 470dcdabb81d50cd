#pragma once

// Finite complete prefixes of net unfoldings.
//
// A prefix is an acyclic occurrence net: conditions are token holders with at
// most one producer event, events are transition occurrences.  Construction
// lives in unfold.hpp; this header is the data structure plus the relational
// queries (causality, conflict, concurrency), configurations, cuts and marks.
//
// Relation storage: every event keeps a bitset of its strict event ancestors,
// every condition a bitset of concurrent conditions, and every event a bitset
// of concurrent conditions.  Causality between arbitrary nodes reduces to the
// event matrix through producers/consumers, and conflict is whatever remains
// after ruling out identity, causality and concurrency.

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pntar/bitset.hpp"
#include "pntar/net.hpp"
#include "pntar/tar_relation.hpp"

namespace pntar {

struct Condition {
    ConditionId id = 0;
    PlaceId place = 0;
    int32_t pre_event = -1;  // producer; -1 for initially marked conditions
    std::vector<EventId> post_events;
    // Postset of a cutoff event.  Such conditions exist (their places matter
    // for marks and cuts) but are never given consumers.
    bool dead = false;
};

struct Event {
    EventId id = 0;
    TransitionId transition = 0;
    std::vector<ConditionId> preset;   // sorted
    std::vector<ConditionId> postset;  // creation order = place order of h
    bool cutoff = false;
    int32_t corr = -1;  // corresponding event when cutoff
    // Size of the local configuration [e] and its transition multiset
    // (sorted); these drive the construction order and the cutoff test.
    uint32_t local_size = 0;
    std::vector<TransitionId> local_trans;
    Marking local_mark;  // Mark([e])
};

enum class Rel : uint8_t { same, before, after, conflict, concurrent };

inline const char* rel_name(Rel r) {
    switch (r) {
        case Rel::same: return "same";
        case Rel::before: return "before";
        case Rel::after: return "after";
        case Rel::conflict: return "conflict";
        case Rel::concurrent: return "concurrent";
    }
    return "?";
}

enum class NodeKind : uint8_t { condition, event };

struct NodeId {
    NodeKind kind;
    uint32_t index;
};

// A set of events, conflict-free and closed under causal predecessors.  Cut
// and mark are filled on first use.
struct Configuration {
    Bitset events;
    std::optional<Bitset> cut;
    std::optional<Marking> mark;
};

class Prefix {
public:
    // Structure (filled by unfold(); treat as read-only afterwards).
    NetSystem system;
    std::vector<Condition> conditions;
    std::vector<Event> events;
    std::vector<ConditionId> initial_conditions;

    // Relation matrices, maintained incrementally by the builder.
    std::vector<Bitset> ev_anc;      // per event: strict event ancestors
    std::vector<Bitset> cond_co;     // per condition: concurrent conditions
    std::vector<Bitset> ev_co_cond;  // per event: concurrent conditions

    // Indexes.
    std::vector<std::vector<ConditionId>> conds_by_place;
    std::vector<std::vector<EventId>> events_by_transition;

    bool complete = true;   // false when the event cap stopped construction
    bool one_safe = false;  // no two concurrent conditions share a place

    std::size_t num_cutoffs() const {
        std::size_t n = 0;
        for (const Event& e : events) n += e.cutoff;
        return n;
    }

    // Display name: transition label plus 1-based construction rank, e.g.
    // the tenth event, an occurrence of T8, prints as "T8-10".
    std::string event_name(EventId e) const {
        return system.net.transition_label(events.at(e).transition) + "-" +
               std::to_string(e + 1);
    }
    std::string condition_name(ConditionId c) const {
        return system.net.place_label(conditions.at(c).place) + "-c" + std::to_string(c + 1);
    }

    // -- causality ----------------------------------------------------------

    bool event_before(EventId a, EventId b) const { return ev_anc[b].test(a); }

    bool cond_before_event(ConditionId c, EventId e) const {
        for (EventId f : conditions[c].post_events)
            if (f == e || event_before(f, e)) return true;
        return false;
    }

    bool event_before_cond(EventId e, ConditionId c) const {
        int32_t pre = conditions[c].pre_event;
        return pre >= 0 && (static_cast<EventId>(pre) == e || event_before(e, pre));
    }

    bool cond_before_cond(ConditionId c, ConditionId d) const {
        int32_t pre = conditions[d].pre_event;
        return pre >= 0 && cond_before_event(c, static_cast<EventId>(pre));
    }

    // -- concurrency --------------------------------------------------------

    bool cond_co_cond(ConditionId c, ConditionId d) const { return cond_co[c].test(d); }
    bool event_co_cond(EventId e, ConditionId c) const { return ev_co_cond[e].test(c); }

    bool event_co_event(EventId a, EventId b) const {
        if (a == b) return false;
        for (ConditionId c : events[b].preset)
            if (!ev_co_cond[a].test(c)) return false;
        return true;
    }

    // -- the full trichotomy ------------------------------------------------

    Rel relation(NodeId x, NodeId y) const {
        if (x.kind == y.kind && x.index == y.index) return Rel::same;
        bool lt, gt, co;
        if (x.kind == NodeKind::event && y.kind == NodeKind::event) {
            lt = event_before(x.index, y.index);
            gt = event_before(y.index, x.index);
            co = event_co_event(x.index, y.index);
        } else if (x.kind == NodeKind::condition && y.kind == NodeKind::condition) {
            lt = cond_before_cond(x.index, y.index);
            gt = cond_before_cond(y.index, x.index);
            co = cond_co_cond(x.index, y.index);
        } else if (x.kind == NodeKind::condition) {
            lt = cond_before_event(x.index, y.index);
            gt = event_before_cond(y.index, x.index);
            co = event_co_cond(y.index, x.index);
        } else {
            lt = event_before_cond(x.index, y.index);
            gt = cond_before_event(y.index, x.index);
            co = event_co_cond(x.index, y.index);
        }
        if (lt) return Rel::before;
        if (gt) return Rel::after;
        if (co) return Rel::concurrent;
        return Rel::conflict;
    }

    // -- configurations -----------------------------------------------------

    Configuration local_config(EventId e) const {
        Configuration c;
        c.events = ev_anc[e];
        c.events.set(e);
        return c;
    }

    // Checks causal closure and conflict-freeness.  Conflict-freeness of a
    // causally closed set reduces to: no condition is consumed by two members.
    bool is_configuration(const Bitset& evs) const {
        std::vector<uint8_t> consumed(conditions.size(), 0);
        bool ok = true;
        evs.for_each([&](std::size_t e) {
            if (!ok) return;
            if (e >= events.size()) { ok = false; return; }
            if (!ev_anc[e].is_subset_of(evs)) { ok = false; return; }
            for (ConditionId c : events[e].preset) {
                if (consumed[c]) { ok = false; return; }
                consumed[c] = 1;
            }
        });
        return ok;
    }

    // Cut(C) = (initial conditions + postsets of C) minus presets of C.
    const Bitset& cut_of(Configuration& cfg) const {
        if (cfg.cut) return *cfg.cut;
        if (!is_configuration(cfg.events))
            throw std::invalid_argument("cut_of: event set is not a configuration");
        Bitset cut;
        for (ConditionId c : initial_conditions) cut.set(c);
        cfg.events.for_each([&](std::size_t e) {
            for (ConditionId c : events[e].postset) cut.set(c);
        });
        cfg.events.for_each([&](std::size_t e) {
            for (ConditionId c : events[e].preset) cut.reset(c);
        });
        cfg.cut = std::move(cut);
        return *cfg.cut;
    }

    const Marking& mark_of(Configuration& cfg) const {
        if (cfg.mark) return *cfg.mark;
        const Bitset& cut = cut_of(cfg);
        std::vector<std::pair<PlaceId, uint32_t>> entries;
        cut.for_each([&](std::size_t c) { entries.emplace_back(conditions[c].place, 1); });
        cfg.mark = Marking(std::move(entries));
        return *cfg.mark;
    }

    // Causally maximal members of an event set: drop everything that is an
    // ancestor of another member.
    std::vector<EventId> max_events(const Bitset& evs) const {
        Bitset below;
        evs.for_each([&](std::size_t e) { below |= ev_anc[e]; });
        std::vector<EventId> out;
        evs.for_each([&](std::size_t e) {
            if (!below.test(e)) out.push_back(static_cast<EventId>(e));
        });
        return out;
    }

    // -- export -------------------------------------------------------------

    void to_dot(std::ostream& out) const {
        out << "digraph prefix {\n  rankdir=TB;\n";
        for (const Condition& c : conditions) {
            out << "  c" << c.id << " [shape=circle, fontsize=10, label=\""
                << system.net.place_label(c.place) << "\"";
            if (c.dead) out << ", style=dotted";
            out << "];\n";
        }
        for (const Event& e : events) {
            out << "  e" << e.id << " [shape=box, fontsize=10, label=\"" << event_name(e.id)
                << "\"";
            if (e.cutoff) out << ", style=dashed";
            out << "];\n";
        }
        for (const Event& e : events) {
            for (ConditionId c : e.preset) out << "  c" << c << " -> e" << e.id << ";\n";
            for (ConditionId c : e.postset) out << "  e" << e.id << " -> c" << c << ";\n";
        }
        for (const Event& e : events)
            if (e.cutoff && e.corr >= 0)
                out << "  e" << e.id << " -> e" << e.corr
                    << " [style=dotted, constraint=false, label=\"corr\"];\n";
        out << "}\n";
    }
};

} // namespace pntar
