#pragma once

// Prefix construction.
//
// Classic saturation: keep a queue of possible extensions (transition plus a
// co-set of conditions covering its preset), always materialize the smallest
// one, stop extending behind events whose local configuration repeats an
// already-seen marking (cutoffs).
//
// The construction order is total: candidates compare by local configuration
// size, then by the sorted multiset of transition indices in the local
// configuration, then by their preset condition ids.  Smaller-size
// configurations always precede their extensions, so extraction order is
// monotone and the first event reaching a marking is the comparison point for
// every later repeat.

#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "pntar/prefix.hpp"

namespace pntar {

struct UnfoldLimits {
    std::size_t event_cap = 100'000;
};

namespace detail {

struct PExt {
    TransitionId transition;
    std::vector<ConditionId> preset;       // sorted
    uint32_t size;                         // |[e]| the extension would have
    std::vector<TransitionId> trans_key;   // sorted transition multiset of [e]
};

struct PExtLess {
    bool operator()(const PExt& a, const PExt& b) const {
        if (a.size != b.size) return a.size < b.size;
        if (a.trans_key != b.trans_key) return a.trans_key < b.trans_key;
        return a.preset < b.preset;
    }
};

class Unfolder {
public:
    Unfolder(const NetSystem& sys, const UnfoldLimits& limits) : limits_(limits) {
        sys.net.validate();
        px_.system = sys;
        px_.conds_by_place.resize(sys.net.num_places());
        px_.events_by_transition.resize(sys.net.num_transitions());
    }

    Prefix run() {
        seed_initial_conditions();
        while (!queue_.empty()) {
            if (px_.events.size() >= limits_.event_cap) {
                px_.complete = false;
                break;
            }
            PExt pe = *queue_.begin();
            queue_.erase(queue_.begin());
            append_event(pe);
        }
        compute_one_safe();
        return std::move(px_);
    }

private:
    const PetriNet& net() const { return px_.system.net; }

    void seed_initial_conditions() {
        for (const auto& [p, n] : px_.system.m0.entries())
            for (uint32_t i = 0; i < n; ++i) {
                ConditionId c = new_condition(p, -1);
                px_.initial_conditions.push_back(c);
            }
        // Initially marked conditions are pairwise concurrent (also when two
        // tokens share a place).
        for (ConditionId a : px_.initial_conditions)
            for (ConditionId b : px_.initial_conditions)
                if (a != b) px_.cond_co[a].set(b);
        for (ConditionId c : px_.initial_conditions) discover_extensions(c);
    }

    ConditionId new_condition(PlaceId p, int32_t producer) {
        Condition c;
        c.id = static_cast<ConditionId>(px_.conditions.size());
        c.place = p;
        c.pre_event = producer;
        px_.conditions.push_back(c);
        px_.cond_co.emplace_back();
        px_.conds_by_place[p].push_back(c.id);
        return c.id;
    }

    // Local-configuration ancestor set of a would-be event with this preset.
    Bitset ancestors_of(const std::vector<ConditionId>& preset) const {
        Bitset anc;
        for (ConditionId b : preset) {
            int32_t g = px_.conditions[b].pre_event;
            if (g >= 0) {
                anc |= px_.ev_anc[g];
                anc.set(static_cast<std::size_t>(g));
            }
        }
        return anc;
    }

    PExt make_pext(TransitionId t, std::vector<ConditionId> preset) const {
        PExt pe;
        pe.transition = t;
        std::sort(preset.begin(), preset.end());
        pe.preset = std::move(preset);
        Bitset anc = ancestors_of(pe.preset);
        pe.size = static_cast<uint32_t>(anc.count()) + 1;
        pe.trans_key.reserve(pe.size);
        anc.for_each([&](std::size_t a) { pe.trans_key.push_back(px_.events[a].transition); });
        pe.trans_key.push_back(t);
        std::sort(pe.trans_key.begin(), pe.trans_key.end());
        return pe;
    }

    // Finds every extension whose preset contains c as its newest condition.
    // Restricting the other members to older ids makes each candidate surface
    // exactly once over the whole construction.
    void discover_extensions(ConditionId c) {
        const PlaceId pc = px_.conditions[c].place;
        for (TransitionId t : net().place_post(pc)) {
            std::vector<PlaceId> slots;
            for (PlaceId p : net().pre(t))
                if (p != pc) slots.push_back(p);
            std::vector<ConditionId> chosen{c};
            fill_slots(t, slots, 0, chosen);
        }
    }

    void fill_slots(TransitionId t, const std::vector<PlaceId>& slots, std::size_t i,
                    std::vector<ConditionId>& chosen) {
        if (i == slots.size()) {
            queue_.insert(make_pext(t, chosen));
            return;
        }
        for (ConditionId cand : px_.conds_by_place[slots[i]]) {
            if (cand >= chosen[0] || px_.conditions[cand].dead) continue;
            bool ok = true;
            for (ConditionId prev : chosen)
                if (!px_.cond_co[prev].test(cand)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(cand);
            fill_slots(t, slots, i + 1, chosen);
            chosen.pop_back();
        }
    }

    void append_event(const PExt& pe) {
        Event ev;
        ev.id = static_cast<EventId>(px_.events.size());
        ev.transition = pe.transition;
        ev.preset = pe.preset;
        ev.local_size = pe.size;
        ev.local_trans = pe.trans_key;

        Bitset anc = ancestors_of(pe.preset);
        Bitset co_conds = px_.cond_co[pe.preset[0]];
        for (std::size_t i = 1; i < pe.preset.size(); ++i) co_conds &= px_.cond_co[pe.preset[i]];

        for (ConditionId b : pe.preset) px_.conditions[b].post_events.push_back(ev.id);

        for (PlaceId p : net().post(pe.transition))
            ev.postset.push_back(new_condition(p, static_cast<int32_t>(ev.id)));

        // Mark([e]): initial conditions plus postsets of [e], minus presets.
        {
            Bitset cut;
            for (ConditionId c : px_.initial_conditions) cut.set(c);
            for (ConditionId c : ev.postset) cut.set(c);
            anc.for_each([&](std::size_t a) {
                for (ConditionId c : px_.events[a].postset) cut.set(c);
            });
            anc.for_each([&](std::size_t a) {
                for (ConditionId c : px_.events[a].preset) cut.reset(c);
            });
            for (ConditionId c : ev.preset) cut.reset(c);
            std::vector<std::pair<PlaceId, uint32_t>> entries;
            cut.for_each(
                [&](std::size_t c) { entries.emplace_back(px_.conditions[c].place, 1); });
            ev.local_mark = Marking(std::move(entries));
        }

        // Cut off only when the earlier event is strictly smaller under the
        // adequate components of the order (size, then transition multiset).
        // The preset-id tie break exists to make queue extraction
        // deterministic; it is not preserved by configuration extensions, so
        // letting it decide cutoffs loses reachable markings whenever two
        // local configurations differ only in which equal token they took.
        auto [it, fresh] = mark_table_.try_emplace(ev.local_mark, ev.id);
        if (!fresh) {
            const Event& first = px_.events[it->second];
            const bool strictly_smaller =
                first.local_size < ev.local_size ||
                (first.local_size == ev.local_size && first.local_trans < ev.local_trans);
            if (strictly_smaller) {
                ev.cutoff = true;
                ev.corr = static_cast<int32_t>(it->second);
                for (ConditionId c : ev.postset) px_.conditions[c].dead = true;
            }
        }

        // Relation upkeep.  New condition rows: everything concurrent with
        // the producer plus the sibling postset conditions; existing events
        // concurrent with this one also see the new conditions.
        for (ConditionId b : ev.postset) {
            px_.cond_co[b] = co_conds;
            for (ConditionId s : ev.postset)
                if (s != b) px_.cond_co[b].set(s);
        }
        for (ConditionId b : ev.postset)
            px_.cond_co[b].for_each([&](std::size_t d) { px_.cond_co[d].set(b); });
        for (EventId f = 0; f < ev.id; ++f) {
            bool co = true;
            for (ConditionId a : ev.preset)
                if (!px_.ev_co_cond[f].test(a)) {
                    co = false;
                    break;
                }
            if (co)
                for (ConditionId b : ev.postset) px_.ev_co_cond[f].set(b);
        }

        px_.ev_anc.push_back(std::move(anc));
        px_.ev_co_cond.push_back(std::move(co_conds));
        px_.events_by_transition[ev.transition].push_back(ev.id);
        const bool extend = !ev.cutoff;
        const std::vector<ConditionId> postset = ev.postset;
        px_.events.push_back(std::move(ev));

        if (extend)
            for (ConditionId b : postset) discover_extensions(b);
    }

    void compute_one_safe() {
        px_.one_safe = true;
        for (const auto& group : px_.conds_by_place)
            for (std::size_t i = 0; i < group.size() && px_.one_safe; ++i)
                for (std::size_t j = i + 1; j < group.size(); ++j)
                    if (px_.cond_co[group[i]].test(group[j])) {
                        px_.one_safe = false;
                        break;
                    }
    }

    Prefix px_;
    UnfoldLimits limits_;
    std::set<PExt, PExtLess> queue_;
    std::unordered_map<Marking, EventId, MarkingHash> mark_table_;
};

} // namespace detail

inline Prefix unfold(const NetSystem& sys, const UnfoldLimits& limits = {}) {
    return detail::Unfolder(sys, limits).run();
}

} // namespace pntar
