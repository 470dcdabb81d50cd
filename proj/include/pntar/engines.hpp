#pragma once

// Adjacency engines over a complete prefix.
//
//  - check_by_cuts / tar_general: exact for any bounded net.  For a pair
//    (t1, t2), gather the conditions that could co-exist right after some
//    occurrence e1 of t1 and ask whether any maximal co-set among them covers
//    the preset of t2.
//  - tar_improved: 1-safe fast path.  Consecutive pairs are first attempted
//    through maximal-event adjacency (direct, or transferred from a cutoff's
//    corresponding event), falling back to cut enumeration; concurrent event
//    pairs contribute both orders outright.
//  - tar_bounded_improved: bounded-net variant that keeps only the direct
//    adjacency shortcut and runs cut enumeration for everything else.
//  - tar_jin: the single-condition-link approximation, kept for comparison;
//    exact only on free-choice workflow structure.

#include <algorithm>
#include <optional>
#include <vector>

#include "pntar/cliques.hpp"
#include "pntar/prefix.hpp"
#include "pntar/tar_relation.hpp"

namespace pntar {

namespace detail {

inline void require_complete(const Prefix& px, const char* who) {
    if (!px.complete)
        throw std::invalid_argument(std::string(who) +
                                    ": prefix construction hit the event cap; "
                                    "results on a partial prefix would be unsound");
}

inline std::vector<PlaceId> sorted_places(const Prefix& px, const std::vector<ConditionId>& cs) {
    std::vector<PlaceId> out;
    out.reserve(cs.size());
    for (ConditionId c : cs) out.push_back(px.conditions[c].place);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

// Does t2's preset fit inside some co-set that can hold right after an
// occurrence of t1?  Candidates are e1's postset plus every condition mapping
// into t2's preset that is concurrent with e1 (initially marked ones
// included; their producers would otherwise be skipped by a pure
// producer-of-preset scan).
inline std::optional<EarWitness> check_by_cuts(const Prefix& px, TransitionId t1,
                                               TransitionId t2, EngineStats* stats = nullptr) {
    detail::require_complete(px, "check_by_cuts");
    if (stats) ++stats->cut_enum_calls;
    const PetriNet& net = px.system.net;
    const auto& pre_t2 = net.pre(t2);

    for (EventId e1 : px.events_by_transition[t1]) {
        std::vector<ConditionId> cands = px.events[e1].postset;
        for (PlaceId p : pre_t2)
            for (ConditionId c : px.conds_by_place[p])
                if (px.ev_co_cond[e1].test(c)) cands.push_back(c);
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

        // Concurrency graph on the candidates; maximal cliques are exactly
        // the cuts restricted to this set.
        const std::size_t n = cands.size();
        std::vector<Bitset> adj(n, Bitset(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (px.cond_co_cond(cands[i], cands[j])) {
                    adj[i].set(j);
                    adj[j].set(i);
                }

        std::optional<EarWitness> found;
        for_each_maximal_clique(adj, n, [&](const Bitset& clique) {
            std::vector<uint8_t> covered(net.num_places(), 0);
            clique.for_each(
                [&](std::size_t i) { covered[px.conditions[cands[i]].place] = 1; });
            for (PlaceId p : pre_t2)
                if (!covered[p]) return true;  // keep enumerating
            EarWitness w;
            w.kind = Rule::cut_enum;
            w.e1 = e1;
            clique.for_each([&](std::size_t i) { w.cut.push_back(cands[i]); });
            found = std::move(w);
            return false;
        });
        if (found) return found;
    }
    return std::nullopt;
}

inline TarRelation tar_general(const Prefix& px, EngineStats* stats = nullptr) {
    detail::require_complete(px, "tar_general");
    const std::size_t n = px.system.net.num_transitions();
    TarRelation tar(n);
    for (TransitionId t1 = 0; t1 < n; ++t1)
        for (TransitionId t2 = 0; t2 < n; ++t2)
            if (auto w = check_by_cuts(px, t1, t2, stats))
                tar.add(t1, t2, Rule::cut_enum, *w);
    return tar;
}

// Maximal-event adjacency: e1 strictly precedes e2 and every condition e1
// produces that lies below e2 is consumed by e2 itself.  In other words, e1
// is causally maximal among the producers feeding e2's preset.
inline bool mea(const Prefix& px, EventId e1, EventId e2) {
    if (!px.event_before(e1, e2)) return false;
    const auto& pre2 = px.events[e2].preset;
    for (ConditionId c : px.events[e1].postset)
        if (px.cond_before_event(c, e2) &&
            !std::binary_search(pre2.begin(), pre2.end(), c))
            return false;
    return true;
}

// Confirmation-only shortcut for consecutive pairs of a 1-safe system: a
// non-cutoff occurrence of t1 adjacent to an occurrence of t2, or a cutoff
// whose corresponding event has the same postset image and is adjacent to an
// occurrence of t2.  Returns nothing when unconfirmed; that is not a "no".
inline std::optional<EarWitness> early_confirm(const Prefix& px, TransitionId t1,
                                               TransitionId t2, EngineStats* stats = nullptr) {
    detail::require_complete(px, "early_confirm");
    if (!px.one_safe)
        throw std::invalid_argument("early_confirm: system is not 1-safe");

    for (EventId e1 : px.events_by_transition[t1]) {
        if (!px.events[e1].cutoff) {
            for (EventId e2 : px.events_by_transition[t2])
                if (mea(px, e1, e2)) {
                    if (stats) ++stats->mea_hits;
                    return EarWitness{Rule::mea, e1, e2, {}};
                }
        } else {
            EventId corr = static_cast<EventId>(px.events[e1].corr);
            if (detail::sorted_places(px, px.events[e1].postset) !=
                detail::sorted_places(px, px.events[corr].postset))
                continue;  // postset images differ: transfer is not justified
            for (EventId e2 : px.events_by_transition[t2])
                if (mea(px, corr, e2)) {
                    if (stats) ++stats->corr_mea_hits;
                    return EarWitness{Rule::corr_mea, e1, e2, {}};
                }
        }
    }
    return std::nullopt;
}

namespace detail {

// Transitions that can consume what t1 produces.
inline std::vector<TransitionId> consecutive_successors(const PetriNet& net, TransitionId t1) {
    std::vector<TransitionId> out;
    for (PlaceId p : net.post(t1))
        for (TransitionId t2 : net.place_post(p)) out.push_back(t2);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline void add_concurrent_pairs(const Prefix& px, TarRelation& tar, EngineStats* stats) {
    const std::size_t ne = px.events.size();
    for (EventId a = 0; a < ne; ++a)
        for (EventId b = a + 1; b < ne; ++b) {
            if (!px.event_co_event(a, b)) continue;
            TransitionId ta = px.events[a].transition;
            TransitionId tb = px.events[b].transition;
            if (!tar.contains(ta, tb)) {
                tar.add(ta, tb, Rule::co, EarWitness{Rule::co, a, b, {}});
                if (stats) ++stats->co_hits;
            }
            if (!tar.contains(tb, ta)) {
                tar.add(tb, ta, Rule::co, EarWitness{Rule::co, b, a, {}});
                if (stats) ++stats->co_hits;
            }
        }
}

} // namespace detail

// 1-safe fast path.  Falls back to tar_general (flagged in stats) when the
// prefix shows the system is not 1-safe.
inline TarRelation tar_improved(const Prefix& px, EngineStats* stats = nullptr) {
    detail::require_complete(px, "tar_improved");
    if (!px.one_safe) {
        if (stats) stats->fallback_used = true;
        return tar_general(px, stats);
    }
    const PetriNet& net = px.system.net;
    TarRelation tar(net.num_transitions());
    for (TransitionId t1 = 0; t1 < net.num_transitions(); ++t1)
        for (TransitionId t2 : detail::consecutive_successors(net, t1)) {
            if (auto w = early_confirm(px, t1, t2, stats))
                tar.add(t1, t2, w->kind, *w);
            else if (auto w2 = check_by_cuts(px, t1, t2, stats))
                tar.add(t1, t2, Rule::cut_enum, *w2);
        }
    detail::add_concurrent_pairs(px, tar, stats);
    return tar;
}

// Bounded (not necessarily safe) variant: the corresponding-event transfer
// and the concurrent-pair rule both lean on 1-safety, so only the direct
// adjacency shortcut survives; every other pair goes through cut enumeration.
inline TarRelation tar_bounded_improved(const Prefix& px, EngineStats* stats = nullptr) {
    detail::require_complete(px, "tar_bounded_improved");
    const PetriNet& net = px.system.net;
    const std::size_t n = net.num_transitions();
    TarRelation tar(n);
    for (TransitionId t1 = 0; t1 < n; ++t1)
        for (TransitionId t2 = 0; t2 < n; ++t2) {
            bool confirmed = false;
            for (EventId e1 : px.events_by_transition[t1]) {
                if (px.events[e1].cutoff) continue;  // no successors anyway
                for (EventId e2 : px.events_by_transition[t2])
                    if (mea(px, e1, e2)) {
                        tar.add(t1, t2, Rule::mea, EarWitness{Rule::mea, e1, e2, {}});
                        if (stats) ++stats->mea_hits;
                        confirmed = true;
                        break;
                    }
                if (confirmed) break;
            }
            if (!confirmed)
                if (auto w = check_by_cuts(px, t1, t2, stats))
                    tar.add(t1, t2, Rule::cut_enum, *w);
        }
    return tar;
}

// Historical comparison engine: declare (h(e1), h(e2)) adjacent whenever a
// single condition links e1 to e2, plus the concurrent pairs.  Known to
// overapproximate outside free-choice workflow nets.
inline TarRelation tar_jin(const Prefix& px, EngineStats* stats = nullptr) {
    detail::require_complete(px, "tar_jin");
    TarRelation tar(px.system.net.num_transitions());
    for (const Event& e1 : px.events)
        for (ConditionId c : e1.postset)
            for (EventId e2 : px.conditions[c].post_events)
                tar.add(e1.transition, px.events[e2].transition, Rule::direct_link,
                        EarWitness{Rule::direct_link, e1.id, e2, {c}});
    detail::add_concurrent_pairs(px, tar, stats);
    return tar;
}

} // namespace pntar
