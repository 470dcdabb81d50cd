// Shared bits for the test suite: fixture loading, tiny nets built inline,
// and brute-force enumerators used as independent oracles.  The enumerators
// deliberately avoid the incremental relation tables; they recompute
// everything from first principles so the fast paths have something honest
// to be checked against.
#pragma once

#include <pntar/pntar.hpp>

#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(PNTAR_FIXTURE_DIR) + "/" + name;
}

inline pntar::NetSystem load_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    if (!in) throw std::runtime_error("missing fixture: " + name);
    return pntar::parse_net(in).system;
}

// p0 -> t1 -> p1 -> t2 -> ... -> pn, one token on p0.
inline pntar::NetSystem make_chain(unsigned n) {
    pntar::PetriNet net;
    auto prev = net.add_place("p0");
    pntar::Marking m0;
    m0.add(prev, 1);
    for (unsigned i = 1; i <= n; ++i) {
        auto t = net.add_transition("t" + std::to_string(i));
        auto p = net.add_place("p" + std::to_string(i));
        net.add_arc_pt(prev, t);
        net.add_arc_tp(t, p);
        prev = p;
    }
    return {std::move(net), std::move(m0)};
}

// Readable TAR comparison: label pairs instead of dense ids.
inline std::set<std::pair<std::string, std::string>> pair_set(const pntar::TarRelation& tar,
                                                              const pntar::PetriNet& net) {
    std::set<std::pair<std::string, std::string>> out;
    for (auto [a, b] : tar.pairs())
        out.emplace(net.transition_label(a), net.transition_label(b));
    return out;
}

// Visit every configuration of the prefix exactly once, including the empty
// one.  Event ids are assigned in construction order, which is a topological
// order, so growing sets by strictly increasing id covers each configuration
// along exactly one path.  Candidate events only need their causal history
// present and their preset conditions unconsumed.
template <typename Fn>
void for_each_configuration(const pntar::Prefix& px, Fn&& fn) {
    std::vector<pntar::EventId> current;
    std::vector<bool> in_set(px.events.size(), false);
    std::vector<bool> consumed(px.conditions.size(), false);

    auto feasible = [&](pntar::EventId e) {
        bool ok = true;
        px.ev_anc[e].for_each([&](std::size_t a) {
            if (!in_set[a]) ok = false;
        });
        if (!ok) return false;
        for (auto c : px.events[e].preset)
            if (consumed[c]) return false;
        return true;
    };

    auto rec = [&](auto&& self, pntar::EventId next) -> void {
        fn(static_cast<const std::vector<pntar::EventId>&>(current));
        for (pntar::EventId e = next; e < px.events.size(); ++e) {
            if (!feasible(e)) continue;
            current.push_back(e);
            in_set[e] = true;
            for (auto c : px.events[e].preset) consumed[c] = true;
            self(self, e + 1);
            for (auto c : px.events[e].preset) consumed[c] = false;
            in_set[e] = false;
            current.pop_back();
        }
    };
    rec(rec, 0);
}

// Visit every nonempty co-set of conditions exactly once (increasing id
// growth again; each added condition must be concurrent with all members).
template <typename Fn>
void for_each_coset(const pntar::Prefix& px, Fn&& fn) {
    std::vector<pntar::ConditionId> current;
    auto rec = [&](auto&& self, pntar::ConditionId next) -> void {
        if (!current.empty()) fn(static_cast<const std::vector<pntar::ConditionId>&>(current));
        for (pntar::ConditionId c = next; c < px.conditions.size(); ++c) {
            bool ok = true;
            for (auto m : current)
                if (!px.cond_co_cond(m, c)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            current.push_back(c);
            self(self, c + 1);
            current.pop_back();
        }
    };
    rec(rec, 0);
}

} // namespace testutil
