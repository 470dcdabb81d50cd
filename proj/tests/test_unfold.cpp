#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

#include <algorithm>
#include <map>

using namespace pntar;
using testutil::for_each_configuration;
using testutil::for_each_coset;

namespace {

// Independent relation oracle: recompute causality and conflict from the raw
// arcs of the occurrence net by depth first search, ignoring the incremental
// bitset tables the builder maintains.
struct NaiveRelations {
    const Prefix& px;
    // events reflexively below each node (for conditions: via the producer)
    std::vector<std::vector<bool>> ev_below_event, ev_below_cond;

    explicit NaiveRelations(const Prefix& p) : px(p) {
        auto ne = px.events.size();
        auto nc = px.conditions.size();
        ev_below_event.assign(ne, std::vector<bool>(ne, false));
        ev_below_cond.assign(nc, std::vector<bool>(ne, false));
        // ids are topological, one forward pass suffices
        for (EventId e = 0; e < ne; ++e) {
            ev_below_event[e][e] = true;
            for (ConditionId c : px.events[e].preset)
                for (EventId f = 0; f < ne; ++f)
                    if (ev_below_cond[c][f]) ev_below_event[e][f] = true;
            for (ConditionId c : px.events[e].postset) ev_below_cond[c] = ev_below_event[e];
        }
    }

    bool before_ee(EventId a, EventId b) const { return a != b && ev_below_event[b][a]; }
    bool conflict(const std::vector<bool>& ha, const std::vector<bool>& hb) const {
        // distinct events in the two histories consuming a common condition
        for (ConditionId c = 0; c < px.conditions.size(); ++c) {
            const auto& cons = px.conditions[c].post_events;
            for (EventId f : cons)
                for (EventId g : cons)
                    if (f != g && ha[f] && hb[g]) return true;
        }
        return false;
    }
};

Bitset to_bits(std::initializer_list<EventId> ids) {
    Bitset b;
    for (auto e : ids) b.set(e);
    return b;
}

} // namespace

TEST_CASE("acyclic nets unfold to themselves", "[unfold]") {
    auto sys = testutil::make_chain(2);
    auto px = unfold(sys);
    REQUIRE(px.complete);
    REQUIRE(px.events.size() == 2);
    REQUIRE(px.conditions.size() == 3);
    REQUIRE(px.num_cutoffs() == 0);
    REQUIRE(px.one_safe);

    for (unsigned n : {2u, 3u, 5u}) {
        auto wide = unfold(gen_breadth(n));
        REQUIRE(wide.events.size() == n + 2);
        REQUIRE(wide.num_cutoffs() == 0);
    }
}

TEST_CASE("staged choices fixture builds the documented prefix", "[unfold]") {
    auto sys = testutil::load_fixture("staged_choices.net");
    auto px = unfold(sys);
    REQUIRE(px.complete);
    REQUIRE(px.one_safe);
    REQUIRE(px.events.size() == 10);
    REQUIRE(px.num_cutoffs() == 1);

    std::vector<std::string> names;
    for (const auto& e : px.events) names.push_back(px.event_name(e.id));
    REQUIRE(names == std::vector<std::string>{"T0-1", "T1-2", "T4-3", "T2-4", "T3-5",
                                              "T6-6", "T5-7", "T7-8", "T9-9", "T8-10"});

    const Event& tenth = px.events[9];
    REQUIRE(tenth.cutoff);
    REQUIRE(sys.net.transition_label(tenth.transition) == "T8");
    REQUIRE(tenth.corr == 8);
    REQUIRE(sys.net.transition_label(px.events[8].transition) == "T9");

    auto as_labels = [&](const Marking& m) {
        std::vector<std::string> out;
        for (auto [p, n] : m.entries())
            for (uint32_t i = 0; i < n; ++i) out.push_back(sys.net.place_label(p));
        std::sort(out.begin(), out.end());
        return out;
    };
    REQUIRE(as_labels(tenth.local_mark) == std::vector<std::string>{"P1", "P10", "P3"});
    REQUIRE(tenth.local_mark == px.events[8].local_mark);

    // [T8-10] = {T0-1, T2-4, T5-7, T8-10}
    auto cfg = px.local_config(9);
    std::vector<EventId> members;
    cfg.events.for_each([&](std::size_t e) { members.push_back(static_cast<EventId>(e)); });
    REQUIRE(members == std::vector<EventId>{0, 3, 6, 9});
    REQUIRE(px.events[9].local_size == 4);

    // The three proper members form a causal chain; only T5-7 is maximal.
    REQUIRE(px.max_events(to_bits({0, 3, 6})) == std::vector<EventId>{6});

    // Cutoff postsets exist but are dead ends.
    for (ConditionId c : tenth.postset) {
        REQUIRE(px.conditions[c].dead);
        REQUIRE(px.conditions[c].post_events.empty());
    }
}

TEST_CASE("relation queries match a from scratch oracle", "[unfold]") {
    std::vector<NetSystem> nets;
    nets.push_back(testutil::load_fixture("staged_choices.net"));
    nets.push_back(testutil::load_fixture("nfc_memory.net"));
    nets.push_back(testutil::load_fixture("corr_mismatch.net"));
    for (uint64_t seed : {11u, 23u, 42u}) nets.push_back(gen_random_safe(seed, {}));

    for (const auto& sys : nets) {
        auto px = unfold(sys);
        NaiveRelations naive(px);
        auto ne = px.events.size();
        auto nc = px.conditions.size();

        // events vs events
        for (EventId a = 0; a < ne; ++a)
            for (EventId b = 0; b < ne; ++b) {
                Rel got = px.relation({NodeKind::event, a}, {NodeKind::event, b});
                Rel want;
                if (a == b)
                    want = Rel::same;
                else if (naive.before_ee(a, b))
                    want = Rel::before;
                else if (naive.before_ee(b, a))
                    want = Rel::after;
                else if (naive.conflict(naive.ev_below_event[a], naive.ev_below_event[b]))
                    want = Rel::conflict;
                else
                    want = Rel::concurrent;
                INFO(px.event_name(a) << " vs " << px.event_name(b));
                REQUIRE(got == want);
            }

        // conditions vs conditions: derive causality through producer and
        // consumers without the bitsets
        auto cond_before = [&](ConditionId c, ConditionId d) {
            int pd = px.conditions[d].pre_event;
            if (pd < 0) return false;
            // c < d iff c <= some preset condition of d's producer
            for (EventId f : px.conditions[c].post_events)
                if (naive.ev_below_event[static_cast<EventId>(pd)][f]) return true;
            return false;
        };
        for (ConditionId c = 0; c < nc; ++c)
            for (ConditionId d = 0; d < nc; ++d) {
                Rel got = px.relation({NodeKind::condition, c}, {NodeKind::condition, d});
                Rel want;
                if (c == d)
                    want = Rel::same;
                else if (cond_before(c, d))
                    want = Rel::before;
                else if (cond_before(d, c))
                    want = Rel::after;
                else if (naive.conflict(naive.ev_below_cond[c], naive.ev_below_cond[d]))
                    want = Rel::conflict;
                else
                    want = Rel::concurrent;
                REQUIRE(got == want);
                // co table symmetry comes free with the check
                if (want == Rel::concurrent) REQUIRE(px.cond_co_cond(d, c));
            }
    }
}

TEST_CASE("two events consuming one condition are in conflict", "[unfold]") {
    auto px = unfold(testutil::load_fixture("xor_rejoin.net"));
    REQUIRE(px.events.size() == 3);
    // T1-1 and T2-2 compete for the initial condition.
    REQUIRE(px.relation({NodeKind::event, 0}, {NodeKind::event, 1}) == Rel::conflict);
    REQUIRE(px.events[1].cutoff);
    REQUIRE(px.events[1].corr == 0);
}

TEST_CASE("configuration validity", "[unfold]") {
    auto px = unfold(testutil::load_fixture("staged_choices.net"));
    // Not causally closed: T2-4 without its cause T0-1.
    REQUIRE_FALSE(px.is_configuration(to_bits({3})));
    // Conflicting: T0-1 and T1-2 consume the same initial condition.
    REQUIRE_FALSE(px.is_configuration(to_bits({0, 1})));
    REQUIRE(px.is_configuration(to_bits({0, 3})));
    REQUIRE(px.is_configuration(Bitset{}));

    Configuration bad;
    bad.events = to_bits({3});
    REQUIRE_THROWS_AS(px.cut_of(bad), std::invalid_argument);
}

TEST_CASE("cut and mark of the empty configuration", "[unfold]") {
    auto sys = testutil::load_fixture("nfc_memory.net");
    auto px = unfold(sys);
    Configuration empty;
    const Bitset& cut = px.cut_of(empty);
    std::size_t n = 0;
    cut.for_each([&](std::size_t c) {
        ++n;
        REQUIRE(px.conditions[c].pre_event == -1);
    });
    REQUIRE(n == px.initial_conditions.size());
    REQUIRE(px.mark_of(empty) == sys.m0);
}

TEST_CASE("chain prefix cut collapses to the last condition", "[unfold]") {
    auto px = unfold(testutil::make_chain(3));
    Configuration all;
    all.events = to_bits({0, 1, 2});
    const Bitset& cut = px.cut_of(all);
    std::vector<ConditionId> left;
    cut.for_each([&](std::size_t c) { left.push_back(static_cast<ConditionId>(c)); });
    REQUIRE(left.size() == 1);
    REQUIRE(px.system.net.place_label(px.conditions[left[0]].place) == "p3");
}

TEST_CASE("removing an event keeps a configuration iff it was maximal", "[unfold]") {
    for (const char* name : {"staged_choices.net", "corr_mismatch.net", "nfc_memory.net"}) {
        auto px = unfold(testutil::load_fixture(name));
        INFO(name);
        for_each_configuration(px, [&](const std::vector<EventId>& conf) {
            Bitset bits;
            for (auto e : conf) bits.set(e);
            auto maximal = px.max_events(bits);
            for (auto e : conf) {
                Bitset without = bits;
                without.reset(e);
                bool is_max = std::find(maximal.begin(), maximal.end(), e) != maximal.end();
                REQUIRE(px.is_configuration(without) == is_max);
            }
        });
    }
}

TEST_CASE("local configurations of the maximal events cover the set", "[unfold]") {
    for (const char* name : {"staged_choices.net", "corr_mismatch.net"}) {
        auto px = unfold(testutil::load_fixture(name));
        INFO(name);
        for_each_configuration(px, [&](const std::vector<EventId>& conf) {
            Bitset bits;
            for (auto e : conf) bits.set(e);
            Bitset covered;
            for (auto e : px.max_events(bits)) covered |= px.local_config(e).events;
            REQUIRE(covered == bits);
        });
    }
}

TEST_CASE("every co-set extends to a cut of a configuration", "[unfold]") {
    // Union of local configurations over the maximal producers of the co-set:
    // a configuration whose cut contains it, with the same maximal events.
    for (const char* name : {"xor_rejoin.net", "corr_mismatch.net", "staged_choices.net"}) {
        auto px = unfold(testutil::load_fixture(name));
        INFO(name);
        for_each_coset(px, [&](const std::vector<ConditionId>& coset) {
            Bitset producers;
            for (auto c : coset)
                if (px.conditions[c].pre_event >= 0)
                    producers.set(static_cast<std::size_t>(px.conditions[c].pre_event));
            Bitset conf_bits;
            auto maximal = px.max_events(producers);
            for (auto e : maximal) conf_bits |= px.local_config(e).events;

            REQUIRE(px.is_configuration(conf_bits));
            Configuration conf;
            conf.events = conf_bits;
            const Bitset& cut = px.cut_of(conf);
            for (auto c : coset) REQUIRE(cut.test(c));
            REQUIRE(px.max_events(conf_bits) == maximal);
        });
    }
}

TEST_CASE("presets of maximal events sit in the cut one step back", "[unfold]") {
    for (const char* name : {"staged_choices.net", "corr_mismatch.net"}) {
        auto px = unfold(testutil::load_fixture(name));
        INFO(name);
        for_each_configuration(px, [&](const std::vector<EventId>& conf) {
            Bitset bits;
            for (auto e : conf) bits.set(e);
            for (auto e : px.max_events(bits)) {
                Bitset without = bits;
                without.reset(e);
                Configuration c;
                c.events = without;
                const Bitset& cut = px.cut_of(c);
                for (auto b : px.events[e].preset) REQUIRE(cut.test(b));
            }
        });
    }
}

TEST_CASE("cutoff free configurations reach every marking", "[unfold]") {
    std::vector<NetSystem> nets;
    nets.push_back(testutil::load_fixture("staged_choices.net"));
    nets.push_back(testutil::load_fixture("corr_mismatch.net"));
    nets.push_back(testutil::load_fixture("xor_rejoin.net"));
    for (uint64_t seed : {3u, 14u, 59u}) nets.push_back(gen_random_safe(seed, {}));
    // two waves through a chain: multi token coverage
    {
        auto sys = testutil::make_chain(3);
        sys.m0 = Marking(std::vector<std::pair<PlaceId, uint32_t>>{
            {sys.net.place_by_label("p0"), 2}});
        nets.push_back(std::move(sys));
    }

    for (const auto& sys : nets) {
        auto rg = build_rg(sys);
        REQUIRE(rg.status == RgStatus::exhausted);
        std::set<Marking> reachable(rg.nodes.begin(), rg.nodes.end());

        auto px = unfold(sys);
        std::set<Marking> seen;
        for_each_configuration(px, [&](const std::vector<EventId>& conf) {
            for (auto e : conf)
                if (px.events[e].cutoff) return;
            Configuration c;
            for (auto e : conf) c.events.set(e);
            seen.insert(px.mark_of(c));
        });
        // both directions: nothing unreachable, nothing missing
        REQUIRE(seen == reachable);
    }
}

TEST_CASE("unfolding is deterministic", "[unfold]") {
    auto sys = gen_random_safe(99, {});
    auto a = unfold(sys);
    auto b = unfold(sys);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        REQUIRE(a.events[i].transition == b.events[i].transition);
        REQUIRE(a.events[i].preset == b.events[i].preset);
        REQUIRE(a.events[i].cutoff == b.events[i].cutoff);
        REQUIRE(a.events[i].corr == b.events[i].corr);
    }
    REQUIRE(a.conditions.size() == b.conditions.size());
    for (std::size_t i = 0; i < a.conditions.size(); ++i)
        REQUIRE(a.conditions[i].place == b.conditions[i].place);
}

TEST_CASE("event cap marks the prefix incomplete", "[unfold]") {
    auto sys = testutil::load_fixture("token_pump.net");
    auto px = unfold(sys, UnfoldLimits{25});
    REQUIRE_FALSE(px.complete);
    REQUIRE(px.events.size() <= 25);
}

TEST_CASE("one safety is read off the prefix", "[unfold]") {
    REQUIRE(unfold(testutil::load_fixture("nfc_memory.net")).one_safe);
    auto sys = testutil::make_chain(2);
    sys.m0 = Marking(std::vector<std::pair<PlaceId, uint32_t>>{
        {sys.net.place_by_label("p0"), 2}});
    REQUIRE_FALSE(unfold(sys).one_safe);
}

TEST_CASE("prefix export mentions cutoffs", "[unfold]") {
    auto px = unfold(testutil::load_fixture("xor_rejoin.net"));
    std::ostringstream out;
    px.to_dot(out);
    auto dot = out.str();
    REQUIRE(dot.find("digraph") != std::string::npos);
    REQUIRE(dot.find("T2-2") != std::string::npos);
    REQUIRE(dot.find("dashed") != std::string::npos);
}
