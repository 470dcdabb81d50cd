#pragma once

// JSON views of the main value types (nlohmann/json from vendor/).  Kept out
// of the core headers so the algorithms do not drag the dependency along.

#include <json.hpp>

#include "pntar/prefix.hpp"
#include "pntar/reachability.hpp"
#include "pntar/tar_relation.hpp"

namespace pntar {

inline nlohmann::json tar_to_json(const TarRelation& tar, const PetriNet& net,
                                  const std::string& engine) {
    nlohmann::json j;
    j["engine"] = engine;
    j["transitions"] = nlohmann::json::array();
    for (TransitionId t = 0; t < net.num_transitions(); ++t)
        j["transitions"].push_back(net.transition_label(t));
    j["pairs"] = nlohmann::json::array();
    for (auto [a, b] : tar.pairs()) {
        nlohmann::json p;
        p["from"] = net.transition_label(a);
        p["to"] = net.transition_label(b);
        p["rule"] = rule_name(tar.rule(a, b));
        p["self"] = (a == b);
        if (const EarWitness* w = tar.witness(a, b)) {
            nlohmann::json jw;
            jw["e1"] = w->e1;
            if (w->e2) jw["e2"] = *w->e2;
            if (!w->cut.empty()) jw["cut"] = w->cut;
            p["witness"] = jw;
        }
        j["pairs"].push_back(p);
    }
    return j;
}

inline nlohmann::json prefix_to_json(const Prefix& px) {
    nlohmann::json j;
    j["complete"] = px.complete;
    j["one_safe"] = px.one_safe;
    j["conditions"] = nlohmann::json::array();
    for (const Condition& c : px.conditions) {
        nlohmann::json jc;
        jc["id"] = c.id;
        jc["place"] = px.system.net.place_label(c.place);
        jc["pre_event"] = c.pre_event;
        jc["post_events"] = c.post_events;
        if (c.dead) jc["dead"] = true;
        j["conditions"].push_back(jc);
    }
    j["events"] = nlohmann::json::array();
    for (const Event& e : px.events) {
        nlohmann::json je;
        je["id"] = e.id;
        je["name"] = px.event_name(e.id);
        je["transition"] = px.system.net.transition_label(e.transition);
        je["preset"] = e.preset;
        je["postset"] = e.postset;
        if (e.cutoff) {
            je["cutoff"] = true;
            je["corr"] = e.corr;
        }
        j["events"].push_back(je);
    }
    j["initial_conditions"] = px.initial_conditions;
    return j;
}

inline nlohmann::json rg_to_json(const NetSystem& sys, const ReachabilityGraph& rg) {
    nlohmann::json j;
    j["status"] = rg_status_name(rg.status);
    j["nodes"] = nlohmann::json::array();
    for (const Marking& m : rg.nodes) j["nodes"].push_back(marking_to_string(sys.net, m));
    j["edges"] = nlohmann::json::array();
    for (const RgEdge& e : rg.edges)
        j["edges"].push_back({{"src", e.src},
                              {"transition", sys.net.transition_label(e.transition)},
                              {"dst", e.dst}});
    return j;
}

} // namespace pntar
