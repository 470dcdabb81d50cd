#pragma once

// The result type shared by every engine: which ordered transition pairs
// (t1, t2) allow t2 to fire immediately after t1, plus where each pair came
// from (which rule established it) and an optional witness for debugging.

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "pntar/net.hpp"

namespace pntar {

using EventId = uint32_t;
using ConditionId = uint32_t;

// How a pair entered the relation.
enum class Rule : uint8_t {
    none = 0,
    rg,           // read off the reachability graph
    co,           // concurrent events in the prefix
    mea,          // maximal-event adjacency on a non-cutoff event
    corr_mea,     // adjacency transferred from a cutoff's corresponding event
    cut_enum,     // cut enumeration over candidate conditions
    direct_link,  // events joined by a single condition (jin)
};

inline const char* rule_name(Rule r) {
    switch (r) {
        case Rule::none: return "none";
        case Rule::rg: return "rg";
        case Rule::co: return "co";
        case Rule::mea: return "mea";
        case Rule::corr_mea: return "corr-mea";
        case Rule::cut_enum: return "cut-enum";
        case Rule::direct_link: return "direct-link";
    }
    return "?";
}

// Evidence that t2 can follow t1, phrased in prefix terms.
struct EarWitness {
    Rule kind = Rule::none;
    EventId e1 = 0;
    std::optional<EventId> e2;              // absent for cut-enum witnesses
    std::vector<ConditionId> cut;           // the enabling co-set, when enumerated
};

class TarRelation {
public:
    explicit TarRelation(std::size_t num_transitions = 0)
        : n_(num_transitions), rule_(num_transitions * num_transitions, Rule::none) {}

    std::size_t num_transitions() const { return n_; }

    bool contains(TransitionId t1, TransitionId t2) const {
        return rule_[index(t1, t2)] != Rule::none;
    }

    Rule rule(TransitionId t1, TransitionId t2) const { return rule_[index(t1, t2)]; }

    // First writer wins: a pair keeps the rule that established it.
    void add(TransitionId t1, TransitionId t2, Rule r) {
        Rule& slot = rule_[index(t1, t2)];
        if (slot == Rule::none) slot = r;
    }

    void add(TransitionId t1, TransitionId t2, Rule r, const EarWitness& w) {
        if (rule_[index(t1, t2)] == Rule::none) witnesses_[index(t1, t2)] = w;
        add(t1, t2, r);
    }

    const EarWitness* witness(TransitionId t1, TransitionId t2) const {
        auto it = witnesses_.find(index(t1, t2));
        return it == witnesses_.end() ? nullptr : &it->second;
    }

    std::vector<std::pair<TransitionId, TransitionId>> pairs() const {
        std::vector<std::pair<TransitionId, TransitionId>> out;
        for (TransitionId a = 0; a < n_; ++a)
            for (TransitionId b = 0; b < n_; ++b)
                if (contains(a, b)) out.emplace_back(a, b);
        return out;
    }

    std::size_t size() const {
        std::size_t c = 0;
        for (Rule r : rule_)
            if (r != Rule::none) ++c;
        return c;
    }

    // Membership comparison only; provenance is allowed to differ.
    bool operator==(const TarRelation& o) const {
        if (n_ != o.n_) return false;
        for (std::size_t i = 0; i < rule_.size(); ++i)
            if ((rule_[i] != Rule::none) != (o.rule_[i] != Rule::none)) return false;
        return true;
    }
    bool operator!=(const TarRelation& o) const { return !(*this == o); }

private:
    std::size_t index(TransitionId t1, TransitionId t2) const {
        if (t1 >= n_ || t2 >= n_) throw std::out_of_range("TarRelation: transition id out of range");
        return static_cast<std::size_t>(t1) * n_ + t2;
    }

    std::size_t n_;
    std::vector<Rule> rule_;
    std::unordered_map<std::size_t, EarWitness> witnesses_;
};

// Rule-hit counters for the benchmark harness; one instance per engine run.
struct EngineStats {
    uint64_t co_hits = 0;
    uint64_t mea_hits = 0;
    uint64_t corr_mea_hits = 0;
    uint64_t cut_enum_calls = 0;
    bool fallback_used = false;  // improved engine degraded to the general one
};

// ---------------------------------------------------------------------------
// Renderings
// ---------------------------------------------------------------------------

inline std::string format_pairs(const TarRelation& tar, const PetriNet& net) {
    std::ostringstream out;
    for (auto [a, b] : tar.pairs()) {
        out << net.transition_label(a) << " -> " << net.transition_label(b) << " ["
            << rule_name(tar.rule(a, b)) << "]";
        if (a == b) out << " (self)";
        out << "\n";
    }
    return out.str();
}

// Square 0/1 footprint with a label header row/column.
inline std::string format_matrix(const TarRelation& tar, const PetriNet& net) {
    std::ostringstream out;
    out << "t";
    for (TransitionId b = 0; b < tar.num_transitions(); ++b)
        out << "," << net.transition_label(b);
    out << "\n";
    for (TransitionId a = 0; a < tar.num_transitions(); ++a) {
        out << net.transition_label(a);
        for (TransitionId b = 0; b < tar.num_transitions(); ++b)
            out << "," << (tar.contains(a, b) ? 1 : 0);
        out << "\n";
    }
    return out.str();
}

} // namespace pntar
