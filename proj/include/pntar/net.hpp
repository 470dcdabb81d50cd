#pragma once

// Place/transition nets with unit arc weights, plus the token game.
// Node ids are dense indices; the original labels live in side tables so the
// algorithms never touch strings.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pntar {

using PlaceId = uint32_t;
using TransitionId = uint32_t;

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Sparse marking: sorted (place, count) pairs with count > 0.  Keeping the
// representation canonical makes equality and hashing trivial, which the
// reachability search leans on heavily.
class Marking {
public:
    Marking() = default;

    explicit Marking(std::vector<std::pair<PlaceId, uint32_t>> entries)
        : entries_(std::move(entries)) {
        normalize();
    }

    uint32_t count(PlaceId p) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                                   [](const auto& e, PlaceId q) { return e.first < q; });
        return (it != entries_.end() && it->first == p) ? it->second : 0;
    }

    void add(PlaceId p, uint32_t n) {
        if (n == 0) return;
        auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                                   [](const auto& e, PlaceId q) { return e.first < q; });
        if (it != entries_.end() && it->first == p)
            it->second += n;
        else
            entries_.insert(it, {p, n});
    }

    // Removes n tokens from p; the caller must have checked enabledness.
    void remove(PlaceId p, uint32_t n) {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                                   [](const auto& e, PlaceId q) { return e.first < q; });
        if (it == entries_.end() || it->first != p || it->second < n)
            throw std::logic_error("Marking::remove: not enough tokens on place " +
                                   std::to_string(p));
        it->second -= n;
        if (it->second == 0) entries_.erase(it);
    }

    uint32_t total() const {
        uint32_t t = 0;
        for (const auto& e : entries_) t += e.second;
        return t;
    }

    uint32_t max_count() const {
        uint32_t m = 0;
        for (const auto& e : entries_) m = std::max(m, e.second);
        return m;
    }

    bool empty() const { return entries_.empty(); }
    const std::vector<std::pair<PlaceId, uint32_t>>& entries() const { return entries_; }

    bool operator==(const Marking& o) const { return entries_ == o.entries_; }
    bool operator!=(const Marking& o) const { return !(*this == o); }
    bool operator<(const Marking& o) const { return entries_ < o.entries_; }

    std::size_t hash() const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (const auto& e : entries_) {
            h = (h ^ e.first) * 0x100000001b3ull;
            h = (h ^ e.second) * 0x100000001b3ull;
        }
        return h;
    }

private:
    void normalize() {
        std::sort(entries_.begin(), entries_.end());
        std::vector<std::pair<PlaceId, uint32_t>> out;
        for (const auto& e : entries_) {
            if (e.second == 0) continue;
            if (!out.empty() && out.back().first == e.first)
                out.back().second += e.second;
            else
                out.push_back(e);
        }
        entries_ = std::move(out);
    }

    std::vector<std::pair<PlaceId, uint32_t>> entries_;
};

struct MarkingHash {
    std::size_t operator()(const Marking& m) const { return m.hash(); }
};

class PetriNet {
public:
    PlaceId add_place(const std::string& label) {
        if (by_label_.count(label))
            throw ValidationError("duplicate node id '" + label + "'");
        PlaceId id = static_cast<PlaceId>(place_labels_.size());
        place_labels_.push_back(label);
        place_pre_.emplace_back();
        place_post_.emplace_back();
        by_label_[label] = {true, id};
        return id;
    }

    TransitionId add_transition(const std::string& label) {
        if (by_label_.count(label))
            throw ValidationError("duplicate node id '" + label + "'");
        TransitionId id = static_cast<TransitionId>(trans_labels_.size());
        trans_labels_.push_back(label);
        trans_pre_.emplace_back();
        trans_post_.emplace_back();
        by_label_[label] = {false, id};
        return id;
    }

    void add_arc_pt(PlaceId p, TransitionId t) {
        check_place(p);
        check_transition(t);
        if (std::find(trans_pre_[t].begin(), trans_pre_[t].end(), p) != trans_pre_[t].end())
            throw ValidationError("duplicate arc " + place_labels_[p] + " -> " + trans_labels_[t]);
        trans_pre_[t].push_back(p);
        place_post_[p].push_back(t);
    }

    void add_arc_tp(TransitionId t, PlaceId p) {
        check_place(p);
        check_transition(t);
        if (std::find(trans_post_[t].begin(), trans_post_[t].end(), p) != trans_post_[t].end())
            throw ValidationError("duplicate arc " + trans_labels_[t] + " -> " + place_labels_[p]);
        trans_post_[t].push_back(p);
        place_pre_[p].push_back(t);
    }

    std::size_t num_places() const { return place_labels_.size(); }
    std::size_t num_transitions() const { return trans_labels_.size(); }

    const std::string& place_label(PlaceId p) const { return place_labels_.at(p); }
    const std::string& transition_label(TransitionId t) const { return trans_labels_.at(t); }

    const std::vector<PlaceId>& pre(TransitionId t) const { return trans_pre_.at(t); }
    const std::vector<PlaceId>& post(TransitionId t) const { return trans_post_.at(t); }
    const std::vector<TransitionId>& place_pre(PlaceId p) const { return place_pre_.at(p); }
    const std::vector<TransitionId>& place_post(PlaceId p) const { return place_post_.at(p); }

    // Looks a label up; returns (is_place, id) or throws.
    std::pair<bool, uint32_t> find(const std::string& label) const {
        auto it = by_label_.find(label);
        if (it == by_label_.end())
            throw ValidationError("unknown node id '" + label + "'");
        return it->second;
    }
    bool has_node(const std::string& label) const { return by_label_.count(label) != 0; }

    TransitionId transition_by_label(const std::string& label) const {
        auto [is_place, id] = find(label);
        if (is_place) throw ValidationError("'" + label + "' is a place, not a transition");
        return id;
    }
    PlaceId place_by_label(const std::string& label) const {
        auto [is_place, id] = find(label);
        if (!is_place) throw ValidationError("'" + label + "' is a transition, not a place");
        return id;
    }

    // Structural checks that parsing alone cannot guarantee: the net must be
    // nonempty and every transition needs at least one input place (a
    // transition with an empty preset would be enabled forever).
    void validate() const {
        if (place_labels_.empty() && trans_labels_.empty())
            throw ValidationError("net has no nodes");
        for (TransitionId t = 0; t < trans_pre_.size(); ++t)
            if (trans_pre_[t].empty())
                throw ValidationError("transition '" + trans_labels_[t] + "' has an empty preset");
    }

    // Free choice: transitions sharing an input place must have identical
    // presets.  Decides whether the jin engine's answers can be trusted.
    bool is_free_choice() const {
        for (PlaceId p = 0; p < place_post_.size(); ++p) {
            const auto& consumers = place_post_[p];
            for (std::size_t i = 1; i < consumers.size(); ++i) {
                auto a = trans_pre_[consumers[0]];
                auto b = trans_pre_[consumers[i]];
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                if (a != b) return false;
            }
        }
        return true;
    }

private:
    void check_place(PlaceId p) const {
        if (p >= place_labels_.size()) throw ValidationError("place id out of range");
    }
    void check_transition(TransitionId t) const {
        if (t >= trans_labels_.size()) throw ValidationError("transition id out of range");
    }

    std::vector<std::string> place_labels_;
    std::vector<std::string> trans_labels_;
    std::vector<std::vector<PlaceId>> trans_pre_, trans_post_;
    std::vector<std::vector<TransitionId>> place_pre_, place_post_;
    std::unordered_map<std::string, std::pair<bool, uint32_t>> by_label_;
};

struct NetSystem {
    PetriNet net;
    Marking m0;
};

inline bool enabled(const PetriNet& net, const Marking& m, TransitionId t) {
    for (PlaceId p : net.pre(t))
        if (m.count(p) < 1) return false;
    return true;
}

inline Marking fire(const PetriNet& net, const Marking& m, TransitionId t) {
    if (!enabled(net, m, t))
        throw std::invalid_argument("fire: transition '" + net.transition_label(t) +
                                    "' is not enabled");
    Marking out = m;
    for (PlaceId p : net.pre(t)) out.remove(p, 1);
    for (PlaceId p : net.post(t)) out.add(p, 1);
    return out;
}

inline std::vector<TransitionId> enabled_transitions(const PetriNet& net, const Marking& m) {
    std::vector<TransitionId> out;
    for (TransitionId t = 0; t < net.num_transitions(); ++t)
        if (enabled(net, m, t)) out.push_back(t);
    return out;
}

} // namespace pntar
