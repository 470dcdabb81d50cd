#pragma once

// Net generators for tests and benchmarks.
//
//  - gen_depth(b, d): one AND split into b chains of d transitions, then a
//    join.  Its reachability graph has (d+1)^b + 2 markings while the prefix
//    stays linear in b*d, which is the whole point of the exercise.
//    gen_breadth(n) is the d = 1 special case.
//  - gen_random_safe: structured workflow nets built from sequence, choice,
//    parallel and (optionally) non-free-choice blocks, with occasional loop
//    backs.  1-safe by construction; a rejection check enforces it anyway.
//    extra_tokens > 0 drops additional tokens on the start place, giving a
//    bounded but not 1-safe system.

#include <random>
#include <string>
#include <vector>

#include "pntar/net.hpp"
#include "pntar/reachability.hpp"

namespace pntar {

inline NetSystem gen_depth(uint32_t branches, uint32_t depth) {
    if (branches == 0 || depth == 0)
        throw std::invalid_argument("gen_depth: branches and depth must be positive");
    NetSystem sys;
    PetriNet& net = sys.net;
    PlaceId p_in = net.add_place("p_in");
    std::vector<std::vector<PlaceId>> slot(branches);
    for (uint32_t i = 0; i < branches; ++i)
        for (uint32_t j = 0; j <= depth; ++j)
            slot[i].push_back(net.add_place("s" + std::to_string(i + 1) + "_" +
                                            std::to_string(j)));
    PlaceId p_out = net.add_place("p_out");

    TransitionId split = net.add_transition("S");
    net.add_arc_pt(p_in, split);
    for (uint32_t i = 0; i < branches; ++i) net.add_arc_tp(split, slot[i][0]);

    for (uint32_t i = 0; i < branches; ++i)
        for (uint32_t j = 1; j <= depth; ++j) {
            TransitionId t = net.add_transition("B" + std::to_string(i + 1) + "_" +
                                                std::to_string(j));
            net.add_arc_pt(slot[i][j - 1], t);
            net.add_arc_tp(t, slot[i][j]);
        }

    TransitionId join = net.add_transition("J");
    for (uint32_t i = 0; i < branches; ++i) net.add_arc_pt(slot[i][depth], join);
    net.add_arc_tp(join, p_out);

    sys.m0 = Marking({{p_in, 1}});
    return sys;
}

inline NetSystem gen_breadth(uint32_t n) { return gen_depth(n, 1); }

// ---------------------------------------------------------------------------
// Random structured nets
// ---------------------------------------------------------------------------

struct GenOptions {
    uint32_t max_transitions = 12;
    // Block mix when budget allows every kind; renormalized otherwise.
    double p_seq = 0.60;
    double p_xor = 0.15;
    double p_and = 0.15;
    double p_nfc = 0.10;
    double p_loop = 0.10;      // chance to add a loop-back around a block
    bool allow_nfc = true;     // false forces free-choice structure
    uint32_t extra_tokens = 0; // extra tokens on the start place
};

namespace detail {

class RandomNetBuilder {
public:
    RandomNetBuilder(const GenOptions& opt, uint64_t seed) : opt_(opt), rng_(seed) {}

    NetSystem build() {
        NetSystem sys;
        net_ = &sys.net;
        PlaceId start = fresh_place();
        PlaceId end = fresh_place();
        block(start, end, opt_.max_transitions, /*loop_ok=*/true);
        sys.m0 = Marking({{start, 1 + opt_.extra_tokens}});
        return sys;
    }

private:
    PlaceId fresh_place() { return net_->add_place("p" + std::to_string(place_n_++)); }
    TransitionId fresh_transition() { return net_->add_transition("t" + std::to_string(trans_n_++)); }

    uint32_t pick(uint32_t lo, uint32_t hi) {  // inclusive
        return std::uniform_int_distribution<uint32_t>(lo, hi)(rng_);
    }
    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

    void leaf(PlaceId entry, PlaceId exit) {
        TransitionId t = fresh_transition();
        net_->add_arc_pt(entry, t);
        net_->add_arc_tp(t, exit);
    }

    // Builds a single-entry single-exit piece using at most `budget` (>= 1)
    // transitions and returns the number used.  loop_ok says whether a
    // loop-back from exit to entry keeps the surrounding structure sound
    // (false on AND branch exits, where the join consumes the exit place; a
    // loop there would be a second, non-free-choice consumer).
    uint32_t block(PlaceId entry, PlaceId exit, uint32_t budget, bool loop_ok) {
        uint32_t used = body(entry, exit, budget, loop_ok);
        if (used < budget && chance(opt_.p_loop) && (loop_ok || opt_.allow_nfc)) {
            TransitionId t = fresh_transition();
            net_->add_arc_pt(exit, t);
            net_->add_arc_tp(t, entry);
            ++used;
        }
        return used;
    }

    uint32_t body(PlaceId entry, PlaceId exit, uint32_t budget, bool loop_ok) {
        enum Kind { k_seq, k_xor, k_and, k_nfc, k_leaf };
        Kind kind = k_leaf;
        if (budget >= 2) {
            double w_seq = opt_.p_seq;
            double w_xor = opt_.p_xor;
            double w_and = budget >= 4 ? opt_.p_and : 0.0;
            double w_nfc = (budget >= 5 && opt_.allow_nfc) ? opt_.p_nfc : 0.0;
            double total = w_seq + w_xor + w_and + w_nfc;
            double r = std::uniform_real_distribution<double>(0.0, total)(rng_);
            if ((r -= w_seq) < 0) kind = k_seq;
            else if ((r -= w_xor) < 0) kind = k_xor;
            else if ((r -= w_and) < 0) kind = k_and;
            else kind = k_nfc;
        }

        switch (kind) {
            case k_leaf:
                leaf(entry, exit);
                return 1;
            case k_seq: {
                uint32_t parts = pick(2, std::min<uint32_t>(4, budget));
                uint32_t used = 0;
                PlaceId cur = entry;
                for (uint32_t i = 0; i < parts; ++i) {
                    PlaceId next = i + 1 == parts ? exit : fresh_place();
                    uint32_t left = budget - used - (parts - 1 - i);  // keep 1 per rest
                    uint32_t share = i + 1 == parts ? left : pick(1, left);
                    used += block(cur, next, share, loop_ok);
                    cur = next;
                }
                return used;
            }
            case k_xor: {
                uint32_t ways = pick(2, std::min<uint32_t>(3, budget));
                uint32_t used = 0;
                for (uint32_t i = 0; i < ways; ++i) {
                    uint32_t left = budget - used - (ways - 1 - i);
                    uint32_t share = i + 1 == ways ? left : pick(1, left);
                    used += block(entry, exit, share, loop_ok);
                }
                return used;
            }
            case k_and: {
                uint32_t ways = pick(2, std::min<uint32_t>(3, budget - 2));
                TransitionId split = fresh_transition();
                TransitionId join = fresh_transition();
                net_->add_arc_pt(entry, split);
                net_->add_arc_tp(join, exit);
                uint32_t used = 2;
                for (uint32_t i = 0; i < ways; ++i) {
                    PlaceId a = fresh_place();
                    PlaceId b = fresh_place();
                    net_->add_arc_tp(split, a);
                    net_->add_arc_pt(b, join);
                    uint32_t left = budget - used - (ways - 1 - i);
                    uint32_t share = i + 1 == ways ? left : pick(1, left);
                    used += block(a, b, share, /*loop_ok=*/false);
                }
                return used;
            }
            case k_nfc: {
                // Two alternative producers of a shared mid place, each also
                // dropping a private memory token that only the matching
                // finisher consumes: the finishers share mid2 but differ in
                // presets, which is exactly the non-free-choice join shape.
                PlaceId mid = fresh_place();
                PlaceId mid2 = fresh_place();
                PlaceId mem_l = fresh_place();
                PlaceId mem_r = fresh_place();
                TransitionId t_l = fresh_transition();
                TransitionId t_r = fresh_transition();
                TransitionId t_m = fresh_transition();
                TransitionId t_el = fresh_transition();
                TransitionId t_er = fresh_transition();
                net_->add_arc_pt(entry, t_l);
                net_->add_arc_tp(t_l, mid);
                net_->add_arc_tp(t_l, mem_l);
                net_->add_arc_pt(entry, t_r);
                net_->add_arc_tp(t_r, mid);
                net_->add_arc_tp(t_r, mem_r);
                net_->add_arc_pt(mid, t_m);
                net_->add_arc_tp(t_m, mid2);
                net_->add_arc_pt(mid2, t_el);
                net_->add_arc_pt(mem_l, t_el);
                net_->add_arc_tp(t_el, exit);
                net_->add_arc_pt(mid2, t_er);
                net_->add_arc_pt(mem_r, t_er);
                net_->add_arc_tp(t_er, exit);
                return 5;
            }
        }
        return 1;  // unreachable
    }

    const GenOptions& opt_;
    std::mt19937_64 rng_;
    PetriNet* net_ = nullptr;
    uint32_t place_n_ = 0;
    uint32_t trans_n_ = 0;
};

} // namespace detail

// Deterministic in (seed, options).  The builder keeps every place at one
// token by construction; the reachability check below is a guard against
// generator bugs, not a sampling loop that usually triggers.
inline NetSystem gen_random_safe(uint64_t seed, const GenOptions& opt = {}) {
    for (uint64_t attempt = 0;; ++attempt) {
        NetSystem sys = detail::RandomNetBuilder(opt, seed + (attempt << 32)).build();
        RgLimits limits;
        limits.state_cap = 200'000;
        limits.bound_cap = std::max<uint32_t>(4, 2 * (1 + opt.extra_tokens));
        ReachabilityGraph rg = build_rg(sys, limits);
        if (rg.exhausted()) {
            NetClass cls = classify(rg);
            bool want_safe = opt.extra_tokens == 0;
            if (want_safe == cls.is_one_safe()) return sys;
        }
        if (attempt > 50)
            throw std::runtime_error("gen_random_safe: rejection sampling did not converge");
    }
}

} // namespace pntar
