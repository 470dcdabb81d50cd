#pragma once

// Maximal clique enumeration (Bron-Kerbosch with pivoting) over a small dense
// graph given as adjacency bitsets.  The cut search hands us the co graph of
// a handful of candidate conditions, so vertex counts stay tiny; recursion
// depth is bounded by the largest clique.

#include <cstddef>
#include <vector>

#include "pntar/bitset.hpp"

namespace pntar {

namespace detail {

template <typename Visitor>
bool bron_kerbosch_rec(const std::vector<Bitset>& adj, Bitset& r, Bitset p, Bitset x,
                       std::size_t n, Visitor&& visit) {
    if (p.none() && x.none()) return visit(const_cast<const Bitset&>(r));

    // Pivot: vertex of P|X with the most neighbours in P, shrinking the
    // branching set as much as possible.
    std::size_t pivot = n;
    std::size_t best = 0;
    bool have_pivot = false;
    Bitset px = p;
    px |= x;
    px.for_each([&](std::size_t u) {
        Bitset cand = p;
        cand &= adj[u];
        std::size_t deg = cand.count();
        if (!have_pivot || deg > best) {
            have_pivot = true;
            best = deg;
            pivot = u;
        }
    });

    Bitset branch = p;
    if (have_pivot) branch.and_not(adj[pivot]);

    bool keep_going = true;
    branch.for_each([&](std::size_t v) {
        if (!keep_going) return;
        r.set(v);
        Bitset p2 = p;
        p2 &= adj[v];
        Bitset x2 = x;
        x2 &= adj[v];
        keep_going = bron_kerbosch_rec(adj, r, std::move(p2), std::move(x2), n, visit);
        r.reset(v);
        p.reset(v);
        x.set(v);
    });
    return keep_going;
}

} // namespace detail

// Calls visit(clique) for every maximal clique; visit returns false to stop
// early.  adj[v] must not contain v itself.
template <typename Visitor>
void for_each_maximal_clique(const std::vector<Bitset>& adj, std::size_t n, Visitor&& visit) {
    if (n == 0) return;
    Bitset r, p, x;
    for (std::size_t v = 0; v < n; ++v) p.set(v);
    detail::bron_kerbosch_rec(adj, r, std::move(p), std::move(x), n, visit);
}

} // namespace pntar
