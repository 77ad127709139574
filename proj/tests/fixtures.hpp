#pragma once

// Canonical fixtures shared across the test suites, plus independent
// brute-force helpers used to cross-check the library's answers.

#include <random>
#include <utility>
#include <vector>

#include "posearch/generators.hpp"
#include "posearch/lattice.hpp"
#include "posearch/oracle.hpp"
#include "posearch/poset.hpp"
#include "posearch/rng.hpp"

namespace fx {

using posearch::Bitset;
using posearch::ElementId;
using posearch::Poset;
using posearch::VirtualQuery;

inline Poset from_pairs(int n, std::vector<std::pair<ElementId, ElementId>> pairs) {
    return Poset::from_pairs(n, pairs);
}

// Diamond: 1 over {2,3} over 4.
inline Poset b2() { return from_pairs(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}}); }

// 4-chain 1 > 2 > 3 > 4.
inline Poset c4() { return from_pairs(4, {{1, 2}, {2, 3}, {3, 4}}); }

// Subset lattice on 3 atoms: 1 top, 2..4 coatoms, 5..7 atoms, 8 bottom.
inline Poset b3() { return posearch::make_boolean(3); }

// Top, three incomparable atoms, bottom.
inline Poset star3() { return posearch::make_star(3); }

// Top 1; 2 and 3 each over both 4 and 5; bottom 6. Not a lattice.
inline Poset bowtie6() {
    return from_pairs(6, {{1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 6}, {5, 6}});
}

// Product of a 2-chain and a 3-chain.
inline Poset grid2x3() { return posearch::make_grid(2, 3); }

// Smallest lattice whose join-irreducible reduction is not a lattice:
// 1 over {2,3} over 4 over {5,6} over 7. Its reduction drops 4 and leaves
// the bowtie, where 2 and 3 have two maximal common lower bounds. Found by
// the exhaustive enumeration in test_lattice.cpp and frozen here.
inline Poset nonmat7() {
    return from_pairs(7, {{1, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 5}, {4, 6}, {5, 7}, {6, 7}});
}

// Two maximal elements over a shared bottom: no top, not a lattice.
inline Poset vee3() { return from_pairs(3, {{1, 3}, {2, 3}}); }

// Depth-2 chain whose middle level is not join-faithful: element 2's
// irreducibles {6,7} join to 4 here but to 2 one level up, so a plain code
// extension would misplace queries at 4. Keeps the bit-confirmation path
// honest.
inline Poset deep8() {
    return from_pairs(
        8, {{1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 6}, {4, 7}, {5, 7}, {6, 8}, {7, 8}});
}

inline VirtualQuery present_query(const Poset& p, ElementId z) {
    VirtualQuery vq{Bitset(p.size() + 1), Bitset(p.size() + 1), z};
    vq.up.set(z);
    vq.up = p.up_closure(vq.up);
    vq.down.set(z);
    vq.down = p.down_closure(vq.down);
    return vq;
}

// Absent profile from explicit up/down seed elements (closed here).
inline VirtualQuery absent_query(const Poset& p, std::vector<ElementId> up_seeds,
                                 std::vector<ElementId> down_seeds) {
    VirtualQuery vq{Bitset(p.size() + 1), Bitset(p.size() + 1), std::nullopt};
    for (ElementId x : up_seeds) vq.up.set(x);
    vq.up = p.up_closure(vq.up);
    for (ElementId x : down_seeds) vq.down.set(x);
    vq.down = p.down_closure(vq.down);
    return vq;
}

// Transitive closure recomputed from scratch by boolean matrix squaring;
// independent of the incremental construction inside Poset.
inline std::vector<std::vector<bool>> closure_by_squaring(
    int n, const std::vector<std::pair<ElementId, ElementId>>& greater_pairs) {
    std::vector<std::vector<bool>> m(n + 1, std::vector<bool>(n + 1, false));
    for (auto [a, b] : greater_pairs) m[a][b] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                if (m[a][b]) continue;
                for (int c = 1; c <= n; ++c)
                    if (m[a][c] && m[c][b]) {
                        m[a][b] = true;
                        changed = true;
                        break;
                    }
            }
    }
    return m;
}

// Maximal elements of a subset, by pairwise comparison.
inline std::vector<ElementId> brute_maximal(const Poset& p, const std::vector<ElementId>& set) {
    std::vector<ElementId> out;
    for (ElementId x : set) {
        bool topped = false;
        for (ElementId y : set)
            if (y != x && p.less(x, y)) topped = true;
        if (!topped) out.push_back(x);
    }
    return out;
}

inline std::vector<ElementId> brute_minimal(const Poset& p, const std::vector<ElementId>& set) {
    std::vector<ElementId> out;
    for (ElementId x : set) {
        bool under = false;
        for (ElementId y : set)
            if (y != x && p.less(y, x)) under = true;
        if (!under) out.push_back(x);
    }
    return out;
}

// Random lattice: chains, boolean cubes, chain products, and meet/join
// closed subsets of those.
inline Poset random_lattice(std::mt19937_64& rng, int max_n = 40) {
    using posearch::rng_below;
    while (true) {
        switch (rng_below(rng, 4)) {
            case 0:
                return posearch::make_chain(2 + static_cast<int>(rng_below(rng, max_n - 1)));
            case 1:
                return posearch::make_boolean(1 + static_cast<int>(rng_below(rng, 5)));
            case 2: {
                int a = 1 + static_cast<int>(rng_below(rng, 6));
                int b = 1 + static_cast<int>(rng_below(rng, 6));
                if (a * b < 2) b = 2;
                return posearch::make_grid(a, b);
            }
            default: {
                Poset parent = rng_below(rng, 2) ? posearch::make_boolean(
                                                       2 + static_cast<int>(rng_below(rng, 4)))
                                                 : posearch::make_grid(
                                                       2 + static_cast<int>(rng_below(rng, 4)),
                                                       2 + static_cast<int>(rng_below(rng, 4)));
                auto checked = posearch::check_lattice(parent);
                auto& lat = std::get<posearch::Lattice>(checked);
                std::vector<char> in(parent.size() + 1, 0);
                int picks = 2 + static_cast<int>(rng_below(rng, 6));
                for (int i = 0; i < picks; ++i)
                    in[1 + static_cast<int>(rng_below(rng, parent.size()))] = 1;
                bool grew = true;  // close under meet and join
                while (grew) {
                    grew = false;
                    for (int x = 1; x <= parent.size(); ++x)
                        for (int y = x + 1; y <= parent.size(); ++y) {
                            if (!in[x] || !in[y]) continue;
                            for (int z : {lat.meet(x, y), lat.join(x, y)})
                                if (!in[z]) {
                                    in[z] = 1;
                                    grew = true;
                                }
                        }
                }
                std::vector<int> kept;
                for (int x = 1; x <= parent.size(); ++x)
                    if (in[x]) kept.push_back(x);
                if (static_cast<int>(kept.size()) < 2 ||
                    static_cast<int>(kept.size()) > max_n)
                    continue;  // resample
                std::vector<int> new_id(parent.size() + 1, 0);
                for (std::size_t i = 0; i < kept.size(); ++i)
                    new_id[kept[i]] = static_cast<int>(i) + 1;
                std::vector<std::pair<ElementId, ElementId>> pairs;
                for (int a : kept)
                    for (int b : kept)
                        if (a != b && parent.less(b, a))
                            pairs.emplace_back(new_id[a], new_id[b]);
                return Poset::from_pairs(static_cast<int>(kept.size()), pairs);
            }
        }
    }
}

}  // namespace fx
