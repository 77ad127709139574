#include "posearch/lattice.hpp"

#include <algorithm>
#include <cassert>

#include "posearch/errors.hpp"

namespace posearch {

ElementId Lattice::table_at(const std::vector<ElementId>& t, ElementId x, ElementId y) const {
    const int n = base_.size();
    if (x < 1 || x > n) throw IndexOutOfRange(x, n);
    if (y < 1 || y > n) throw IndexOutOfRange(y, n);
    return t[static_cast<std::size_t>(x - 1) * n + (y - 1)];
}

std::variant<Lattice, NotLatticeWitness> check_lattice(const Poset& p) {
    const int n = p.size();
    std::vector<Bitset> down_incl(n + 1, Bitset(n + 1)), up_incl(n + 1, Bitset(n + 1));
    for (int x = 1; x <= n; ++x) {
        down_incl[x] = p.strict_down(x);
        down_incl[x].set(x);
        up_incl[x] = p.strict_up(x);
        up_incl[x].set(x);
    }

    Lattice l;
    l.base_ = p;
    l.meet_.assign(static_cast<std::size_t>(n) * n, 0);
    l.join_.assign(static_cast<std::size_t>(n) * n, 0);

    auto put = [&](std::vector<ElementId>& t, int x, int y, int v) {
        t[static_cast<std::size_t>(x - 1) * n + (y - 1)] = v;
        t[static_cast<std::size_t>(y - 1) * n + (x - 1)] = v;
    };

    for (int x = 1; x <= n; ++x) {
        for (int y = x; y <= n; ++y) {
            Bitset lower = down_incl[x];
            lower &= down_incl[y];
            std::vector<ElementId> maximal;
            lower.for_each([&](int z) {
                if (!lower.intersects(p.strict_up(z))) maximal.push_back(z);
            });
            if (maximal.size() != 1)
                return NotLatticeWitness{x, y, false, std::move(maximal)};
            put(l.meet_, x, y, maximal.front());

            Bitset upper = up_incl[x];
            upper &= up_incl[y];
            std::vector<ElementId> minimal;
            upper.for_each([&](int z) {
                if (!upper.intersects(p.strict_down(z))) minimal.push_back(z);
            });
            if (minimal.size() != 1)
                return NotLatticeWitness{x, y, true, std::move(minimal)};
            put(l.join_, x, y, minimal.front());
        }
    }
    return l;
}

std::vector<ElementId> join_irreducibles(const Lattice& l) {
    std::vector<ElementId> ji;
    for (int x = 1; x <= l.size(); ++x)
        if (l.base().outdeg(x) == 1) ji.push_back(x);
    return ji;
}

std::vector<Bitset> assign_codes(const Lattice& l) {
    const auto ji = join_irreducibles(l);
    const int width = static_cast<int>(ji.size());
    std::vector<Bitset> code(l.size() + 1, Bitset(width));
    for (int x = 1; x <= l.size(); ++x)
        for (int i = 0; i < width; ++i)
            if (l.base().leq(ji[i], x)) code[x].set(i);
    return code;
}

Reduction reduce(const Lattice& l) {
    std::vector<ElementId> kept = join_irreducibles(l);
    kept.push_back(l.top());
    kept.push_back(l.bottom());
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

    const int k = static_cast<int>(kept.size());
    std::vector<int> new_id(l.size() + 1, 0);
    for (int i = 0; i < k; ++i) new_id[kept[i]] = i + 1;

    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (ElementId a : kept)
        l.base().strict_down(a).for_each([&](int b) {
            if (new_id[b]) pairs.emplace_back(new_id[a], new_id[b]);
        });

    Reduction red;
    red.poset = Poset::from_pairs(k, pairs);
    red.to_parent.assign(k + 1, 0);
    for (int i = 0; i < k; ++i) red.to_parent[i + 1] = kept[i];
    return red;
}

bool is_terminal(const Lattice& l) {
    for (int x = 1; x <= l.size(); ++x)
        if (l.base().outdeg(x) != 1 && x != l.top() && x != l.bottom()) return false;
    return true;
}

bool tree_like(const Poset& p) {
    auto bot = p.bottom();
    if (!bot) return false;
    for (int x = 1; x <= p.size(); ++x)
        if (x != *bot && p.outdeg(x) != 1) return false;
    return true;
}

const ChainLevel& MatryoshkaChain::level(int i) const {
    if (i < 0 || i >= level_count()) throw LevelOutOfRange(i);
    return levels_[i];
}

ElementId MatryoshkaChain::map_to_base(int level, ElementId id) const {
    if (level < 0 || level >= level_count()) throw LevelOutOfRange(level);
    for (int i = level; i >= 1; --i) id = levels_[i].to_parent[id];
    return id;
}

ElementId MatryoshkaChain::tree_to_terminal(ElementId tree_id) const {
    if (tree_id < 1 || tree_id >= static_cast<ElementId>(tree_to_terminal_.size()))
        throw IndexOutOfRange(tree_id, tree_.size());
    return tree_to_terminal_[tree_id];
}

std::variant<MatryoshkaChain, NotMatryoshka> build_chain(const Lattice& l) {
    if (l.size() < 2 || l.top() == l.bottom()) throw TopEqualsBottom();

    MatryoshkaChain chain;
    Lattice current = l;
    std::vector<ElementId> to_parent;  // empty at level 0

    while (true) {
        ChainLevel lev;
        lev.lattice = std::move(current);
        lev.ji = join_irreducibles(lev.lattice);
        lev.code = assign_codes(lev.lattice);
        lev.to_parent = to_parent;
        if (!to_parent.empty()) {
            const int parent_n = chain.levels_.back().lattice.size();
            lev.from_parent.assign(parent_n + 1, 0);
            for (std::size_t i = 1; i < to_parent.size(); ++i)
                lev.from_parent[to_parent[i]] = static_cast<ElementId>(i);
        }
        chain.levels_.push_back(std::move(lev));

        const Lattice& last = chain.levels_.back().lattice;
        if (is_terminal(last)) break;

        Reduction red = reduce(last);
        auto checked = check_lattice(red.poset);
        if (std::holds_alternative<NotLatticeWitness>(checked))
            return NotMatryoshka{static_cast<int>(chain.levels_.size()),
                                 std::get<NotLatticeWitness>(std::move(checked))};
        current = std::get<Lattice>(std::move(checked));
        to_parent = std::move(red.to_parent);
    }

    // Per level, decide for every element whether its irreducible
    // decomposition joins back to itself in the base lattice.
    const Lattice& base = chain.levels_.front().lattice;
    for (int i = 1; i < static_cast<int>(chain.levels_.size()); ++i) {
        ChainLevel& lev = chain.levels_[i];
        const int ln = lev.lattice.size();
        lev.join_exact.assign(ln + 1, 1);
        for (int x = 1; x <= ln; ++x) {
            ElementId joined = base.bottom();
            for (ElementId j : lev.ji)
                if (lev.lattice.base().leq(j, x))
                    joined = base.join(joined, chain.map_to_base(i, j));
            lev.join_exact[x] = joined == chain.map_to_base(i, x) ? 1 : 0;
            // Only levels feeding a further extension can poison bits.
            if (!lev.join_exact[x] && i < static_cast<int>(chain.levels_.size()) - 1)
                chain.extension_exact_ = false;
        }
    }

    // Terminal level with its top removed, reindexed densely.
    const Lattice& terminal = chain.levels_.back().lattice;
    const int tn = terminal.size();
    std::vector<ElementId> kept;
    for (int x = 1; x <= tn; ++x)
        if (x != terminal.top()) kept.push_back(x);
    std::vector<int> new_id(tn + 1, 0);
    for (std::size_t i = 0; i < kept.size(); ++i) new_id[kept[i]] = static_cast<int>(i) + 1;
    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (ElementId a : kept)
        terminal.base().strict_down(a).for_each([&](int b) {
            if (new_id[b]) pairs.emplace_back(new_id[a], new_id[b]);
        });
    chain.tree_ = Poset::from_pairs(static_cast<int>(kept.size()), pairs);
    chain.tree_to_terminal_.assign(kept.size() + 1, 0);
    for (std::size_t i = 0; i < kept.size(); ++i)
        chain.tree_to_terminal_[i + 1] = kept[i];
    assert(tree_like(chain.tree_));

    return chain;
}

}  // namespace posearch
