#pragma once

#include <variant>
#include <vector>

#include "posearch/poset.hpp"

namespace posearch {

// A poset in which every pair has a unique meet and join; the tables are
// filled by check_lattice. Immutable, safe for concurrent reads.
class Lattice {
public:
    Lattice() = default;

    const Poset& base() const { return base_; }
    int size() const { return base_.size(); }

    ElementId meet(ElementId x, ElementId y) const { return table_at(meet_, x, y); }
    ElementId join(ElementId x, ElementId y) const { return table_at(join_, x, y); }

    ElementId top() const { return *base_.top(); }
    ElementId bottom() const { return *base_.bottom(); }

private:
    friend std::variant<Lattice, struct NotLatticeWitness> check_lattice(const Poset&);
    ElementId table_at(const std::vector<ElementId>& t, ElementId x, ElementId y) const;

    Poset base_;
    std::vector<ElementId> meet_, join_;  // row-major (x-1)*n + (y-1)
};

struct NotLatticeWitness {
    ElementId x = 0, y = 0;
    bool join_side = false;           // true: no unique least upper bound
    std::vector<ElementId> bounds;    // the maximal lower / minimal upper bounds found
};

// Brute force over bound sets; on failure reports a pair with no unique
// meet or join together with the offending extremal bounds.
std::variant<Lattice, NotLatticeWitness> check_lattice(const Poset& p);

// Elements with exactly one child, ascending. This enumeration fixes the
// bit positions of the binary codes.
std::vector<ElementId> join_irreducibles(const Lattice& l);

// code[x] bit i is set iff the i-th join-irreducible lies at or below x.
// Codes of distinct elements are distinct, and x <= y iff code[x] is a
// subset of code[y].
std::vector<Bitset> assign_codes(const Lattice& l);

// The poset on the join-irreducibles plus top and bottom, with the induced
// order, reindexed densely (ascending by original id). to_parent maps new
// ids back to l's ids.
struct Reduction {
    Poset poset;
    std::vector<ElementId> to_parent;  // [new id] -> old id; slot 0 unused
};
Reduction reduce(const Lattice& l);

// Every element other than top and bottom is join-irreducible.
bool is_terminal(const Lattice& l);

// The Hasse diagram forms a tree: a bottom exists and every other element
// has exactly one child, making the bottom the root of the child links.
bool tree_like(const Poset& p);

struct ChainLevel {
    Lattice lattice;
    std::vector<ElementId> ji;          // canonical join-irreducible enumeration
    std::vector<Bitset> code;           // [element id] -> code over ji
    std::vector<ElementId> to_parent;   // [id here] -> id one level up; empty at level 0
    std::vector<ElementId> from_parent; // [id one level up] -> id here, 0 if dropped
    // join_exact[x]: this level's join-irreducibles below x join back to x
    // in the base lattice. When they join to something smaller, a code
    // comparison can claim "x below the query" without justification, so
    // such bits need a direct oracle check before they are consumed.
    std::vector<char> join_exact;       // empty at level 0
};

// The nested reduction sequence L0..Lt, codes per level, and the terminal
// level with its top removed (a tree-like poset) ready for searching.
class MatryoshkaChain {
public:
    int depth() const { return static_cast<int>(levels_.size()) - 1; }
    int level_count() const { return static_cast<int>(levels_.size()); }
    const ChainLevel& level(int i) const;
    const Lattice& base() const { return levels_.front().lattice; }

    // Follow the injections from the given level down to level 0.
    ElementId map_to_base(int level, ElementId id) const;

    const Poset& terminal_tree() const { return tree_; }
    ElementId tree_to_terminal(ElementId tree_id) const;

    // True when every intermediate level is join-faithful, so the code
    // extension needs no confirming oracle calls. Holds for every chain of
    // depth <= 1 (the extension then reads tree bits directly).
    bool extension_exact() const { return extension_exact_; }

private:
    friend std::variant<MatryoshkaChain, struct NotMatryoshka> build_chain(const Lattice&);
    std::vector<ChainLevel> levels_;
    Poset tree_;
    std::vector<ElementId> tree_to_terminal_;  // [tree id] -> id in Lt
    bool extension_exact_ = true;
};

struct NotMatryoshka {
    int level = 0;  // first level whose generated poset is not a lattice
    NotLatticeWitness witness;
};

// Iterates reduce + check_lattice until a terminal level is reached.
// Requires top != bottom (throws TopEqualsBottom).
std::variant<MatryoshkaChain, NotMatryoshka> build_chain(const Lattice& l);

}  // namespace posearch
