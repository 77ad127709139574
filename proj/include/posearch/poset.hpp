#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "posearch/bitset.hpp"

namespace posearch {

// Elements of a finite poset are dense indices 1..n. External names are
// mapped to indices at ingestion.
using ElementId = int;

struct RelativeSets {
    std::vector<ElementId> ancestors, descendants, parents, children;
    int indeg = 0, outdeg = 0;
};

// Cover neighbours first, then the remaining strict relatives; both
// segments sorted ascending. Used for the descendant and ancestor lists.
struct RelativeList {
    int cover_count = 0;
    std::vector<ElementId> entries;
};

// Finite strict order with precomputed transitive closure (one bitset row
// per element) and its transitive reduction (cover edges). Immutable after
// construction; safe for unrestricted concurrent reads.
class Poset {
public:
    Poset() = default;

    // pairs mean first > second; any strict pairs are accepted, the cover
    // relation is recomputed. Throws CycleDetected / IndexOutOfRange.
    static Poset from_pairs(int n, std::span<const std::pair<ElementId, ElementId>> greater_than);

    int size() const { return n_; }

    bool leq(ElementId x, ElementId y) const;   // x <= y
    bool less(ElementId x, ElementId y) const;  // x < y

    std::optional<ElementId> top() const { return top_; }
    std::optional<ElementId> bottom() const { return bottom_; }

    const std::vector<ElementId>& children(ElementId x) const;
    const std::vector<ElementId>& parents(ElementId x) const;
    int outdeg(ElementId x) const { return static_cast<int>(children(x).size()); }
    int indeg(ElementId x) const { return static_cast<int>(parents(x).size()); }

    // All y < x / y > x, as a bitset of width n+1.
    const Bitset& strict_down(ElementId x) const;
    const Bitset& strict_up(ElementId x) const;

    Bitset down_closure(const Bitset& seeds) const;  // seeds plus everything below
    Bitset up_closure(const Bitset& seeds) const;

    RelativeSets relatives(ElementId x) const;
    RelativeList descendant_list(ElementId x) const;
    RelativeList ancestor_list(ElementId x) const;

    // (greater, lesser) cover pairs, lexicographically sorted.
    std::vector<std::pair<ElementId, ElementId>> cover_pairs() const;

    Poset dual() const;

    std::string to_text() const;

    // Same element count and same order relation.
    bool operator==(const Poset& o) const { return n_ == o.n_ && down_ == o.down_; }

private:
    void check_index(ElementId x) const;

    int n_ = 0;
    std::vector<Bitset> down_, up_;  // strict closure rows, width n_+1
    std::vector<std::vector<ElementId>> children_, parents_;
    std::optional<ElementId> top_, bottom_;
};

// Text format, line oriented:
//   poset <n>
//   gt <a> <b>     (element a > element b)
// '#' starts a comment, blank lines are ignored.
Poset parse_poset(std::istream& in);
Poset parse_poset_text(const std::string& text);

}  // namespace posearch
