#pragma once

#include <optional>
#include <string>

#include "posearch/lattice.hpp"
#include "posearch/oracle.hpp"

namespace posearch {

enum class Mark : std::uint8_t { Unknown, Yes, No };

struct SearchStats {
    long geq_calls = 0;
    long leq_calls = 0;
    long code_comparisons = 0;
    int levels_visited = 0;
};

struct SearchOutcome {
    std::optional<ElementId> found;  // empty means the query is absent
    SearchStats stats;
};

struct OracleCall {
    int step;
    bool is_geq;
    ElementId element;
    bool answer;
};

struct SearchLog {
    std::vector<OracleCall> calls;
    std::vector<Mark> final_status;  // per element; filled by the walks
};

// One line per oracle call: "<step> <geq|leq> <element> <true|false>".
std::string render_trace(const SearchLog& log);

// Top-down walk over the dataset: scan the children of the current element
// in descendant-list order, descend on the first child above the query,
// mark failing children and their descendants NO, and compare the final
// element downward. At most one geq call per element plus one leq call
// total. Requires distinct top and bottom. Caller contract: the query is
// not the bottom element and lies at or below the top (automatic when the
// dataset top dominates the ambient order, as a CG dataset's does).
SearchOutcome search_sequential(const Poset& p, QueryOracle& oracle, SearchLog* log = nullptr);

// Mirror image of search_sequential: starts at the bottom and walks upward,
// for queries known to sit close to the bottom. Caller contract mirrors the
// primal walk: the query is not the top element and lies at or above the
// bottom.
SearchOutcome search_sequential_dual(const Poset& p, QueryOracle& oracle, SearchLog* log = nullptr);

enum class Ternary : std::uint8_t { Undetermined, True, False };

// Per-element value of the predicate "element lies below the query", over
// the poset the bits were computed for.
struct QueryBits {
    std::vector<Ternary> bit;  // index by element id; slot 0 unused
};

// Determines "x <= query" for every non-bottom element of a tree-like
// poset using only leq calls. A true answer settles all descendants, a
// false answer all ancestors; the next probe is the element whose worst
// answer leaves the fewest undetermined (ties to the smallest index). The
// bottom's bit is never requested. Throws NotATree.
QueryBits tree_code_search(const Poset& tree, QueryOracle& oracle, SearchStats* stats = nullptr,
                           SearchLog* log = nullptr);

struct CodeExtension {
    QueryBits bits;     // over the elements of the requested level, all determined
    Bitset query_code;  // the query's code over that level's join-irreducibles
    long comparisons = 0;
};

// Assembles the query's code at the given level from bits known one level
// further down the chain, then settles "x <= query" for every element of
// the level by code comparison alone (no oracle calls).
CodeExtension extend_code(const MatryoshkaChain& chain, int level, const QueryBits& known_above);

// Code search over the terminal tree, code extension level by level, then
// lookup of the unique element whose code matches the query's. The matched
// candidate is confirmed with one geq and one leq call before it is
// reported found; any mismatch or failed confirmation reports absent.
// On chains whose intermediate levels are not join-faithful (possible from
// depth 2 on), code-derived TRUE bits are confirmed with direct calls
// before they feed the next level; extension-exact chains never pay this,
// keeping their total at the tree-level calls plus two.
SearchOutcome search_matryoshka(const MatryoshkaChain& chain, QueryOracle& oracle,
                                SearchLog* log = nullptr);

}  // namespace posearch
