#include "posearch/search.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "posearch/errors.hpp"

namespace posearch {

std::string render_trace(const SearchLog& log) {
    std::ostringstream os;
    for (const auto& c : log.calls)
        os << c.step << " " << (c.is_geq ? "geq" : "leq") << " " << c.element << " "
           << (c.answer ? "true" : "false") << "\n";
    return os.str();
}

namespace {

struct CallCounter {
    QueryOracle& oracle;
    SearchStats& stats;
    SearchLog* log;
    int step = 0;
    bool flip = false;  // dual mode: swap call directions

    bool geq(ElementId x) {
        bool a = flip ? oracle.leq(x) : oracle.geq(x);
        ++stats.geq_calls;
        if (log) log->calls.push_back({++step, !flip, x, a});
        return a;
    }
    bool leq(ElementId x) {
        bool a = flip ? oracle.geq(x) : oracle.leq(x);
        ++stats.leq_calls;
        if (log) log->calls.push_back({++step, flip, x, a});
        return a;
    }
};

SearchOutcome walk_from_top(const Poset& p, CallCounter& ask, SearchLog* log) {
    if (!p.top() || !p.bottom()) throw MissingTopOrBottom();
    if (*p.top() == *p.bottom()) throw TopEqualsBottom();

    const int n = p.size();
    std::vector<Mark> status(n + 1, Mark::Unknown);
    auto mark_no = [&](ElementId e) {
        if (status[e] == Mark::Unknown) status[e] = Mark::No;
        p.strict_down(e).for_each([&](int d) {
            if (status[d] == Mark::Unknown) status[d] = Mark::No;
        });
    };

    ElementId x = *p.top();
    status[x] = Mark::Yes;
    bool descended = true;
    while (descended) {
        descended = false;
        for (ElementId y : p.children(x)) {
            if (status[y] == Mark::No) continue;
            if (ask.geq(y)) {
                x = y;
                status[x] = Mark::Yes;
                descended = true;
                break;
            }
            mark_no(y);
        }
    }

    SearchOutcome out;
    if (ask.leq(x)) out.found = x;
    if (log) log->final_status = std::move(status);
    return out;
}

}  // namespace

SearchOutcome search_sequential(const Poset& p, QueryOracle& oracle, SearchLog* log) {
    SearchStats stats;
    CallCounter ask{oracle, stats, log};
    SearchOutcome out = walk_from_top(p, ask, log);
    out.stats = stats;
    return out;
}

SearchOutcome search_sequential_dual(const Poset& p, QueryOracle& oracle, SearchLog* log) {
    SearchStats stats;
    CallCounter ask{oracle, stats, log, 0, /*flip=*/true};
    Poset mirrored = p.dual();
    SearchOutcome out = walk_from_top(mirrored, ask, log);
    // In the mirrored walk geq/leq swap roles; report the real directions.
    std::swap(stats.geq_calls, stats.leq_calls);
    out.stats = stats;
    return out;
}

QueryBits tree_code_search(const Poset& tree, QueryOracle& oracle, SearchStats* stats,
                           SearchLog* log) {
    if (!tree_like(tree)) throw NotATree();
    const int n = tree.size();
    const ElementId bottom = *tree.bottom();

    QueryBits qb;
    qb.bit.assign(n + 1, Ternary::Undetermined);

    Bitset undetermined(n + 1);
    for (int x = 1; x <= n; ++x)
        if (x != bottom) undetermined.set(x);

    SearchStats local;
    SearchStats& st = stats ? *stats : local;
    int step = log ? static_cast<int>(log->calls.size()) : 0;

    while (undetermined.any()) {
        // Probe the element whose worse answer settles the most.
        ElementId best = -1;
        int best_gain = -1;
        undetermined.for_each([&](int j) {
            Bitset dn = tree.strict_down(j);
            dn &= undetermined;
            Bitset up = tree.strict_up(j);
            up &= undetermined;
            int gain = 1 + std::min(dn.count(), up.count());
            if (gain > best_gain) {
                best_gain = gain;
                best = j;
            }
        });

        bool answer = oracle.leq(best);
        ++st.leq_calls;
        if (log) log->calls.push_back({++step, false, best, answer});

        if (answer) {
            qb.bit[best] = Ternary::True;
            Bitset settled = tree.strict_down(best);
            settled &= undetermined;
            settled.for_each([&](int d) { qb.bit[d] = Ternary::True; });
            undetermined.reset(best);
            undetermined.andnot(settled);
        } else {
            qb.bit[best] = Ternary::False;
            Bitset settled = tree.strict_up(best);
            settled &= undetermined;
            settled.for_each([&](int a) { qb.bit[a] = Ternary::False; });
            undetermined.reset(best);
            undetermined.andnot(settled);
        }
    }
    return qb;
}

CodeExtension extend_code(const MatryoshkaChain& chain, int level, const QueryBits& known_above) {
    if (level < 0 || level >= chain.depth()) throw LevelOutOfRange(level);
    const ChainLevel& lev = chain.level(level);
    const ChainLevel& above = chain.level(level + 1);

    const int width = static_cast<int>(lev.ji.size());
    CodeExtension ext;
    ext.query_code = Bitset(width);
    for (int i = 0; i < width; ++i) {
        ElementId up_id = above.from_parent[lev.ji[i]];
        assert(up_id != 0);  // every join-irreducible survives into the next level
        Ternary t = known_above.bit[up_id];
        assert(t != Ternary::Undetermined);
        if (t == Ternary::True) ext.query_code.set(i);
    }

    const int n = lev.lattice.size();
    ext.bits.bit.assign(n + 1, Ternary::Undetermined);
    for (int x = 1; x <= n; ++x) {
        ++ext.comparisons;
        ext.bits.bit[x] =
            lev.code[x].subset_of(ext.query_code) ? Ternary::True : Ternary::False;
    }
    return ext;
}

SearchOutcome search_matryoshka(const MatryoshkaChain& chain, QueryOracle& oracle,
                                SearchLog* log) {
    SearchOutcome out;
    SearchStats& st = out.stats;
    const int t = chain.depth();

    // Oracle adapter over tree ids; the trace shows base-level ids.
    struct TreeOracle final : QueryOracle {
        const MatryoshkaChain& chain;
        QueryOracle& inner;
        int t;
        TreeOracle(const MatryoshkaChain& c, QueryOracle& o, int t) : chain(c), inner(o), t(t) {}
        bool geq(ElementId) override { return false; }  // never used by the tree search
        bool leq(ElementId tree_id) override {
            return inner.leq(chain.map_to_base(t, chain.tree_to_terminal(tree_id)));
        }
    } tree_oracle{chain, oracle, t};

    const Poset& tree = chain.terminal_tree();
    SearchLog tree_log;
    QueryBits on_tree = tree_code_search(tree, tree_oracle, &st, log ? &tree_log : nullptr);
    if (log)
        for (auto c : tree_log.calls)
            log->calls.push_back({static_cast<int>(log->calls.size()) + 1, c.is_geq,
                                  chain.map_to_base(t, chain.tree_to_terminal(c.element)),
                                  c.answer});
    st.levels_visited = 1;

    // Lift the tree bits onto the terminal level.
    const ChainLevel& terminal = chain.level(t);
    QueryBits bits;
    bits.bit.assign(terminal.lattice.size() + 1, Ternary::Undetermined);
    bool any_false = false;
    for (int tid = 1; tid <= tree.size(); ++tid) {
        Ternary b = on_tree.bit[tid];
        bits.bit[chain.tree_to_terminal(tid)] = b;
        any_false = any_false || b == Ternary::False;
    }

    // The terminal top's bit is a code position exactly when the top is
    // join-irreducible at the level consuming these bits. A false bit
    // anywhere below settles it for free; otherwise it costs one leq call.
    const ElementId terminal_top = terminal.lattice.top();
    const int consuming = t >= 1 ? t - 1 : 0;
    const ChainLevel& consumer = chain.level(consuming);
    const bool top_bit_needed =
        std::find(consumer.ji.begin(), consumer.ji.end(), consumer.lattice.top()) !=
        consumer.ji.end();
    if (top_bit_needed) {
        if (any_false) {
            bits.bit[terminal_top] = Ternary::False;
        } else {
            ElementId base_top = chain.map_to_base(t, terminal_top);
            bool a = oracle.leq(base_top);
            ++st.leq_calls;
            if (log)
                log->calls.push_back(
                    {static_cast<int>(log->calls.size()) + 1, false, base_top, a});
            bits.bit[terminal_top] = a ? Ternary::True : Ternary::False;
        }
    }

    // Extend level by level; at level 0 keep the assembled query code.
    Bitset query_code;
    if (t == 0) {
        const ChainLevel& base = chain.level(0);
        query_code = Bitset(static_cast<int>(base.ji.size()));
        for (std::size_t i = 0; i < base.ji.size(); ++i) {
            Ternary b = bits.bit[base.ji[i]];
            assert(b != Ternary::Undetermined);
            if (b == Ternary::True) query_code.set(static_cast<int>(i));
        }
    } else {
        for (int level = t - 1; level >= 0; --level) {
            if (level + 1 < t) {
                // The incoming bits were produced by code comparison. A
                // TRUE bit is only justified when the element is the base
                // join of its irreducibles; confirm the others with one
                // direct call before this extension consumes them.
                const ChainLevel& above = chain.level(level + 1);
                for (ElementId j : chain.level(level).ji) {
                    ElementId u = above.from_parent[j];
                    if (bits.bit[u] != Ternary::True || above.join_exact[u]) continue;
                    ElementId base_id = chain.map_to_base(level + 1, u);
                    bool a = oracle.leq(base_id);
                    ++st.leq_calls;
                    if (log)
                        log->calls.push_back(
                            {static_cast<int>(log->calls.size()) + 1, false, base_id, a});
                    bits.bit[u] = a ? Ternary::True : Ternary::False;
                }
            }
            CodeExtension ext = extend_code(chain, level, bits);
            bits = std::move(ext.bits);
            st.code_comparisons += ext.comparisons;
            ++st.levels_visited;
            if (level == 0) query_code = std::move(ext.query_code);
        }
    }

    // Locate the unique code match, then confirm it with the oracle.
    const ChainLevel& base = chain.level(0);
    std::optional<ElementId> candidate;
    for (int x = 1; x <= base.lattice.size(); ++x) {
        ++st.code_comparisons;
        if (base.code[x] == query_code) {
            candidate = x;
            break;
        }
    }
    if (!candidate) return out;

    bool above = oracle.geq(*candidate);
    ++st.geq_calls;
    if (log)
        log->calls.push_back({static_cast<int>(log->calls.size()) + 1, true, *candidate, above});
    if (!above) return out;
    bool below = oracle.leq(*candidate);
    ++st.leq_calls;
    if (log)
        log->calls.push_back({static_cast<int>(log->calls.size()) + 1, false, *candidate, below});
    if (below) out.found = candidate;
    return out;
}

}  // namespace posearch
