#include "posearch/poset.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <sstream>

#include "posearch/errors.hpp"

namespace posearch {

namespace {

// Extract one directed cycle from a subgraph known to contain one.
std::vector<int> find_cycle(int n, const std::vector<std::vector<int>>& adj,
                            const std::vector<char>& alive) {
    std::vector<int> state(n + 1, 0);  // 0 fresh, 1 on stack, 2 done
    std::vector<int> stack, pos(n + 1, -1);
    for (int start = 1; start <= n; ++start) {
        if (!alive[start] || state[start] != 0) continue;
        stack.assign(1, start);
        std::vector<std::size_t> cursor{0};
        state[start] = 1;
        pos[start] = 0;
        while (!stack.empty()) {
            int v = stack.back();
            bool advanced = false;
            while (cursor.back() < adj[v].size()) {
                int w = adj[v][cursor.back()++];
                if (!alive[w]) continue;
                if (state[w] == 1) {
                    std::vector<int> cycle(stack.begin() + pos[w], stack.end());
                    cycle.push_back(w);
                    return cycle;
                }
                if (state[w] == 0) {
                    state[w] = 1;
                    pos[w] = static_cast<int>(stack.size());
                    stack.push_back(w);
                    cursor.push_back(0);
                    advanced = true;
                    break;
                }
            }
            if (!advanced) {
                state[v] = 2;
                pos[v] = -1;
                stack.pop_back();
                cursor.pop_back();
            }
        }
    }
    return {};
}

}  // namespace

Poset Poset::from_pairs(int n, std::span<const std::pair<ElementId, ElementId>> greater_than) {
    if (n < 1) throw BadParams("poset needs at least one element");
    std::vector<std::vector<int>> adj(n + 1);
    {
        std::vector<Bitset> seen(n + 1, Bitset(n + 1));
        for (auto [a, b] : greater_than) {
            if (a < 1 || a > n) throw IndexOutOfRange(a, n);
            if (b < 1 || b > n) throw IndexOutOfRange(b, n);
            if (a == b) throw CycleDetected({a, a});
            if (!seen[a].test(b)) {
                seen[a].set(b);
                adj[a].push_back(b);
            }
        }
    }

    // Topological order, greater elements first.
    std::vector<int> indeg(n + 1, 0);
    for (int a = 1; a <= n; ++a)
        for (int b : adj[a]) ++indeg[b];
    std::deque<int> ready;
    for (int v = 1; v <= n; ++v)
        if (indeg[v] == 0) ready.push_back(v);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (int w : adj[v])
            if (--indeg[w] == 0) ready.push_back(w);
    }
    if (static_cast<int>(order.size()) < n) {
        std::vector<char> alive(n + 1, 1);
        for (int v : order) alive[v] = 0;
        throw CycleDetected(find_cycle(n, adj, alive));
    }

    Poset p;
    p.n_ = n;
    p.down_.assign(n + 1, Bitset(n + 1));
    p.up_.assign(n + 1, Bitset(n + 1));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int a = *it;
        for (int b : adj[a]) {
            p.down_[a].set(b);
            p.down_[a] |= p.down_[b];
        }
    }
    for (int a = 1; a <= n; ++a)
        p.down_[a].for_each([&](int y) { p.up_[y].set(a); });

    // Cover edges: y is a child of x iff nothing sits strictly between.
    p.children_.assign(n + 1, {});
    p.parents_.assign(n + 1, {});
    for (int x = 1; x <= n; ++x) {
        p.down_[x].for_each([&](int y) {
            if (!p.down_[x].intersects(p.up_[y])) {
                p.children_[x].push_back(y);
                p.parents_[y].push_back(x);
            }
        });
    }
    for (int x = 1; x <= n; ++x) {
        std::sort(p.parents_[x].begin(), p.parents_[x].end());
        // children already ascend: for_each visits bits in order
    }

    for (int x = 1; x <= n; ++x) {
        if (p.down_[x].count() == n - 1) p.top_ = x;
        if (p.up_[x].count() == n - 1) p.bottom_ = x;
    }
    if (n == 1) p.top_ = p.bottom_ = 1;
    return p;
}

void Poset::check_index(ElementId x) const {
    if (x < 1 || x > n_) throw IndexOutOfRange(x, n_);
}

bool Poset::leq(ElementId x, ElementId y) const {
    check_index(x);
    check_index(y);
    return x == y || down_[y].test(x);
}

bool Poset::less(ElementId x, ElementId y) const {
    check_index(x);
    check_index(y);
    return down_[y].test(x);
}

const std::vector<ElementId>& Poset::children(ElementId x) const {
    check_index(x);
    return children_[x];
}

const std::vector<ElementId>& Poset::parents(ElementId x) const {
    check_index(x);
    return parents_[x];
}

const Bitset& Poset::strict_down(ElementId x) const {
    check_index(x);
    return down_[x];
}

const Bitset& Poset::strict_up(ElementId x) const {
    check_index(x);
    return up_[x];
}

Bitset Poset::down_closure(const Bitset& seeds) const {
    Bitset out = seeds;
    seeds.for_each([&](int x) { out |= down_[x]; });
    return out;
}

Bitset Poset::up_closure(const Bitset& seeds) const {
    Bitset out = seeds;
    seeds.for_each([&](int x) { out |= up_[x]; });
    return out;
}

RelativeSets Poset::relatives(ElementId x) const {
    check_index(x);
    RelativeSets r;
    r.ancestors = up_[x].to_vector();
    r.descendants = down_[x].to_vector();
    r.parents = parents_[x];
    r.children = children_[x];
    r.indeg = static_cast<int>(r.parents.size());
    r.outdeg = static_cast<int>(r.children.size());
    return r;
}

RelativeList Poset::descendant_list(ElementId x) const {
    check_index(x);
    RelativeList out;
    out.cover_count = static_cast<int>(children_[x].size());
    out.entries = children_[x];
    Bitset rest = down_[x];
    for (int c : children_[x]) rest.reset(c);
    rest.for_each([&](int d) { out.entries.push_back(d); });
    return out;
}

RelativeList Poset::ancestor_list(ElementId x) const {
    check_index(x);
    RelativeList out;
    out.cover_count = static_cast<int>(parents_[x].size());
    out.entries = parents_[x];
    Bitset rest = up_[x];
    for (int c : parents_[x]) rest.reset(c);
    rest.for_each([&](int a) { out.entries.push_back(a); });
    return out;
}

std::vector<std::pair<ElementId, ElementId>> Poset::cover_pairs() const {
    std::vector<std::pair<ElementId, ElementId>> out;
    for (int x = 1; x <= n_; ++x)
        for (int y : children_[x]) out.emplace_back(x, y);
    std::sort(out.begin(), out.end());
    return out;
}

Poset Poset::dual() const {
    Poset d;
    d.n_ = n_;
    d.down_ = up_;
    d.up_ = down_;
    d.children_ = parents_;
    d.parents_ = children_;
    d.top_ = bottom_;
    d.bottom_ = top_;
    return d;
}

std::string Poset::to_text() const {
    std::ostringstream os;
    os << "poset " << n_ << "\n";
    for (auto [a, b] : cover_pairs()) os << "gt " << a << " " << b << "\n";
    return os.str();
}

Poset parse_poset(std::istream& in) {
    std::string line;
    int lineno = 0;
    int n = -1;
    std::vector<std::pair<ElementId, ElementId>> pairs;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "poset") {
            if (n != -1) throw ParseError(lineno, "duplicate poset header");
            if (!(ls >> n) || n < 1) throw ParseError(lineno, "expected: poset <n> with n >= 1");
        } else if (kw == "gt") {
            if (n == -1) throw ParseError(lineno, "gt before poset header");
            int a, b;
            if (!(ls >> a >> b)) throw ParseError(lineno, "expected: gt <a> <b>");
            if (a < 1 || a > n || b < 1 || b > n)
                throw ParseError(lineno, "element index outside 1.." + std::to_string(n));
            pairs.emplace_back(a, b);
        } else {
            throw ParseError(lineno, "unknown directive '" + kw + "'");
        }
        std::string extra;
        if (ls >> extra) throw ParseError(lineno, "trailing token '" + extra + "'");
    }
    if (n == -1) throw ParseError(lineno, "missing poset header");
    return Poset::from_pairs(n, pairs);
}

Poset parse_poset_text(const std::string& text) {
    std::istringstream is(text);
    return parse_poset(is);
}

}  // namespace posearch
