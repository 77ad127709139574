#include "posearch/cg.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "posearch/errors.hpp"

namespace posearch::cg {

int LabelPoset::id_of(const std::string& name) const {
    auto it = ids.find(name);
    if (it == ids.end()) throw MalformedGraph("unknown type '" + name + "'");
    return it->second;
}

void validate_graph(const ConceptualGraph& g, const Vocabulary& v) {
    for (const auto& c : g.concepts)
        if (c.type < 1 || c.type > v.concept_types.order.size())
            throw MalformedGraph("concept '" + c.label + "' has an unknown type");
    for (const auto& r : g.relations) {
        if (r.type < 1 || r.type > v.relation_types.order.size())
            throw MalformedGraph("relation '" + r.label + "' has an unknown type");
        if (static_cast<int>(r.args.size()) != v.arity[r.type])
            throw MalformedGraph("relation '" + r.label + "' has " +
                                 std::to_string(r.args.size()) + " arguments, arity is " +
                                 std::to_string(v.arity[r.type]));
        for (int a : r.args)
            if (a < 0 || a >= static_cast<int>(g.concepts.size()))
                throw MalformedGraph("relation '" + r.label + "' references a missing concept");
    }
}

namespace {

bool witness_ok(const ConceptualGraph& g, const ConceptualGraph& h, const Vocabulary& v,
                const HomWitness& w) {
    for (std::size_t i = 0; i < g.concepts.size(); ++i) {
        int img = w.concept_map[i];
        if (img < 0 || img >= static_cast<int>(h.concepts.size())) return false;
        if (!v.concept_types.leq(h.concepts[img].type, g.concepts[i].type)) return false;
    }
    for (std::size_t i = 0; i < g.relations.size(); ++i) {
        int img = w.relation_map[i];
        if (img < 0 || img >= static_cast<int>(h.relations.size())) return false;
        const auto& rg = g.relations[i];
        const auto& rh = h.relations[img];
        if (!v.relation_types.leq(rh.type, rg.type)) return false;
        if (rh.args.size() != rg.args.size()) return false;
        for (std::size_t p = 0; p < rg.args.size(); ++p)
            if (w.concept_map[rg.args[p]] != rh.args[p]) return false;
    }
    return true;
}

struct HomSearch {
    const ConceptualGraph& g;
    const ConceptualGraph& h;
    const Vocabulary& v;
    std::vector<int> order;                      // g relation indices, highest arity first
    std::vector<std::vector<int>> candidates;    // per g relation
    HomWitness w;

    bool assign(std::size_t pos) {
        if (pos == order.size()) return place_isolated();
        int gi = order[pos];
        const auto& rg = g.relations[gi];
        for (int hi : candidates[gi]) {
            const auto& rh = h.relations[hi];
            std::vector<int> touched;
            bool ok = true;
            for (std::size_t p = 0; p < rg.args.size() && ok; ++p) {
                int gc = rg.args[p], hc = rh.args[p];
                int& slot = w.concept_map[gc];
                if (slot == -1) {
                    if (v.concept_types.leq(h.concepts[hc].type, g.concepts[gc].type)) {
                        slot = hc;
                        touched.push_back(gc);
                    } else {
                        ok = false;
                    }
                } else if (slot != hc) {
                    ok = false;
                }
            }
            if (ok) {
                w.relation_map[gi] = hi;
                if (assign(pos + 1)) return true;
                w.relation_map[gi] = -1;
            }
            for (int gc : touched) w.concept_map[gc] = -1;
        }
        return false;
    }

    bool place_isolated() {
        for (std::size_t gc = 0; gc < g.concepts.size(); ++gc) {
            if (w.concept_map[gc] != -1) continue;
            bool found = false;
            for (std::size_t hc = 0; hc < h.concepts.size() && !found; ++hc) {
                if (v.concept_types.leq(h.concepts[hc].type, g.concepts[gc].type)) {
                    w.concept_map[gc] = static_cast<int>(hc);
                    found = true;
                }
            }
            if (!found) return false;
        }
        return true;
    }
};

}  // namespace

std::optional<HomWitness> hom_exists(const ConceptualGraph& g, const ConceptualGraph& h,
                                     const Vocabulary& v) {
    validate_graph(g, v);
    validate_graph(h, v);

    HomSearch s{g, h, v, {}, {}, {}};
    s.w.concept_map.assign(g.concepts.size(), -1);
    s.w.relation_map.assign(g.relations.size(), -1);

    s.candidates.resize(g.relations.size());
    for (std::size_t gi = 0; gi < g.relations.size(); ++gi) {
        for (std::size_t hi = 0; hi < h.relations.size(); ++hi)
            if (v.relation_types.leq(h.relations[hi].type, g.relations[gi].type))
                s.candidates[gi].push_back(static_cast<int>(hi));
        if (s.candidates[gi].empty()) return std::nullopt;
    }

    s.order.resize(g.relations.size());
    for (std::size_t i = 0; i < s.order.size(); ++i) s.order[i] = static_cast<int>(i);
    std::stable_sort(s.order.begin(), s.order.end(), [&](int a, int b) {
        return g.relations[a].args.size() > g.relations[b].args.size();
    });

    if (!s.assign(0)) return std::nullopt;
    if (!witness_ok(g, h, v, s.w)) throw std::logic_error("homomorphism witness failed its check");
    return s.w;
}

bool cg_geq(const ConceptualGraph& g, const ConceptualGraph& h, const Vocabulary& v) {
    return hom_exists(g, h, v).has_value();
}

bool hom_equivalent(const ConceptualGraph& g, const ConceptualGraph& h, const Vocabulary& v) {
    return cg_geq(g, h, v) && cg_geq(h, g, v);
}

CgDataset build_dataset(const std::vector<ConceptualGraph>& input, const Vocabulary& v) {
    const int k = static_cast<int>(input.size());
    for (const auto& g : input) validate_graph(g, v);

    std::vector<std::vector<char>> geq(k, std::vector<char>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) geq[i][j] = (i == j) || cg_geq(input[i], input[j], v);

    // Hom-equivalence classes in first-occurrence order.
    std::vector<int> class_of(k, -1);
    std::vector<std::vector<int>> members;
    for (int i = 0; i < k; ++i) {
        if (class_of[i] != -1) continue;
        int c = static_cast<int>(members.size());
        members.push_back({i});
        class_of[i] = c;
        for (int j = i + 1; j < k; ++j)
            if (class_of[j] == -1 && geq[i][j] && geq[j][i]) {
                class_of[j] = c;
                members[c].push_back(j);
            }
    }

    const int nc = static_cast<int>(members.size());
    std::vector<int> rep(nc);  // input index of the representative
    for (int c = 0; c < nc; ++c) {
        int best = members[c].front();
        for (int i : members[c])
            if (input[i].node_count() < input[best].node_count()) best = i;
        rep[c] = best;
    }

    // A class is the top iff its representative maps into every other one.
    int top_class = -1;
    for (int c = 0; c < nc && top_class == -1; ++c) {
        bool all = true;
        for (int d = 0; d < nc && all; ++d) all = geq[rep[c]][rep[d]];
        if (all) top_class = c;
    }

    CgDataset ds;
    const bool adjoin_empty = top_class == -1;
    const int n = nc + (adjoin_empty ? 1 : 0) + 1;  // classes + maybe empty top + sentinel

    // Element layout: 1 = top, middle classes in first-occurrence order, n = sentinel.
    std::vector<int> element_of_class(nc, 0);
    int next = 2;
    if (!adjoin_empty) element_of_class[top_class] = 1;
    for (int c = 0; c < nc; ++c) {
        if (c == top_class) continue;
        element_of_class[c] = next++;
    }

    ds.rep_index.assign(n + 1, -1);
    ds.class_members.assign(n + 1, {});
    ds.element_of_input.assign(k, 0);
    if (adjoin_empty) {
        ConceptualGraph empty;
        empty.name = "(top)";
        ds.graphs.push_back(empty);
        ds.rep_index[1] = 0;
    }
    for (int c = 0; c < nc; ++c) {
        int e = element_of_class[c];
        ds.rep_index[e] = static_cast<int>(ds.graphs.size());
        ds.graphs.push_back(input[rep[c]]);
        ds.class_members[e] = members[c];
        for (int i : members[c]) ds.element_of_input[i] = e;
    }

    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (int c = 0; c < nc; ++c)
        for (int d = 0; d < nc; ++d)
            if (c != d && geq[rep[c]][rep[d]] && !geq[rep[d]][rep[c]])
                pairs.emplace_back(element_of_class[c], element_of_class[d]);
    if (adjoin_empty)
        for (int c = 0; c < nc; ++c) pairs.emplace_back(1, element_of_class[c]);
    for (int e = 1; e < n; ++e) pairs.emplace_back(e, n);  // sentinel below everything

    ds.order = Poset::from_pairs(n, pairs);
    return ds;
}

CgQueryOracle::CgQueryOracle(const CgDataset& dataset, ConceptualGraph query, const Vocabulary& v)
    : dataset_(dataset), query_(std::move(query)), vocab_(v) {
    validate_graph(query_, v);
}

bool CgQueryOracle::geq(ElementId x) {
    comparisons_.fetch_add(1, std::memory_order_relaxed);
    const ConceptualGraph* rep = dataset_.representative(x);
    if (!rep) return false;
    hom_checks_.fetch_add(1, std::memory_order_relaxed);
    return cg_geq(*rep, query_, vocab_);
}

bool CgQueryOracle::leq(ElementId x) {
    comparisons_.fetch_add(1, std::memory_order_relaxed);
    const ConceptualGraph* rep = dataset_.representative(x);
    if (!rep) return false;
    hom_checks_.fetch_add(1, std::memory_order_relaxed);
    return cg_geq(query_, *rep, vocab_);
}

namespace {

struct TypeDecl {
    std::string name;
    int arity = 0;  // 0 for concept types
    std::vector<std::string> parents;
    int line = 0;
};

LabelPoset build_label_poset(const std::vector<TypeDecl>& decls) {
    LabelPoset lp;
    lp.names.assign(decls.size() + 1, "");
    for (std::size_t i = 0; i < decls.size(); ++i) {
        lp.names[i + 1] = decls[i].name;
        lp.ids[decls[i].name] = static_cast<int>(i) + 1;
    }
    if (decls.empty()) return lp;  // empty label poset: no types declared
    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (std::size_t i = 0; i < decls.size(); ++i)
        for (const auto& parent : decls[i].parents) {
            auto it = lp.ids.find(parent);
            if (it == lp.ids.end())
                throw ParseError(decls[i].line, "unknown parent type '" + parent + "'");
            pairs.emplace_back(it->second, static_cast<int>(i) + 1);
        }
    lp.order = Poset::from_pairs(static_cast<int>(decls.size()), pairs);
    return lp;
}

}  // namespace

CgFile parse_cg(std::istream& in) {
    std::vector<TypeDecl> concept_decls, relation_decls;
    struct RawGraph {
        std::string name;
        int line;
        std::vector<std::pair<std::string, std::string>> concepts;  // id, type
        std::vector<std::tuple<std::string, std::string, std::vector<std::string>>> relations;
    };
    std::vector<RawGraph> raw;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;

        if (kw == "concepttype" || kw == "relationtype") {
            TypeDecl d;
            d.line = lineno;
            std::string head;
            if (!(ls >> head)) throw ParseError(lineno, "missing type name");
            if (kw == "relationtype") {
                auto slash = head.find('/');
                if (slash == std::string::npos)
                    throw ParseError(lineno, "relation type needs an /arity suffix");
                d.name = head.substr(0, slash);
                try {
                    d.arity = std::stoi(head.substr(slash + 1));
                } catch (...) {
                    d.arity = 0;
                }
                if (d.arity < 1) throw ParseError(lineno, "relation arity must be positive");
            } else {
                d.name = head;
            }
            std::string tok;
            if (ls >> tok) {
                if (tok != "<") throw ParseError(lineno, "expected '<' before parent list");
                while (ls >> tok) d.parents.push_back(tok);
                if (d.parents.empty()) throw ParseError(lineno, "empty parent list");
            }
            auto& bucket = kw == "concepttype" ? concept_decls : relation_decls;
            for (const auto& existing : bucket)
                if (existing.name == d.name)
                    throw ParseError(lineno, "duplicate type '" + d.name + "'");
            bucket.push_back(std::move(d));
        } else if (kw == "graph") {
            RawGraph g;
            g.line = lineno;
            if (!(ls >> g.name)) throw ParseError(lineno, "missing graph name");
            for (const auto& existing : raw)
                if (existing.name == g.name)
                    throw ParseError(lineno, "duplicate graph '" + g.name + "'");
            raw.push_back(std::move(g));
        } else if (kw == "c") {
            if (raw.empty()) throw ParseError(lineno, "concept outside a graph block");
            std::string id, type;
            if (!(ls >> id >> type)) throw ParseError(lineno, "expected: c <id> <concepttype>");
            raw.back().concepts.emplace_back(id, type);
        } else if (kw == "r") {
            if (raw.empty()) throw ParseError(lineno, "relation outside a graph block");
            std::string id, type;
            if (!(ls >> id >> type))
                throw ParseError(lineno, "expected: r <id> <relationtype> <conceptid> ...");
            std::vector<std::string> args;
            std::string a;
            while (ls >> a) args.push_back(a);
            raw.back().relations.emplace_back(id, type, std::move(args));
        } else {
            throw ParseError(lineno, "unknown directive '" + kw + "'");
        }
    }

    CgFile file;
    file.vocabulary.concept_types = build_label_poset(concept_decls);
    file.vocabulary.relation_types = build_label_poset(relation_decls);
    file.vocabulary.arity.assign(relation_decls.size() + 1, 0);
    for (std::size_t i = 0; i < relation_decls.size(); ++i)
        file.vocabulary.arity[i + 1] = relation_decls[i].arity;

    // Comparable relation types must agree on arity.
    const auto& rt = file.vocabulary.relation_types;
    for (int a = 1; a <= rt.order.size(); ++a)
        for (int b = 1; b <= rt.order.size(); ++b)
            if (rt.order.less(a, b) && file.vocabulary.arity[a] != file.vocabulary.arity[b])
                throw MalformedGraph("comparable relation types '" + rt.names[a] + "' and '" +
                                     rt.names[b] + "' differ in arity");

    for (const auto& rg : raw) {
        ConceptualGraph g;
        g.name = rg.name;
        std::unordered_map<std::string, int> concept_index;
        for (const auto& [id, type] : rg.concepts) {
            if (concept_index.count(id))
                throw ParseError(rg.line, "duplicate concept id '" + id + "' in graph " + rg.name);
            concept_index[id] = static_cast<int>(g.concepts.size());
            g.concepts.push_back({id, file.vocabulary.concept_types.id_of(type)});
        }
        std::unordered_map<std::string, int> relation_index;
        for (const auto& [id, type, args] : rg.relations) {
            if (relation_index.count(id))
                throw ParseError(rg.line, "duplicate relation id '" + id + "' in graph " + rg.name);
            relation_index[id] = static_cast<int>(g.relations.size());
            ConceptualGraph::Relation r;
            r.label = id;
            r.type = file.vocabulary.relation_types.id_of(type);
            for (const auto& a : args) {
                auto it = concept_index.find(a);
                if (it == concept_index.end())
                    throw MalformedGraph("relation '" + id + "' in graph " + rg.name +
                                         " references missing concept '" + a + "'");
                r.args.push_back(it->second);
            }
            g.relations.push_back(std::move(r));
        }
        validate_graph(g, file.vocabulary);
        file.graphs.push_back(std::move(g));
    }
    return file;
}

CgFile parse_cg_text(const std::string& text) {
    std::istringstream is(text);
    return parse_cg(is);
}

}  // namespace posearch::cg
