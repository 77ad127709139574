#pragma once

#include <atomic>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "posearch/oracle.hpp"
#include "posearch/poset.hpp"

namespace posearch::cg {

// Named label order; ids are 1..n in declaration order.
struct LabelPoset {
    Poset order;
    std::vector<std::string> names;  // [id]; slot 0 unused
    std::unordered_map<std::string, int> ids;

    int id_of(const std::string& name) const;
    bool leq(int a, int b) const { return order.leq(a, b); }
};

// The two label posets a conceptual graph is written over. Comparable
// relation types always share an arity.
struct Vocabulary {
    LabelPoset concept_types;
    LabelPoset relation_types;
    std::vector<int> arity;  // [relation type id]; slot 0 unused
};

// Labeled bipartite multigraph: concept nodes and relation nodes, where a
// relation's i-th argument is a concept. The empty graph is legal.
struct ConceptualGraph {
    struct Concept {
        std::string label;  // node identifier from the source text
        int type = 0;
    };
    struct Relation {
        std::string label;
        int type = 0;
        std::vector<int> args;  // concept indices, 0-based, position = argument slot
    };

    std::string name;
    std::vector<Concept> concepts;
    std::vector<Relation> relations;

    int node_count() const {
        return static_cast<int>(concepts.size() + relations.size());
    }
};

// Throws MalformedGraph on dangling arguments or arity mismatches.
void validate_graph(const ConceptualGraph& g, const Vocabulary& v);

struct HomWitness {
    std::vector<int> concept_map;   // g concept index -> h concept index
    std::vector<int> relation_map;  // g relation index -> h relation index
};

// Backtracking over relation assignments; concept images are induced by
// argument positions and isolated concepts are placed last. A witness maps
// every edge of g onto an edge of h and never increases a label.
// Exponential in the worst case; intended for small graphs.
std::optional<HomWitness> hom_exists(const ConceptualGraph& g, const ConceptualGraph& h,
                                     const Vocabulary& v);

// g >= h iff some homomorphism maps g into h.
bool cg_geq(const ConceptualGraph& g, const ConceptualGraph& h, const Vocabulary& v);
bool hom_equivalent(const ConceptualGraph& g, const ConceptualGraph& h, const Vocabulary& v);

// Graphs collapsed to hom-equivalence classes (representative: fewest
// nodes, then first occurrence), ordered by homomorphism, with element 1 a
// genuine top (the empty graph's class is adjoined when no input class
// dominates) and element n a synthetic bottom that carries no graph.
struct CgDataset {
    Poset order;
    std::vector<ConceptualGraph> graphs;        // owned representatives (+ adjoined empty)
    std::vector<int> rep_index;                 // [element] -> index into graphs, -1 for sentinel
    std::vector<std::vector<int>> class_members;  // [element] -> input indices
    std::vector<int> element_of_input;          // [input index] -> element id

    ElementId sentinel() const { return order.size(); }
    const ConceptualGraph* representative(ElementId x) const {
        return rep_index[x] >= 0 ? &graphs[rep_index[x]] : nullptr;
    }
};

CgDataset build_dataset(const std::vector<ConceptualGraph>& input, const Vocabulary& v);

// Query comparisons run a homomorphism check per direction; dataset-internal
// order questions are answered by the precomputed poset for free. The
// sentinel bottom answers false in both directions without a check (the
// walks never ask leq there; its answers are still billed as comparisons so
// ledger counters stay an upper bound on the real homomorphism cost).
class CgQueryOracle final : public QueryOracle {
public:
    CgQueryOracle(const CgDataset& dataset, ConceptualGraph query, const Vocabulary& v);

    bool geq(ElementId x) override;
    bool leq(ElementId x) override;

    long comparisons() const { return comparisons_.load(); }  // billed query comparisons
    long hom_checks() const { return hom_checks_.load(); }    // actual backtracking runs

private:
    const CgDataset& dataset_;
    ConceptualGraph query_;
    const Vocabulary& vocab_;
    std::atomic<long> comparisons_{0}, hom_checks_{0};
};

// Text format, line oriented ('#' starts a comment):
//   concepttype <name> [< <parent> ...]
//   relationtype <name>/<arity> [< <parent> ...]
//   graph <name>
//   c <id> <concepttype>
//   r <id> <relationtype> <conceptid> ...
struct CgFile {
    Vocabulary vocabulary;
    std::vector<ConceptualGraph> graphs;
};
CgFile parse_cg(std::istream& in);
CgFile parse_cg_text(const std::string& text);

}  // namespace posearch::cg
