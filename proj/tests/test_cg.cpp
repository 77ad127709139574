#include <variant>

#include "audits.hpp"
#include "cg_helpers.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "posearch/errors.hpp"
#include "posearch/parallel.hpp"

using namespace posearch;
using namespace posearch::cg;

namespace {

const char* kZooText = R"(
# small test vocabulary and graphs
concepttype Thing
concepttype Animal < Thing
concepttype Cat < Animal
concepttype Dog < Animal
concepttype Toy < Thing
relationtype link/2
relationtype on/2 < link
relationtype near/2 < link

graph cat_on_toy
c x Cat
c y Toy
r e1 on x y

graph animal_link_toy
c x Animal
c y Toy
r e1 link x y

graph dog
c d Dog
)";

CgFile zoo() { return parse_cg_text(kZooText); }

ConceptualGraph single_concept(const Vocabulary& v, const std::string& type) {
    ConceptualGraph g;
    g.name = "single_" + type;
    g.concepts.push_back({"c", v.concept_types.id_of(type)});
    return g;
}

}  // namespace

TEST_CASE("cg parsing builds the vocabulary and graphs") {
    CgFile file = zoo();
    const auto& v = file.vocabulary;
    CHECK(v.concept_types.order.size() == 5);
    CHECK(v.relation_types.order.size() == 3);
    CHECK(v.arity[v.relation_types.id_of("on")] == 2);
    CHECK(v.concept_types.leq(v.concept_types.id_of("Cat"), v.concept_types.id_of("Thing")));
    CHECK_FALSE(
        v.concept_types.leq(v.concept_types.id_of("Cat"), v.concept_types.id_of("Dog")));
    CHECK(v.relation_types.leq(v.relation_types.id_of("on"), v.relation_types.id_of("link")));
    REQUIRE(file.graphs.size() == 3);
    CHECK(file.graphs[0].name == "cat_on_toy");
    CHECK(file.graphs[0].concepts.size() == 2);
    CHECK(file.graphs[0].relations.size() == 1);
}

TEST_CASE("cg parse errors") {
    CHECK_THROWS_AS(parse_cg_text("concepttype A\nconcepttype A\n"), ParseError);
    CHECK_THROWS_AS(parse_cg_text("relationtype r\n"), ParseError);       // missing arity
    CHECK_THROWS_AS(parse_cg_text("c x A\n"), ParseError);                // outside a graph
    CHECK_THROWS_AS(parse_cg_text("concepttype A < B\n"), ParseError);    // unknown parent
    CHECK_THROWS_AS(parse_cg_text("concepttype A < B\nconcepttype B < A\n"), CycleDetected);
    CHECK_THROWS_AS(
        parse_cg_text("relationtype a/1\nrelationtype b/2 < a\n"), MalformedGraph);
    CHECK_THROWS_AS(parse_cg_text("concepttype A\ngraph g\nc x A\nc x A\n"), ParseError);
    CHECK_THROWS_AS(
        parse_cg_text("concepttype A\nrelationtype r/1\ngraph g\nr e r x\n"), MalformedGraph);
    CHECK_THROWS_AS(
        parse_cg_text("concepttype A\nrelationtype r/2\ngraph g\nc x A\nr e r x\n"),
        MalformedGraph);
}

TEST_CASE("the empty graph maps into everything") {
    CgFile file = zoo();
    ConceptualGraph empty;
    for (const auto& g : file.graphs) {
        CHECK(cg_geq(empty, g, file.vocabulary));
        CHECK(hom_exists(empty, g, file.vocabulary).has_value());
    }
    CHECK(cg_geq(empty, empty, file.vocabulary));
    // Nothing nonempty maps into the empty graph.
    CHECK_FALSE(cg_geq(file.graphs[0], empty, file.vocabulary));
}

TEST_CASE("single concepts compare by label") {
    CgFile file = zoo();
    const auto& v = file.vocabulary;
    ConceptualGraph animal = single_concept(v, "Animal");
    ConceptualGraph cat = single_concept(v, "Cat");
    ConceptualGraph toy = single_concept(v, "Toy");
    CHECK(cg_geq(animal, cat, v));       // label may decrease Animal -> Cat
    CHECK_FALSE(cg_geq(cat, animal, v));
    CHECK_FALSE(cg_geq(cat, toy, v));
    CHECK_FALSE(cg_geq(toy, cat, v));
}

TEST_CASE("relation edges must be preserved position by position") {
    CgFile file = zoo();
    const auto& v = file.vocabulary;
    const auto& specific = file.graphs[0];  // cat on toy
    const auto& general = file.graphs[1];   // animal link toy
    CHECK(cg_geq(general, specific, v));
    CHECK_FALSE(cg_geq(specific, general, v));
    auto w = hom_exists(general, specific, v);
    REQUIRE(w.has_value());
    CHECK(w->relation_map == std::vector<int>{0});
    CHECK(w->concept_map == std::vector<int>{0, 1});
}

TEST_CASE("duplicate relation certifies non-antisymmetry") {
    CgFile file = zoo();
    const auto& v = file.vocabulary;
    ConceptualGraph g = file.graphs[0];
    ConceptualGraph doubled = g;
    auto extra = g.relations[0];
    extra.label = "e2";
    doubled.relations.push_back(extra);

    CHECK(hom_equivalent(g, doubled, v));
    CHECK(g.node_count() != doubled.node_count());  // equivalent yet different
    CHECK(hom_equivalent(g, g, v));
}

TEST_CASE("backtracking agrees with the exhaustive oracle on 200 seeded pairs") {
    std::mt19937_64 rng(424242);
    int homs = 0;
    for (int round = 0; round < 200; ++round) {
        Vocabulary v = cgx::random_vocabulary(rng);
        ConceptualGraph g = cgx::random_graph(rng, v, 6, 6);
        ConceptualGraph h = cgx::random_graph(rng, v, 6, 6);
        bool fast = cg_geq(g, h, v);
        bool slow = cgx::brute_hom(g, h, v);
        CHECK(fast == slow);
        homs += fast ? 1 : 0;
    }
    CHECK(homs > 10);  // the generator must produce both outcomes
    CHECK(homs < 190);
}

TEST_CASE("the order is reflexive and transitive on seeded triples") {
    std::mt19937_64 rng(11);
    int chained = 0;
    for (int round = 0; round < 100; ++round) {
        Vocabulary v = cgx::random_vocabulary(rng);
        ConceptualGraph g = cgx::random_graph(rng, v, 4, 3);
        ConceptualGraph h = cgx::random_graph(rng, v, 4, 3);
        ConceptualGraph k = cgx::random_graph(rng, v, 4, 3);
        CHECK(cg_geq(g, g, v));
        if (cg_geq(g, h, v) && cg_geq(h, k, v)) {
            CHECK(cg_geq(g, k, v));
            ++chained;
        }
    }
    CHECK(chained > 0);
}

TEST_CASE("dataset from an empty graph and one concept is a 3-chain") {
    CgFile file = zoo();
    ConceptualGraph empty;
    empty.name = "empty";
    std::vector<ConceptualGraph> input{empty, single_concept(file.vocabulary, "Cat")};
    CgDataset ds = build_dataset(input, file.vocabulary);
    CHECK(ds.order.size() == 3);
    CHECK(ds.order == posearch::make_chain(3));
    CHECK(ds.representative(1)->concepts.empty());
    CHECK(ds.representative(2)->concepts.size() == 1);
    CHECK(ds.representative(3) == nullptr);  // sentinel
}

TEST_CASE("hom-equivalent inputs collapse to the smaller representative") {
    CgFile file = zoo();
    ConceptualGraph g = file.graphs[0];
    ConceptualGraph doubled = g;
    auto extra = g.relations[0];
    extra.label = "e2";
    doubled.relations.push_back(extra);
    doubled.name = "doubled";

    std::vector<ConceptualGraph> input{doubled, g};
    CgDataset ds = build_dataset(input, file.vocabulary);
    // One class; it is already universal, so only the sentinel is added.
    CHECK(ds.order.size() == 2);
    CHECK(ds.element_of_input[0] == ds.element_of_input[1]);
    int e = ds.element_of_input[0];
    CHECK(e == 1);
    CHECK(ds.representative(e)->name == g.name);  // fewer nodes wins
    CHECK(ds.class_members[e] == std::vector<int>{0, 1});
}

TEST_CASE("incomparable one-relation graphs form a fan below the empty top") {
    std::string text = "relationtype p/1\nrelationtype q/1\nrelationtype s/1\n";
    text += "concepttype T\n";
    for (char r : {'p', 'q', 's'}) {
        text += std::string("graph g_") + r + "\n";
        text += "c x T\n";
        text += std::string("r e ") + r + " x\n";
    }
    CgFile file = parse_cg_text(text);
    CgDataset ds = build_dataset(file.graphs, file.vocabulary);
    CHECK(ds.order.size() == 5);  // empty top + 3 + sentinel
    CHECK(ds.order == fx::star3());
}

TEST_CASE("cg oracle answers and the bridge invariant") {
    Vocabulary v = cgx::grid_vocabulary(2, 3);
    std::vector<ConceptualGraph> graphs;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 3; ++j) graphs.push_back(cgx::grid_graph(v, i, j));
    CgDataset ds = build_dataset(graphs, v);
    CHECK(ds.order.size() == 7);  // 6 grid classes + sentinel; g(1,1) is the top

    // Order sanity: representatives are pairwise non-equivalent and the
    // stored order matches direct homomorphism checks.
    for (int x = 1; x < ds.order.size(); ++x)
        for (int y = 1; y < ds.order.size(); ++y) {
            if (x == y) continue;
            const auto* gx = ds.representative(x);
            const auto* gy = ds.representative(y);
            CHECK_FALSE(hom_equivalent(*gx, *gy, v));
            CHECK(ds.order.less(y, x) == (cg_geq(*gx, *gy, v) && !cg_geq(*gy, *gx, v)));
        }

    ConceptualGraph q = cgx::grid_graph(v, 2, 2);
    CgQueryOracle oracle(ds, q, v);
    for (int x = 1; x < ds.order.size(); ++x) {
        const ConceptualGraph* rep = ds.representative(x);
        REQUIRE(rep != nullptr);
        CHECK(oracle.geq(x) == cg_geq(*rep, q, v));
        CHECK(oracle.leq(x) == cg_geq(q, *rep, v));
    }
    CHECK_FALSE(oracle.geq(ds.sentinel()));
    CHECK_FALSE(oracle.leq(ds.sentinel()));

    // Bridge: geq answers form an up-set, leq answers a down-set (the
    // sentinel stays out of both by construction).
    for (int x = 1; x < ds.order.size(); ++x)
        for (int y = 1; y < ds.order.size(); ++y) {
            CgQueryOracle probe(ds, q, v);
            if (ds.order.leq(x, y) && probe.geq(x)) CHECK(probe.geq(y));
            if (ds.order.leq(x, y) && probe.leq(y)) CHECK(probe.leq(x));
        }
}

TEST_CASE("end-to-end search over a cg dataset") {
    Vocabulary v = cgx::grid_vocabulary(2, 3);
    std::vector<ConceptualGraph> graphs;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 3; ++j) graphs.push_back(cgx::grid_graph(v, i, j));
    CgDataset ds = build_dataset(graphs, v);

    auto lat = check_lattice(ds.order);
    REQUIRE(std::holds_alternative<Lattice>(lat));
    auto chain_or = build_chain(std::get<Lattice>(std::move(lat)));
    REQUIRE(std::holds_alternative<MatryoshkaChain>(chain_or));
    const auto& chain = std::get<MatryoshkaChain>(chain_or);

    for (std::size_t i = 0; i < graphs.size(); ++i) {
        int want = ds.element_of_input[i];

        CgQueryOracle o1(ds, graphs[i], v);
        LedgeredOracle led1(o1, ds.order.size());
        auto seq = search_sequential(ds.order, led1);
        CHECK(seq.found == want);
        CHECK(o1.comparisons() == led1.counters().geq_calls + led1.counters().leq_calls);

        CgQueryOracle o2(ds, graphs[i], v);
        LedgeredOracle led2(o2, ds.order.size());
        auto mat = search_matryoshka(chain, led2);
        CHECK(mat.found == want);

        CgQueryOracle o3(ds, graphs[i], v);
        auto par = search_parallel(ds.order, o3, 3, 7 + i, SchedulerMode::RandomSteps);
        CHECK(par.found == want);
    }

    // Hom-equivalent but larger query graph still lands on the class.
    ConceptualGraph fat = cgx::grid_graph(v, 2, 2);
    fat.concepts.push_back({"extra", v.concept_types.id_of("A2")});
    CgQueryOracle o(ds, fat, v);
    LedgeredOracle led(o, ds.order.size());
    auto out = search_sequential(ds.order, led);
    CHECK(out.found == ds.element_of_input[4]);  // class of g(2,2)

    // Query outside every class: a concept below nothing in the dataset.
    ConceptualGraph alien;
    alien.concepts.push_back({"z", v.concept_types.id_of("A2")});
    alien.concepts.push_back({"y", v.concept_types.id_of("A2")});
    CgQueryOracle oa(ds, alien, v);
    LedgeredOracle leda(oa, ds.order.size());
    auto absent = search_sequential(ds.order, leda);
    CHECK_FALSE(absent.found.has_value());
}

TEST_CASE("malformed graphs are rejected by validation") {
    CgFile file = zoo();
    ConceptualGraph bad;
    bad.concepts.push_back({"x", 99});
    CHECK_THROWS_AS(validate_graph(bad, file.vocabulary), MalformedGraph);
    CHECK_THROWS_AS(cg_geq(bad, bad, file.vocabulary), MalformedGraph);

    ConceptualGraph dangling;
    dangling.concepts.push_back({"x", 1});
    ConceptualGraph::Relation r;
    r.label = "e";
    r.type = file.vocabulary.relation_types.id_of("link");
    r.args = {0, 5};  // second argument missing
    dangling.relations.push_back(r);
    CHECK_THROWS_AS(validate_graph(dangling, file.vocabulary), MalformedGraph);
}
