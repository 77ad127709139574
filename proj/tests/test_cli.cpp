// End-to-end checks of the command-line tool: exit codes, record shape,
// determinism, and file round-trips. Runs the built binary via popen.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    std::string cmd = std::string(POSEARCH_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult r;
    std::array<char, 4096> buf;
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string strip_elapsed(std::string s) {
    return std::regex_replace(s, std::regex("elapsed_ms=[0-9.]+"), "elapsed_ms=X");
}

std::string temp_file(const std::string& name, const std::string& content) {
    std::string path = "/tmp/posearch_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

const char* kCgSample = R"(
concepttype A1
concepttype A2 < A1
concepttype B1
concepttype B2 < B1

graph g11
c a A1
c b B1
graph g12
c a A1
c b B2
graph g21
c a A2
c b B1
graph g22
c a A2
c b B2
graph probe
c a A2
c b B2
c extra A2
)";

}  // namespace

TEST_CASE("gen output round-trips through validate and the library parser") {
    for (std::string spec : {"chain 5", "boolean 3", "grid 2 3", "star 4",
                             "random-poset 40 0.2 --seed 11"}) {
        auto gen = run_cli("gen " + spec);
        REQUIRE(gen.exit_code == 0);
        posearch::Poset parsed = posearch::parse_poset_text(gen.out);
        CHECK(parsed.top() == 1);
        CHECK(parsed.bottom() == parsed.size());

        auto path = temp_file("roundtrip.poset", gen.out);
        auto validate = run_cli("validate " + path);
        CHECK(validate.exit_code == 0);
        CHECK(validate.out.rfind("ok poset", 0) == 0);
    }
    CHECK(posearch::parse_poset_text(run_cli("gen chain 4").out) == fx::c4());
    CHECK(posearch::parse_poset_text(run_cli("gen boolean 2").out) == fx::b2());
    CHECK(posearch::parse_poset_text(run_cli("gen grid 2 3").out) == fx::grid2x3());
    CHECK(posearch::parse_poset_text(run_cli("gen star 3").out) == fx::star3());
}

TEST_CASE("the dual walk is reachable from the CLI") {
    auto b2 = temp_file("b2.poset", fx::b2().to_text());
    auto r = run_cli("search --poset " + b2 + " --query target=2 --dual");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("algo=seq-dual") != std::string::npos);
    CHECK(r.out.find("outcome=found element=2") != std::string::npos);
    CHECK(run_cli("search --poset " + b2 + " --query target=1 --dual").exit_code == 2);
}

TEST_CASE("exit codes: found 0, absent 3, errors nonzero") {
    auto b2 = temp_file("b2.poset", fx::b2().to_text());
    CHECK(run_cli("search --poset " + b2 + " --query target=3").exit_code == 0);
    CHECK(run_cli("search --poset " + b2 + " --query \"absent up=1 down=4\"").exit_code == 3);
    CHECK(run_cli("search --poset " + b2 + " --query target=9").exit_code == 2);
    CHECK(run_cli("search --poset /tmp/no_such_file --query target=1").exit_code == 2);
    CHECK(run_cli("search --poset " + b2 + " --query target=4").exit_code == 2);  // bottom
    auto bowtie = temp_file("bowtie.poset", fx::bowtie6().to_text());
    CHECK(run_cli("search --poset " + bowtie + " --query target=2 --algo mat").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code != 0);
}

TEST_CASE("frozen record for the diamond search") {
    auto b2 = temp_file("b2.poset", fx::b2().to_text());
    auto r = run_cli("search --poset " + b2 + " --query target=3 --trace");
    CHECK(strip_elapsed(r.out) ==
          "1 geq 2 false\n"
          "2 geq 3 true\n"
          "3 leq 3 true\n"
          "algo=seq n=4 outcome=found element=3 geq_calls=2 leq_calls=1 "
          "duplicate_attempts=0 code_comparisons=0 restarts=0 elapsed_ms=X seed=0\n");
}

TEST_CASE("identical command and seed give identical records") {
    auto r200 = temp_file("r200.poset", posearch::make_random_poset(120, 0.08, 5).to_text());
    std::string cmd =
        "search --poset " + r200 + " --query target=17 --algo par -m 4 --seed 12 --trace";
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(strip_elapsed(a.out) == strip_elapsed(b.out));
}

TEST_CASE("parallel and sequential searches agree through the CLI") {
    auto path = temp_file("r200b.poset", posearch::make_random_poset(200, 0.05, 31).to_text());
    for (std::string query : {"target=88", "target=17", "\"absent up=1 down=200\""}) {
        auto seq = run_cli("search --poset " + path + " --query " + query);
        auto par = run_cli("search --poset " + path + " --query " + query +
                           " --algo par -m 4 --seed 6");
        CHECK(seq.exit_code == par.exit_code);
        auto outcome_of = [](const std::string& s) {
            auto at = s.find("outcome=");
            return s.substr(at, s.find(' ', at) - at);
        };
        CHECK(outcome_of(seq.out) == outcome_of(par.out));
        CHECK(par.out.find("duplicate_attempts=") != std::string::npos);
    }
}

TEST_CASE("analyze matches the frozen expectations") {
    auto b3 = temp_file("b3.poset", fx::b3().to_text());
    auto r = run_cli("analyze " + b3);
    CHECK(r.out ==
          "poset n=8 top=1 bottom=8\n"
          "lattice yes\n"
          "join_irreducibles 3 [5 6 7]\n"
          "chain levels [8 5] t=1\n"
          "terminal_tree_like yes\n");

    auto bowtie = temp_file("bowtie.poset", fx::bowtie6().to_text());
    auto rb = run_cli("analyze " + bowtie);
    CHECK(rb.out ==
          "poset n=6 top=1 bottom=6\n"
          "lattice no witness=(2,3) side=meet bounds=[4 5]\n");

    auto c4 = temp_file("c4.poset", fx::c4().to_text());
    auto rc = run_cli("analyze " + c4);
    CHECK(rc.out.find("chain levels [4] t=0") != std::string::npos);

    auto nonmat = temp_file("nonmat.poset", fx::nonmat7().to_text());
    auto rn = run_cli("analyze " + nonmat);
    CHECK(rn.out.find("chain not-matryoshka failed_level=1 witness=(2,3) side=meet") !=
          std::string::npos);
}

TEST_CASE("search over a conceptual graph file") {
    auto path = temp_file("grid.cg", kCgSample);
    auto ok = run_cli("validate --cg " + path);
    CHECK(ok.exit_code == 0);
    CHECK(ok.out == "ok cg graphs=5 concepttypes=4 relationtypes=0\n");

    // probe is hom-equivalent to g22; class-level match expected.
    auto seq = run_cli("search --cg " + path + " --query probe --algo seq --format pretty");
    CHECK(seq.exit_code == 0);
    CHECK(seq.out.find("matched graph:      g22") != std::string::npos);

    auto mat = run_cli("search --cg " + path + " --query probe --algo mat");
    CHECK(mat.exit_code == 0);
    auto par = run_cli("search --cg " + path + " --query probe --algo par -m 2 --seed 4");
    CHECK(par.exit_code == 0);

    CHECK(run_cli("search --cg " + path + " --query missing").exit_code == 2);
}

TEST_CASE("bench emits per-run records and a summary") {
    std::string suite;
    for (int k = 3; k <= 6; ++k)
        suite += "run gen=boolean:" + std::to_string(k) +
                 " queries=present algos=seq,mat reps=6 seed=42\n";
    suite += "run gen=chain:16 queries=present algos=mat reps=6 seed=1\n";
    auto path = temp_file("suite.bench", suite);
    auto r = run_cli("bench " + path);
    CHECK(r.exit_code == 0);

    // Cube searches cost exactly the atom count plus two confirmations.
    std::smatch m;
    for (int k = 3; k <= 6; ++k) {
        std::regex mat_row("summary gen=boolean:" + std::to_string(k) +
                           " algo=mat runs=6 mean_calls=" + std::to_string(k + 2) +
                           ".00 max_calls=" + std::to_string(k + 2));
        CHECK_MESSAGE(std::regex_search(r.out, m, mat_row), "k=", k);
    }
    // Chain searches stay within the binary-search budget.
    std::regex chain_row("summary gen=chain:16 algo=mat runs=6 mean_calls=[0-9.]+ max_calls=6");
    CHECK(std::regex_search(r.out, m, chain_row));

    auto empty = temp_file("empty.bench", "# nothing\n");
    auto re = run_cli("bench " + empty);
    CHECK(re.exit_code == 0);
    CHECK(re.out == "# summary gen algo runs mean_calls max_calls\n");
}

TEST_CASE("frozen golden trace for a two-worker run on the diamond") {
    // Seed 1 makes worker 2 sample element 3 first; it then publishes the
    // match while worker 1 is still scanning. Child 4 is resolved from the
    // shared status without an oracle call.
    auto b2 = temp_file("b2.poset", fx::b2().to_text());
    auto r = run_cli("search --poset " + b2 +
                     " --query target=3 --algo par -m 2 --seed 1 --scheduler rr --trace");
    CHECK(r.exit_code == 0);
    CHECK(strip_elapsed(r.out) ==
          "1 w2 geq 3 true\n"
          "2 w1 geq 2 false\n"
          "3 w1 geq 3 true cached\n"
          "4 w2 leq 3 true\n"
          "algo=par n=4 m=2 outcome=found element=3 geq_calls=2 leq_calls=1 "
          "duplicate_attempts=1 code_comparisons=0 restarts=0 elapsed_ms=X seed=1\n");
}
