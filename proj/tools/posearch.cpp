// Command-line front end: dataset generation, ingestion, analysis, search
// execution, and benchmark reporting over the poset-search library.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "posearch/cg.hpp"
#include "posearch/errors.hpp"
#include "posearch/generators.hpp"
#include "posearch/lattice.hpp"
#include "posearch/oracle.hpp"
#include "posearch/parallel.hpp"
#include "posearch/rng.hpp"
#include "posearch/search.hpp"

using namespace posearch;

namespace {

constexpr int kExitFound = 0;
constexpr int kExitError = 2;
constexpr int kExitAbsent = 3;

struct StatsRecord {
    std::string algo;
    int n = 0;
    std::optional<int> m;
    std::optional<ElementId> element;
    long geq_calls = 0, leq_calls = 0, duplicate_attempts = 0, code_comparisons = 0;
    long restarts = 0;
    double elapsed_ms = 0.0;
    std::uint64_t seed = 0;
    std::vector<WorkerReport> workers;  // parallel runs only

    std::string line() const {
        std::ostringstream os;
        os << "algo=" << algo << " n=" << n;
        if (m) os << " m=" << *m;
        os << " outcome=" << (element ? "found" : "absent");
        os << " element=" << (element ? std::to_string(*element) : "-");
        os << " geq_calls=" << geq_calls << " leq_calls=" << leq_calls
           << " duplicate_attempts=" << duplicate_attempts
           << " code_comparisons=" << code_comparisons << " restarts=" << restarts;
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.3f", elapsed_ms);
        os << " elapsed_ms=" << ms << " seed=" << seed;
        return os.str();
    }

    void print_pretty(std::ostream& os) const {
        os << "algorithm:          " << algo << "\n";
        os << "dataset size:       " << n << "\n";
        if (m) os << "workers:            " << *m << "\n";
        if (element)
            os << "outcome:            found element " << *element << "\n";
        else
            os << "outcome:            absent\n";
        os << "geq calls:          " << geq_calls << "\n";
        os << "leq calls:          " << leq_calls << "\n";
        os << "duplicate attempts: " << duplicate_attempts << "\n";
        os << "code comparisons:   " << code_comparisons << "\n";
        os << "restarts:           " << restarts << "\n";
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.3f", elapsed_ms);
        os << "elapsed:            " << ms << " ms\n";
        os << "seed:               " << seed << "\n";
        for (const auto& w : workers)
            os << "worker " << w.worker << ":           geq=" << w.geq_requests
               << " leq=" << w.leq_requests << " restarts=" << w.restarts << "\n";
    }
};

Poset load_poset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadParams("cannot open '" + path + "'");
    return parse_poset(in);
}

cg::CgFile load_cg(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadParams("cannot open '" + path + "'");
    return cg::parse_cg(in);
}

std::vector<int> parse_id_list(const std::string& csv) {
    std::vector<int> out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

// Query spec for poset datasets: "target=<i>" or
// "absent [up=<i,...>] [down=<i,...>]".
VirtualQuery parse_query_spec(const Poset& p, const std::string& spec) {
    std::istringstream is(spec);
    std::string tok;
    VirtualQuery vq{Bitset(p.size() + 1), Bitset(p.size() + 1), std::nullopt};
    bool absent = false, target = false;
    while (is >> tok) {
        if (tok == "absent") {
            absent = true;
        } else if (tok.rfind("target=", 0) == 0) {
            target = true;
            int z = std::stoi(tok.substr(7));
            if (z < 1 || z > p.size()) throw IndexOutOfRange(z, p.size());
            vq.up.set(z);
            vq.down.set(z);
            vq.target = z;
        } else if (tok.rfind("up=", 0) == 0) {
            for (int x : parse_id_list(tok.substr(3))) {
                if (x < 1 || x > p.size()) throw IndexOutOfRange(x, p.size());
                vq.up.set(x);
            }
        } else if (tok.rfind("down=", 0) == 0) {
            for (int x : parse_id_list(tok.substr(5))) {
                if (x < 1 || x > p.size()) throw IndexOutOfRange(x, p.size());
                vq.down.set(x);
            }
        } else {
            throw BadParams("bad query token '" + tok + "'");
        }
    }
    if (absent == target)
        throw BadParams("query spec needs exactly one of target=<i> or absent");
    vq.up = p.up_closure(vq.up);
    vq.down = p.down_closure(vq.down);
    return vq;
}

Poset generate(const std::string& kind, const std::vector<std::string>& params,
               std::uint64_t seed) {
    auto need = [&](std::size_t k) {
        if (params.size() != k)
            throw BadParams(kind + " expects " + std::to_string(k) + " parameter(s)");
    };
    if (kind == "chain") {
        need(1);
        return make_chain(std::stoi(params[0]));
    }
    if (kind == "boolean") {
        need(1);
        return make_boolean(std::stoi(params[0]));
    }
    if (kind == "star") {
        need(1);
        return make_star(std::stoi(params[0]));
    }
    if (kind == "grid") {
        need(2);
        return make_grid(std::stoi(params[0]), std::stoi(params[1]));
    }
    if (kind == "random-poset") {
        need(2);
        return make_random_poset(std::stoi(params[0]), std::stod(params[1]), seed);
    }
    throw BadParams("unknown generator '" + kind + "'");
}

MatryoshkaChain require_chain(const Poset& p) {
    auto lat = check_lattice(p);
    if (std::holds_alternative<NotLatticeWitness>(lat)) {
        const auto& w = std::get<NotLatticeWitness>(lat);
        throw BadParams("dataset is not a lattice: witness (" + std::to_string(w.x) + ", " +
                        std::to_string(w.y) + ")");
    }
    auto chain = build_chain(std::get<Lattice>(std::move(lat)));
    if (std::holds_alternative<NotMatryoshka>(chain)) {
        const auto& nm = std::get<NotMatryoshka>(chain);
        throw BadParams("dataset is not matryoshka: level " + std::to_string(nm.level) +
                        " witness (" + std::to_string(nm.witness.x) + ", " +
                        std::to_string(nm.witness.y) + ")");
    }
    return std::get<MatryoshkaChain>(std::move(chain));
}

struct SearchOptions {
    std::string algo = "seq";
    int m = 4;
    std::uint64_t seed = 0;
    bool trace = false;
    bool dual = false;
    std::string format = "record";
    std::string scheduler = "random";
};

SchedulerMode scheduler_of(const std::string& name) {
    if (name == "random") return SchedulerMode::RandomSteps;
    if (name == "rr") return SchedulerMode::RoundRobin;
    if (name == "threads") return SchedulerMode::Threads;
    throw BadParams("unknown scheduler '" + name + "'");
}

// Runs one search over an already-built dataset; emits trace and record.
StatsRecord run_search(const Poset& p, QueryOracle& oracle, const SearchOptions& opt,
                       std::ostream& os) {
    StatsRecord rec;
    rec.algo = opt.algo + (opt.dual && opt.algo == "seq" ? "-dual" : "");
    rec.n = p.size();
    rec.seed = opt.seed;

    auto t0 = std::chrono::steady_clock::now();
    if (opt.algo == "par") {
        rec.m = opt.m;
        ParallelResult r = search_parallel(p, oracle, opt.m, opt.seed, scheduler_of(opt.scheduler));
        rec.element = r.found;
        rec.geq_calls = r.ledger.geq_calls;
        rec.leq_calls = r.ledger.leq_calls;
        rec.duplicate_attempts = r.ledger.duplicate_attempts;
        for (const auto& w : r.workers) rec.restarts += w.restarts;
        rec.workers = r.workers;
        if (opt.trace) os << render_trace(r);
    } else {
        LedgeredOracle led(oracle, p.size());
        SearchLog log;
        SearchOutcome out;
        if (opt.algo == "seq") {
            out = opt.dual ? search_sequential_dual(p, led, &log)
                           : search_sequential(p, led, &log);
        } else if (opt.algo == "mat") {
            MatryoshkaChain chain = require_chain(p);
            out = search_matryoshka(chain, led, &log);
        } else {
            throw BadParams("unknown algorithm '" + opt.algo + "'");
        }
        rec.element = out.found;
        rec.geq_calls = out.stats.geq_calls;
        rec.leq_calls = out.stats.leq_calls;
        rec.code_comparisons = out.stats.code_comparisons;
        rec.duplicate_attempts = led.counters().duplicate_attempts;
        if (opt.trace) os << render_trace(log);
    }
    auto t1 = std::chrono::steady_clock::now();
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return rec;
}

int emit(const StatsRecord& rec, const std::string& format) {
    if (format == "pretty")
        rec.print_pretty(std::cout);
    else
        std::cout << rec.line() << "\n";
    return rec.element ? kExitFound : kExitAbsent;
}

int cmd_analyze(const std::string& path, bool codes) {
    Poset p = load_poset(path);
    std::cout << "poset n=" << p.size();
    if (p.top()) std::cout << " top=" << *p.top();
    if (p.bottom()) std::cout << " bottom=" << *p.bottom();
    std::cout << "\n";

    auto lat = check_lattice(p);
    if (std::holds_alternative<NotLatticeWitness>(lat)) {
        const auto& w = std::get<NotLatticeWitness>(lat);
        std::cout << "lattice no witness=(" << w.x << "," << w.y << ") side="
                  << (w.join_side ? "join" : "meet") << " bounds=[";
        for (std::size_t i = 0; i < w.bounds.size(); ++i)
            std::cout << (i ? " " : "") << w.bounds[i];
        std::cout << "]\n";
        return kExitFound;
    }
    const Lattice& l = std::get<Lattice>(lat);
    auto ji = join_irreducibles(l);
    std::cout << "lattice yes\n";
    std::cout << "join_irreducibles " << ji.size() << " [";
    for (std::size_t i = 0; i < ji.size(); ++i) std::cout << (i ? " " : "") << ji[i];
    std::cout << "]\n";

    if (l.size() < 2) {
        std::cout << "chain trivial (single element)\n";
        return kExitFound;
    }
    auto chain_or = build_chain(l);
    if (std::holds_alternative<NotMatryoshka>(chain_or)) {
        const auto& nm = std::get<NotMatryoshka>(chain_or);
        std::cout << "chain not-matryoshka failed_level=" << nm.level << " witness=("
                  << nm.witness.x << "," << nm.witness.y << ") side="
                  << (nm.witness.join_side ? "join" : "meet") << "\n";
        return kExitFound;
    }
    const auto& chain = std::get<MatryoshkaChain>(chain_or);
    std::cout << "chain levels [";
    for (int i = 0; i <= chain.depth(); ++i)
        std::cout << (i ? " " : "") << chain.level(i).lattice.size();
    std::cout << "] t=" << chain.depth() << "\n";
    std::cout << "terminal_tree_like " << (tree_like(chain.terminal_tree()) ? "yes" : "no")
              << "\n";
    if (codes) {
        std::cout << "codes level 0\n";
        for (int x = 1; x <= p.size(); ++x)
            std::cout << "  " << x << " " << chain.level(0).code[x].to_string() << "\n";
    }
    return kExitFound;
}

int cmd_validate(const std::string& path, bool is_cg) {
    if (is_cg) {
        cg::CgFile file = load_cg(path);
        for (const auto& g : file.graphs) cg::validate_graph(g, file.vocabulary);
        std::cout << "ok cg graphs=" << file.graphs.size()
                  << " concepttypes=" << file.vocabulary.concept_types.order.size()
                  << " relationtypes=" << file.vocabulary.relation_types.order.size() << "\n";
        return kExitFound;
    }
    Poset p = load_poset(path);
    std::cout << "ok poset n=" << p.size();
    if (p.top()) std::cout << " top=" << *p.top();
    if (p.bottom()) std::cout << " bottom=" << *p.bottom();
    std::cout << "\n";
    return kExitFound;
}

int cmd_search_poset(const std::string& path, const std::string& query_spec,
                     const SearchOptions& opt) {
    Poset p = load_poset(path);
    VirtualQuery vq = parse_query_spec(p, query_spec);
    if (vq.target == p.size() && p.size() > 1 && opt.algo != "mat")
        throw BadParams("the bottom element cannot be the query for this algorithm");
    if (vq.target == 1 && opt.algo == "seq" && opt.dual)
        throw BadParams("the top element cannot be the query for the dual walk");
    auto oracle = explicit_oracle(p, vq);
    StatsRecord rec = run_search(p, oracle, opt, std::cout);
    return emit(rec, opt.format);
}

int cmd_search_cg(const std::string& path, const std::string& query_name,
                  const SearchOptions& opt) {
    cg::CgFile file = load_cg(path);
    std::vector<cg::ConceptualGraph> dataset_graphs;
    std::optional<cg::ConceptualGraph> query;
    for (auto& g : file.graphs) {
        if (g.name == query_name)
            query = g;
        else
            dataset_graphs.push_back(g);
    }
    if (!query) throw BadParams("no graph named '" + query_name + "' in " + path);
    if (dataset_graphs.empty()) throw BadParams("dataset is empty after removing the query");

    cg::CgDataset ds = cg::build_dataset(dataset_graphs, file.vocabulary);
    cg::CgQueryOracle oracle(ds, *query, file.vocabulary);
    StatsRecord rec = run_search(ds.order, oracle, opt, std::cout);
    if (opt.format == "pretty" && rec.element && ds.representative(*rec.element))
        std::cout << "matched graph:      " << ds.representative(*rec.element)->name << "\n";
    return emit(rec, opt.format);
}

struct BenchRun {
    std::string gen;
    std::string queries = "present";
    std::vector<std::string> algos;
    int reps = 1;
    std::uint64_t seed = 0;
    int m = 4;
};

BenchRun parse_bench_line(int lineno, const std::string& line) {
    BenchRun r;
    std::istringstream is(line);
    std::string kw;
    is >> kw;  // "run", checked by the caller
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected key=value, got " + tok);
        std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
        if (key == "gen") {
            r.gen = value;
        } else if (key == "queries") {
            if (value != "present" && value != "absent" && value != "mixed")
                throw ParseError(lineno, "queries must be present, absent, or mixed");
            r.queries = value;
        } else if (key == "algos") {
            std::istringstream as(value);
            std::string a;
            while (std::getline(as, a, ','))
                if (!a.empty()) r.algos.push_back(a);
        } else if (key == "reps") {
            r.reps = std::stoi(value);
        } else if (key == "seed") {
            r.seed = std::stoull(value);
        } else if (key == "m") {
            r.m = std::stoi(value);
        } else {
            throw ParseError(lineno, "unknown key '" + key + "'");
        }
    }
    if (r.gen.empty()) throw ParseError(lineno, "run line needs gen=<kind>:<params>");
    if (r.algos.empty()) throw ParseError(lineno, "run line needs algos=<a,b,...>");
    return r;
}

Poset bench_poset(const std::string& genspec, std::uint64_t seed) {
    auto colon = genspec.find(':');
    std::string kind = genspec.substr(0, colon);
    std::vector<std::string> params;
    if (colon != std::string::npos) {
        std::istringstream ps(genspec.substr(colon + 1));
        std::string p;
        while (std::getline(ps, p, ','))
            if (!p.empty()) params.push_back(p);
    }
    return generate(kind, params, seed);
}

int cmd_bench(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadParams("cannot open '" + path + "'");

    struct Agg {
        long runs = 0;
        long total_calls = 0;
        long max_calls = 0;
    };
    std::map<std::pair<std::string, std::string>, Agg> summary;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream probe(line);
        std::string kw;
        if (!(probe >> kw)) continue;
        if (kw != "run") throw ParseError(lineno, "expected a run line");
        BenchRun r = parse_bench_line(lineno, line);

        Poset p = bench_poset(r.gen, r.seed);
        for (int rep = 0; rep < r.reps; ++rep) {
            std::uint64_t rep_seed = mix_seed(r.seed, rep);
            bool want_present = r.queries == "present" || (r.queries == "mixed" && rep % 2 == 0);
            VirtualQuery vq;
            for (std::uint64_t attempt = 0;; ++attempt) {
                vq = random_virtual_query(p, mix_seed(rep_seed, attempt), want_present);
                if (!want_present || vq.target != p.size()) break;  // bottom stays out
            }
            for (const auto& algo : r.algos) {
                SearchOptions opt;
                opt.algo = algo;
                opt.m = r.m;
                opt.seed = rep_seed;
                auto oracle = explicit_oracle(p, vq);
                StatsRecord rec = run_search(p, oracle, opt, std::cout);
                std::cout << "gen=" << r.gen << " " << rec.line() << "\n";
                auto& agg = summary[{r.gen, algo}];
                agg.runs += 1;
                long calls = rec.geq_calls + rec.leq_calls;
                agg.total_calls += calls;
                agg.max_calls = std::max(agg.max_calls, calls);
            }
        }
    }

    std::cout << "# summary gen algo runs mean_calls max_calls\n";
    for (const auto& [key, agg] : summary) {
        char mean[32];
        std::snprintf(mean, sizeof mean, "%.2f",
                      agg.runs ? double(agg.total_calls) / double(agg.runs) : 0.0);
        std::cout << "summary gen=" << key.first << " algo=" << key.second
                  << " runs=" << agg.runs << " mean_calls=" << mean
                  << " max_calls=" << agg.max_calls << "\n";
    }
    return kExitFound;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"search in partially ordered datasets with expensive comparisons"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a poset file");
    std::string gen_kind;
    std::vector<std::string> gen_params;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("kind", gen_kind, "chain | boolean | grid | star | random-poset")
        ->required();
    gen->add_option("params", gen_params, "size parameters");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("-o,--output", gen_out, "output file (default stdout)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "lattice and chain analysis of a poset file");
    std::string analyze_path;
    bool analyze_codes = false;
    analyze->add_option("file", analyze_path)->required();
    analyze->add_flag("--codes", analyze_codes, "print the binary code table");

    // validate
    auto* validate = app.add_subcommand("validate", "parse and check a dataset file");
    std::string validate_path;
    bool validate_cg = false;
    validate->add_option("file", validate_path)->required();
    validate->add_flag("--cg", validate_cg, "treat the file as a conceptual graph file");

    // search
    auto* search = app.add_subcommand("search", "run a search against a dataset");
    std::string search_poset, search_cg, search_query;
    SearchOptions opt;
    search->add_option("--poset", search_poset, "poset dataset file");
    search->add_option("--cg", search_cg, "conceptual graph dataset file");
    search->add_option("--query", search_query,
                       "poset: 'target=<i>' or 'absent up=<i,..> down=<i,..>'; cg: graph name")
        ->required();
    search->add_option("--algo", opt.algo, "seq | mat | par")->default_val("seq");
    search->add_option("-m,--workers", opt.m, "worker count for par")->default_val(4);
    search->add_option("--seed", opt.seed, "random seed");
    search->add_flag("--trace", opt.trace, "print one line per oracle call");
    search->add_flag("--dual", opt.dual, "bottom-up variant of seq");
    search->add_option("--format", opt.format, "record | pretty")->default_val("record");
    search->add_option("--scheduler", opt.scheduler, "random | rr | threads (par only)")
        ->default_val("random");

    // bench
    auto* bench = app.add_subcommand("bench", "run a benchmark suite file");
    std::string bench_path;
    bench->add_option("file", bench_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            Poset p = generate(gen_kind, gen_params, gen_seed);
            if (gen_out.empty()) {
                std::cout << p.to_text();
            } else {
                std::ofstream out(gen_out);
                if (!out) throw BadParams("cannot write '" + gen_out + "'");
                out << p.to_text();
            }
            return kExitFound;
        }
        if (analyze->parsed()) return cmd_analyze(analyze_path, analyze_codes);
        if (validate->parsed()) return cmd_validate(validate_path, validate_cg);
        if (search->parsed()) {
            if (search_poset.empty() == search_cg.empty())
                throw BadParams("search needs exactly one of --poset or --cg");
            if (!search_poset.empty()) return cmd_search_poset(search_poset, search_query, opt);
            return cmd_search_cg(search_cg, search_query, opt);
        }
        if (bench->parsed()) return cmd_bench(bench_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
