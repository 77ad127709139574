#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "posearch/search.hpp"

namespace posearch {

enum class AncState : std::uint8_t { Unknown, Anc, NonAnc };

enum class SchedulerMode {
    Threads,     // one OS thread per worker
    RoundRobin,  // single-threaded, workers stepped 1..m cyclically
    RandomSteps  // single-threaded, seeded random interleaving
};

struct WorkerReport {
    int worker = 0;
    long geq_requests = 0;  // requests issued, cached answers included
    long leq_requests = 0;
    long restarts = 0;      // walks abandoned at a dead end before resampling
};

struct ParallelCall {
    int seq;
    int worker;
    bool is_geq;
    ElementId element;
    bool answer;
    bool cached;
};

struct ParallelResult {
    std::optional<ElementId> found;
    LedgerCounters ledger;
    SearchStats stats;  // totals, ledger-backed
    std::vector<WorkerReport> workers;
    std::vector<AncState> final_state;    // per element
    std::vector<std::uint8_t> final_nondes;  // per element
    std::vector<ParallelCall> trace;      // deterministic modes only
    long steps = 0;
};

// "<seq> w<worker> <geq|leq> <element> <true|false>[ cached]" per call.
std::string render_trace(const ParallelResult& r);

// Worker 1 walks top-down exactly like search_sequential and is the only
// worker allowed to report absent. The others repeatedly probe a random
// element of their candidate pool, walk downward from successful probes,
// and publish the first confirmed match. All workers share the element
// statuses and a claim-once comparison ledger, so no comparison reaches the
// underlying oracle twice. Requires m >= 2.
ParallelResult search_parallel(const Poset& p, QueryOracle& oracle, int workers,
                               std::uint64_t seed, SchedulerMode mode);

// Single-threaded replay: executes the explicit worker interleaving, then
// continues round-robin until the run resolves. Identical inputs give a
// bit-identical trace. Throws MalformedSchedule on unknown worker ids.
ParallelResult run_deterministic(const Poset& p, QueryOracle& oracle, int workers,
                                 std::uint64_t seed, std::span<const int> schedule);

}  // namespace posearch
