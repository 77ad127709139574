#include "posearch/parallel.hpp"

#include <cassert>
#include <chrono>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "posearch/errors.hpp"
#include "posearch/rng.hpp"

namespace posearch {

std::string render_trace(const ParallelResult& r) {
    std::ostringstream os;
    for (const auto& c : r.trace) {
        os << c.seq << " w" << c.worker << " " << (c.is_geq ? "geq" : "leq") << " " << c.element
           << " " << (c.answer ? "true" : "false");
        if (c.cached) os << " cached";
        os << "\n";
    }
    return os.str();
}

namespace {

// Shared monotone element states: Unknown -> Anc or Unknown -> NonAnc only,
// plus the independent "known not below the query" flag.
class StatusBoard {
public:
    explicit StatusBoard(int n)
        : anc_(std::make_unique<std::atomic<std::uint8_t>[]>(n + 1)),
          nondes_(std::make_unique<std::atomic<std::uint8_t>[]>(n + 1)) {}

    AncState state(int x) const {
        return static_cast<AncState>(anc_[x].load(std::memory_order_acquire));
    }
    void mark(int x, AncState s) {
        std::uint8_t expected = 0;
        anc_[x].compare_exchange_strong(expected, static_cast<std::uint8_t>(s),
                                        std::memory_order_acq_rel);
    }
    bool nondes(int x) const { return nondes_[x].load(std::memory_order_acquire) != 0; }
    void set_nondes(int x) { nondes_[x].store(1, std::memory_order_release); }

private:
    std::unique_ptr<std::atomic<std::uint8_t>[]> anc_;
    std::unique_ptr<std::atomic<std::uint8_t>[]> nondes_;
};

struct RunContext {
    const Poset& p;
    LedgeredOracle& oracle;
    StatusBoard& board;
    std::atomic<int>& stop;  // 0 running, -1 absent, >0 found element
    std::atomic<int>& call_seq;
    std::vector<ParallelCall>* trace;  // null in threaded mode

    bool stopped() const { return stop.load(std::memory_order_acquire) != 0; }
    void publish_found(int x) {
        int expected = 0;
        stop.compare_exchange_strong(expected, x, std::memory_order_acq_rel);
    }
    void publish_absent() {
        int expected = 0;
        stop.compare_exchange_strong(expected, -1, std::memory_order_acq_rel);
    }
};

enum class StepResult { Progressed, Parked, Halted };

enum class Pc : std::uint8_t {
    Init,
    Sample,      // draw from the candidate pool, reacting to known statuses
    Probe,       // direct comparison of a sampled element
    MarkAnchor,  // record the current element as an ancestor, restart child scan
    Child,       // inspect the next child slot
    ProbeChild,  // compare an unresolved child
    Finalize,    // downward comparison at a dead end
    Done
};

class Worker {
public:
    Worker(int id, std::uint64_t run_seed) : id_(id), rng_(mix_seed(run_seed, id)) {
        report_.worker = id;
    }

    const WorkerReport& report() const { return report_; }

    StepResult step(RunContext& ctx) {
        if (ctx.stopped()) return StepResult::Halted;
        switch (pc_) {
            case Pc::Init:
                if (id_ == 1) {
                    x_ = *ctx.p.top();
                    pc_ = Pc::MarkAnchor;
                } else {
                    pool_ = middles(ctx.p);
                    pc_ = Pc::Sample;
                }
                return StepResult::Progressed;

            case Pc::Sample: {
                if (pool_.none()) return StepResult::Parked;
                int k = static_cast<int>(rng_below(rng_, pool_.count()));
                x_ = pool_.nth_set(k);
                switch (ctx.board.state(x_)) {
                    case AncState::Anc:
                        narrow_to_descendants(ctx, x_);
                        break;  // resample
                    case AncState::NonAnc:
                        drop_with_descendants(ctx, x_);
                        break;  // resample
                    case AncState::Unknown:
                        pc_ = Pc::Probe;
                        break;
                }
                return StepResult::Progressed;
            }

            case Pc::Probe: {
                if (ask_geq(ctx, x_)) {
                    pc_ = Pc::MarkAnchor;
                } else {
                    mark_nonanc(ctx, x_);
                    drop_with_descendants(ctx, x_);
                    pc_ = Pc::Sample;
                }
                return StepResult::Progressed;
            }

            case Pc::MarkAnchor:
                ctx.board.mark(x_, AncState::Anc);
                k_ = 0;
                pc_ = Pc::Child;
                return StepResult::Progressed;

            case Pc::Child: {
                const auto& kids = ctx.p.children(x_);
                if (k_ >= static_cast<int>(kids.size())) {
                    pc_ = Pc::Finalize;
                    return StepResult::Progressed;
                }
                y_ = kids[k_];
                AncState s = ctx.board.state(y_);
                if (id_ != 1 && s == AncState::Anc) {
                    // Another worker already owns this branch: jump below it.
                    narrow_to_descendants(ctx, y_);
                    pc_ = Pc::Sample;
                } else if (s == AncState::NonAnc) {
                    ++k_;
                } else {
                    pc_ = Pc::ProbeChild;
                }
                return StepResult::Progressed;
            }

            case Pc::ProbeChild: {
                if (ask_geq(ctx, y_)) {
                    x_ = y_;
                    pc_ = Pc::MarkAnchor;
                } else {
                    mark_nonanc(ctx, y_);
                    ++k_;
                    pc_ = Pc::Child;
                }
                return StepResult::Progressed;
            }

            case Pc::Finalize: {
                if (!ctx.board.nondes(x_)) {
                    if (ask_leq(ctx, x_)) {
                        ctx.publish_found(x_);
                        pc_ = Pc::Done;
                        return StepResult::Halted;
                    }
                    ctx.board.set_nondes(x_);
                }
                if (id_ == 1) {
                    ctx.publish_absent();
                    pc_ = Pc::Done;
                    return StepResult::Halted;
                }
                ++report_.restarts;
                pc_ = Pc::Sample;
                return StepResult::Progressed;
            }

            case Pc::Done:
                return StepResult::Halted;
        }
        return StepResult::Progressed;
    }

private:
    static Bitset middles(const Poset& p) {
        Bitset r(p.size() + 1);
        for (int v = 2; v < p.size(); ++v) r.set(v);
        return r;
    }

    void narrow_to_descendants(RunContext& ctx, int anchor) {
        Bitset next = ctx.p.strict_down(anchor);
        next &= middles(ctx.p);
        pool_ = std::move(next);
    }
    void drop_with_descendants(RunContext& ctx, int e) {
        pool_.reset(e);
        pool_.andnot(ctx.p.strict_down(e));
    }

    void mark_nonanc(RunContext& ctx, int e) {
        ctx.board.mark(e, AncState::NonAnc);
        ctx.p.strict_down(e).for_each([&](int d) { ctx.board.mark(d, AncState::NonAnc); });
    }

    bool ask_geq(RunContext& ctx, int e) {
        bool cached;
        bool a = ctx.oracle.geq_tracked(e, cached);
        ++report_.geq_requests;
        record(ctx, true, e, a, cached);
        return a;
    }
    bool ask_leq(RunContext& ctx, int e) {
        bool cached;
        bool a = ctx.oracle.leq_tracked(e, cached);
        ++report_.leq_requests;
        record(ctx, false, e, a, cached);
        return a;
    }
    void record(RunContext& ctx, bool is_geq, int e, bool a, bool cached) {
        int seq = ctx.call_seq.fetch_add(1, std::memory_order_relaxed) + 1;
        if (ctx.trace) ctx.trace->push_back({seq, id_, is_geq, e, a, cached});
    }

    int id_;
    Pc pc_ = Pc::Init;
    int x_ = 0, y_ = 0, k_ = 0;
    Bitset pool_;
    std::mt19937_64 rng_;
    WorkerReport report_;
};

void check_preconditions(const Poset& p, int m) {
    if (m < 2) throw InvalidWorkerCount(m);
    if (!p.top() || !p.bottom()) throw MissingTopOrBottom();
    if (*p.top() == *p.bottom()) throw TopEqualsBottom();
}

ParallelResult collect(const Poset& p, LedgeredOracle& led, const std::atomic<int>& stop,
                       const StatusBoard& board, std::vector<Worker>& workers,
                       std::vector<ParallelCall> trace, long steps) {
    ParallelResult r;
    int s = stop.load();
    assert(s != 0);
    if (s > 0) r.found = s;
    r.ledger = led.counters();
    r.stats.geq_calls = r.ledger.geq_calls;
    r.stats.leq_calls = r.ledger.leq_calls;
    for (auto& w : workers) r.workers.push_back(w.report());
    r.final_state.assign(p.size() + 1, AncState::Unknown);
    r.final_nondes.assign(p.size() + 1, 0);
    for (int x = 1; x <= p.size(); ++x) {
        r.final_state[x] = board.state(x);
        r.final_nondes[x] = board.nondes(x) ? 1 : 0;
    }
    r.trace = std::move(trace);
    r.steps = steps;
    return r;
}

ParallelResult drive_serial(const Poset& p, QueryOracle& oracle, int m, std::uint64_t seed,
                            std::span<const int> schedule, bool random_continuation) {
    check_preconditions(p, m);
    LedgeredOracle led(oracle, p.size());
    StatusBoard board(p.size());
    std::atomic<int> stop{0};
    std::atomic<int> call_seq{0};
    std::vector<ParallelCall> trace;
    RunContext ctx{p, led, board, stop, call_seq, &trace};

    std::vector<Worker> workers;
    workers.reserve(m);
    for (int id = 1; id <= m; ++id) workers.emplace_back(id, seed);

    for (int wid : schedule)
        if (wid < 1 || wid > m)
            throw MalformedSchedule("worker id " + std::to_string(wid) + " outside 1.." +
                                    std::to_string(m));

    std::mt19937_64 pick(mix_seed(seed, 0x5ced));
    // Generous bug guard; real runs stay within a small multiple of n * m.
    const long cap = 16L * m * static_cast<long>(p.size() + 4) * (p.size() + 4) + 4096;
    long steps = 0;
    std::size_t si = 0;
    int rr = 0;
    while (stop.load(std::memory_order_acquire) == 0) {
        int wid;
        if (si < schedule.size()) {
            wid = schedule[si++];
        } else if (random_continuation) {
            wid = 1 + static_cast<int>(rng_below(pick, m));
        } else {
            wid = 1 + rr;
            rr = (rr + 1) % m;
        }
        workers[wid - 1].step(ctx);
        if (++steps > cap)
            throw std::logic_error("parallel search exceeded its step budget");
    }
    return collect(p, led, stop, board, workers, std::move(trace), steps);
}

ParallelResult drive_threads(const Poset& p, QueryOracle& oracle, int m, std::uint64_t seed) {
    check_preconditions(p, m);
    LedgeredOracle led(oracle, p.size());
    StatusBoard board(p.size());
    std::atomic<int> stop{0};
    std::atomic<int> call_seq{0};
    RunContext ctx{p, led, board, stop, call_seq, nullptr};

    std::vector<Worker> workers;
    workers.reserve(m);
    for (int id = 1; id <= m; ++id) workers.emplace_back(id, seed);

    std::atomic<long> steps{0};
    std::vector<std::thread> threads;
    threads.reserve(m);
    for (int i = 0; i < m; ++i) {
        threads.emplace_back([&, i] {
            while (true) {
                StepResult r = workers[i].step(ctx);
                steps.fetch_add(1, std::memory_order_relaxed);
                if (r == StepResult::Halted) break;
                if (r == StepResult::Parked) {
                    if (ctx.stopped()) break;
                    std::this_thread::sleep_for(std::chrono::microseconds(50));
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    return collect(p, led, stop, board, workers, {}, steps.load());
}

}  // namespace

ParallelResult search_parallel(const Poset& p, QueryOracle& oracle, int workers,
                               std::uint64_t seed, SchedulerMode mode) {
    switch (mode) {
        case SchedulerMode::Threads:
            return drive_threads(p, oracle, workers, seed);
        case SchedulerMode::RoundRobin:
            return drive_serial(p, oracle, workers, seed, {}, false);
        case SchedulerMode::RandomSteps:
            return drive_serial(p, oracle, workers, seed, {}, true);
    }
    throw BadParams("unknown scheduler mode");
}

ParallelResult run_deterministic(const Poset& p, QueryOracle& oracle, int workers,
                                 std::uint64_t seed, std::span<const int> schedule) {
    return drive_serial(p, oracle, workers, seed, schedule, false);
}

}  // namespace posearch
