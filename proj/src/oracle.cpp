#include "posearch/oracle.hpp"

#include <thread>

#include "posearch/errors.hpp"
#include "posearch/rng.hpp"

namespace posearch {

namespace {

void validate_query(const Poset& p, const VirtualQuery& vq) {
    const int n = p.size();
    if (vq.up.width() != n + 1 || vq.down.width() != n + 1)
        throw InconsistentVirtualQuery("set width does not match poset", 0, 0);

    int bad = -1;
    vq.up.for_each([&](int x) {
        if (bad < 0 && !p.strict_up(x).subset_of(vq.up)) bad = x;
    });
    if (bad >= 0) {
        Bitset missing = p.strict_up(bad);
        missing.andnot(vq.up);
        throw InconsistentVirtualQuery("up set is not up-closed", bad, missing.find_first());
    }
    vq.down.for_each([&](int x) {
        if (bad < 0 && !p.strict_down(x).subset_of(vq.down)) bad = x;
    });
    if (bad >= 0) {
        Bitset missing = p.strict_down(bad);
        missing.andnot(vq.down);
        throw InconsistentVirtualQuery("down set is not down-closed", bad, missing.find_first());
    }

    // Every down element must lie below every up element.
    int bad_up = -1, bad_down = -1;
    vq.up.for_each([&](int x) {
        if (bad_up >= 0) return;
        Bitset below = p.strict_down(x);
        below.set(x);
        if (!vq.down.subset_of(below)) {
            Bitset stray = vq.down;
            stray.andnot(below);
            bad_up = x;
            bad_down = stray.find_first();
        }
    });
    if (bad_up >= 0)
        throw InconsistentVirtualQuery("down element not below up element", bad_down, bad_up);

    Bitset common = vq.up;
    common &= vq.down;
    const int c = common.count();
    if (c > 1) {
        int first = common.find_first();
        throw InconsistentVirtualQuery("up and down sets share two elements", first,
                                       common.find_next(first + 1));
    }
    std::optional<ElementId> derived;
    if (c == 1) derived = common.find_first();
    if (vq.target.has_value() && vq.target != derived)
        throw InconsistentVirtualQuery("declared target does not match the sets",
                                       vq.target.value_or(0), derived.value_or(0));
}

}  // namespace

ExplicitOracle explicit_oracle(const Poset& p, VirtualQuery vq) {
    validate_query(p, vq);
    Bitset common = vq.up;
    common &= vq.down;
    vq.target.reset();
    if (common.any()) vq.target = common.find_first();
    return ExplicitOracle(std::move(vq));
}

VirtualQuery random_virtual_query(const Poset& p, std::uint64_t seed, bool want_present) {
    std::mt19937_64 rng(mix_seed(seed, want_present ? 1 : 2));
    const int n = p.size();
    VirtualQuery vq{Bitset(n + 1), Bitset(n + 1), std::nullopt};

    if (want_present) {
        int z = 1 + static_cast<int>(rng_below(rng, n));
        vq.up.set(z);
        vq.up = p.up_closure(vq.up);
        vq.down.set(z);
        vq.down = p.down_closure(vq.down);
        vq.target = z;
        return vq;
    }

    // Filter from a small random seed set, then an ideal sampled inside the
    // set of common strict lower bounds; empty intersection by construction.
    Bitset seeds(n + 1);
    int picks = 1 + static_cast<int>(rng_below(rng, 2));
    for (int i = 0; i < picks; ++i) seeds.set(1 + static_cast<int>(rng_below(rng, n)));
    vq.up = p.up_closure(seeds);

    Bitset below(n + 1);
    for (int x = 1; x <= n; ++x) below.set(x);
    vq.up.for_each([&](int x) {
        Bitset down_incl = p.strict_down(x);
        down_incl.set(x);
        below &= down_incl;
    });
    below.andnot(vq.up);

    if (below.any()) {
        Bitset dseeds(n + 1);
        int dpicks = 1 + static_cast<int>(rng_below(rng, 2));
        for (int i = 0; i < dpicks; ++i) {
            int k = static_cast<int>(rng_below(rng, below.count()));
            dseeds.set(below.nth_set(k));
        }
        vq.down = p.down_closure(dseeds);
    }
    return vq;
}

namespace {
constexpr std::uint8_t kEmpty = 0, kClaimed = 1, kTrue = 2, kFalse = 3;
}

LedgeredOracle::LedgeredOracle(QueryOracle& inner, int n)
    : inner_(inner), n_(n), cells_(std::make_unique<std::atomic<std::uint8_t>[]>(2 * (n + 1))) {}

bool LedgeredOracle::ask(bool is_geq, ElementId x, bool& cached) {
    if (x < 1 || x > n_) throw IndexOutOfRange(x, n_);
    auto& cell = cells_[2 * x + (is_geq ? 0 : 1)];

    std::uint8_t state = cell.load(std::memory_order_acquire);
    if (state < kTrue) {
        std::uint8_t expected = kEmpty;
        if (state == kEmpty &&
            cell.compare_exchange_strong(expected, kClaimed, std::memory_order_acq_rel)) {
            bool answer = is_geq ? inner_.geq(x) : inner_.leq(x);
            (is_geq ? geq_calls_ : leq_calls_).fetch_add(1, std::memory_order_relaxed);
            cell.store(answer ? kTrue : kFalse, std::memory_order_release);
            cached = false;
            return answer;
        }
        // Someone else holds the claim; wait for the published answer.
        while ((state = cell.load(std::memory_order_acquire)) < kTrue) std::this_thread::yield();
    }
    duplicates_.fetch_add(1, std::memory_order_relaxed);
    cached = true;
    return state == kTrue;
}

bool LedgeredOracle::geq(ElementId x) {
    bool cached;
    return ask(true, x, cached);
}

bool LedgeredOracle::leq(ElementId x) {
    bool cached;
    return ask(false, x, cached);
}

bool LedgeredOracle::geq_tracked(ElementId x, bool& cached) { return ask(true, x, cached); }
bool LedgeredOracle::leq_tracked(ElementId x, bool& cached) { return ask(false, x, cached); }

LedgerCounters LedgeredOracle::counters() const {
    return {geq_calls_.load(), leq_calls_.load(), duplicates_.load()};
}

}  // namespace posearch
