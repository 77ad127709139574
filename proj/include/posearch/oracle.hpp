#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>

#include "posearch/poset.hpp"

namespace posearch {

// The expensive comparison interface against a fixed query element.
// Implementations must be safe for concurrent calls.
class QueryOracle {
public:
    virtual ~QueryOracle() = default;
    virtual bool geq(ElementId x) = 0;  // does element x lie above the query
    virtual bool leq(ElementId x) = 0;  // does element x lie below the query
};

// Answer profile of a query element that may live outside the dataset:
// the elements answering true upward (up) and downward (down).
// Consistent when up is an up-set, down a down-set, every down element lies
// below every up element, and they intersect in at most one element.
// target is that element when the intersection is a singleton.
struct VirtualQuery {
    Bitset up, down;  // width n+1, bit i = element i
    std::optional<ElementId> target;
};

class ExplicitOracle final : public QueryOracle {
public:
    bool geq(ElementId x) override { return vq_.up.test(x); }
    bool leq(ElementId x) override { return vq_.down.test(x); }
    const VirtualQuery& query() const { return vq_; }

private:
    friend ExplicitOracle explicit_oracle(const Poset&, VirtualQuery);
    explicit ExplicitOracle(VirtualQuery vq) : vq_(std::move(vq)) {}
    VirtualQuery vq_;
};

// Validates the consistency invariants against p, derives target, and
// throws InconsistentVirtualQuery (with a witness pair) on violation.
ExplicitOracle explicit_oracle(const Poset& p, VirtualQuery vq);

// want_present: picks a target z and uses its exact answer profile.
// Otherwise samples a consistent profile with empty intersection; on posets
// where nothing fits below the sampled up-set the down part degenerates to
// the empty set.
VirtualQuery random_virtual_query(const Poset& p, std::uint64_t seed, bool want_present);

struct LedgerCounters {
    long geq_calls = 0;
    long leq_calls = 0;
    long duplicate_attempts = 0;
};

// Claim-once wrapper: each (element, direction) pair reaches the inner
// oracle exactly once. Later requests count as duplicate_attempts and reuse
// the published answer; concurrent requesters wait for the claimer.
class LedgeredOracle final : public QueryOracle {
public:
    LedgeredOracle(QueryOracle& inner, int n);

    bool geq(ElementId x) override;
    bool leq(ElementId x) override;

    // Same, reporting whether the answer was served from the ledger.
    bool geq_tracked(ElementId x, bool& cached);
    bool leq_tracked(ElementId x, bool& cached);

    LedgerCounters counters() const;

private:
    bool ask(bool is_geq, ElementId x, bool& cached);

    QueryOracle& inner_;
    int n_;
    std::unique_ptr<std::atomic<std::uint8_t>[]> cells_;  // 2 per element
    std::atomic<long> geq_calls_{0}, leq_calls_{0}, duplicates_{0};
};

}  // namespace posearch
