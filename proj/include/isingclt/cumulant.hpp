#pragma once

// Joint cumulants (semi-invariants) as partition sums over moments, and the
// inverse map from cumulants back to moments. Everything here is generic in
// the value type: exact rationals for the free field, doubles for Gibbs
// expectations and sample moments.
//
// Variables are indexed 0..m-1 and subsets are passed around as bitmasks.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isingclt/errors.hpp"

namespace isingclt {

inline constexpr int kDefaultPartitionCap = 12;

using IndexMask = std::uint32_t;

/// Blocks of a set partition of {0..m-1}; each block sorted, blocks ordered
/// by their smallest element.
struct SetPartition {
    std::vector<std::vector<int>> blocks;
};

inline void check_partition_order(int m, int cap) {
    if (m < 1) throw std::invalid_argument("partition order must be >= 1");
    if (m > cap || m > 31) {
        throw LimitExceeded("partition order " + std::to_string(m) + " exceeds cap " +
                            std::to_string(cap));
    }
}

/// Walks the set partitions of {0..m-1} in restricted-growth-string order.
class PartitionWalker {
public:
    explicit PartitionWalker(int m, int cap = kDefaultPartitionCap)
        : rgs_(static_cast<std::size_t>(m), 0), prefix_max_(static_cast<std::size_t>(m), 0) {
        check_partition_order(m, cap);
    }

    std::span<const int> rgs() const { return rgs_; }
    int block_count() const { return blocks_; }

    /// Block bitmasks of the current partition, written into `masks`.
    void block_masks(std::vector<IndexMask>& masks) const {
        masks.assign(static_cast<std::size_t>(blocks_), 0);
        for (std::size_t i = 0; i < rgs_.size(); ++i) {
            masks[static_cast<std::size_t>(rgs_[i])] |= IndexMask{1} << i;
        }
    }

    SetPartition current() const {
        SetPartition p;
        p.blocks.resize(static_cast<std::size_t>(blocks_));
        for (std::size_t i = 0; i < rgs_.size(); ++i) {
            p.blocks[static_cast<std::size_t>(rgs_[i])].push_back(static_cast<int>(i));
        }
        return p;
    }

    /// Advances; false once every partition has been visited.
    bool next() {
        for (std::size_t i = rgs_.size(); i-- > 1;) {
            if (rgs_[i] <= prefix_max_[i]) {
                ++rgs_[i];
                std::fill(rgs_.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs_.end(), 0);
                refresh(i);
                return true;
            }
        }
        return false;
    }

private:
    void refresh(std::size_t from) {
        int mx = from ? prefix_max_[from] : 0;
        if (from) mx = std::max(mx, rgs_[from]);
        auto r = rgs_.begin() + static_cast<std::ptrdiff_t>(from) + 1;
        for (auto p = prefix_max_.begin() + static_cast<std::ptrdiff_t>(from) + 1; p != prefix_max_.end(); ++p, ++r) {
            *p = mx;
            mx = std::max(mx, *r);
        }
        blocks_ = rgs_.empty() ? 0 : mx + 1;
    }

    std::vector<int> rgs_;
    std::vector<int> prefix_max_;  // max of rgs_[0..i-1]
    int blocks_ = 1;
};

/// Every set partition of {0..m-1}, in restricted-growth-string order.
inline std::vector<SetPartition> partitions(int m, int cap = kDefaultPartitionCap) {
    PartitionWalker walk(m, cap);
    std::vector<SetPartition> out;
    do {
        out.push_back(walk.current());
    } while (walk.next());
    return out;
}

/// Calls visit(span<const IndexMask>) once per partition of {0..m-1}.
template <class Visitor>
void for_each_partition(int m, Visitor&& visit, int cap = kDefaultPartitionCap) {
    PartitionWalker walk(m, cap);
    std::vector<IndexMask> masks;
    do {
        walk.block_masks(masks);
        visit(std::span<const IndexMask>(masks));
    } while (walk.next());
}

namespace detail {

/// Memoizes a subset function over the 2^m masks of {0..m-1}.
template <class Value, class Fn>
class SubsetTable {
public:
    SubsetTable(int m, Fn& fn) : fn_(fn), cache_(std::size_t{1} << m) {}

    const Value& operator()(IndexMask mask) {
        auto& slot = cache_[mask];
        if (!slot) slot.emplace(fn_(mask));
        return *slot;
    }

private:
    Fn& fn_;
    std::vector<std::optional<Value>> cache_;
};

template <class Value>
bool is_zero(const Value& v) {
    return v == 0;
}

// Sum over partitions of weight(k) * prod_blocks table(block).
template <class Value, class Table, class Weight>
Value partition_sum(int m, Table& table, Weight&& weight, int cap) {
    Value total = 0;
    Value product;
    for_each_partition(
        m,
        [&](std::span<const IndexMask> blocks) {
            product = weight(static_cast<int>(blocks.size()));
            for (IndexMask b : blocks) {
                const Value& v = table(b);
                if (is_zero(v)) return;
                product *= v;
            }
            total += product;
        },
        cap);
    return total;
}

}  // namespace detail

/// Joint cumulant of variables 0..m-1:
///   sum over partitions {S_1..S_k} of (-1)^(k-1) (k-1)! E(X_S1)...E(X_Sk).
/// `moment(mask)` returns E(prod_{i in mask} X_i); it is called at most once
/// per mask.
template <class Value, class MomentFn>
Value cumulant(MomentFn&& moment, int m, int cap = kDefaultPartitionCap) {
    check_partition_order(m, cap);
    std::vector<Value> weights(static_cast<std::size_t>(m) + 1);
    Value f = 1;
    for (int k = 1; k <= m; ++k) {
        weights[static_cast<std::size_t>(k)] = (k % 2 == 1) ? Value(f) : Value(-f);
        f *= k;
    }
    detail::SubsetTable<Value, std::remove_reference_t<MomentFn>> table(m, moment);
    return detail::partition_sum<Value>(
        m, table, [&](int k) { return weights[static_cast<std::size_t>(k)]; }, cap);
}

/// Joint moment of variables 0..m-1 from their cumulants:
///   E(X_M) = sum over partitions of <X_S1>...<X_Sk>.
/// `cumulant_of(mask)` returns the joint cumulant of the variables in mask.
template <class Value, class CumulantFn>
Value moment_from_cumulants(CumulantFn&& cumulant_of, int m, int cap = kDefaultPartitionCap) {
    check_partition_order(m, cap);
    detail::SubsetTable<Value, std::remove_reference_t<CumulantFn>> table(m, cumulant_of);
    return detail::partition_sum<Value>(m, table, [](int) { return Value(1); }, cap);
}

}  // namespace isingclt
