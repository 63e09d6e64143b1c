#include "isingclt/free_field.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace isingclt {

PointMultiset to_multiset(const SpinSequence& b) {
    PointMultiset ms;
    for (const auto& t : b) ++ms[t];
    return ms;
}

ExactRational free_moment(const PointMultiset& ms) {
    for (const auto& [point, mult] : ms) {
        if (mult % 2 != 0) return 0;
    }
    return 1;
}

ExactRational free_semi_invariant(const SpinSequence& b, const Family& gamma, int cap) {
    const auto edges = gamma.expanded();
    const int m = static_cast<int>(b.size() + edges.size());
    check_partition_order(m, cap);

    // Each variable is a product of spins; its spin content mod 2 is a bitmask
    // over the distinct points involved, and E_0 of a product of variables is
    // 1 exactly when the XOR of their masks vanishes.
    std::vector<Point> points(b.begin(), b.end());
    for (const auto& e : edges) {
        points.push_back(e.a());
        points.push_back(e.b());
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    auto bit = [&](const Point& p) {
        return std::uint64_t{1} << (std::lower_bound(points.begin(), points.end(), p) - points.begin());
    };

    std::vector<std::uint64_t> parity;
    parity.reserve(static_cast<std::size_t>(m));
    for (const auto& t : b) parity.push_back(bit(t));
    for (const auto& e : edges) parity.push_back(bit(e.a()) ^ bit(e.b()));

    auto moment = [&](IndexMask mask) -> BigInt {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < parity.size(); ++i) {
            if (mask & (IndexMask{1} << i)) acc ^= parity[i];
        }
        return acc == 0 ? 1 : 0;
    };
    return ExactRational(cumulant<BigInt>(moment, m, cap));
}

}  // namespace isingclt
