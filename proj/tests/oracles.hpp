#pragma once

// Reference computations used only by the tests. Each one is written
// independently of the library routine it checks.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include <gmpxx.h>

namespace oracle {

// Bell numbers from B(n+1) = sum_i C(n,i) B(i).
inline std::vector<mpz_class> bell_numbers(int n_max) {
    std::vector<mpz_class> b{1};
    for (int n = 0; n < n_max; ++n) {
        mpz_class next = 0, binom = 1;
        for (int i = 0; i <= n; ++i) {
            next += binom * b[static_cast<std::size_t>(i)];
            binom = binom * (n - i) / (i + 1);
        }
        b.push_back(next);
    }
    return b;
}

// Coefficients of the 1-D limiting variance e^{2 lambda}: 2^n / n!.
inline mpq_class two_pow_over_factorial(int n) {
    mpz_class num = 1, den = 1;
    for (int i = 1; i <= n; ++i) {
        num *= 2;
        den *= i;
    }
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

// E[Z^k] for a standard normal Z.
inline double gaussian_moment(int k) {
    if (k % 2) return 0.0;
    double m = 1.0;
    for (int j = k - 1; j > 0; j -= 2) m *= j;
    return m;
}

// All set partitions of {0..m-1} by recursive insertion; each block a list.
inline void all_partitions(int m, const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> rec = [&](int i) {
        if (i == m) {
            visit(blocks);
            return;
        }
        // Index loop: the recursion appends to `blocks`.
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            blocks[j].push_back(i);
            rec(i + 1);
            blocks[j].pop_back();
        }
        blocks.push_back({i});
        rec(i + 1);
        blocks.pop_back();
    };
    rec(0);
}

// Joint cumulant from a moment function of index lists.
inline mpq_class cumulant(int m, const std::function<mpq_class(const std::vector<int>&)>& moment) {
    mpq_class total = 0;
    all_partitions(m, [&](const std::vector<std::vector<int>>& blocks) {
        const int k = static_cast<int>(blocks.size());
        mpq_class term = (k % 2 ? 1 : -1);
        for (int j = 2; j < k; ++j) term *= j;
        for (const auto& blk : blocks) term *= moment(blk);
        total += term;
    });
    return total;
}

// A 1-D variable is a list of sites; the variable is the product of the
// spins at those sites. Free moment of a product of such variables.
inline mpq_class free_moment_1d(const std::vector<std::vector<std::int64_t>>& vars, const std::vector<int>& idx) {
    std::map<std::int64_t, int> count;
    for (int i : idx) {
        for (auto s : vars[static_cast<std::size_t>(i)]) ++count[s];
    }
    for (const auto& [s, c] : count) {
        if (c % 2) return 0;
    }
    return 1;
}

// 1-D edges are identified by their left endpoint.
using EdgeMultiset1D = std::map<std::int64_t, int>;

// Brute force: every multiset of n edges of Z^1 within reach of b whose
// associated graph (b's points plus edge endpoints) is connected.
inline std::set<EdgeMultiset1D> connected_families_1d(const std::vector<std::int64_t>& b, int n) {
    const auto [lo_it, hi_it] = std::minmax_element(b.begin(), b.end());
    const std::int64_t lo = *lo_it - n, hi = *hi_it + n;  // left endpoints in [lo, hi)
    std::set<EdgeMultiset1D> out;
    EdgeMultiset1D current;
    std::function<void(std::int64_t, int)> rec = [&](std::int64_t e, int left) {
        if (left == 0) {
            // Connectivity by flood fill over sites.
            std::set<std::int64_t> verts(b.begin(), b.end());
            for (const auto& [l, c] : current) {
                verts.insert(l);
                verts.insert(l + 1);
            }
            std::set<std::int64_t> seen{*verts.begin()};
            std::vector<std::int64_t> stack{*verts.begin()};
            while (!stack.empty()) {
                const auto v = stack.back();
                stack.pop_back();
                for (auto w : {v - 1, v + 1}) {
                    const auto edge_left = std::min(v, w);
                    if (current.count(edge_left) && !seen.count(w)) {
                        seen.insert(w);
                        stack.push_back(w);
                    }
                }
            }
            if (seen.size() == verts.size()) out.insert(current);
            return;
        }
        if (e >= hi) return;
        for (int c = left; c >= 1; --c) {
            current[e] = c;
            rec(e + 1, left - c);
        }
        current.erase(e);
        rec(e + 1, left);
    };
    rec(lo, n);
    return out;
}

}  // namespace oracle
