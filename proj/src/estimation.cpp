#include "isingclt/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "isingclt/free_field.hpp"
#include "isingclt/series.hpp"

namespace isingclt {

bool LinkedUniverse::linked(int i, int j) const {
    const auto& l = links.at(static_cast<std::size_t>(i));
    return std::find(l.begin(), l.end(), j) != l.end();
}

void LinkedUniverse::validate() const {
    if (L < 1) throw std::invalid_argument("degree bound L must be >= 1");
    for (int i = 0; i < size(); ++i) {
        const auto& l = links[static_cast<std::size_t>(i)];
        std::vector<int> sorted = l;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("element " + std::to_string(i) + " lists a link twice");
        }
        if (!linked(i, i)) throw std::invalid_argument("relation is not reflexive at " + std::to_string(i));
        if (static_cast<int>(l.size()) > L) {
            throw std::invalid_argument("element " + std::to_string(i) + " exceeds degree bound L");
        }
        for (int j : l) {
            if (j < 0 || j >= size()) throw std::invalid_argument("link to unknown element");
            if (!linked(j, i)) throw std::invalid_argument("relation is not symmetric");
        }
    }
}

long upsilon(const LinkedUniverse& u, const AbstractFamily& fam, int i) {
    if (!fam.count(i)) throw std::invalid_argument("element " + std::to_string(i) + " not in family");
    long total = 0;
    for (const auto& [j, n] : fam) {
        if (u.linked(i, j)) total += n;
    }
    return total;
}

EstimationCheck estimation_check(const LinkedUniverse& u, const AbstractFamily& fam) {
    u.validate();
    if (fam.empty()) throw std::invalid_argument("estimation_check needs a nonempty family");
    for (const auto& [i, n] : fam) {
        if (i < 0 || i >= u.size()) throw std::invalid_argument("family element outside universe");
        if (n < 1) throw std::invalid_argument("family multiplicities must be >= 1");
    }
    const double c_l = std::log(static_cast<double>(u.L)) + static_cast<double>(u.L) * u.L;
    EstimationCheck r;
    for (const auto& [i, n] : fam) {
        r.f += c_l * n + n * std::log(static_cast<double>(n));
        r.g += n * std::log(static_cast<double>(upsilon(u, fam, i)));
    }
    r.holds = r.f > r.g - kEstimationSlack * std::max(std::abs(r.f), std::abs(r.g));
    return r;
}

SemiInvariantBound bound_check_semi_invariant(const SpinSequence& b, const Family& gamma) {
    if (b.empty()) throw std::invalid_argument("bound check needs a nonempty sequence");
    SemiInvariantBound r;
    r.value = free_semi_invariant(b, gamma);
    const auto m = static_cast<unsigned>(b.size());
    const ExactRational c3 = c3_lower_bound(b.front().dim());
    ExactRational power = 1;
    for (unsigned i = 0; i < m + static_cast<unsigned>(family_length(gamma)); ++i) power *= c3;
    r.bound = power * ExactRational(factorial(m) * family_factorial(gamma));
    r.holds = abs(r.value) <= r.bound;
    return r;
}

}  // namespace isingclt
