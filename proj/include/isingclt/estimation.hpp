#pragma once

// The counting inequality behind the semi-invariant bounds: for a reflexive,
// symmetric link relation in which every element is linked to at most L
// elements, and any family {(T_i, n_i)},
//
//   C_L sum n_i + sum n_i ln n_i  >  sum n_i ln upsilon(T_i),   C_L = ln L + L^2,
//
// where upsilon(T_i) sums the multiplicities of the elements linked to T_i.

#include <map>
#include <vector>

#include "isingclt/families.hpp"

namespace isingclt {

/// Elements 0..size-1 with a link relation given as adjacency lists.
struct LinkedUniverse {
    std::vector<std::vector<int>> links;  // links[i]: elements linked to i (including i)
    int L = 1;

    int size() const { return static_cast<int>(links.size()); }
    bool linked(int i, int j) const;
    /// Throws std::invalid_argument unless the relation is reflexive,
    /// symmetric and of degree <= L.
    void validate() const;
};

/// element -> multiplicity (>= 1).
using AbstractFamily = std::map<int, int>;

/// Sum of n_j over family members j linked to i.
long upsilon(const LinkedUniverse& u, const AbstractFamily& fam, int i);

struct EstimationCheck {
    double f = 0.0;  // C_L sum n_i + sum n_i ln n_i
    double g = 0.0;  // sum n_i ln upsilon_i
    bool holds = false;
};

/// Relative slack used when comparing f and g in floating point.
inline constexpr double kEstimationSlack = 1e-9;

EstimationCheck estimation_check(const LinkedUniverse& u, const AbstractFamily& fam);

struct SemiInvariantBound {
    ExactRational value;  // <Q'_b, Phi'_gamma>_0
    ExactRational bound;  // c^{m+|gamma|} m! gamma! with c an exact lower bound on C3
    bool holds = false;
};

/// Exact check of |<Q'_b, Phi'_gamma>_0| <= C3^{m+|gamma|} m! gamma!. The
/// comparison uses a rational lower bound on C3, so `holds` implies the
/// inequality for the true constant.
SemiInvariantBound bound_check_semi_invariant(const SpinSequence& b, const Family& gamma);

}  // namespace isingclt
