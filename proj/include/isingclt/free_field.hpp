#pragma once

#include <map>

#include "isingclt/cumulant.hpp"
#include "isingclt/families.hpp"
#include "isingclt/lattice.hpp"
#include "isingclt/rational.hpp"

namespace isingclt {

/// Multiset of lattice points: the index multiset of a spin product.
using PointMultiset = std::map<Point, int>;

PointMultiset to_multiset(const SpinSequence& b);

/// E_0[prod Q_t^{mult}] under independent fair signs: 1 if every
/// multiplicity is even, else 0.
ExactRational free_moment(const PointMultiset& ms);

/// Joint cumulant <Q_t1, ..., Q_tm, Phi_A1, ..., Phi_An>_0 where the A_i run
/// over the associated sequence of gamma. Throws LimitExceeded when
/// m + |gamma| exceeds `cap`.
ExactRational free_semi_invariant(const SpinSequence& b, const Family& gamma,
                                  int cap = kDefaultPartitionCap);

}  // namespace isingclt
