#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "isingclt/lattice.hpp"
#include "isingclt/rational.hpp"

namespace isingclt {

/// Ordered sequence b = (t_1, ..., t_m) of lattice points.
using SpinSequence = std::vector<Point>;

/// A multiset of lattice edges: each edge with multiplicity >= 1.
struct Family {
    std::map<Edge, int> entries;

    Family() = default;
    explicit Family(std::map<Edge, int> e);

    /// Adds `mult` copies of e.
    Family& add(const Edge& e, int mult = 1);
    bool empty() const { return entries.empty(); }

    /// Edges repeated per multiplicity (the associated sequence).
    std::vector<Edge> expanded() const;

    friend auto operator<=>(const Family&, const Family&) = default;
    friend bool operator==(const Family&, const Family&) = default;
};

int family_length(const Family& g);
BigInt family_factorial(const Family& g);
std::set<Point> family_support(const Family& g);

/// Same family translated by `offset`.
Family shifted(const Family& g, const Point& offset);

struct AssociatedGraph {
    std::set<Point> vertices;
    std::vector<Edge> edges;
};

AssociatedGraph associated_graph(const SpinSequence& b, const Family& g);

/// Whether the associated graph of b and g is connected.
/// Throws std::invalid_argument when both are empty.
bool connects(const SpinSequence& b, const Family& g);

/// Largest family length enumerate_connected accepts by default.
int default_enumeration_cap(int nu);

/// All families of total multiplicity n that connect b, each once, sorted.
/// Throws LimitExceeded when n > cap (cap < 0 selects the default).
std::vector<Family> enumerate_connected(const SpinSequence& b, int n, int cap = -1);

// Line-oriented text form. One entry per line, "a;b;mult" with
// comma-separated coordinates; a line "--" ends each family.
void write_families(std::ostream& os, const std::vector<Family>& families);
std::vector<Family> read_families(std::istream& is);

}  // namespace isingclt
