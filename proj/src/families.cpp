#include "isingclt/families.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "isingclt/errors.hpp"

namespace isingclt {

Family::Family(std::map<Edge, int> e) : entries(std::move(e)) {
    for (const auto& [edge, mult] : entries) {
        if (mult < 1) throw std::invalid_argument("family multiplicities must be >= 1");
    }
}

Family& Family::add(const Edge& e, int mult) {
    if (mult < 1) throw std::invalid_argument("family multiplicities must be >= 1");
    entries[e] += mult;
    return *this;
}

std::vector<Edge> Family::expanded() const {
    std::vector<Edge> out;
    for (const auto& [edge, mult] : entries) out.insert(out.end(), static_cast<std::size_t>(mult), edge);
    return out;
}

int family_length(const Family& g) {
    int n = 0;
    for (const auto& [edge, mult] : g.entries) n += mult;
    return n;
}

BigInt family_factorial(const Family& g) {
    BigInt out = 1;
    for (const auto& [edge, mult] : g.entries) out *= factorial(static_cast<unsigned>(mult));
    return out;
}

std::set<Point> family_support(const Family& g) {
    std::set<Point> out;
    for (const auto& [edge, mult] : g.entries) {
        out.insert(edge.a());
        out.insert(edge.b());
    }
    return out;
}

Family shifted(const Family& g, const Point& offset) {
    Family out;
    for (const auto& [edge, mult] : g.entries) {
        out.add(Edge(edge.a().shifted(offset), edge.b().shifted(offset)), mult);
    }
    return out;
}

AssociatedGraph associated_graph(const SpinSequence& b, const Family& g) {
    AssociatedGraph graph;
    graph.vertices.insert(b.begin(), b.end());
    for (const auto& [edge, mult] : g.entries) {
        graph.vertices.insert(edge.a());
        graph.vertices.insert(edge.b());
        graph.edges.insert(graph.edges.end(), static_cast<std::size_t>(mult), edge);
    }
    return graph;
}

bool connects(const SpinSequence& b, const Family& g) {
    if (b.empty() && g.empty()) {
        throw std::invalid_argument("connects: sequence and family are both empty");
    }
    const AssociatedGraph graph = associated_graph(b, g);
    std::vector<Point> verts(graph.vertices.begin(), graph.vertices.end());
    auto index = [&](const Point& p) {
        return static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), p) - verts.begin());
    };
    std::vector<std::size_t> parent(verts.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = verts.size();
    for (const auto& [edge, mult] : g.entries) {
        const auto ra = find(index(edge.a()));
        const auto rb = find(index(edge.b()));
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components == 1;
}

int default_enumeration_cap(int nu) {
    switch (nu) {
        case 1: return 6;
        case 2: return 4;
        default: return 2;
    }
}

namespace {

using EdgeSet = std::vector<Edge>;  // sorted, distinct

std::set<Point> vertices_of(const EdgeSet& edges) {
    std::set<Point> out;
    for (const auto& e : edges) {
        out.insert(e.a());
        out.insert(e.b());
    }
    return out;
}

std::int64_t distance_to(const std::set<Point>& verts, const Point& p) {
    std::int64_t best = -1;
    for (const auto& v : verts) {
        const auto d = distance(v, p);
        if (best < 0 || d < best) best = d;
    }
    return best;
}

// Connected edge sets containing `root` with at most `max_edges` edges, such
// that every point in `targets` could still be reached within the budget.
std::vector<EdgeSet> grow_animals(const Point& root, const std::vector<Point>& targets,
                                  int max_edges) {
    std::vector<EdgeSet> all;
    std::set<EdgeSet> frontier;
    for (const auto& e : neighbor_edges(root)) frontier.insert(EdgeSet{e});

    for (int size = 1; size <= max_edges && !frontier.empty(); ++size) {
        std::set<EdgeSet> next;
        for (const auto& animal : frontier) {
            const auto verts = vertices_of(animal);
            const int budget = max_edges - size;
            bool reachable = true;
            for (const auto& t : targets) {
                if (!verts.count(t) && distance_to(verts, t) > budget) {
                    reachable = false;
                    break;
                }
            }
            if (!reachable) continue;
            all.push_back(animal);
            if (size == max_edges) continue;
            for (const auto& v : verts) {
                for (const auto& e : neighbor_edges(v)) {
                    if (std::binary_search(animal.begin(), animal.end(), e)) continue;
                    EdgeSet grown = animal;
                    grown.insert(std::upper_bound(grown.begin(), grown.end(), e), e);
                    next.insert(std::move(grown));
                }
            }
        }
        frontier = std::move(next);
    }
    return all;
}

// Calls emit(parts) for each composition of n into parts.size() positive parts.
template <class Emit>
void compositions(int n, std::vector<int>& parts, std::size_t at, Emit&& emit) {
    if (at + 1 == parts.size()) {
        parts[at] = n;
        emit(parts);
        return;
    }
    const int rest = static_cast<int>(parts.size() - at - 1);
    for (int v = 1; v <= n - rest; ++v) {
        parts[at] = v;
        compositions(n - v, parts, at + 1, emit);
    }
}

}  // namespace

std::vector<Family> enumerate_connected(const SpinSequence& b, int n, int cap) {
    if (b.empty()) throw std::invalid_argument("enumerate_connected: empty base sequence");
    if (n < 0) throw std::invalid_argument("enumerate_connected: negative length");
    const int nu = b.front().dim();
    for (const auto& t : b) {
        if (t.dim() != nu) throw std::invalid_argument("enumerate_connected: dimension mismatch");
    }
    const int limit = cap < 0 ? default_enumeration_cap(nu) : cap;
    if (n > limit) {
        throw LimitExceeded("family length " + std::to_string(n) + " exceeds enumeration cap " +
                            std::to_string(limit) + " for nu=" + std::to_string(nu));
    }

    std::vector<Point> distinct(b.begin(), b.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<Family> out;
    if (n == 0) {
        if (distinct.size() == 1) out.emplace_back();
        return out;
    }

    for (const auto& animal : grow_animals(distinct.front(), distinct, n)) {
        const auto verts = vertices_of(animal);
        const bool covers = std::all_of(distinct.begin(), distinct.end(),
                                        [&](const Point& t) { return verts.count(t) > 0; });
        if (!covers) continue;
        std::vector<int> parts(animal.size());
        compositions(n, parts, 0, [&](const std::vector<int>& mult) {
            Family f;
            for (std::size_t i = 0; i < animal.size(); ++i) f.entries.emplace(animal[i], mult[i]);
            out.push_back(std::move(f));
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void write_coords(std::ostream& os, const Point& p) {
    for (int i = 0; i < p.dim(); ++i) {
        if (i) os << ',';
        os << p[i];
    }
}

}  // namespace

void write_families(std::ostream& os, const std::vector<Family>& families) {
    for (const auto& f : families) {
        for (const auto& [edge, mult] : f.entries) {
            write_coords(os, edge.a());
            os << ';';
            write_coords(os, edge.b());
            os << ';' << mult << '\n';
        }
        os << "--\n";
    }
}

std::vector<Family> read_families(std::istream& is) {
    std::vector<Family> out;
    Family current;
    std::string line;
    bool open = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line == "--") {
            out.push_back(std::move(current));
            current = Family{};
            open = false;
            continue;
        }
        const auto p1 = line.find(';');
        const auto p2 = line.find(';', p1 == std::string::npos ? p1 : p1 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos) {
            throw std::invalid_argument("malformed family line: '" + line + "'");
        }
        current.add(Edge(parse_point(line.substr(0, p1)), parse_point(line.substr(p1 + 1, p2 - p1 - 1))),
                    std::stoi(line.substr(p2 + 1)));
        open = true;
    }
    if (open) throw std::invalid_argument("family text ends without terminator");
    return out;
}

}  // namespace isingclt
