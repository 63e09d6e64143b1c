#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace isingclt {

/// A site of the integer lattice Z^nu. The dimension is the coordinate count.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<std::int64_t> coords);
    Point(std::initializer_list<std::int64_t> coords);

    /// The origin of Z^nu.
    static Point origin(int nu);

    int dim() const { return static_cast<int>(coords_.size()); }
    std::int64_t operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
    const std::vector<std::int64_t>& coords() const { return coords_; }

    /// Checked translation; throws std::overflow_error on wraparound.
    Point shifted(const Point& offset) const;
    /// Unit step along axis (+1 or -1 in `sign`).
    Point step(int axis, int sign) const;

    friend auto operator<=>(const Point&, const Point&) = default;
    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<std::int64_t> coords_;
};

std::ostream& operator<<(std::ostream& os, const Point& p);
std::string to_string(const Point& p);

/// Parses "x1,...,xnu", optionally wrapped in parentheses.
Point parse_point(const std::string& text);
/// Parses points separated by ';', e.g. "0;1" or "(0,0);(1,0)".
std::vector<Point> parse_points(const std::string& text);

/// Unordered pair of lattice neighbours, stored with the smaller endpoint first.
class Edge {
public:
    /// Throws std::invalid_argument unless distance(a, b) == 1.
    Edge(Point a, Point b);

    const Point& a() const { return a_; }
    const Point& b() const { return b_; }
    bool contains(const Point& t) const { return a_ == t || b_ == t; }

    friend auto operator<=>(const Edge&, const Edge&) = default;
    friend bool operator==(const Edge&, const Edge&) = default;

private:
    Point a_;
    Point b_;
};

std::ostream& operator<<(std::ostream& os, const Edge& e);

/// Cube Lambda_N = { t : |t_i| <= N } in dimension nu.
struct Cube {
    int nu = 1;
    std::int64_t N = 0;

    std::int64_t side() const { return 2 * N + 1; }
    std::size_t size() const;
    bool contains(const Point& t) const;
    /// Row-major index of t in lexicographic order of cube_points.
    std::size_t index_of(const Point& t) const;
    Point point_at(std::size_t index) const;

    friend bool operator==(const Cube&, const Cube&) = default;
};

struct BlockParams {
    std::int64_t k = 2;
    double alpha = 1.0;

    /// Throws std::invalid_argument on k <= 1 or alpha < nu.
    void validate(int nu) const;
};

/// l1 distance; throws std::invalid_argument on dimension mismatch.
std::int64_t distance(const Point& s, const Point& t);

/// The 2*nu edges incident to t, in canonical order.
std::vector<Edge> neighbor_edges(const Point& t);

/// All points of Lambda_N in lexicographic order.
std::vector<Point> cube_points(int nu, std::int64_t N);

/// Edges with both endpoints in the cube (the set R_N), canonical order.
std::vector<Edge> cube_edges(const Cube& cube);

/// Coordinate-wise floor division by k.
Point block_map(const Point& t, std::int64_t k);

/// The k^nu points mapped onto tau by block_map, lexicographic order.
std::vector<Point> block_preimage(const Point& tau, std::int64_t k);

}  // namespace isingclt
