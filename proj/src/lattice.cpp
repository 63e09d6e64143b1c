#include "isingclt/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace isingclt {

namespace {

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(x, y, &out)) {
        throw std::overflow_error("lattice coordinate overflow");
    }
    return out;
}

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(x, y, &out)) {
        throw std::overflow_error("lattice coordinate overflow");
    }
    return out;
}

std::int64_t floor_div(std::int64_t x, std::int64_t k) {
    std::int64_t q = x / k;
    if ((x % k != 0) && ((x < 0) != (k < 0))) {
        --q;
    }
    return q;
}

void require_block_side(std::int64_t k) {
    if (k <= 1) {
        throw std::invalid_argument("block side k must be > 1");
    }
}

}  // namespace

Point::Point(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}

Point::Point(std::initializer_list<std::int64_t> coords) : coords_(coords) {}

Point Point::origin(int nu) {
    if (nu < 1) {
        throw std::invalid_argument("dimension must be >= 1");
    }
    return Point(std::vector<std::int64_t>(static_cast<std::size_t>(nu), 0));
}

Point Point::shifted(const Point& offset) const {
    if (offset.dim() != dim()) {
        throw std::invalid_argument("dimension mismatch in shift");
    }
    std::vector<std::int64_t> out(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        out[i] = checked_add(coords_[i], offset.coords_[i]);
    }
    return Point(std::move(out));
}

Point Point::step(int axis, int sign) const {
    std::vector<std::int64_t> out = coords_;
    auto& c = out.at(static_cast<std::size_t>(axis));
    c = checked_add(c, sign >= 0 ? 1 : -1);
    return Point(std::move(out));
}

std::ostream& operator<<(std::ostream& os, const Point& p) {
    os << '(';
    for (int i = 0; i < p.dim(); ++i) {
        if (i) os << ',';
        os << p[i];
    }
    return os << ')';
}

std::string to_string(const Point& p) {
    std::ostringstream os;
    os << p;
    return os.str();
}

Point parse_point(const std::string& text) {
    std::string_view v(text);
    while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
    while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
    if (v.size() >= 2 && v.front() == '(' && v.back() == ')') v = v.substr(1, v.size() - 2);
    std::vector<std::int64_t> coords;
    while (true) {
        const auto comma = v.find(',');
        const auto tok = v.substr(0, comma);
        std::int64_t x = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
            throw std::invalid_argument("malformed point '" + text + "'");
        }
        coords.push_back(x);
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return Point(std::move(coords));
}

std::vector<Point> parse_points(const std::string& text) {
    std::vector<Point> out;
    std::size_t start = 0;
    while (true) {
        const auto semi = text.find(';', start);
        out.push_back(parse_point(text.substr(start, semi - start)));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    for (const auto& p : out) {
        if (p.dim() != out.front().dim()) throw std::invalid_argument("points of mixed dimension");
    }
    return out;
}

Edge::Edge(Point a, Point b) {
    if (distance(a, b) != 1) {
        throw std::invalid_argument("edge endpoints must be lattice neighbours");
    }
    if (b < a) std::swap(a, b);
    a_ = std::move(a);
    b_ = std::move(b);
}

std::ostream& operator<<(std::ostream& os, const Edge& e) {
    return os << '{' << e.a() << ',' << e.b() << '}';
}

std::size_t Cube::size() const {
    std::size_t n = 1;
    for (int i = 0; i < nu; ++i) n *= static_cast<std::size_t>(side());
    return n;
}

bool Cube::contains(const Point& t) const {
    if (t.dim() != nu) return false;
    for (int i = 0; i < nu; ++i) {
        if (t[i] < -N || t[i] > N) return false;
    }
    return true;
}

std::size_t Cube::index_of(const Point& t) const {
    if (!contains(t)) {
        throw std::out_of_range("point " + to_string(t) + " outside cube");
    }
    std::size_t idx = 0;
    for (int i = 0; i < nu; ++i) {
        idx = idx * static_cast<std::size_t>(side()) + static_cast<std::size_t>(t[i] + N);
    }
    return idx;
}

Point Cube::point_at(std::size_t index) const {
    std::vector<std::int64_t> c(static_cast<std::size_t>(nu));
    const auto s = static_cast<std::size_t>(side());
    for (int i = nu - 1; i >= 0; --i) {
        c[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(index % s) - N;
        index /= s;
    }
    return Point(std::move(c));
}

void BlockParams::validate(int nu) const {
    require_block_side(k);
    if (alpha < static_cast<double>(nu)) {
        throw std::invalid_argument("alpha must be >= nu");
    }
}

std::int64_t distance(const Point& s, const Point& t) {
    if (s.dim() != t.dim()) {
        throw std::invalid_argument("dimension mismatch in distance");
    }
    std::int64_t d = 0;
    for (int i = 0; i < s.dim(); ++i) {
        const std::int64_t diff = s[i] > t[i] ? s[i] - t[i] : t[i] - s[i];
        d = checked_add(d, diff);
    }
    return d;
}

std::vector<Edge> neighbor_edges(const Point& t) {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(2 * t.dim()));
    for (int axis = 0; axis < t.dim(); ++axis) {
        out.emplace_back(t, t.step(axis, -1));
        out.emplace_back(t, t.step(axis, +1));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Point> cube_points(int nu, std::int64_t N) {
    if (N < 0) throw std::invalid_argument("cube half-side must be >= 0");
    const Cube cube{nu, N};
    std::vector<Point> out;
    out.reserve(cube.size());
    for (std::size_t i = 0; i < cube.size(); ++i) out.push_back(cube.point_at(i));
    return out;
}

std::vector<Edge> cube_edges(const Cube& cube) {
    std::vector<Edge> out;
    for (const auto& p : cube_points(cube.nu, cube.N)) {
        for (int axis = 0; axis < cube.nu; ++axis) {
            if (p[axis] < cube.N) out.emplace_back(p, p.step(axis, +1));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Point block_map(const Point& t, std::int64_t k) {
    require_block_side(k);
    std::vector<std::int64_t> c(static_cast<std::size_t>(t.dim()));
    for (int i = 0; i < t.dim(); ++i) c[static_cast<std::size_t>(i)] = floor_div(t[i], k);
    return Point(std::move(c));
}

std::vector<Point> block_preimage(const Point& tau, std::int64_t k) {
    require_block_side(k);
    const int nu = tau.dim();
    std::vector<std::int64_t> base(static_cast<std::size_t>(nu));
    for (int i = 0; i < nu; ++i) base[static_cast<std::size_t>(i)] = checked_mul(tau[i], k);
    std::size_t count = 1;
    for (int i = 0; i < nu; ++i) count *= static_cast<std::size_t>(k);

    std::vector<Point> out;
    out.reserve(count);
    std::vector<std::int64_t> offset(static_cast<std::size_t>(nu), 0);
    for (std::size_t n = 0; n < count; ++n) {
        std::vector<std::int64_t> c(static_cast<std::size_t>(nu));
        for (int i = 0; i < nu; ++i) {
            const auto u = static_cast<std::size_t>(i);
            c[u] = checked_add(base[u], offset[u]);
        }
        out.emplace_back(std::move(c));
        for (int i = nu - 1; i >= 0; --i) {
            auto& o = offset[static_cast<std::size_t>(i)];
            if (++o < k) break;
            o = 0;
        }
    }
    return out;
}

}  // namespace isingclt
