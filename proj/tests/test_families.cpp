#include "doctest.h"

#include <random>
#include <sstream>

#include "isingclt/errors.hpp"
#include "isingclt/families.hpp"
#include "oracles.hpp"

using namespace isingclt;

namespace {

Edge e1(std::int64_t left) { return Edge(Point{left}, Point{left + 1}); }

oracle::EdgeMultiset1D as_1d(const Family& g) {
    oracle::EdgeMultiset1D out;
    for (const auto& [e, c] : g.entries) out[e.a()[0]] = c;
    return out;
}

}  // namespace

TEST_CASE("length, factorial and support") {
    Family a;
    a.add(e1(0));
    CHECK(family_length(a) == 1);
    CHECK(family_factorial(a) == 1);
    CHECK(family_support(a) == std::set<Point>{Point{0}, Point{1}});

    Family b;
    b.add(e1(0), 3);
    CHECK(family_length(b) == 3);
    CHECK(family_factorial(b) == 6);

    Family c;
    c.add(e1(0), 2).add(e1(1));
    CHECK(family_length(c) == 3);
    CHECK(family_factorial(c) == 2);
    CHECK(c.expanded().size() == 3);
    CHECK_THROWS_AS(c.add(e1(2), 0), std::invalid_argument);
}

TEST_CASE("connects") {
    CHECK(connects({Point{0}}, Family{}));
    CHECK_FALSE(connects({Point{0}, Point{5}}, Family{}));
    Family path;
    path.add(e1(0)).add(e1(1));
    CHECK(connects({Point{0}}, path));
    CHECK(connects({Point{2}, Point{0}}, path));
    CHECK_FALSE(connects({Point{0}, Point{4}}, path));
    Family gap;
    gap.add(e1(0)).add(e1(2));
    CHECK_FALSE(connects({Point{0}}, gap));
    CHECK_THROWS_AS((connects({}, Family{})), std::invalid_argument);
}

TEST_CASE("enumerate_connected small cases") {
    CHECK(enumerate_connected({Point{0}}, 1).size() == 2);
    CHECK(enumerate_connected({Point{0}}, 2).size() == 5);
    CHECK(enumerate_connected({Point{0}, Point{1}}, 0).empty());
    CHECK(enumerate_connected({Point{0}}, 0) == std::vector<Family>{Family{}});
    CHECK(enumerate_connected({Point{0, 0}}, 1).size() == 4);
    CHECK_THROWS_AS((enumerate_connected({Point{0}}, 7)), LimitExceeded);
    CHECK_THROWS_AS((enumerate_connected({Point{0, 0, 0}}, 3)), LimitExceeded);
}

TEST_CASE("enumerate_connected golden text") {
    std::ostringstream os;
    write_families(os, enumerate_connected({Point{0}}, 2));
    CHECK(os.str() ==
          "-2;-1;1\n-1;0;1\n--\n"
          "-1;0;1\n0;1;1\n--\n"
          "-1;0;2\n--\n"
          "0;1;1\n1;2;1\n--\n"
          "0;1;2\n--\n");
    std::istringstream is(os.str());
    CHECK(read_families(is) == enumerate_connected({Point{0}}, 2));
}

TEST_CASE("enumerate_connected equals brute force in one dimension") {
    const std::vector<std::vector<std::int64_t>> bases{{0}, {0, 1}, {0, 2}, {1, 1}, {-1, 0, 2}, {0, 0, 3}};
    for (const auto& b : bases) {
        SpinSequence seq;
        for (auto s : b) seq.push_back(Point{s});
        for (int n = 0; n <= 4; ++n) {
            std::set<oracle::EdgeMultiset1D> got;
            for (const auto& g : enumerate_connected(seq, n)) got.insert(as_1d(g));
            CHECK(got == oracle::connected_families_1d(b, n));
        }
    }
}

TEST_CASE("every enumerated family connects and has the right length") {
    for (const auto& g : enumerate_connected({Point{0, 0}, Point{1, 1}}, 3)) {
        CHECK(family_length(g) == 3);
        CHECK(connects({Point{0, 0}, Point{1, 1}}, g));
    }
}

TEST_CASE("count bound (2 nu)^{2n}") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> c(-2, 2), m(1, 3);
    for (int nu = 1; nu <= 2; ++nu) {
        for (int trial = 0; trial < 10; ++trial) {
            SpinSequence b;
            const int size = m(rng);
            for (int i = 0; i < size; ++i) {
                std::vector<std::int64_t> x;
                for (int j = 0; j < nu; ++j) x.push_back(c(rng));
                b.push_back(Point(x));
            }
            for (int n = 0; n <= 3; ++n) {
                std::size_t bound = 1;
                for (int i = 0; i < 2 * n; ++i) bound *= static_cast<std::size_t>(2 * nu);
                CHECK(enumerate_connected(b, n).size() <= bound);
            }
        }
    }
}

TEST_CASE("translation") {
    Family g;
    g.add(e1(0), 2);
    Family h;
    h.add(e1(3), 2);
    CHECK(shifted(g, Point{3}) == h);
}
