#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "isingclt/errors.hpp"
#include "isingclt/gibbs.hpp"
#include "isingclt/series.hpp"
#include "oracles.hpp"

using namespace isingclt;

TEST_CASE("energy") {
    const Cube cube{1, 1};
    SpinConfig all_up(cube);
    CHECK(energy({1, 1, 0.0}, all_up) == 0.0);
    CHECK(energy({1, 1, 0.3}, all_up) == doctest::Approx(-0.6));
    std::mt19937_64 rng(2);
    const GibbsSpec spec{2, 2, 0.4};
    SpinConfig cfg(spec.cube());
    for (std::size_t i = 0; i < cfg.size(); ++i) cfg.set(i, rng() & 1 ? 1 : -1);
    SpinConfig flipped = cfg;
    for (std::size_t i = 0; i < cfg.size(); ++i) flipped.flip(i);
    CHECK(energy(spec, cfg) == doctest::Approx(energy(spec, flipped)));
    CHECK_THROWS_AS((energy({1, 2, 0.1}, all_up)), std::invalid_argument);
}

TEST_CASE("spin configuration bits") {
    SpinConfig cfg(Cube{1, 40});
    CHECK(cfg.size() == 81);
    cfg.set(70, -1);
    CHECK(cfg.spin(70) == -1);
    CHECK(cfg.spin(Point{70 - 40}) == -1);
    cfg.flip(70);
    CHECK(cfg.spin(70) == 1);
    CHECK_THROWS_AS(cfg.set(0, 0), std::invalid_argument);
}

TEST_CASE("exact moments") {
    const Point t{0};
    for (double lambda : {0.0, 0.3, -0.2}) {
        const GibbsSpec spec{1, 3, lambda};
        CHECK(exact_moment(spec, {{t, 1}}) == doctest::Approx(0.0));
        CHECK(exact_moment(spec, {{t, 2}}) == doctest::Approx(1.0));
        CHECK(exact_semi_invariant(spec, {t, t}) == doctest::Approx(1.0));
    }
    const GibbsSpec free{2, 1, 0.0};
    const PointMultiset ms{{Point{0, 0}, 2}, {Point{1, 0}, 1}, {Point{1, 1}, 1}};
    CHECK(exact_moment(free, ms) == free_moment(ms).get_d());
    const SpinSequence b{Point{0, 0}, Point{0, 0}, Point{0, 0}, Point{0, 0}};
    CHECK(exact_semi_invariant(free, b) == doctest::Approx(free_semi_invariant(b, Family{}).get_d()));
    CHECK_THROWS_AS((ExactGibbs({2, 3, 0.1})), LimitExceeded);
}

TEST_CASE("exact pair correlation against the series and the chain") {
    const GibbsSpec spec{1, 8, 0.05};
    const SpinSequence b{Point{0}, Point{1}};
    const double exact = exact_semi_invariant(spec, b);
    CHECK(std::abs(exact - semi_invariant_series(b, 0.05, 8, 8).partial_sum) < 1e-6);
    CHECK(std::abs(exact - chain_semi_invariant(0.05, 8, b)) < 1e-12);
    // On an open chain every nearest-neighbour correlation is tanh(lambda).
    CHECK(exact == doctest::Approx(std::tanh(0.05)).epsilon(1e-12));
}

TEST_CASE("transfer matrix") {
    CHECK(transfer_pair_correlation(0.4, 0) == doctest::Approx(1.0));
    CHECK(transfer_pair_correlation(0.0, 3) == doctest::Approx(0.0));
    CHECK(transfer_pair_correlation(0.1, 2) == doctest::Approx(std::tanh(0.1) * std::tanh(0.1)));
    const PointMultiset far{{Point{-2}, 1}, {Point{0}, 1}};
    CHECK(std::abs(chain_moment(0.1, 12, far) - transfer_pair_correlation(0.1, 2)) < 1e-4);
    CHECK(std::abs(chain_moment(0.1, 6, far) - exact_moment({1, 6, 0.1}, far)) < 1e-12);
    const PointMultiset four{{Point{-3}, 1}, {Point{-1}, 1}, {Point{0}, 1}, {Point{4}, 1}};
    CHECK(std::abs(chain_moment(0.3, 6, four) - exact_moment({1, 6, 0.3}, four)) < 1e-12);
}

TEST_CASE("Metropolis is deterministic given the seed") {
    const GibbsSpec spec{2, 3, 0.2};
    const MetropolisParams params{99, 60, 10, 5};
    std::vector<SpinConfig> a, b;
    std::vector<std::int64_t> sweeps;
    metropolis_run(spec, params, [&](std::int64_t s, const SpinConfig& c) {
        a.push_back(c);
        sweeps.push_back(s);
    });
    metropolis_run(spec, params, [&](std::int64_t, const SpinConfig& c) { b.push_back(c); });
    CHECK(a == b);
    CHECK(sweeps == std::vector<std::int64_t>{15, 20, 25, 30, 35, 40, 45, 50, 55, 60});
    CHECK(child_seed(1, 0) != child_seed(1, 1));
    CHECK_THROWS_AS((metropolis_run(spec, {1, 10, 10, 1}, [](auto, auto&) {})), std::invalid_argument);
    CHECK_THROWS_AS((metropolis_run(spec, {1, 10, 1, 0}, [](auto, auto&) {})), std::invalid_argument);
}

TEST_CASE("Metropolis at lambda = 0: spin mean near 0") {
    const GibbsSpec spec{1, 2, 0.0};
    std::vector<double> q;
    metropolis_run(spec, {7, 100100, 100, 1}, [&](std::int64_t, const SpinConfig& c) { q.push_back(c.spin(2)); });
    REQUIRE(q.size() == 100000);
    const auto est = empirical_cumulants(q, 1);
    CHECK(std::abs(est[0].value) <= 4 * est[0].std_error);
}

TEST_CASE("Metropolis at lambda = 0.1, N = 32: neighbour correlation") {
    const GibbsSpec spec{1, 32, 0.1};
    std::vector<double> q;
    metropolis_run(spec, {13, 20100, 100, 1}, [&](std::int64_t, const SpinConfig& c) {
        q.push_back(c.spin(Point{0}) * c.spin(Point{1}));
    });
    const auto est = empirical_cumulants(q, 1);
    const double exact = chain_moment(0.1, 32, {{Point{0}, 1}, {Point{1}, 1}});
    CHECK(std::abs(est[0].value - exact) <= 4 * est[0].std_error);
}

TEST_CASE("block transform") {
    const Cube cube{1, 8};
    SpinConfig up(cube);
    const auto y = block_transform(up, 4, 1.0, {Point{0}, Point{-1}});
    CHECK(y.at(Point{0}) == doctest::Approx(2.0));
    CHECK(y.at(Point{-1}) == doctest::Approx(2.0));

    SpinConfig alt(cube);
    for (std::size_t i = 0; i < alt.size(); i += 2) alt.set(i, -1);
    for (const auto& [tau, v] : block_transform(alt, 2, 1.0, interior_blocks(cube, 2))) CHECK(v == 0.0);

    SpinConfig up2(Cube{2, 4});
    CHECK(block_transform(up2, 3, 2.0, {Point{0, 0}}).at(Point{0, 0}) == doctest::Approx(3.0));
    CHECK_THROWS_AS((block_transform(up, 4, 1.0, {Point{2}})), std::out_of_range);
}

TEST_CASE("interior blocks") {
    const auto taus = interior_blocks(Cube{1, 8}, 4);
    CHECK(taus == std::vector<Point>{Point{-2}, Point{-1}, Point{0}, Point{1}});
    CHECK(interior_blocks(Cube{2, 2}, 2).size() == 4);
}

TEST_CASE("lambda = 0 block variance near 1") {
    const GibbsSpec spec{1, 64, 0.0};
    const BlockObserver obs(spec.cube(), 8, 1.0, interior_blocks(spec.cube(), 8));
    std::vector<double> y, all;
    metropolis_run(spec, {3, 3100, 100, 3}, [&](std::int64_t, const SpinConfig& c) {
        obs.observe(c, y);
        all.insert(all.end(), y.begin(), y.end());
    });
    const auto est = empirical_cumulants(all, 2);
    CHECK(std::abs(est[1].value - 1.0) <= 4 * est[1].std_error);
}

TEST_CASE("empirical cumulants of synthetic samples") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> normal;
    std::vector<double> z(200000);
    for (auto& x : z) x = normal(rng);
    const auto g = empirical_cumulants(z, 4);
    REQUIRE(g.size() == 4);
    CHECK(std::abs(g[1].value - 1.0) <= 4 * g[1].std_error);
    CHECK(std::abs(g[2].value) <= 4 * g[2].std_error);
    CHECK(std::abs(g[3].value) <= 4 * g[3].std_error);

    std::vector<double> s(200000);
    for (auto& x : s) x = rng() & 1 ? 1.0 : -1.0;
    const auto h = empirical_cumulants(s, 4);
    CHECK(std::abs(h[1].value - 1.0) <= 4 * h[1].std_error + 1e-12);
    CHECK(std::abs(h[3].value + 2.0) <= 4 * h[3].std_error + 1e-12);

    const std::vector<double> c(1000, 3.5);
    const auto k = empirical_cumulants(c, 4);
    CHECK(k[0].value == doctest::Approx(3.5));
    CHECK(k[1].value == 0.0);

    CHECK_THROWS_AS(empirical_cumulants(c, 5), std::invalid_argument);
    CHECK_THROWS_AS((empirical_cumulants(std::vector<double>{}, 2)), std::invalid_argument);

    const std::vector<std::vector<double>> rows{{1, 2}, {3, 2}, {5, 2}};
    const auto cols = empirical_cumulants(rows, 2);
    REQUIRE(cols.size() == 2);
    CHECK(cols[0][0].value == doctest::Approx(3.0));
    CHECK(cols[0][1].value == doctest::Approx(8.0 / 3.0));
    CHECK(cols[1][1].value == 0.0);
}

TEST_CASE("empirical covariance") {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> normal;
    std::vector<double> x(50000), y(50000), w(50000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = normal(rng);
        y[i] = normal(rng);
        w[i] = x[i] + y[i];
    }
    const auto indep = empirical_covariance(x, y);
    CHECK(std::abs(indep.value) <= 4 * indep.std_error);
    const auto dep = empirical_covariance(x, w);
    CHECK(std::abs(dep.value - 1.0) <= 4 * dep.std_error);
}

TEST_CASE("Taylor fit recovers polynomial coefficients") {
    const auto c = taylor_coefficients_by_fit([](double l) { return 1 + 2 * l - 3 * l * l + 0.5 * l * l * l; },
                                              0.05, 5, 4);
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(2.0));
    CHECK(c[2] == doctest::Approx(-3.0));
    CHECK(c[3] == doctest::Approx(0.5));
    CHECK(std::abs(c[4]) < 1e-6);
}

TEST_CASE("experiment configuration") {
    std::istringstream in("# comment\nnu = 1\nN=64\nlambda=0.1\nk=4,8\nalpha=1\nseed=3\nsweeps=300\nburn_in=100\n");
    const auto cfg = parse_experiment_config(in);
    CHECK(cfg.N == 64);
    CHECK(cfg.ks == std::vector<std::int64_t>{4, 8});
    CHECK(cfg.lambda == 0.1);
    std::istringstream bad("colour=blue\n");
    CHECK_THROWS_AS(parse_experiment_config(bad), std::invalid_argument);
    std::istringstream bad_value("N=abc\n");
    CHECK_THROWS_AS(parse_experiment_config(bad_value), std::invalid_argument);
    ExperimentConfig c2;
    c2.alpha = 0.5;
    CHECK_THROWS_AS(c2.validate(), std::invalid_argument);
}

TEST_CASE("block experiment is reproducible") {
    ExperimentConfig cfg;
    cfg.N = 64;
    cfg.lambda = 0.1;
    cfg.ks = {4, 8};
    cfg.sweeps = 140;
    cfg.burn_in = 40;
    cfg.thin = 2;
    cfg.chains = 2;
    cfg.seed = 8;
    std::ostringstream a, b;
    const auto r1 = run_block_experiment(cfg, &a);
    const auto r2 = run_block_experiment(cfg, &b);
    CHECK(a.str() == b.str());
    CHECK(r1.emissions == 100);
    CHECK(r1.per_k.size() == 2);
    CHECK(r1.per_k[0].cumulants[1].value == r2.per_k[0].cumulants[1].value);
    CHECK(a.str().rfind("chain,sweep,energy,magnetization,Y4,Y8\n", 0) == 0);
}
