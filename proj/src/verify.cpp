#include "isingclt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "isingclt/estimation.hpp"
#include "isingclt/families.hpp"
#include "isingclt/free_field.hpp"
#include "isingclt/gibbs.hpp"
#include "isingclt/series.hpp"

namespace isingclt {

namespace {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Point random_point(Rng& rng, int nu, int radius) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(nu));
    for (auto& x : c) x = uniform_int(rng, -radius, radius);
    return Point(std::move(c));
}

Edge random_edge(Rng& rng, int nu, int radius) {
    const Point a = random_point(rng, nu, radius);
    return Edge(a, a.step(uniform_int(rng, 0, nu - 1), uniform_int(rng, 0, 1) ? 1 : -1));
}

SpinSequence random_sequence(Rng& rng, int nu, int length, int radius) {
    SpinSequence b;
    for (int i = 0; i < length; ++i) b.push_back(random_point(rng, nu, radius));
    return b;
}

Family random_family(Rng& rng, int nu, int length, int radius) {
    Family g;
    for (int i = 0; i < length; ++i) g.add(random_edge(rng, nu, radius));
    return g;
}

bool has_odd_site(const SpinSequence& b, const Family& g) {
    PointMultiset ms = to_multiset(b);
    for (const auto& e : g.expanded()) {
        ++ms[e.a()];
        ++ms[e.b()];
    }
    return std::any_of(ms.begin(), ms.end(), [](const auto& kv) { return kv.second % 2 != 0; });
}

CheckResult check(std::string name, bool passed, std::string detail = {}) {
    return CheckResult{std::move(name), passed, std::move(detail)};
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> parity_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    Rng rng(seed);
    const Point s{3}, t{-2};
    out.push_back(check("free_moment parity rules",
                        free_moment({{s, 1}}) == 0 && free_moment({{s, 2}}) == 1 &&
                            free_moment({{s, 1}, {t, 1}}) == 0 && free_moment({{s, 2}, {t, 4}}) == 1));

    int odd_cases = 0, odd_bad = 0;
    while (odd_cases < 500) {
        const int nu = uniform_int(rng, 1, 2);
        const auto b = random_sequence(rng, nu, uniform_int(rng, 1, 4), 2);
        const auto g = random_family(rng, nu, uniform_int(rng, 0, 4), 2);
        if (!has_odd_site(b, g)) continue;
        ++odd_cases;
        odd_bad += free_semi_invariant(b, g) != 0;
    }
    out.push_back(check("odd-parity semi-invariants vanish", odd_bad == 0,
                        std::to_string(odd_bad) + " nonzero of " + std::to_string(odd_cases)));

    int single_bad = 0;
    for (int i = 0; i < 500; ++i) {
        const int nu = uniform_int(rng, 1, 2);
        const Point p = random_point(rng, nu, 1);
        single_bad += free_semi_invariant({p}, random_family(rng, nu, uniform_int(rng, 1, 6), 1)) != 0;
    }
    out.push_back(check("single spin with edges vanishes", single_bad == 0,
                        std::to_string(single_bad) + " nonzero of 500"));

    int disc_cases = 0, disc_bad = 0;
    while (disc_cases < 500) {
        const int nu = uniform_int(rng, 1, 2);
        const auto b = random_sequence(rng, nu, uniform_int(rng, 1, 3), 3);
        const auto g = random_family(rng, nu, uniform_int(rng, 0, 4), 3);
        if (connects(b, g)) continue;
        ++disc_cases;
        disc_bad += free_semi_invariant(b, g) != 0;
    }
    out.push_back(check("disconnected semi-invariants vanish", disc_bad == 0,
                        std::to_string(disc_bad) + " nonzero of " + std::to_string(disc_cases)));

    int shift_bad = 0;
    for (int i = 0; i < 200; ++i) {
        const int nu = uniform_int(rng, 1, 2);
        const auto b = random_sequence(rng, nu, uniform_int(rng, 1, 3), 1);
        const auto g = random_family(rng, nu, uniform_int(rng, 0, 4), 1);
        const Point offset = random_point(rng, nu, 50);
        SpinSequence moved;
        for (const auto& p : b) moved.push_back(p.shifted(offset));
        shift_bad += free_semi_invariant(b, g) != free_semi_invariant(moved, shifted(g, offset));
    }
    out.push_back(check("translation invariance", shift_bad == 0,
                        std::to_string(shift_bad) + " mismatches of 200"));

    // lambda = 0: the Gibbs measure is the free measure, for every multiset
    // with multiplicities 0..2 on the tiny cubes.
    int zero_bad = 0, zero_cases = 0;
    for (const auto& [nu, N] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 3}, {2, 1}}) {
        const GibbsSpec spec{nu, N, 0.0};
        const ExactGibbs gibbs(spec);
        const auto pts = cube_points(nu, N);
        std::vector<int> mult(pts.size(), 0);
        while (true) {
            PointMultiset ms;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (mult[i]) ms[pts[i]] = mult[i];
            }
            ++zero_cases;
            zero_bad += std::abs(gibbs.moment(ms) - free_moment(ms).get_d()) > 1e-12;
            std::size_t i = 0;
            while (i < mult.size() && mult[i] == 2) mult[i++] = 0;
            if (i == mult.size()) break;
            ++mult[i];
        }
    }
    out.push_back(check("exact Gibbs at lambda=0 equals free moments", zero_bad == 0,
                        std::to_string(zero_bad) + " mismatches of " + std::to_string(zero_cases)));
    return out;
}

std::vector<CheckResult> estimation_suite(std::uint64_t seed) {
    Rng rng(seed);
    int failures = 0, upsilon_bad = 0;
    double min_margin = INFINITY;
    const int cases = 1000;
    for (int c = 0; c < cases; ++c) {
        const int L = uniform_int(rng, 2, 10);
        const int size = uniform_int(rng, 1, 30);
        LinkedUniverse u;
        u.L = L;
        u.links.assign(static_cast<std::size_t>(size), {});
        for (int i = 0; i < size; ++i) u.links[static_cast<std::size_t>(i)].push_back(i);
        // Random extra links, kept only while both ends stay within degree L.
        for (int tries = 0; tries < size * L; ++tries) {
            const int i = uniform_int(rng, 0, size - 1), j = uniform_int(rng, 0, size - 1);
            auto& li = u.links[static_cast<std::size_t>(i)];
            auto& lj = u.links[static_cast<std::size_t>(j)];
            if (i == j || u.linked(i, j)) continue;
            if (static_cast<int>(li.size()) >= L || static_cast<int>(lj.size()) >= L) continue;
            li.push_back(j);
            lj.push_back(i);
        }
        AbstractFamily fam;
        const int members = uniform_int(rng, 1, size);
        for (int k = 0; k < members; ++k) fam[uniform_int(rng, 0, size - 1)] = uniform_int(rng, 1, 20);
        const auto r = estimation_check(u, fam);
        failures += !r.holds;
        min_margin = std::min(min_margin, r.f - r.g);
        for (const auto& [i, n] : fam) upsilon_bad += upsilon(u, fam, i) < n;
    }
    std::ostringstream detail;
    detail << failures << " failures of " << cases << ", smallest f-g = " << min_margin;
    return {check("estimation inequality on random universes", failures == 0, detail.str()),
            check("upsilon >= own multiplicity", upsilon_bad == 0)};
}

std::vector<CheckResult> bounds_suite(std::uint64_t) {
    // Every b of length m with points in {0,1,2} (nondecreasing; the
    // semi-invariant is symmetric) and every connecting family with
    // m + |gamma| <= 8.
    constexpr int kTotalOrder = 8;
    long cases = 0, failures = 0;
    for (int m = 1; m <= kTotalOrder; ++m) {
        std::vector<int> idx(static_cast<std::size_t>(m), 0);
        while (true) {
            SpinSequence b;
            for (int v : idx) b.push_back(Point{v});
            for (int n = 0; n + m <= kTotalOrder; ++n) {
                for (const auto& g : enumerate_connected(b, n, kTotalOrder)) {
                    ++cases;
                    failures += !bound_check_semi_invariant(b, g).holds;
                }
            }
            int i = m - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == 2) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < m; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(i)];
        }
    }
    return {check("semi-invariant bound, nu=1, m+|gamma|<=8", failures == 0,
                  std::to_string(failures) + " failures of " + std::to_string(cases))};
}

// All multisets of n edges drawn from edges within distance n of b,
// filtered by connectivity.
std::vector<Family> brute_force_connected(const SpinSequence& b, int n) {
    std::int64_t lo = b.front()[0], hi = lo;
    for (const auto& p : b) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
    }
    std::vector<Edge> pool;
    for (std::int64_t x = lo - n; x < hi + n; ++x) {
        const Edge e(Point{x}, Point{x + 1});
        auto near = [&](const Point& q) {
            return std::any_of(b.begin(), b.end(), [&](const Point& p) { return distance(p, q) <= n; });
        };
        if (near(e.a()) && near(e.b())) pool.push_back(e);
    }
    std::vector<Family> out;
    if (n == 0) {
        if (connects(b, Family{})) out.emplace_back();
        return out;
    }
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    while (true) {
        Family g;
        for (auto i : pick) g.add(pool[i]);
        if (connects(b, g)) out.push_back(std::move(g));
        int i = n - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] + 1 == pool.size()) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(i)];
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CheckResult> enumeration_suite(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<CheckResult> out;
    int bound_bad = 0, bound_cases = 0;
    for (int nu = 1; nu <= 2; ++nu) {
        for (int rep = 0; rep < 20; ++rep) {
            const auto b = random_sequence(rng, nu, uniform_int(rng, 1, 3), 1);
            for (int n = 1; n <= 4; ++n) {
                ++bound_cases;
                const auto count = enumerate_connected(b, n).size();
                bound_bad += static_cast<double>(count) > std::pow(2.0 * nu, 2.0 * n);
            }
        }
    }
    out.push_back(check("count <= (2 nu)^(2n)", bound_bad == 0,
                        std::to_string(bound_bad) + " violations of " + std::to_string(bound_cases)));

    int cross_bad = 0, cross_cases = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto b = random_sequence(rng, 1, uniform_int(rng, 1, 3), 2);
        for (int n = 0; n <= 3; ++n) {
            ++cross_cases;
            cross_bad += enumerate_connected(b, n) != brute_force_connected(b, n);
        }
    }
    out.push_back(check("enumeration equals brute-force filter (nu=1, n<=3)", cross_bad == 0,
                        std::to_string(cross_bad) + " mismatches of " + std::to_string(cross_cases)));
    return out;
}

std::vector<CheckResult> taylor_suite(std::uint64_t) {
    std::vector<CheckResult> out;
    constexpr int kOrder = 3;
    constexpr double kTol = 1e-5;
    struct Case {
        int nu;
        std::int64_t N;
        SpinSequence b;
    };
    const std::vector<Case> cases{
        {1, 4, {Point{0}, Point{1}}},
        {1, 5, {Point{0}, Point{2}}},
        {1, 4, {Point{0}, Point{0}}},
        {1, 5, {Point{0}, Point{1}, Point{1}, Point{2}}},
        {2, 1, {Point{0, 0}, Point{0, 1}}},
    };
    for (const auto& c : cases) {
        const GibbsSpec base{c.nu, c.N, 0.0};
        auto f = [&](double lambda) {
            GibbsSpec spec = base;
            spec.lambda = lambda;
            return exact_semi_invariant(spec, c.b);
        };
        const auto fitted = taylor_coefficients_by_fit(f, 0.01, 6, 7);
        double worst = 0.0;
        for (int n = 0; n <= kOrder; ++n) {
            const double a = semi_invariant_coefficient(c.b, n, -1, base.cube()).get_d();
            worst = std::max(worst, std::abs(a - fitted[static_cast<std::size_t>(n)]));
        }
        std::ostringstream name, detail;
        name << "Taylor coefficients, nu=" << c.nu << " N=" << c.N << " |b|=" << c.b.size();
        detail << "max deviation " << worst;
        out.push_back(check(name.str(), worst < kTol, detail.str()));
    }

    for (double lambda : {0.02, 0.05}) {
        const SpinSequence b{Point{0}, Point{1}};
        const double series = semi_invariant_series(b, lambda, 6).partial_sum;
        const double exact = exact_semi_invariant({1, 8, lambda}, b);
        const double chain = chain_semi_invariant(lambda, 12, b);
        std::ostringstream detail;
        detail << "series " << series << " exact(N=8) " << exact << " chain(N=12) " << chain;
        out.push_back(check("pair series vs exact, lambda=" + std::to_string(lambda),
                            std::abs(series - exact) < kTol && std::abs(series - chain) < kTol &&
                                std::abs(series - std::tanh(lambda)) < kTol,
                            detail.str()));
    }
    return out;
}

std::vector<CheckResult> clt_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    ExperimentConfig cfg;
    cfg.nu = 1;
    cfg.N = 4096;
    cfg.lambda = 0.1;
    cfg.ks = {4, 16, 64};
    cfg.alpha = 1.0;
    cfg.seed = seed;
    cfg.burn_in = 200;
    cfg.thin = 4;
    cfg.sweeps = cfg.burn_in + cfg.thin * 1200;
    const auto clt = run_block_experiment(cfg);

    const auto& k4 = clt.per_k[0];
    const auto& k64 = clt.per_k[2];
    const double target = std::exp(0.2);
    const auto& var = k64.cumulants[1];
    {
        std::ostringstream d;
        d << "Var(Y) = " << var.value << " +- " << var.std_error << ", target " << target
          << ", samples " << var.n_samples;
        out.push_back(check("k=64 variance within 3 SE of e^{2 lambda}",
                            std::abs(var.value - target) <= 3 * var.std_error && var.n_samples >= 100000,
                            d.str()));
    }
    for (int order : {3, 4}) {
        const auto& hi = k64.cumulants[static_cast<std::size_t>(order - 1)];
        const auto& lo = k4.cumulants[static_cast<std::size_t>(order - 1)];
        std::ostringstream d;
        d << "k=64: " << hi.value << " +- " << hi.std_error << "; k=4: " << lo.value << " +- " << lo.std_error;
        out.push_back(check("k=64 cumulant " + std::to_string(order) + " within 3 SE of 0 and <= half of k=4",
                            std::abs(hi.value) <= 3 * hi.std_error &&
                                std::abs(hi.value) <= 0.5 * std::abs(lo.value),
                            d.str()));
    }
    {
        const auto& cov = k64.adjacent_covariance;
        std::ostringstream d;
        d << "cov = " << cov.value << " +- " << cov.std_error;
        out.push_back(check("k=64 adjacent-block covariance within 3 SE of 0",
                            std::abs(cov.value) <= 3 * cov.std_error, d.str()));
    }

    cfg.alpha = 2.0;
    const auto decay = run_block_experiment(cfg);
    double lo = INFINITY, hi = 0.0;
    std::ostringstream d;
    for (const auto& s : decay.per_k) {
        const double scaled = s.cumulants[1].value * static_cast<double>(s.k);  // k^{alpha - nu}
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
        d << "k=" << s.k << ": " << scaled << "  ";
    }
    out.push_back(check("alpha=2: Var(Y) k^(alpha-nu) within a factor 2 across k", hi <= 2 * lo, d.str()));
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"parity", "estimation", "bounds", "enumeration", "taylor", "clt"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed) {
    static const std::map<std::string, std::function<std::vector<CheckResult>(std::uint64_t)>> suites{
        {"parity", parity_suite},   {"estimation", estimation_suite},   {"bounds", bounds_suite},
        {"enumeration", enumeration_suite}, {"taylor", taylor_suite}, {"clt", clt_suite},
    };
    const auto it = suites.find(name);
    if (it == suites.end()) throw std::invalid_argument("unknown verification suite '" + name + "'");
    return it->second(seed);
}

}  // namespace isingclt
