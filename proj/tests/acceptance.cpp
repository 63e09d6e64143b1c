// Acceptance criteria: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "isingclt/families.hpp"
#include "isingclt/gibbs.hpp"
#include "isingclt/series.hpp"
#include "isingclt/verify.hpp"
#include "oracles.hpp"

using namespace isingclt;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

Outcome from_suite(const std::vector<CheckResult>& checks, const std::function<bool(const CheckResult&)>& pick) {
    Outcome o{true, ""};
    for (const auto& c : checks) {
        if (!pick(c)) continue;
        o.passed = o.passed && c.passed;
        o.detail += (o.detail.empty() ? "" : "; ") + std::string(c.passed ? "" : "FAILED ") + c.name + " [" +
                    c.detail + "]";
    }
    return o;
}

Outcome exact_coefficients() {
    std::ostringstream d;
    bool ok = true;
    for (int nu = 1; nu <= 3; ++nu) {
        const auto v = coefficient_Vn(nu, 1);
        ok = ok && v == 2 * nu;
        d << "V1(nu=" << nu << ")=" << to_fraction_string(v) << ' ';
    }
    for (int nu = 1; nu <= 2; ++nu) {
        const auto v = coefficient_Vn(nu, 2);
        ok = ok && v == 2 * nu * (2 * nu - 1);
        d << "V2(nu=" << nu << ")=" << to_fraction_string(v) << ' ';
    }
    return {ok, d.str()};
}

Outcome one_dimensional_oracle() {
    std::ostringstream d;
    bool ok = true;
    for (int n = 1; n <= 4; ++n) {
        const auto v = coefficient_Vn(1, n);
        ok = ok && v == oracle::two_pow_over_factorial(n);
        d << "V" << n << "=" << to_fraction_string(v) << ' ';
    }
    return {ok, d.str()};
}

Outcome series_vs_exact() {
    std::ostringstream d;
    bool ok = true;
    const SpinSequence b{Point{0}, Point{1}};
    for (double lambda : {0.02, 0.05}) {
        const double s = semi_invariant_series(b, lambda, 6).partial_sum;
        const double enumerated = exact_semi_invariant({1, 8, lambda}, b);
        const double chain = chain_semi_invariant(lambda, 12, b);
        const double worst = std::max({std::abs(s - enumerated), std::abs(s - chain), std::abs(s - std::tanh(lambda))});
        ok = ok && worst < 1e-5;
        d << "lambda=" << lambda << " max deviation " << worst << ' ';
    }
    return {ok, d.str()};
}

Outcome enumeration_bound(const std::vector<CheckResult>& suite) {
    Outcome o = from_suite(suite, [](const CheckResult&) { return true; });
    // Independent brute force over edge multisets in one dimension.
    int mismatches = 0;
    for (const auto& b : std::vector<std::vector<std::int64_t>>{{0}, {0, 1}, {0, 3}, {2, 2}, {-1, 1, 2}}) {
        SpinSequence seq;
        for (auto s : b) seq.push_back(Point{s});
        for (int n = 0; n <= 3; ++n) {
            std::set<oracle::EdgeMultiset1D> got;
            for (const auto& g : enumerate_connected(seq, n)) {
                oracle::EdgeMultiset1D m;
                for (const auto& [e, c] : g.entries) m[e.a()[0]] = c;
                got.insert(m);
            }
            mismatches += got != oracle::connected_families_1d(b, n);
        }
    }
    o.passed = o.passed && mismatches == 0;
    o.detail += "; test-side brute force mismatches " + std::to_string(mismatches);
    return o;
}

Outcome cylinder_normalization() {
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m) {
        std::vector<Point> T;
        for (int i = 0; i < m; ++i) T.push_back(Point{i});
        double total = 0.0;
        for (int signs = 0; signs < (1 << m); ++signs) {
            std::vector<int> A;
            for (int i = 0; i < m; ++i) A.push_back(signs & (1 << i) ? -1 : 1);
            total += cylinder_probability(T, A, 0.05, 4);
        }
        worst = std::max(worst, std::abs(total - 1.0));
    }
    std::ostringstream d;
    d << "max |sum - 1| = " << worst;
    return {worst < 1e-4, d.str()};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const std::string& name, const std::function<Outcome()>& run) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !o.passed;
        std::printf("%s  %2d  %s  (%.1fs)  %s\n", o.passed ? "PASS" : "FAIL", id, name.c_str(), secs,
                    o.detail.c_str());
        std::fflush(stdout);
    };

    report(1, "exact V1, V2", exact_coefficients);
    report(2, "1-D oracle V_n = 2^n/n!", one_dimensional_oracle);
    report(3, "pair series vs exact Gibbs and tanh", series_vs_exact);

    const auto parity = run_suite("parity");
    report(4, "vanishing semi-invariants", [&] {
        return from_suite(parity, [](const CheckResult& c) { return c.name.find("vanish") != std::string::npos; });
    });
    report(5, "estimation inequality", [] { return from_suite(run_suite("estimation"), [](auto&) { return true; }); });
    report(6, "enumeration count bound and brute force", [] { return enumeration_bound(run_suite("enumeration")); });
    report(7, "semi-invariant bound", [] { return from_suite(run_suite("bounds"), [](auto&) { return true; }); });

    std::vector<CheckResult> clt;
    report(8, "CLT witness at k=64", [&] {
        clt = run_suite("clt");
        return from_suite(clt, [](const CheckResult& c) { return c.name.rfind("alpha=2", 0) != 0; });
    });
    report(9, "mean-square decay at alpha=2", [&] {
        if (clt.empty()) return Outcome{false, "clt suite did not run"};
        return from_suite(clt, [](const CheckResult& c) { return c.name.rfind("alpha=2", 0) == 0; });
    });
    report(10, "cylinder normalization", cylinder_normalization);

    std::printf("%d of 10 criteria failed\n", failures);
    return failures ? 1 : 0;
}
