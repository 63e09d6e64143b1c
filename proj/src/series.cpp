#include "isingclt/series.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "isingclt/cumulant.hpp"
#include "isingclt/free_field.hpp"

namespace isingclt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_{n > l} n x^n for 0 <= x < 1.
long double weighted_geometric_tail(long double x, int l) {
    const long double head = std::pow(x, static_cast<long double>(l + 1));
    return head / ((1 - x) * (1 - x)) + static_cast<long double>(l) * head / (1 - x);
}

double last_term_ratio_tail(const std::vector<SeriesTerm>& terms) {
    const SeriesTerm* last = nullptr;
    const SeriesTerm* prev = nullptr;
    for (const auto& t : terms) {
        if (t.n == 0 || t.value == 0.0) continue;
        prev = last;
        last = &t;
    }
    if (!last || !prev) return 0.0;
    const double r = std::pow(std::abs(last->value) / std::abs(prev->value),
                              1.0 / static_cast<double>(last->n - prev->n));
    if (!(r < 1.0)) return kInf;
    return std::abs(last->value) * r / (1.0 - r);
}

double sum_values(const std::vector<SeriesTerm>& terms) {
    double s = 0.0;
    for (const auto& t : terms) s += t.value;
    return s;
}

void require_nonnegative(int n_max) {
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
}

}  // namespace

SeriesConstants constants(int nu) {
    if (nu < 1) throw std::invalid_argument("dimension must be >= 1");
    SeriesConstants c;
    c.nu = nu;
    c.L = 4.0L * nu + 1.0L;
    c.C2 = 4.0L * nu * nu;
    c.C3 = 3.0L * c.L * std::exp(c.L * c.L + 1.0L);
    c.C1 = c.C3;
    c.C_nu = 1.0L / (2.0L * c.C2 * c.C3);
    c.C = std::min(c.C_nu, 1.0L / (8.0L * c.C2 * c.C3 * c.C3 * c.C3));
    return c;
}

ExactRational c3_lower_bound(int nu) {
    if (nu < 1) throw std::invalid_argument("dimension must be >= 1");
    static std::mutex mu;
    static std::map<int, ExactRational> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(nu); it != cache.end()) return it->second;

    const long L = 4L * nu + 1;
    const long x = L * L + 1;
    // Truncated Taylor series of e^x: every omitted term is positive. Past
    // j = 3x + 60 the omitted part is below 2^-60 of the sum.
    ExactRational term = 1, sum = 1;
    for (long j = 1; j <= 3 * x + 60; ++j) {
        term = term * x / j;
        sum += term;
    }
    return cache.emplace(nu, 3 * L * sum).first->second;
}

ExactRational variance_coefficient_at(const Point& s, int n, int cap) {
    if (n < 1) throw std::invalid_argument("V_n is defined for n >= 1");
    ExactRational total = 0;
    for (const auto& gamma : enumerate_connected({s}, n, cap)) {
        const ExactRational weight(1, family_factorial(gamma));
        for (const auto& t : family_support(gamma)) {
            if (t == s) continue;
            if (!connects({s, t}, gamma)) continue;
            total += weight * free_semi_invariant({s, t}, gamma);
        }
    }
    return total;
}

ExactRational coefficient_Vn(int nu, int n, int cap) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, ExactRational> cache;
    const auto key = std::make_pair(nu, n);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    ExactRational v = variance_coefficient_at(Point::origin(nu), n, cap);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, std::move(v)).first->second;
}

SeriesResult variance_series(int nu, double lambda, int n_max, int cap) {
    require_nonnegative(n_max);
    SeriesResult r;
    r.lambda = lambda;
    r.n_max = n_max;
    r.terms.push_back({0, ExactRational(1), 1.0});
    for (int n = 1; n <= n_max; ++n) {
        ExactRational v = coefficient_Vn(nu, n, cap);
        const double value = v.get_d() * std::pow(lambda, n);
        r.terms.push_back({n, std::move(v), value});
    }
    r.partial_sum = sum_values(r.terms);

    // |V_n| <= 2 C3^2 n (C2 C3)^n, summed over n > n_max.
    const auto c = constants(nu);
    const long double x = std::abs(static_cast<long double>(lambda)) * c.C2 * c.C3;
    if (x < 1.0L) {
        const long double tail = 2.0L * c.C3 * c.C3 * weighted_geometric_tail(x, n_max);
        r.rigorous_tail = std::isfinite(tail) ? static_cast<double>(tail) : kInf;
    } else {
        r.rigorous_tail = kInf;
    }
    r.empirical_tail = last_term_ratio_tail(r.terms);
    return r;
}

ExactRational semi_invariant_coefficient(const SpinSequence& b, int n, int cap,
                                         const std::optional<Cube>& volume) {
    ExactRational total = 0;
    for (const auto& gamma : enumerate_connected(b, n, cap)) {
        if (volume) {
            bool inside = true;
            for (const auto& [edge, mult] : gamma.entries) {
                inside = inside && volume->contains(edge.a()) && volume->contains(edge.b());
            }
            if (!inside) continue;
        }
        total += free_semi_invariant(b, gamma) / ExactRational(family_factorial(gamma));
    }
    return total;
}

SeriesResult semi_invariant_series(const SpinSequence& b, double lambda, int n_max, int cap) {
    require_nonnegative(n_max);
    if (b.empty()) throw std::invalid_argument("semi_invariant_series: empty sequence");
    check_partition_order(static_cast<int>(b.size()) + n_max, kDefaultPartitionCap);
    SeriesResult r;
    r.lambda = lambda;
    r.n_max = n_max;
    for (int n = 0; n <= n_max; ++n) {
        ExactRational a = semi_invariant_coefficient(b, n, cap);
        const double value = a.get_d() * std::pow(lambda, n);
        r.terms.push_back({n, std::move(a), value});
    }
    r.partial_sum = sum_values(r.terms);

    // |lambda^n a_n| <= C3^m m! |lambda C2 C3|^n.
    const auto c = constants(b.front().dim());
    const long double x = std::abs(static_cast<long double>(lambda)) * c.C2 * c.C3;
    if (x < 1.0L) {
        const auto m = static_cast<long double>(b.size());
        const long double tail = std::pow(c.C3, m) * std::tgamma(m + 1) *
                                 std::pow(x, static_cast<long double>(n_max + 1)) / (1 - x);
        r.rigorous_tail = std::isfinite(tail) ? static_cast<double>(tail) : kInf;
    } else {
        r.rigorous_tail = kInf;
    }
    r.empirical_tail = last_term_ratio_tail(r.terms);
    return r;
}

double truncated_moment(const std::vector<Point>& T, double lambda, int n_max, int cap) {
    if (T.empty()) return 1.0;
    const int m = static_cast<int>(T.size());
    auto cumulant_of = [&](IndexMask mask) {
        SpinSequence sub;
        for (int i = 0; i < m; ++i) {
            if (mask & (IndexMask{1} << i)) sub.push_back(T[static_cast<std::size_t>(i)]);
        }
        return semi_invariant_series(sub, lambda, n_max, cap).partial_sum;
    };
    return moment_from_cumulants<double>(cumulant_of, m);
}

double cylinder_probability(const std::vector<Point>& T, const std::vector<int>& A, double lambda,
                            int n_max, int cap) {
    if (T.size() != A.size()) {
        throw std::invalid_argument("cylinder_probability: |T| != |A|");
    }
    for (std::size_t i = 0; i < T.size(); ++i) {
        if (A[i] != 1 && A[i] != -1) throw std::invalid_argument("cylinder signs must be +1 or -1");
        for (std::size_t j = 0; j < i; ++j) {
            if (T[i] == T[j]) throw std::invalid_argument("cylinder points must be distinct");
        }
    }
    const int m = static_cast<int>(T.size());
    if (m > 20) throw LimitExceeded("cylinder set too large");
    int minus = 0;
    for (int a : A) minus += (a == -1);

    double total = 0.0;
    for (IndexMask sub = 0; sub < (IndexMask{1} << m); ++sub) {
        std::vector<Point> chosen;
        double sign = 1.0;
        for (int i = 0; i < m; ++i) {
            if (sub & (IndexMask{1} << i)) {
                chosen.push_back(T[static_cast<std::size_t>(i)]);
            } else {
                sign *= A[static_cast<std::size_t>(i)];
            }
        }
        total += truncated_moment(chosen, lambda, n_max, cap) * sign;
    }
    return (minus % 2 ? -1.0 : 1.0) * total / std::ldexp(1.0, m);
}

double tail_geometric(double x, int l) {
    if (!(x > 0.0 && x < 0.5)) throw std::domain_error("tail_geometric requires 0 < x < 1/2");
    if (l < 0) throw std::invalid_argument("tail_geometric requires l >= 0");
    return std::pow(x, l + 1) / ((1.0 - x) * (1.0 - x));
}

double tail_polynomial(double x, int m) {
    if (!(x > 0.0 && x < 0.5)) throw std::domain_error("tail_polynomial requires 0 < x < 1/2");
    if (m < 1) throw std::invalid_argument("tail_polynomial requires m >= 1");
    return std::tgamma(m + 1.0) / std::pow(1.0 - x, m + 1);
}

void write_series_table(std::ostream& os, const SeriesResult& r) {
    const auto old = os.precision(17);
    for (const auto& t : r.terms) {
        os << t.n << ' ' << to_fraction_string(t.coefficient) << ' ' << t.value << '\n';
    }
    os.precision(old);
}

}  // namespace isingclt
