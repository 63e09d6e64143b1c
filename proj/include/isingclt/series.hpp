#pragma once

// High-temperature (small lambda) expansion of limiting semi-invariants:
//
//   <Q_t1, ..., Q_tm>_lambda = sum_n lambda^n sum_{gamma connects b, |gamma|=n}
//                              <Q'_b, Phi'_gamma>_0 / gamma!
//
// together with the block-variance coefficients V_n and the explicit
// convergence constants that go with the expansion.

#include <iosfwd>
#include <optional>
#include <vector>

#include "isingclt/families.hpp"
#include "isingclt/lattice.hpp"
#include "isingclt/rational.hpp"

namespace isingclt {

/// Convergence constants for dimension nu. Stored as long double because
/// C3 = 3L e^{L^2+1} leaves double range already at nu = 4.
struct SeriesConstants {
    int nu = 1;
    long double L = 0;     // 4 nu + 1
    long double C1 = 0;    // 3 L e^{L^2+1}, the generic estimate constant at this L
    long double C2 = 0;    // 4 nu^2, counts connecting families
    long double C3 = 0;    // 3 L e^{L^2+1}, bounds free semi-invariants
    long double C_nu = 0;  // 1 / (2 C2 C3), thermodynamic-limit radius
    long double C = 0;     // min{1/(2 C2 C3), 1/(8 C2 C3^3)}
};

SeriesConstants constants(int nu);

/// Exact rational lower bound on C3, for exact comparisons.
ExactRational c3_lower_bound(int nu);

struct SeriesTerm {
    int n = 0;
    ExactRational coefficient;
    double value = 0.0;  // coefficient * lambda^n
};

struct SeriesResult {
    double lambda = 0.0;
    int n_max = 0;
    double partial_sum = 0.0;
    /// Provable bound on the omitted tail; +inf outside the bound's domain.
    double rigorous_tail = 0.0;
    /// Last-term ratio extrapolation; a heuristic, not a bound. +inf when
    /// the visible terms do not decrease.
    double empirical_tail = 0.0;
    std::vector<SeriesTerm> terms;
};

/// V(n, s): coefficient of lambda^n in sum_{t != s} <Q_s, Q_t>_lambda.
ExactRational variance_coefficient_at(const Point& s, int n, int cap = -1);

/// V_n = V(n, origin); cached per (nu, n).
ExactRational coefficient_Vn(int nu, int n, int cap = -1);

/// 1 + sum_{n <= n_max} lambda^n V_n with tail estimates.
SeriesResult variance_series(int nu, double lambda, int n_max, int cap = -1);

/// Coefficient of lambda^n in the limiting semi-invariant <Q'_b>_lambda. With
/// `volume`, only families whose edges lie inside the cube are counted (the
/// finite-volume coefficient a_{N,n}).
ExactRational semi_invariant_coefficient(const SpinSequence& b, int n, int cap = -1,
                                         const std::optional<Cube>& volume = std::nullopt);

SeriesResult semi_invariant_series(const SpinSequence& b, double lambda, int n_max, int cap = -1);

/// Truncated limiting moment f(Q_T) of distinct points T, assembled from
/// truncated semi-invariants. f(Q_{}) = 1.
double truncated_moment(const std::vector<Point>& T, double lambda, int n_max, int cap = -1);

/// Limiting probability that omega(t_i) = a_i for all i, with moments
/// truncated at n_max.
double cylinder_probability(const std::vector<Point>& T, const std::vector<int>& A, double lambda,
                            int n_max, int cap = -1);

/// sum_{n=l+1}^inf (n - l) x^n = x^{l+1} / (1 - x)^2, for 0 < x < 1/2.
double tail_geometric(double x, int l);

/// Closed-form bound m! / (1 - x)^{m+1} on sum_{n>=0} (n+1)^{m-1} x^n, for 0 < x < 1/2.
double tail_polynomial(double x, int m);

/// One record per order: "n p/q value".
void write_series_table(std::ostream& os, const SeriesResult& r);

}  // namespace isingclt
