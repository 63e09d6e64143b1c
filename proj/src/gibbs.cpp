#include "isingclt/gibbs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "isingclt/cumulant.hpp"
#include "isingclt/errors.hpp"

namespace isingclt {

// ---------------------------------------------------------------------------
// Configurations and energy

void GibbsSpec::validate() const {
    if (nu < 1) throw std::invalid_argument("nu must be >= 1");
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (!std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite");
}

SpinConfig::SpinConfig(const Cube& cube)
    : cube_(cube), sites_(cube.size()), words_((cube.size() + 63) / 64, 0) {}

void SpinConfig::set(std::size_t site, int s) {
    if (s != 1 && s != -1) throw std::invalid_argument("spin must be +1 or -1");
    const std::uint64_t bit = std::uint64_t{1} << (site & 63);
    if (s == -1) {
        words_[site >> 6] |= bit;
    } else {
        words_[site >> 6] &= ~bit;
    }
}

namespace {

// Bonds of R_N as pairs of site indices.
std::vector<std::pair<std::size_t, std::size_t>> cube_bonds(const Cube& cube) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& e : cube_edges(cube)) out.emplace_back(cube.index_of(e.a()), cube.index_of(e.b()));
    return out;
}

// Neighbour lists in CSR form.
struct Adjacency {
    std::vector<std::size_t> offset;
    std::vector<std::size_t> nbr;
};

Adjacency adjacency(const Cube& cube) {
    std::vector<std::vector<std::size_t>> lists(cube.size());
    for (const auto& [a, b] : cube_bonds(cube)) {
        lists[a].push_back(b);
        lists[b].push_back(a);
    }
    Adjacency adj;
    adj.offset.push_back(0);
    for (const auto& l : lists) {
        adj.nbr.insert(adj.nbr.end(), l.begin(), l.end());
        adj.offset.push_back(adj.nbr.size());
    }
    return adj;
}

}  // namespace

double energy(const GibbsSpec& spec, const SpinConfig& cfg) {
    if (!(cfg.cube().nu == spec.nu && cfg.cube().N == spec.N)) {
        throw std::invalid_argument("configuration does not match the model's cube");
    }
    long bond_sum = 0;
    for (const auto& [a, b] : cube_bonds(spec.cube())) bond_sum += cfg.spin(a) * cfg.spin(b);
    return -spec.lambda * static_cast<double>(bond_sum);
}

// ---------------------------------------------------------------------------
// Exact enumeration

ExactGibbs::ExactGibbs(const GibbsSpec& spec) : spec_(spec), cube_(spec.cube()) {
    spec_.validate();
    if (cube_.size() > kExactSiteLimit) {
        throw LimitExceeded("exact enumeration limited to " + std::to_string(kExactSiteLimit) +
                            " sites; cube has " + std::to_string(cube_.size()));
    }
    bonds_ = cube_bonds(cube_);
}

std::vector<double> ExactGibbs::joint_law(const std::vector<Point>& points) const {
    const std::size_t sites = cube_.size();
    std::vector<std::uint32_t> tracked_bit(sites, 0);
    for (std::size_t j = 0; j < points.size(); ++j) {
        const auto idx = cube_.index_of(points[j]);
        if (tracked_bit[idx]) throw std::invalid_argument("joint_law: repeated point");
        tracked_bit[idx] = std::uint32_t{1} << j;
    }

    const Adjacency adj = adjacency(cube_);
    const long bonds = static_cast<long>(bonds_.size());
    // Weight e^{lambda S} for bond sum S, shifted so the largest weight is 1.
    std::vector<long double> weight(static_cast<std::size_t>(2 * bonds + 1));
    for (long s = -bonds; s <= bonds; ++s) {
        weight[static_cast<std::size_t>(s + bonds)] =
            std::exp(static_cast<long double>(spec_.lambda) * s - std::abs(spec_.lambda) * bonds);
    }

    std::vector<long double> law(std::size_t{1} << points.size(), 0.0L);
    std::vector<signed char> spin(sites, 1);
    long bond_sum = bonds;
    std::uint32_t pattern = 0;
    long double z = 0.0L;
    const std::uint64_t total = std::uint64_t{1} << sites;
    // Gray-code walk: step i flips the site at the lowest set bit of i.
    for (std::uint64_t i = 0; i < total; ++i) {
        if (i) {
            const auto site = static_cast<std::size_t>(__builtin_ctzll(i));
            long local = 0;
            for (auto p = adj.offset[site]; p < adj.offset[site + 1]; ++p) local += spin[adj.nbr[p]];
            bond_sum -= 2 * spin[site] * local;
            spin[site] = static_cast<signed char>(-spin[site]);
            pattern ^= tracked_bit[site];
        }
        const long double w = weight[static_cast<std::size_t>(bond_sum + bonds)];
        law[pattern] += w;
        z += w;
    }
    std::vector<double> out(law.size());
    for (std::size_t p = 0; p < law.size(); ++p) out[p] = static_cast<double>(law[p] / z);
    return out;
}

double ExactGibbs::moment(const PointMultiset& ms) const {
    std::vector<Point> odd;
    for (const auto& [t, mult] : ms) {
        if (!cube_.contains(t)) throw std::out_of_range("point " + to_string(t) + " outside cube");
        if (mult < 0) throw std::invalid_argument("negative multiplicity");
        if (mult % 2) odd.push_back(t);
    }
    const auto law = joint_law(odd);
    double e = 0.0;
    for (std::size_t p = 0; p < law.size(); ++p) e += (__builtin_popcountll(p) % 2 ? -law[p] : law[p]);
    return e;
}

double ExactGibbs::semi_invariant(const SpinSequence& b) const {
    const int m = static_cast<int>(b.size());
    check_partition_order(m, kDefaultPartitionCap);
    std::vector<Point> distinct(b.begin(), b.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<std::uint32_t> bit(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        bit[i] = std::uint32_t{1}
                 << (std::lower_bound(distinct.begin(), distinct.end(), b[i]) - distinct.begin());
    }
    const auto law = joint_law(distinct);
    auto moment_of = [&](IndexMask mask) {
        std::uint32_t sel = 0;
        for (int i = 0; i < m; ++i) {
            if (mask & (IndexMask{1} << i)) sel ^= bit[static_cast<std::size_t>(i)];
        }
        double e = 0.0;
        for (std::size_t p = 0; p < law.size(); ++p) {
            e += (__builtin_popcount(static_cast<unsigned>(p) & sel) % 2 ? -law[p] : law[p]);
        }
        return e;
    };
    return cumulant<double>(moment_of, m);
}

double exact_moment(const GibbsSpec& spec, const PointMultiset& ms) {
    return ExactGibbs(spec).moment(ms);
}

double exact_semi_invariant(const GibbsSpec& spec, const SpinSequence& b) {
    return ExactGibbs(spec).semi_invariant(b);
}

// ---------------------------------------------------------------------------
// 1-D transfer matrix

double transfer_pair_correlation(double lambda, std::int64_t d) {
    if (d < 0) throw std::invalid_argument("distance must be >= 0");
    // Eigenvalues of [[e^l, e^-l], [e^-l, e^l]] are 2 cosh l and 2 sinh l.
    const double top = 2.0 * std::cosh(lambda);
    const double second = 2.0 * std::sinh(lambda);
    return std::pow(second / top, static_cast<double>(d));
}

double chain_moment(double lambda, std::int64_t N, const PointMultiset& ms) {
    if (N < 0) throw std::invalid_argument("N must be >= 0");
    std::map<std::int64_t, bool> odd;
    for (const auto& [t, mult] : ms) {
        if (t.dim() != 1 || t[0] < -N || t[0] > N) {
            throw std::out_of_range("point " + to_string(t) + " outside chain");
        }
        if (mult % 2) odd[t[0]] = true;
    }
    const long double same = std::exp(static_cast<long double>(lambda));
    const long double diff = std::exp(-static_cast<long double>(lambda));
    // Row vectors over the states (+1, -1): `num` carries the spin insertions,
    // `den` is the partition function.
    std::array<long double, 2> num{1.0L, 1.0L};
    std::array<long double, 2> den{1.0L, 1.0L};
    for (std::int64_t site = -N; site <= N; ++site) {
        if (site > -N) {
            num = {num[0] * same + num[1] * diff, num[0] * diff + num[1] * same};
            den = {den[0] * same + den[1] * diff, den[0] * diff + den[1] * same};
            const long double scale = den[0] + den[1];
            for (auto* v : {&num, &den}) {
                (*v)[0] /= scale;
                (*v)[1] /= scale;
            }
        }
        if (odd.count(site)) num[1] = -num[1];
    }
    return static_cast<double>((num[0] + num[1]) / (den[0] + den[1]));
}

double chain_semi_invariant(double lambda, std::int64_t N, const SpinSequence& b) {
    const int m = static_cast<int>(b.size());
    auto moment_of = [&](IndexMask mask) {
        PointMultiset ms;
        for (int i = 0; i < m; ++i) {
            if (mask & (IndexMask{1} << i)) ++ms[b[static_cast<std::size_t>(i)]];
        }
        return chain_moment(lambda, N, ms);
    };
    return cumulant<double>(moment_of, m);
}

// ---------------------------------------------------------------------------
// Metropolis

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

void MetropolisParams::validate() const {
    if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
    if (sweeps <= burn_in) throw std::invalid_argument("sweeps must exceed burn_in");
    if (thin < 1) throw std::invalid_argument("thin must be >= 1");
}

void metropolis_run(const GibbsSpec& spec, const MetropolisParams& params,
                    const std::function<void(std::int64_t, const SpinConfig&)>& emit) {
    spec.validate();
    params.validate();
    const Cube cube = spec.cube();
    const Adjacency adj = adjacency(cube);
    const int max_field = 2 * spec.nu;

    // Flipping spin s with local field h changes U by 2 lambda s h.
    std::vector<double> accept(static_cast<std::size_t>(2 * max_field + 1));
    for (int sh = -max_field; sh <= max_field; ++sh) {
        accept[static_cast<std::size_t>(sh + max_field)] = std::min(1.0, std::exp(-2.0 * spec.lambda * sh));
    }

    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    SpinConfig cfg(cube);
    std::uniform_int_distribution<std::size_t> pick(0, cfg.size() - 1);
    for (std::size_t i = 0; i < cfg.size(); ++i) cfg.set(i, (rng() >> 63) ? -1 : 1);

    for (std::int64_t sweep = 1; sweep <= params.sweeps; ++sweep) {
        // Random site order: a fixed sequential scan is not ergodic at weak
        // coupling, where almost every proposal is accepted.
        for (std::size_t step = 0; step < cfg.size(); ++step) {
            const std::size_t site = pick(rng);
            int field = 0;
            for (auto p = adj.offset[site]; p < adj.offset[site + 1]; ++p) field += cfg.spin(adj.nbr[p]);
            const double a = accept[static_cast<std::size_t>(cfg.spin(site) * field + max_field)];
            if (a >= 1.0 || uniform(rng) < a) cfg.flip(site);
        }
        if (sweep > params.burn_in && (sweep - params.burn_in) % params.thin == 0) emit(sweep, cfg);
    }
}

// ---------------------------------------------------------------------------
// Block transform

BlockObserver::BlockObserver(const Cube& cube, std::int64_t k, double alpha, std::vector<Point> taus)
    : cube_(cube), scale_(std::pow(static_cast<double>(k), -alpha / 2.0)), taus_(std::move(taus)) {
    if (k <= 1) throw std::invalid_argument("block side k must be > 1");
    for (const auto& tau : taus_) {
        std::vector<std::size_t> sites;
        for (const auto& t : block_preimage(tau, k)) {
            if (!cube_.contains(t)) {
                throw std::out_of_range("block " + to_string(tau) + " extends outside the cube");
            }
            sites.push_back(cube_.index_of(t));
        }
        sites_.push_back(std::move(sites));
    }
}

void BlockObserver::observe(const SpinConfig& cfg, std::vector<double>& out) const {
    if (!(cfg.cube().nu == cube_.nu && cfg.cube().N == cube_.N)) {
        throw std::invalid_argument("configuration does not match the observer's cube");
    }
    out.resize(sites_.size());
    for (std::size_t b = 0; b < sites_.size(); ++b) {
        long sum = 0;
        for (auto s : sites_[b]) sum += cfg.spin(s);
        out[b] = scale_ * static_cast<double>(sum);
    }
}

std::vector<Point> interior_blocks(const Cube& cube, std::int64_t k) {
    if (k <= 1) throw std::invalid_argument("block side k must be > 1");
    // tau k >= -N and tau k + k - 1 <= N along every axis.
    const std::int64_t lo = -(cube.N / k);
    const std::int64_t hi = block_map(Point{cube.N - k + 1}, k)[0];
    std::vector<Point> out;
    if (hi < lo) return out;
    std::vector<std::int64_t> c(static_cast<std::size_t>(cube.nu), lo);
    while (true) {
        out.emplace_back(c);
        int axis = cube.nu - 1;
        while (axis >= 0 && c[static_cast<std::size_t>(axis)] == hi) {
            c[static_cast<std::size_t>(axis)] = lo;
            --axis;
        }
        if (axis < 0) break;
        ++c[static_cast<std::size_t>(axis)];
    }
    return out;
}

std::map<Point, double> block_transform(const SpinConfig& cfg, std::int64_t k, double alpha,
                                        const std::vector<Point>& taus) {
    BlockObserver obs(cfg.cube(), k, alpha, taus);
    std::vector<double> y;
    obs.observe(cfg, y);
    std::map<Point, double> out;
    for (std::size_t i = 0; i < taus.size(); ++i) out[taus[i]] = y[i];
    return out;
}

// ---------------------------------------------------------------------------
// Sample cumulants

namespace {

constexpr int kMaxEmpiricalOrder = 4;

std::size_t bin_count(std::size_t n, std::size_t bins) {
    std::size_t b = bins == 0 ? std::min<std::size_t>(n, 256) : std::min(bins, n);
    if (b < 2) throw std::invalid_argument("jackknife needs at least 2 bins");
    return b;
}

// Cumulant of the given order from central-ish moments mu[p] = E[(X - c)^p].
double cumulant_from_moments(const std::array<double, kMaxEmpiricalOrder + 1>& mu, int order) {
    auto moment_of = [&](IndexMask mask) { return mu[static_cast<std::size_t>(__builtin_popcount(mask))]; };
    return cumulant<double>(moment_of, order);
}

double jackknife_error(const std::vector<double>& leave_out) {
    const double b = static_cast<double>(leave_out.size());
    double mean = 0.0;
    for (double v : leave_out) mean += v;
    mean /= b;
    double ss = 0.0;
    for (double v : leave_out) ss += (v - mean) * (v - mean);
    return std::sqrt((b - 1.0) / b * ss);
}

}  // namespace

std::vector<CumulantEstimate> empirical_cumulants(std::span<const double> samples, int max_order,
                                                  std::size_t bins) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("empirical_cumulants needs at least 2 samples");
    if (max_order < 1 || max_order > kMaxEmpiricalOrder) {
        throw std::invalid_argument("empirical cumulant order must be in 1..4");
    }
    const std::size_t nb = bin_count(n, bins);

    double center = 0.0;
    for (double x : samples) center += x;
    center /= static_cast<double>(n);

    using Sums = std::array<double, kMaxEmpiricalOrder + 1>;
    std::vector<Sums> bin_sums(nb, Sums{});
    std::vector<std::size_t> bin_size(nb, 0);
    Sums total{};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = i * nb / n;
        const double d = samples[i] - center;
        double p = 1.0;
        for (int k = 0; k <= kMaxEmpiricalOrder; ++k) {
            bin_sums[b][static_cast<std::size_t>(k)] += p;
            p *= d;
        }
        ++bin_size[b];
    }
    for (const auto& s : bin_sums) {
        for (std::size_t k = 0; k < s.size(); ++k) total[k] += s[k];
    }

    auto moments = [](const Sums& s) {
        Sums mu{};
        for (std::size_t k = 0; k < s.size(); ++k) mu[k] = s[k] / s[0];
        return mu;
    };

    std::vector<CumulantEstimate> out;
    const Sums mu_all = moments(total);
    for (int order = 1; order <= max_order; ++order) {
        CumulantEstimate est;
        est.order = order;
        est.n_samples = static_cast<std::int64_t>(n);
        const double shift = order == 1 ? center : 0.0;
        est.value = cumulant_from_moments(mu_all, order) + shift;
        std::vector<double> leave_out;
        leave_out.reserve(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            Sums rest{};
            for (std::size_t k = 0; k < rest.size(); ++k) rest[k] = total[k] - bin_sums[b][k];
            leave_out.push_back(cumulant_from_moments(moments(rest), order));
        }
        est.std_error = jackknife_error(leave_out);
        out.push_back(est);
    }
    return out;
}

std::vector<std::vector<CumulantEstimate>> empirical_cumulants(
    const std::vector<std::vector<double>>& rows, int max_order, std::size_t bins) {
    if (rows.empty()) throw std::invalid_argument("empirical_cumulants needs at least 2 samples");
    const std::size_t cols = rows.front().size();
    std::vector<std::vector<CumulantEstimate>> out;
    std::vector<double> column(rows.size());
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw std::invalid_argument("ragged sample rows");
            column[r] = rows[r][c];
        }
        out.push_back(empirical_cumulants(column, max_order, bins));
    }
    return out;
}

CumulantEstimate empirical_covariance(std::span<const double> x, std::span<const double> y,
                                      std::size_t bins) {
    const std::size_t n = x.size();
    if (y.size() != n) throw std::invalid_argument("covariance needs paired samples");
    if (n < 2) throw std::invalid_argument("covariance needs at least 2 samples");
    const std::size_t nb = bin_count(n, bins);

    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cx += x[i];
        cy += y[i];
    }
    cx /= static_cast<double>(n);
    cy /= static_cast<double>(n);

    // Per bin: count, sum dx, sum dy, sum dx*dy.
    using Sums = std::array<double, 4>;
    std::vector<Sums> bin_sums(nb, Sums{});
    Sums total{};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = i * nb / n;
        const double dx = x[i] - cx, dy = y[i] - cy;
        bin_sums[b][0] += 1.0;
        bin_sums[b][1] += dx;
        bin_sums[b][2] += dy;
        bin_sums[b][3] += dx * dy;
    }
    for (const auto& s : bin_sums) {
        for (std::size_t k = 0; k < 4; ++k) total[k] += s[k];
    }
    auto covariance = [](const Sums& s) {
        const std::array<double, 4> mu{1.0, s[1] / s[0], s[2] / s[0], s[3] / s[0]};
        auto moment_of = [&](IndexMask mask) { return mu[mask]; };
        return cumulant<double>(moment_of, 2);
    };

    CumulantEstimate est;
    est.order = 2;
    est.n_samples = static_cast<std::int64_t>(n);
    est.value = covariance(total);
    std::vector<double> leave_out;
    for (std::size_t b = 0; b < nb; ++b) {
        Sums rest{};
        for (std::size_t k = 0; k < 4; ++k) rest[k] = total[k] - bin_sums[b][k];
        leave_out.push_back(covariance(rest));
    }
    est.std_error = jackknife_error(leave_out);
    return est;
}

std::vector<double> taylor_coefficients_by_fit(const std::function<double(double)>& f, double h,
                                               int points, int degree) {
    if (!(h > 0.0) || points < 1 || degree < 0 || 2 * points < degree + 1) {
        throw std::invalid_argument("taylor fit: grid too small for the requested degree");
    }
    const double span = h * points;
    Eigen::MatrixXd design(2 * points, degree + 1);
    Eigen::VectorXd rhs(2 * points);
    int row = 0;
    for (int i = -points; i <= points; ++i) {
        if (i == 0) continue;
        const double lambda = h * i;
        const double u = lambda / span;
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            design(row, j) = p;
            p *= u;
        }
        rhs(row) = f(lambda);
        ++row;
    }
    const Eigen::VectorXd c = design.colPivHouseholderQr().solve(rhs);
    std::vector<double> out(static_cast<std::size_t>(degree + 1));
    for (int j = 0; j <= degree; ++j) out[static_cast<std::size_t>(j)] = c(j) / std::pow(span, j);
    return out;
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    in >> out;
    if (in.fail() || !(in >> std::ws).eof()) {
        throw std::invalid_argument("invalid value for '" + key + "': '" + value + "'");
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
    GibbsSpec{nu, N, lambda}.validate();
    MetropolisParams{seed, sweeps, burn_in, thin}.validate();
    if (ks.empty()) throw std::invalid_argument("at least one block side k is required");
    for (auto k : ks) {
        BlockParams{k, alpha}.validate(nu);
        if (interior_blocks(Cube{nu, N}, k).empty()) {
            throw std::invalid_argument("no block of side " + std::to_string(k) + " fits in the cube");
        }
    }
    if (chains < 1) throw std::invalid_argument("chains must be >= 1");
    for (const auto& o : observables) {
        if (o != "energy" && o != "magnetization" && o != "blocks") {
            throw std::invalid_argument("unknown observable '" + o + "'");
        }
    }
}

void apply_config_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "nu") {
        cfg.nu = parse_number<int>(key, value);
    } else if (key == "N") {
        cfg.N = parse_number<std::int64_t>(key, value);
    } else if (key == "lambda") {
        cfg.lambda = parse_number<double>(key, value);
    } else if (key == "k") {
        cfg.ks.clear();
        for (const auto& tok : split_list(value)) cfg.ks.push_back(parse_number<std::int64_t>(key, tok));
    } else if (key == "alpha") {
        cfg.alpha = parse_number<double>(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "sweeps") {
        cfg.sweeps = parse_number<std::int64_t>(key, value);
    } else if (key == "burn_in") {
        cfg.burn_in = parse_number<std::int64_t>(key, value);
    } else if (key == "thin") {
        cfg.thin = parse_number<std::int64_t>(key, value);
    } else if (key == "chains") {
        cfg.chains = parse_number<int>(key, value);
    } else if (key == "observables") {
        cfg.observables = split_list(value);
    } else if (key == "out") {
        cfg.out = value;
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

ExperimentConfig parse_experiment_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        }
        apply_config_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ExperimentResult run_block_experiment(const ExperimentConfig& config, std::ostream* dump) {
    config.validate();
    const GibbsSpec spec{config.nu, config.N, config.lambda};
    const Cube cube = spec.cube();
    const auto has = [&](const char* name) {
        return std::find(config.observables.begin(), config.observables.end(), name) !=
               config.observables.end();
    };

    struct PerK {
        BlockObserver observer;
        std::vector<std::pair<std::size_t, std::size_t>> adjacent;
        std::size_t dump_block = 0;
        std::vector<double> values, left, right;
    };
    std::vector<PerK> per_k;
    for (auto k : config.ks) {
        auto taus = interior_blocks(cube, k);
        PerK pk{BlockObserver(cube, k, config.alpha, taus), {}, 0, {}, {}, {}};
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const Point next = taus[i].step(0, +1);
            const auto it = std::lower_bound(taus.begin(), taus.end(), next);
            if (it != taus.end() && *it == next) {
                pk.adjacent.emplace_back(i, static_cast<std::size_t>(it - taus.begin()));
            }
            if (taus[i] == Point::origin(config.nu)) pk.dump_block = i;
        }
        per_k.push_back(std::move(pk));
    }

    if (dump) {
        *dump << "chain,sweep";
        if (has("energy")) *dump << ",energy";
        if (has("magnetization")) *dump << ",magnetization";
        if (has("blocks")) {
            for (auto k : config.ks) *dump << ",Y" << k;
        }
        *dump << '\n';
    }

    ExperimentResult result;
    result.config = config;
    std::vector<double> y;
    for (int chain = 0; chain < config.chains; ++chain) {
        const MetropolisParams params{child_seed(config.seed, static_cast<std::uint64_t>(chain)),
                                      config.sweeps, config.burn_in, config.thin};
        metropolis_run(spec, params, [&](std::int64_t sweep, const SpinConfig& cfg) {
            ++result.emissions;
            if (dump) *dump << chain << ',' << sweep;
            if (dump && has("energy")) *dump << ',' << format_double(energy(spec, cfg));
            if (dump && has("magnetization")) {
                long m = 0;
                for (std::size_t i = 0; i < cfg.size(); ++i) m += cfg.spin(i);
                *dump << ',' << format_double(static_cast<double>(m) / static_cast<double>(cfg.size()));
            }
            for (auto& pk : per_k) {
                pk.observer.observe(cfg, y);
                pk.values.insert(pk.values.end(), y.begin(), y.end());
                for (const auto& [a, b] : pk.adjacent) {
                    pk.left.push_back(y[a]);
                    pk.right.push_back(y[b]);
                }
                if (dump && has("blocks")) *dump << ',' << format_double(y[pk.dump_block]);
            }
            if (dump) *dump << '\n';
        });
    }

    for (std::size_t i = 0; i < per_k.size(); ++i) {
        auto& pk = per_k[i];
        BlockStatistics stats;
        stats.k = config.ks[i];
        stats.blocks_per_emission = static_cast<std::int64_t>(pk.observer.taus().size());
        stats.cumulants = empirical_cumulants(pk.values, 4);
        if (pk.left.size() >= 2) stats.adjacent_covariance = empirical_covariance(pk.left, pk.right);
        result.per_k.push_back(std::move(stats));
    }
    return result;
}

}  // namespace isingclt
