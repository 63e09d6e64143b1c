#pragma once

// Finite-volume Ising measures on Lambda_N with free boundary:
// exact enumeration, the 1-D transfer matrix, Metropolis sampling, the
// block-spin transform and sample cumulant estimation.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "isingclt/families.hpp"
#include "isingclt/free_field.hpp"
#include "isingclt/lattice.hpp"

namespace isingclt {

struct GibbsSpec {
    int nu = 1;
    std::int64_t N = 1;
    double lambda = 0.0;

    Cube cube() const { return Cube{nu, N}; }
    void validate() const;
};

/// Spins of every site of a cube, one bit per site (set bit = spin -1).
class SpinConfig {
public:
    SpinConfig() = default;
    /// All spins +1.
    explicit SpinConfig(const Cube& cube);

    const Cube& cube() const { return cube_; }
    std::size_t size() const { return sites_; }

    int spin(std::size_t site) const {
        return (words_[site >> 6] >> (site & 63)) & 1U ? -1 : 1;
    }
    int spin(const Point& t) const { return spin(cube_.index_of(t)); }
    void set(std::size_t site, int s);
    void flip(std::size_t site) { words_[site >> 6] ^= std::uint64_t{1} << (site & 63); }

    friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

private:
    Cube cube_;
    std::size_t sites_ = 0;
    std::vector<std::uint64_t> words_;
};

/// U_N(omega) = -lambda * sum over edges of R_N of omega(r) omega(s).
double energy(const GibbsSpec& spec, const SpinConfig& cfg);

inline constexpr std::size_t kExactSiteLimit = 25;

/// Gibbs measure on a small cube by summing all 2^|Lambda_N| configurations.
class ExactGibbs {
public:
    /// Throws LimitExceeded above kExactSiteLimit sites.
    explicit ExactGibbs(const GibbsSpec& spec);

    const GibbsSpec& spec() const { return spec_; }

    /// Joint law of the spins at `points` (distinct, inside the cube):
    /// entry `pattern` is P(spin at points[j] == -1 exactly for bits j set).
    std::vector<double> joint_law(const std::vector<Point>& points) const;

    /// E[prod Q_t^{mult}].
    double moment(const PointMultiset& ms) const;

    /// Gibbs semi-invariant <Q_t1, ..., Q_tm>_{lambda,N}.
    double semi_invariant(const SpinSequence& b) const;

private:
    GibbsSpec spec_;
    Cube cube_;
    std::vector<std::pair<std::size_t, std::size_t>> bonds_;
};

double exact_moment(const GibbsSpec& spec, const PointMultiset& ms);
double exact_semi_invariant(const GibbsSpec& spec, const SpinSequence& b);

/// Infinite-chain pair correlation tanh(lambda)^d from the eigenvalues of the
/// 2x2 transfer matrix.
double transfer_pair_correlation(double lambda, std::int64_t d);

/// E[prod Q_t^{mult}] on the open chain {-N..N} by transfer matrices.
double chain_moment(double lambda, std::int64_t N, const PointMultiset& ms);

/// Semi-invariant on the open chain {-N..N} by transfer matrices.
double chain_semi_invariant(double lambda, std::int64_t N, const SpinSequence& b);

/// Child seed for chain `index` of a run seeded with `master`.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index);

struct MetropolisParams {
    std::uint64_t seed = 1;
    std::int64_t sweeps = 1000;
    std::int64_t burn_in = 100;
    std::int64_t thin = 1;

    void validate() const;
};

/// Single-site Metropolis chain targeting the Gibbs measure of `spec`.
/// Starts from independent fair spins; a sweep is |Lambda_N| updates at
/// uniformly chosen sites. After each sweep s > burn_in with
/// (s - burn_in) % thin == 0, calls emit(s, cfg).
void metropolis_run(const GibbsSpec& spec, const MetropolisParams& params,
                    const std::function<void(std::int64_t, const SpinConfig&)>& emit);

/// Site lists of selected blocks, for repeated block transforms.
class BlockObserver {
public:
    /// Throws std::out_of_range if a block is not inside the cube.
    BlockObserver(const Cube& cube, std::int64_t k, double alpha, std::vector<Point> taus);

    const std::vector<Point>& taus() const { return taus_; }
    /// Y_tau for every tau, in the order of taus().
    void observe(const SpinConfig& cfg, std::vector<double>& out) const;

private:
    Cube cube_;
    double scale_ = 1.0;
    std::vector<Point> taus_;
    std::vector<std::vector<std::size_t>> sites_;
};

/// Every tau whose block lies inside the cube, lexicographic order.
std::vector<Point> interior_blocks(const Cube& cube, std::int64_t k);

/// Y_tau = k^{-alpha/2} sum_{t in block(tau)} X_t.
std::map<Point, double> block_transform(const SpinConfig& cfg, std::int64_t k, double alpha,
                                        const std::vector<Point>& taus);

struct CumulantEstimate {
    int order = 0;
    double value = 0.0;
    std::int64_t n_samples = 0;
    double std_error = 0.0;
};

/// Plug-in cumulants of orders 1..max_order (max 4) from the partition formula
/// over sample moments. Standard errors by delete-one-bin jackknife over
/// `bins` contiguous bins (0 picks min(n, 256)); contiguous binning absorbs
/// serial correlation shorter than a bin.
std::vector<CumulantEstimate> empirical_cumulants(std::span<const double> samples, int max_order,
                                                  std::size_t bins = 0);

/// Per-column estimates for row-major samples (each row one observation).
std::vector<std::vector<CumulantEstimate>> empirical_cumulants(
    const std::vector<std::vector<double>>& rows, int max_order, std::size_t bins = 0);

/// Plug-in covariance of paired samples with jackknife standard error.
CumulantEstimate empirical_covariance(std::span<const double> x, std::span<const double> y,
                                      std::size_t bins = 0);

/// Least-squares polynomial fit of f on lambda in {+-h, +-2h, ..., +-points*h},
/// returning the coefficients of lambda^0 .. lambda^degree.
std::vector<double> taylor_coefficients_by_fit(const std::function<double(double)>& f, double h,
                                               int points, int degree);

/// Parameters of a block-spin Monte Carlo experiment; read from key=value
/// text (see parse_experiment_config).
struct ExperimentConfig {
    int nu = 1;
    std::int64_t N = 256;
    double lambda = 0.0;
    std::vector<std::int64_t> ks{4};
    double alpha = 1.0;
    std::uint64_t seed = 1;
    std::int64_t sweeps = 1100;
    std::int64_t burn_in = 100;
    std::int64_t thin = 1;
    int chains = 1;
    std::vector<std::string> observables{"energy", "magnetization", "blocks"};
    std::string out;  // CSV sample dump path; empty for none

    void validate() const;
};

/// Parses key=value lines ('#' starts a comment). Unknown keys are errors.
ExperimentConfig parse_experiment_config(std::istream& in);
/// Applies one key=value setting.
void apply_config_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct BlockStatistics {
    std::int64_t k = 0;
    std::int64_t blocks_per_emission = 0;
    std::vector<CumulantEstimate> cumulants;  // orders 1..4 of Y_tau, pooled over blocks
    CumulantEstimate adjacent_covariance;     // <Y_tau, Y_{tau+e1}>
};

struct ExperimentResult {
    ExperimentConfig config;
    std::int64_t emissions = 0;
    std::vector<BlockStatistics> per_k;
};

/// Runs config.chains independent chains (seeds from child_seed) and pools
/// block statistics. When `dump` is non-null, writes one CSV row per
/// emission.
ExperimentResult run_block_experiment(const ExperimentConfig& config, std::ostream* dump = nullptr);

}  // namespace isingclt
