// isingclt: command-line front end for the series, exact and Monte Carlo tools.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "isingclt/errors.hpp"
#include "isingclt/gibbs.hpp"
#include "isingclt/lattice.hpp"
#include "isingclt/series.hpp"
#include "isingclt/verify.hpp"

using json = nlohmann::json;
using namespace isingclt;

namespace {

// Infinite tails have no JSON number; they are written as null.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt(double x, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

void print(const json& doc) { std::cout << doc.dump(2) << '\n'; }

json points_json(const std::vector<Point>& pts) {
    json out = json::array();
    for (const auto& p : pts) {
        json c = json::array();
        for (int i = 0; i < p.dim(); ++i) c.push_back(p[i]);
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------

struct VnOptions {
    int nu = 1;
    int n_max = 2;
    int cap = -1;
    bool json = false;
};

int cmd_vn(const VnOptions& o) {
    json rows = json::array();
    if (!o.json) std::cout << "n  V_n  value\n";
    for (int n = 1; n <= o.n_max; ++n) {
        std::cerr << "computing V_" << n << " (nu=" << o.nu << ")\n";
        const ExactRational v = coefficient_Vn(o.nu, n, o.cap);
        if (o.json) {
            rows.push_back({{"n", n}, {"exact", to_fraction_string(v)}, {"value", v.get_d()}});
        } else {
            std::cout << n << "  " << to_fraction_string(v) << "  " << fmt(v.get_d(), "%.17g") << '\n';
        }
    }
    if (o.json) print({{"command", "vn"}, {"nu", o.nu}, {"rows", rows}});
    return 0;
}

// ---------------------------------------------------------------------------

struct SeriesOptions {
    int nu = 1;
    double lambda = 0.0;
    int n_max = 4;
    std::string b;
    int cap = -1;
    bool json = false;
};

int cmd_series(const SeriesOptions& o) {
    SeriesResult r;
    std::optional<std::vector<Point>> b;
    if (o.b.empty()) {
        r = variance_series(o.nu, o.lambda, o.n_max, o.cap);
    } else {
        b = parse_points(o.b);
        if (b->front().dim() != o.nu) throw std::invalid_argument("--b points do not match --nu");
        r = semi_invariant_series(*b, o.lambda, o.n_max, o.cap);
    }
    if (o.json) {
        json terms = json::array();
        for (const auto& t : r.terms) {
            terms.push_back({{"n", t.n}, {"coefficient", to_fraction_string(t.coefficient)}, {"value", t.value}});
        }
        json doc = {{"command", "series"},
                    {"kind", b ? "semi_invariant" : "variance"},
                    {"nu", o.nu},
                    {"lambda", o.lambda},
                    {"n_max", o.n_max},
                    {"terms", terms},
                    {"partial_sum", r.partial_sum},
                    {"rigorous_tail", number_or_null(r.rigorous_tail)},
                    {"empirical_tail", number_or_null(r.empirical_tail)}};
        if (b) doc["b"] = points_json(*b);
        print(doc);
        return 0;
    }
    std::cout << (b ? "semi-invariant series" : "variance series") << ", nu=" << o.nu
              << ", lambda=" << fmt(o.lambda) << '\n';
    std::cout << "n  coefficient  lambda^n * coefficient\n";
    write_series_table(std::cout, r);
    std::cout << "partial sum     " << fmt(r.partial_sum, "%.17g") << '\n'
              << "rigorous tail   " << fmt(r.rigorous_tail) << '\n'
              << "empirical tail  " << fmt(r.empirical_tail) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    bool json = false;
};

int cmd_simulate(const SimulateOptions& o) {
    ExperimentConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw std::runtime_error("cannot open config file '" + o.config_path + "'");
        cfg = parse_experiment_config(in);
    }
    for (const auto& [key, value] : o.overrides) apply_config_setting(cfg, key, value);
    cfg.validate();

    std::ofstream dump;
    if (!cfg.out.empty()) {
        dump.open(cfg.out);
        if (!dump) throw std::runtime_error("cannot open output file '" + cfg.out + "'");
    }
    std::cerr << "simulating nu=" << cfg.nu << " N=" << cfg.N << " lambda=" << cfg.lambda << " sweeps="
              << cfg.sweeps << " chains=" << cfg.chains << '\n';
    const auto r = run_block_experiment(cfg, cfg.out.empty() ? nullptr : &dump);

    if (o.json) {
        json per_k = json::array();
        for (const auto& s : r.per_k) {
            json cums = json::array();
            for (const auto& c : s.cumulants) {
                cums.push_back({{"order", c.order},
                                {"value", c.value},
                                {"std_error", c.std_error},
                                {"n_samples", c.n_samples}});
            }
            per_k.push_back({{"k", s.k},
                             {"blocks_per_emission", s.blocks_per_emission},
                             {"cumulants", cums},
                             {"adjacent_covariance",
                              {{"value", s.adjacent_covariance.value},
                               {"std_error", s.adjacent_covariance.std_error},
                               {"n_samples", s.adjacent_covariance.n_samples}}}});
        }
        print({{"command", "simulate"},
               {"nu", cfg.nu},
               {"N", cfg.N},
               {"lambda", cfg.lambda},
               {"alpha", cfg.alpha},
               {"seed", cfg.seed},
               {"sweeps", cfg.sweeps},
               {"burn_in", cfg.burn_in},
               {"thin", cfg.thin},
               {"chains", cfg.chains},
               {"emissions", r.emissions},
               {"per_k", per_k}});
        return 0;
    }
    std::cout << "emissions " << r.emissions << '\n';
    std::cout << "k  blocks  order  value  std_error  samples\n";
    for (const auto& s : r.per_k) {
        for (const auto& c : s.cumulants) {
            std::cout << s.k << "  " << s.blocks_per_emission << "  " << c.order << "  " << fmt(c.value) << "  "
                      << fmt(c.std_error) << "  " << c.n_samples << '\n';
        }
        const auto& cov = s.adjacent_covariance;
        std::cout << s.k << "  " << s.blocks_per_emission << "  adj  " << fmt(cov.value) << "  "
                  << fmt(cov.std_error) << "  " << cov.n_samples << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct GibbsOptions {
    int nu = 1;
    std::int64_t N = 1;
    double lambda = 0.0;
    std::string b;
    bool moment = false;
    bool json = false;
};

int cmd_gibbs_exact(const GibbsOptions& o) {
    const GibbsSpec spec{o.nu, o.N, o.lambda};
    spec.validate();
    const auto pts = parse_points(o.b);
    if (pts.front().dim() != o.nu) throw std::invalid_argument("--b points do not match --nu");
    const double value = o.moment ? exact_moment(spec, to_multiset(pts)) : exact_semi_invariant(spec, pts);
    if (o.json) {
        print({{"command", "gibbs-exact"},
               {"quantity", o.moment ? "moment" : "semi_invariant"},
               {"nu", o.nu},
               {"N", o.N},
               {"lambda", o.lambda},
               {"b", points_json(pts)},
               {"value", value}});
    } else {
        std::cout << (o.moment ? "moment " : "semi-invariant ") << fmt(value, "%.17g") << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::string suite;
    std::uint64_t seed = 20261019;
    bool json = false;
};

int cmd_verify(const VerifyOptions& o) {
    std::cerr << "running suite " << o.suite << '\n';
    const auto checks = run_suite(o.suite, o.seed);
    bool all = true;
    json rows = json::array();
    for (const auto& c : checks) {
        all = all && c.passed;
        if (o.json) {
            rows.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        } else {
            std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  [" << c.detail << "]\n";
        }
    }
    if (o.json) print({{"command", "verify"}, {"suite", o.suite}, {"passed", all}, {"checks", rows}});
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cluster-expansion series, exact Gibbs measures and block-spin experiments for the Ising model"};
    app.require_subcommand(1);

    VnOptions vn;
    auto* vn_cmd = app.add_subcommand("vn", "Exact variance coefficients V_n");
    vn_cmd->add_option("--nu", vn.nu, "Lattice dimension")->required()->check(CLI::PositiveNumber);
    vn_cmd->add_option("--n-max", vn.n_max, "Largest order")->check(CLI::PositiveNumber);
    vn_cmd->add_option("--cap", vn.cap, "Enumeration order cap (default depends on nu)");
    vn_cmd->add_flag("--json", vn.json, "Emit one JSON document");

    SeriesOptions series;
    auto* series_cmd = app.add_subcommand("series", "Truncated variance or semi-invariant series");
    series_cmd->add_option("--nu", series.nu, "Lattice dimension")->check(CLI::PositiveNumber);
    series_cmd->add_option("--lambda", series.lambda, "Coupling")->required();
    series_cmd->add_option("--n-max", series.n_max, "Truncation order")->check(CLI::NonNegativeNumber);
    series_cmd->add_option("--b", series.b, "Base sequence, e.g. \"0;1\" (variance series if absent)");
    series_cmd->add_option("--cap", series.cap, "Enumeration order cap");
    series_cmd->add_flag("--json", series.json, "Emit one JSON document");

    SimulateOptions sim;
    std::map<std::string, std::string> sim_flags;
    auto* sim_cmd = app.add_subcommand("simulate", "Metropolis block-spin experiment");
    sim_cmd->add_option("--config", sim.config_path, "key=value config file")->check(CLI::ExistingFile);
    for (const auto& [flag, key] : std::vector<std::pair<std::string, std::string>>{
             {"--nu", "nu"}, {"--N", "N"}, {"--lambda", "lambda"}, {"--k", "k"}, {"--alpha", "alpha"},
             {"--seed", "seed"}, {"--sweeps", "sweeps"}, {"--burn-in", "burn_in"}, {"--thin", "thin"},
             {"--chains", "chains"}, {"--observables", "observables"}, {"--out", "out"}}) {
        sim_cmd->add_option(flag, sim_flags[key], "Overrides config key '" + key + "'");
    }
    sim_cmd->add_flag("--json", sim.json, "Emit one JSON document");

    GibbsOptions gibbs;
    auto* gibbs_cmd = app.add_subcommand("gibbs-exact", "Exact moment or semi-invariant on a small cube");
    gibbs_cmd->add_option("--nu", gibbs.nu, "Lattice dimension")->check(CLI::PositiveNumber);
    gibbs_cmd->add_option("--N", gibbs.N, "Cube half-width")->required()->check(CLI::PositiveNumber);
    gibbs_cmd->add_option("--lambda", gibbs.lambda, "Coupling")->required();
    gibbs_cmd->add_option("--b", gibbs.b, "Spin sites, e.g. \"0;1\"")->required();
    gibbs_cmd->add_flag("--moment", gibbs.moment, "Moment instead of semi-invariant");
    gibbs_cmd->add_flag("--json", gibbs.json, "Emit one JSON document");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run a property suite");
    verify_cmd->add_option("suite", verify.suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
    verify_cmd->add_option("--seed", verify.seed, "Master seed");
    verify_cmd->add_flag("--json", verify.json, "Emit one JSON document");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*vn_cmd) return cmd_vn(vn);
        if (*series_cmd) {
            if (!std::isfinite(series.lambda)) throw CLI::ValidationError("--lambda", "must be finite");
            return cmd_series(series);
        }
        if (*sim_cmd) {
            for (const auto& [key, value] : sim_flags) {
                if (!value.empty()) sim.overrides.emplace_back(key, value);
            }
            return cmd_simulate(sim);
        }
        if (*gibbs_cmd) return cmd_gibbs_exact(gibbs);
        if (*verify_cmd) return cmd_verify(verify);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const LimitExceeded& e) {
        std::cerr << "limit exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
