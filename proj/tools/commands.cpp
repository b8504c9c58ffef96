#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "afbm/eps_approx.hpp"
#include "afbm/gamma_process.hpp"
#include "afbm/philox.hpp"
#include "afbm/rough_integrals.hpp"
#include "afbm/specfun.hpp"

namespace afbm::cli {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);
    return buf;
}

namespace {

std::string fmt_c(cplx z) {
    std::string im = fmt(z.imag());
    if (im[0] != '-') im = "+" + im;
    return fmt(z.real()) + im + "i";
}

// Uniform on (lo, hi) from counter-based draws; one call per (stream, index).
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, double lo, double hi) {
    const auto c = rng::philox4x32({std::uint32_t(index), std::uint32_t(index >> 32), std::uint32_t(stream),
                                    std::uint32_t(stream >> 32)},
                                   {std::uint32_t(seed), std::uint32_t(seed >> 32)});
    return lo + (hi - lo) * rng::open_unit(c[0], c[1]);
}

}  // namespace

int cmd_sample(const ExperimentConfig& cfg, std::ostream& csv, std::ostream&) {
    const auto p = ModelParams::make(cfg.alpha);
    const auto draw = GaussianDraw::make(cfg.seed, cfg.n_terms.value_or(1000), p);
    const auto grid = uniform_grid(cfg.t_max, cfg.grid_n.value_or(257));
    const auto path = sample_fbm_series(draw, grid, p);
    csv << "t,value\n";
    for (std::size_t j = 0; j < grid.size(); ++j) csv << fmt(path.grid[j]) << ',' << fmt(path.values[j]) << '\n';
    return exit_ok;
}

int cmd_kernel_check(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
    const auto p = ModelParams::make(cfg.alpha);
    const std::vector<cplx> pool = {{0.0, 1.0}, {0.5, 1.0}, {-0.5, 1.0}, {0.3, 0.5},
                                    {-1.0, 2.0}, {2.0, 1.5}, {0.0, 3.0}};
    csv << "z,w,N,abs_error\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i; j < pool.size(); ++j) {
            const cplx z = pool[i], w = pool[j];
            if (std::abs(cayley(z) * cayley(w)) > 0.9) continue;
            const cplx exact = kernel_closed(z, w, p);
            const std::size_t n_final = kernel_adaptive(z, w, p).n_terms;
            std::vector<std::size_t> ns;
            for (std::size_t n = 1; n < n_final; n *= 2) ns.push_back(n);
            ns.push_back(n_final);
            for (std::size_t n : ns) {
                const double e = std::abs(kernel_partial_sum(z, w, n, p) - exact);
                csv << fmt_c(z) << ',' << fmt_c(w) << ',' << n << ',' << fmt(e) << '\n';
                if (n == n_final) worst = std::max(worst, e);
            }
        }
    if (worst > 1e-6) {
        log << "kernel-check: final error " << fmt(worst) << " exceeds 1e-6\n";
        return exit_gate;
    }
    return exit_ok;
}

int cmd_cov_check(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
    const auto p = ModelParams::make(cfg.alpha);
    const std::size_t n = cfg.grid_n.value_or(20);
    const double a2 = 2.0 * cfg.alpha;
    csv << "s,t,cov_eps,fbm_cov,abs_error\n";
    double worst = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j) {
            const double s = cfg.t_max * double(i) / double(n), t = cfg.t_max * double(j) / double(n);
            const double c = cov_eps(s, 0.0, t, 0.0, p);
            const double f = 0.5 * (std::pow(s, a2) + std::pow(t, a2) - std::pow(std::abs(t - s), a2));
            worst = std::max(worst, std::abs(c - f));
            csv << fmt(s) << ',' << fmt(t) << ',' << fmt(c) << ',' << fmt(f) << ',' << fmt(std::abs(c - f)) << '\n';
        }
    if (worst > 1e-12) {
        log << "cov-check: max error " << fmt(worst) << " exceeds 1e-12\n";
        return exit_gate;
    }
    return exit_ok;
}

int cmd_levy_area(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
    const auto eps = cfg.eps_list.value_or(std::vector<double>{0.1, 0.05, 0.025});
    const std::size_t grid_n = cfg.grid_n.value_or(2048), n_mc = cfg.n_mc.value_or(2000);
    const double t = cfg.t_max;
    const std::string target = cfg.alpha > 0.25 ? fmt(levy_const(cfg.alpha) * std::pow(t, 4.0 * cfg.alpha)) : "";
    csv << "eps,analytic_V,mc_mean,mc_stderr,levy_const_target\n";
    int code = exit_ok;
    for (double e : eps) {
        const double v = levy_area_variance({cfg.alpha, t, e, e});
        if (e < 4.0 * t / double(grid_n)) {
            log << "levy-area: eps = " << fmt(e) << " not resolved by grid_n = " << grid_n
                << " (need eps >= 4 t / grid_n); Monte Carlo skipped\n";
            csv << fmt(e) << ',' << fmt(v) << ",,," << target << '\n';
            code = exit_gate;
            continue;
        }
        const auto mc = mc_levy_area_moment(cfg.alpha, e, t, n_mc, grid_n, cfg.seed, cfg.threads);
        csv << fmt(e) << ',' << fmt(v) << ',' << fmt(mc.mean) << ',' << fmt(mc.std_error) << ',' << target << '\n';
        if (!(std::abs(mc.mean - v) <= 3.0 * mc.std_error)) {
            log << "levy-area: eps = " << fmt(e) << " Monte Carlo outside 3 standard errors\n";
            code = exit_gate;
        }
    }
    if (cfg.alpha < 0.25 && eps.size() >= 2)
        csv << "divergence_slope," << fmt(levy_area_eps_slope(cfg.alpha, eps, t)) << ",,,\n";
    return code;
}

int cmd_levy_volume(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
    const auto eps = cfg.eps_list.value_or(std::vector<double>{0.05});
    const std::size_t grid_n = cfg.grid_n.value_or(256), n_mc = cfg.n_mc.value_or(1000);
    const double t = cfg.t_max;
    csv << "eps,mc_mean,mc_stderr,w1_term\n";
    int code = exit_ok;
    for (double e : eps) {
        const auto mc = mc_levy_volume_moment(cfg.alpha, e, e, e, t, n_mc, grid_n, cfg.seed, cfg.threads);
        const double w1 = levy_volume_w1(cfg.alpha, e, e, e, t);
        csv << fmt(e) << ',' << fmt(mc.mean) << ',' << fmt(mc.std_error) << ',' << fmt(w1) << '\n';
        if (!std::isfinite(mc.mean) || !std::isfinite(w1)) {
            log << "levy-volume: non-finite result at eps = " << fmt(e) << '\n';
            code = exit_gate;
        }
    }
    return code;
}

namespace {

void write_rate_table(const RateTable& table, std::ostream& csv) {
    csv << "param,e_sup_estimate,fit_slope\n";
    const std::string slope = table.has_slope ? fmt(table.slope) : "";
    for (const auto& r : table.rows) csv << fmt(r.param) << ',' << fmt(r.estimate) << ',' << slope << '\n';
}

}  // namespace

int cmd_converge_series(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
    const auto p = ModelParams::make(cfg.alpha);
    const auto n_list = cfg.n_list.value_or(std::vector<std::size_t>{128, 256, 512, 1024, 2048});
    const std::size_t n_ref = cfg.n_terms.value_or(16384);
    if (n_ref <= n_list.back()) throw ConfigError("field 'n_terms': reference size must exceed every n_list entry");
    const auto table = series_error_experiment(p, n_list, n_ref, cfg.n_mc.value_or(200), cfg.seed,
                                               cfg.grid_n.value_or(256), cfg.t_max, cfg.threads);
    write_rate_table(table, csv);
    if (table.has_slope && !(table.slope <= -(cfg.alpha - 0.1))) {
        log << "converge-series: slope " << fmt(table.slope) << " above -(alpha - 0.1)\n";
        return exit_gate;
    }
    return exit_ok;
}

int cmd_converge_eps(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
    const auto p = ModelParams::make(cfg.alpha);
    const auto eps = cfg.eps_list.value_or(std::vector<double>{0.02, 0.01, 0.005, 0.0025});
    const auto table = sup_error_experiment(p, eps, cfg.n_mc.value_or(200), cfg.n_terms.value_or(16384), cfg.seed,
                                            cfg.grid_n.value_or(256), cfg.t_max, cfg.threads);
    write_rate_table(table, csv);
    if (table.has_slope && !(std::abs(table.slope) >= cfg.alpha - 0.1)) {
        log << "converge-eps: slope magnitude " << fmt(std::abs(table.slope)) << " below alpha - 0.1\n";
        return exit_gate;
    }
    return exit_ok;
}

int cmd_specfun_test(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
    const std::size_t n = cfg.n_mc.value_or(100);
    csv << "region,a,b,c,z,value,oracle,rel_error\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto u = [&](int slot, double lo, double hi) { return uniform(cfg.seed, i, std::uint64_t(slot), lo, hi); };
        const cplx a(u(0, -1.5, 1.5), u(1, -0.3, 0.3));
        const cplx b(u(2, 0.2, 1.5), u(3, -0.3, 0.3));
        const cplx c(b.real() + u(4, 0.3, 1.5), u(5, -0.3, 0.3));
        const int region = int(i % 3);
        cplx z;
        const char* name;
        if (region == 0) {
            z = std::polar(u(6, 0.05, 0.7), u(7, -3.1, 3.1));
            name = "series";
        } else if (region == 1) {
            z = 1.0 - std::polar(u(6, 0.05, 0.3), u(7, -3.1, 3.1));
            name = "one_minus_z";
        } else {
            const double th = u(7, 0.3, 2.0 * std::numbers::pi - 0.3);
            z = std::polar(u(6, 1.4, 4.0), th);
            name = "inverse_z";
        }
        const cplx v = hyp2f1(a, b, c, z);
        const cplx o = hyp2f1_euler(a, b, c, z);
        const double rel = std::abs(v - o) / std::abs(o);
        worst = std::max(worst, rel);
        csv << name << ',' << fmt_c(a) << ',' << fmt_c(b) << ',' << fmt_c(c) << ',' << fmt_c(z) << ',' << fmt_c(v) << ','
            << fmt_c(o) << ',' << fmt(rel) << '\n';
    }
    if (worst > 1e-8) {
        log << "specfun-test: max relative error " << fmt(worst) << " exceeds 1e-8\n";
        return exit_gate;
    }
    return exit_ok;
}

namespace {

struct Flags {
    std::optional<double> alpha, t_max;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_terms, grid_n, n_mc;
    std::vector<double> eps;
    std::vector<std::size_t> n_list;
    std::optional<std::string> out, config;
    std::optional<unsigned> threads;
};

void add_flags(CLI::App& sub, Flags& f) {
    sub.add_option("--config", f.config, "key = value config file; flags override it");
    sub.add_option("--alpha", f.alpha, "Hurst exponent in (0, 1), not 1/2");
    sub.add_option("--seed", f.seed, "64-bit seed");
    sub.add_option("--n-terms", f.n_terms, "series length (reference length for converge-series)");
    sub.add_option("--grid-n", f.grid_n, "grid size");
    sub.add_option("--t-max", f.t_max, "time horizon");
    sub.add_option("--eps", f.eps, "eps value; repeat or comma-separate for a list (strictly decreasing)")->delimiter(',');
    sub.add_option("--n-list", f.n_list, "series lengths for converge-series; repeat or comma-separate")->delimiter(',');
    sub.add_option("--n-mc", f.n_mc, "Monte Carlo replicates");
    sub.add_option("--out", f.out, "output CSV path (stdout when absent)");
    sub.add_option("--threads", f.threads, "worker threads, 0 = all; does not change outputs");
}

ExperimentConfig resolve(const Flags& f) {
    ExperimentConfig cfg;
    if (f.config) load_config_file(*f.config, cfg);
    if (f.alpha) cfg.alpha = *f.alpha;
    if (f.t_max) cfg.t_max = *f.t_max;
    if (f.seed) cfg.seed = *f.seed;
    if (f.n_terms) cfg.n_terms = *f.n_terms;
    if (f.grid_n) cfg.grid_n = *f.grid_n;
    if (f.n_mc) cfg.n_mc = *f.n_mc;
    if (!f.eps.empty()) cfg.eps_list = f.eps;
    if (!f.n_list.empty()) cfg.n_list = f.n_list;
    if (f.out) cfg.output_path = *f.out;
    if (f.threads) cfg.threads = *f.threads;
    validate(cfg);
    return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using Command = std::function<int(const ExperimentConfig&, std::ostream&, std::ostream&)>;
    const std::vector<std::tuple<std::string, std::string, Command>> commands = {
        {"sample", "one FBM path from the truncated series: t,value", cmd_sample},
        {"kernel-check", "kernel partial sums against the closed form", cmd_kernel_check},
        {"cov-check", "eps = 0 covariance against the FBM covariance", cmd_cov_check},
        {"levy-area", "Levy area second moment: analytic against Monte Carlo", cmd_levy_area},
        {"levy-volume", "Levy volume second moment by Monte Carlo", cmd_levy_volume},
        {"converge-series", "series truncation error rate", cmd_converge_series},
        {"converge-eps", "eps-approximation error rate", cmd_converge_eps},
        {"specfun-test", "2F1 against its Euler integral on random parameters", cmd_specfun_test},
    };

    CLI::App app{"Analytic fractional Brownian motion experiments", "afbm-cli"};
    app.require_subcommand(1, 1);
    Flags flags;
    std::map<const CLI::App*, const Command*> dispatch;
    for (const auto& [name, help, fn] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_flags(*sub, flags);
        dispatch[sub] = &fn;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help on the app or on a subcommand
            app.exit(e, out, err);
            return exit_ok;
        }
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    try {
        const ExperimentConfig cfg = resolve(flags);
        std::ostringstream table;
        const int code = (*dispatch.at(chosen))(cfg, table, err);
        if (cfg.output_path.empty()) {
            out << table.str();
        } else {
            std::ofstream file(cfg.output_path, std::ios::binary);
            file << table.str();
            if (!file) {
                err << "error: cannot write '" << cfg.output_path << "'\n";
                return exit_usage;
            }
        }
        return code;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_gate;
    }
}

}  // namespace afbm::cli
