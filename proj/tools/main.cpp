// Command-line front end: price | spread | sensitivity | selftest.
// Exit status: 0 success, 1 validation error, 2 numerical failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "indiff/asymptotic.hpp"
#include "indiff/config.hpp"
#include "indiff/oracles.hpp"
#include "indiff/pide.hpp"

namespace {

using namespace indiff;

// Figure-1 reference setup, used when no --config is given
const char* kDefaultConfig = R"([model]
type = merton
sigma = 0.2
lambda_m = 5.0
gamma_j = -0.05
delta_j = 0.1
martingale = true

[option]
kind = put
strike = 1.0
maturity = 1.0
spot = 1.0

[grid]
n_time = 40
m_half = 100
k_half = 50
dx = 0.02
x0 = auto
alpha = 10.0

[run]
command = price
)";

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write_csv(std::ostream& os) const {
        for (size_t c = 0; c < columns.size(); ++c)
            os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
        for (const auto& row : rows)
            for (size_t c = 0; c < row.size(); ++c)
                os << fmt12(row[c]) << (c + 1 < row.size() ? "," : "\n");
    }

    void write_json(std::ostream& os) const {
        os << "[\n";
        for (size_t r = 0; r < rows.size(); ++r) {
            os << "  {";
            for (size_t c = 0; c < rows[r].size(); ++c) {
                os << "\"" << columns[c] << "\": " << fmt12(rows[r][c]);
                if (c + 1 < rows[r].size()) os << ", ";
            }
            os << "}" << (r + 1 < rows.size() ? "," : "") << "\n";
        }
        os << "]\n";
    }

    void emit(const std::string& path, const std::string& format) const {
        std::ostringstream buf;
        if (format == "json") write_json(buf); else write_csv(buf);
        if (path.empty()) {
            std::cout << buf.str();
        } else {
            std::ofstream out(path);
            if (!out) throw std::invalid_argument("cannot open output file: " + path);
            out << buf.str();
        }
    }
};

SweepKey sweep_key_from(const std::string& name) {
    if (name == "spot") return SweepKey::spot;
    if (name == "alpha") return SweepKey::alpha;
    if (name == "strike") return SweepKey::strike;
    if (name == "maturity") return SweepKey::maturity;
    throw std::invalid_argument("sweep key must be spot|alpha|strike|maturity");
}

PideGrid grid_for(const RunConfig& cfg, double strike, double alpha) {
    PideGrid g = cfg.grid;
    g.alpha = std::max(alpha, 1e-6);   // the scheme needs alpha > 0
    if (cfg.grid_x0_auto) g.x0 = std::log(strike) - g.m_half * g.dx;
    return g;
}

double pide_price(const RunConfig& cfg, const LevyModel& q, const OptionSpec& opt,
                  double alpha) {
    const PideGrid g = grid_for(cfg, opt.strike, alpha);
    return solve_pide(opt, q, g).price_at(opt.spot);
}

int cmd_price(const RunConfig& cfg) {
    const GroupParams gp = cfg.group_params();
    const LevyModel q = cfg.pricing_model();

    if (cfg.run.sweep.empty()) {
        const AsymptoticPrice p = asymptotic_price(cfg.option, gp, cfg.grid.alpha);
        Table t;
        t.columns = {"spot", "bs_term", "m3_term", "m4_term", "m3sq_term",
                     "nonlinear_term", "linear", "asymptotic"};
        std::vector<double> row{cfg.option.spot, p.bs_term, p.m3_term, p.m4_term,
                                p.m3sq_term, p.nonlinear_term,
                                p.total - p.nonlinear_term, p.total};
        if (cfg.run.with_pide) {
            const double pide = pide_price(cfg, q, cfg.option, cfg.grid.alpha);
            t.columns.insert(t.columns.end(), {"pide", "abs_gap", "rel_gap"});
            row.insert(row.end(), {pide, p.total - pide, (p.total - pide) / pide});
        }
        t.rows.push_back(row);
        t.emit(cfg.run.out, cfg.run.format);
        return 0;
    }

    const SweepRequest req = parse_sweep(cfg.run.sweep);
    const SweepKey key = sweep_key_from(req.key);
    const SweepSpec sweep = SweepSpec::linspace(key, req.from, req.to, req.count);
    const auto curve =
        price_curve(cfg.option, gp, cfg.grid.alpha, sweep, cfg.run.threads);

    Table t;
    t.columns = {req.key, "linear", "asymptotic"};
    if (cfg.run.with_pide) t.columns.push_back("pide");

    // a spot sweep reads one backward induction at many spots; the other
    // sweeps change the equation and re-solve per point
    std::optional<PideSolution> shared;
    if (cfg.run.with_pide && key == SweepKey::spot)
        shared.emplace(solve_pide(cfg.option, q,
                                  grid_for(cfg, cfg.option.strike, cfg.grid.alpha)));

    for (const CurvePoint& pt : curve) {
        std::vector<double> row{pt.x, pt.price.total - pt.price.nonlinear_term,
                                pt.price.total};
        if (cfg.run.with_pide) {
            OptionSpec opt = cfg.option;
            double alpha = cfg.grid.alpha;
            switch (key) {
                case SweepKey::spot: opt.spot = pt.x; break;
                case SweepKey::alpha: alpha = pt.x; break;
                case SweepKey::strike: opt.strike = pt.x; break;
                case SweepKey::maturity: opt.maturity = pt.x; break;
            }
            row.push_back(shared ? shared->price_at(opt.spot)
                                 : pide_price(cfg, q, opt, alpha));
        }
        t.rows.push_back(row);
    }
    t.emit(cfg.run.out, cfg.run.format);
    return 0;
}

int cmd_spread(const RunConfig& cfg) {
    const GroupParams gp = cfg.group_params();
    const LevyModel q = cfg.pricing_model();

    std::vector<double> alphas;
    if (cfg.run.sweep.empty()) {
        alphas.push_back(cfg.grid.alpha);
    } else {
        const SweepRequest req = parse_sweep(cfg.run.sweep);
        if (req.key != "alpha")
            throw std::invalid_argument("spread sweeps run over alpha only");
        const SweepSpec sweep =
            SweepSpec::linspace(SweepKey::alpha, req.from, req.to, req.count);
        for (int i = 0; i < sweep.values.size(); ++i) alphas.push_back(sweep.values[i]);
    }

    Table t;
    t.columns = {"alpha", "spread_closed_form"};
    if (cfg.run.with_pide) t.columns.insert(t.columns.end(), {"spread_pide", "seller_pide", "buyer_pide"});
    for (double alpha : alphas) {
        std::vector<double> row{alpha, bid_ask_spread(cfg.option, gp, alpha)};
        if (cfg.run.with_pide) {
            const SpreadResult sr = indifference_spread_pide(
                cfg.option, q, grid_for(cfg, cfg.option.strike, alpha));
            row.insert(row.end(), {sr.spread, sr.seller, sr.buyer});
        }
        t.rows.push_back(row);
    }
    t.emit(cfg.run.out, cfg.run.format);
    return 0;
}

int cmd_sensitivity(const RunConfig& cfg) {
    const GroupParams gp = cfg.group_params();
    const double sbar = gp.sigma_bar();

    Table t;
    t.columns = {"sweep", "x", "value"};   // sweep: 0 = strike, 1 = maturity

    auto strike_series = [&](double from, double to, int n) {
        const SweepSpec s = SweepSpec::linspace(SweepKey::strike, from, to, n);
        for (int i = 0; i < s.values.size(); ++i) {
            OptionSpec opt = cfg.option;
            opt.strike = s.values[i];
            t.rows.push_back({0.0, opt.strike, jump_sensitivity(opt, sbar)});
        }
    };
    auto maturity_series = [&](double from, double to, int n) {
        const SweepSpec s = SweepSpec::linspace(SweepKey::maturity, from, to, n);
        for (int i = 0; i < s.values.size(); ++i) {
            OptionSpec opt = cfg.option;
            opt.maturity = s.values[i];
            t.rows.push_back({1.0, opt.maturity, jump_sensitivity(opt, sbar)});
        }
    };

    if (cfg.run.sweep.empty()) {
        strike_series(0.5 * cfg.option.spot, 2.0 * cfg.option.spot, 61);
        maturity_series(0.05, 6.0, 60);
    } else {
        const SweepRequest req = parse_sweep(cfg.run.sweep);
        if (req.key == "strike") strike_series(req.from, req.to, req.count);
        else if (req.key == "maturity") maturity_series(req.from, req.to, req.count);
        else throw std::invalid_argument("sensitivity sweeps run over strike or maturity");
    }
    t.emit(cfg.run.out, cfg.run.format);
    return 0;
}

int cmd_selftest(const RunConfig& cfg) {
    int failures = 0;
    auto report = [&](const std::string& name, double achieved, double required) {
        const bool ok = achieved <= required;
        failures += ok ? 0 : 1;
        std::printf("%-44s %s   achieved %s; required %s\n", name.c_str(),
                    ok ? "ok  " : "FAIL", fmt12(achieved).c_str(),
                    fmt12(required).c_str());
    };

    const OptionSpec opt = cfg.option;
    const GroupParams gp = cfg.group_params();
    const double sbar = gp.sigma_bar();
    const BsContext ctx{sbar, 0.0};

    // greeks against Richardson finite differences
    const Eigen::VectorXd d = cash_greeks(opt, ctx, opt.spot, 6);
    const double fd_tol[] = {1e-6, 1e-5, 1e-5, 1e-4};
    for (int n = 3; n <= 6; ++n) {
        const auto fd = oracles::fd_greeks(opt, ctx, opt.spot, n);
        report("greeks d" + std::to_string(n) + " vs finite differences",
               std::abs(d[n - 1] - fd.value) / std::abs(fd.value), fd_tol[n - 3]);
    }

    // gamma integral against the direct quadrature
    const double closed = put_gamma_integral(opt, sbar);
    const auto numeric = oracles::jump_sensitivity_numeric(opt, sbar);
    report("gamma integral vs quadrature",
           std::abs(closed - numeric.value) / numeric.value, 1e-6);

    // series against Monte Carlo (3 standard errors)
    if (cfg.model.type == "merton") {
        const LevyModel q = cfg.pricing_model();
        const auto series = oracles::merton_series_price(opt, cfg.model.merton);
        const auto mc = oracles::mc_linear_price(opt, q, 400000, cfg.run.seed);
        report("merton series vs monte carlo (3 se)",
               std::abs(series.value - mc.value), 3.0 * mc.error_estimate);
    }

    // PIDE against Black-Scholes with the jumps switched off
    {
        const LevyModel bs_model = LevyModel::from_atoms(cfg.model.merton.sigma, {{0.5, 0.0}});
        const PideGrid g = grid_for(cfg, opt.strike, cfg.grid.alpha);
        const auto t0 = std::chrono::steady_clock::now();
        const PideSolution sol = solve_pide(opt, bs_model, g);
        const auto t1 = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        const double bs = bs_price(opt, {cfg.model.merton.sigma, 0.0}, opt.spot);
        report("pide black-scholes limit (abs)",
               std::abs(sol.price_at(opt.spot) - bs), 5e-4);
        std::printf("pide reference solve: %.3f s (no jumps)\n", secs);
    }

    // reference solve with jumps: runtime and newton effort
    {
        const LevyModel q = cfg.pricing_model();
        const PideGrid g = grid_for(cfg, opt.strike, cfg.grid.alpha);
        const auto t0 = std::chrono::steady_clock::now();
        const PideSolution sol = solve_pide(opt, q, g);
        const auto t1 = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        std::printf("pide reference solve: %.3f s, price %s, avg newton %.2f\n",
                    secs, fmt12(sol.price_at(opt.spot)).c_str(),
                    sol.avg_newton_iterations());
        report("pide reference runtime (s)", secs, 2.0);
        report("avg newton iterations per minimization",
               sol.avg_newton_iterations(), 6.0);
    }

    std::printf(failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: %d check(s) failed\n",
                failures);
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"indifference pricing engine for exponential Levy models"};
    app.require_subcommand(1);

    std::string config_path, out_path, format, sweep;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool no_pide = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file (INI sections)");
        cmd->add_option("--out", out_path, "output file (default: stdout)");
        cmd->add_option("--format", format, "csv | json");
        cmd->add_option("--sweep", sweep, "KEY=a:b:n (spot|alpha|strike|maturity)");
        cmd->add_option("--seed", seed, "Monte Carlo seed");
        cmd->add_option("--threads", threads, "worker threads for curve sweeps");
        cmd->add_flag("--no-pide", no_pide, "skip the PIDE solves");
    };

    CLI::App* price = app.add_subcommand("price", "asymptotic and PIDE prices");
    CLI::App* spread = app.add_subcommand("spread", "bid-ask spread, closed form and PIDE");
    CLI::App* sensitivity =
        app.add_subcommand("sensitivity", "jump-risk sensitivity curves");
    CLI::App* selftest = app.add_subcommand("selftest", "oracle cross-checks");
    for (CLI::App* c : {price, spread, sensitivity, selftest}) add_common(c);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = config_path.empty() ? RunConfig::from_string(kDefaultConfig)
                                            : RunConfig::from_file(config_path);
        if (!format.empty()) cfg.run.format = format;
        if (!out_path.empty()) cfg.run.out = out_path;
        if (!sweep.empty()) cfg.run.sweep = sweep;
        if (seed) cfg.run.seed = *seed;
        if (threads) cfg.run.threads = *threads;
        if (no_pide) cfg.run.with_pide = false;
        cfg.validate();

        if (price->parsed()) return cmd_price(cfg);
        if (spread->parsed()) return cmd_spread(cfg);
        if (sensitivity->parsed()) return cmd_sensitivity(cfg);
        return cmd_selftest(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::range_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
