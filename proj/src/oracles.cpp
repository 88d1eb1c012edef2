#include "indiff/oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "indiff/quadrature.hpp"

namespace indiff::oracles {

namespace {

double lognormal_european(const OptionSpec& opt, double forward, double stdev) {
    // E[(S-K)^+] / E[(K-S)^+] for log S ~ N(log forward - stdev^2/2, stdev^2)
    if (stdev <= 0.0) {
        const double call = std::max(forward - opt.strike, 0.0);
        return opt.kind == OptionKind::call ? call : call - forward + opt.strike;
    }
    const double d1 = (std::log(forward / opt.strike) + 0.5 * stdev * stdev) / stdev;
    const double d2 = d1 - stdev;
    const double call = forward * norm_cdf(d1) - opt.strike * norm_cdf(d2);
    return opt.kind == OptionKind::call ? call : call - forward + opt.strike;
}

}  // namespace

OracleReport merton_series_price(const OptionSpec& opt, const MertonParams& p) {
    opt.validate();
    p.validate();
    const double T = opt.maturity;
    const double mean_jump = std::expm1(p.jump_mean + 0.5 * p.jump_std * p.jump_std);
    const double mu = -p.intensity * mean_jump;   // martingale drift
    if (p.drift && std::abs(*p.drift - mu) > 1e-9 * (1.0 + std::abs(mu)))
        throw std::invalid_argument("merton_series_price needs martingale drift");

    const double lt = p.intensity * T;
    double weight = std::exp(-lt);   // Poisson weight, updated multiplicatively
    double weight_sum = 0.0;
    double value = 0.0;
    double branch = 0.0;
    const int n_cap = 400;
    int n = 0;
    for (; n <= n_cap; ++n) {
        const double forward = opt.spot * std::exp(mu * T + n * (p.jump_mean + 0.5 * p.jump_std * p.jump_std));
        const double stdev = std::sqrt(p.sigma * p.sigma * T + n * p.jump_std * p.jump_std);
        branch = lognormal_european(opt, forward, stdev);
        value += weight * branch;
        weight_sum += weight;
        if (1.0 - weight_sum < 1e-12 && n >= lt) break;
        weight *= lt / (n + 1);
    }
    const double tail = std::max(0.0, 1.0 - weight_sum);
    const double bound = opt.kind == OptionKind::put ? opt.strike
                                                     : std::max(branch, opt.spot) * 4.0;
    OracleReport rep{value, Method::series, tail * bound, std::nullopt};
    if (value != 0.0 && rep.error_estimate > 1e-10 * std::abs(value))
        throw std::runtime_error("merton_series_price: truncation tail above tolerance");
    return rep;
}

OracleReport jump_sensitivity_numeric(const OptionSpec& opt, double sigma_bar) {
    opt.validate();
    if (!(sigma_bar > 0.0)) throw std::invalid_argument("sigma_bar must be > 0");
    const double T = opt.maturity;
    const double S0 = opt.spot, K = opt.strike;
    const quad::Rule& gh = quad::gauss_hermite(60);
    static const double two_pi_sqrt_2pi = 2.0 * M_PI * std::sqrt(2.0 * M_PI);

    // cash-gamma second moment at time t, with tau = T - t:
    // E[(S_t phi(delta_1))^2] / (sigma^2 tau); the z-integral is evaluated
    // by Gauss-Hermite centred on the combined Gaussian of the integrand
    auto inner = [&](double tau) {
        const double t = T - tau;
        const double root_t = std::sqrt(t);
        const double b = root_t / std::sqrt(tau);
        const double a = (std::log(S0 / K) - 0.5 * sigma_bar * sigma_bar * t
                          + 0.5 * sigma_bar * sigma_bar * tau)
                         / (sigma_bar * std::sqrt(tau));
        const double A = b * b + 0.5;
        const double B = 2.0 * sigma_bar * root_t - 2.0 * a * b;
        const double mu_z = B / (2.0 * A);
        const double scale = std::sqrt(0.5 / A);   // sqrt(2 * s2) / sqrt(2)
        double integral = 0.0;
        for (int i = 0; i < gh.nodes.size(); ++i) {
            const double z = mu_z + M_SQRT2 * scale * gh.nodes[i];
            const double ex = 2.0 * sigma_bar * root_t * z - (a + b * z) * (a + b * z)
                              - 0.5 * z * z + gh.nodes[i] * gh.nodes[i];
            integral += gh.weights[i] * std::exp(ex);
        }
        integral *= M_SQRT2 * scale / two_pi_sqrt_2pi;
        return S0 * S0 * std::exp(-sigma_bar * sigma_bar * t) * integral
               / (sigma_bar * sigma_bar * tau);
    };

    // time integral with T - t = T w^2 removing the 1/sqrt(T-t) blowup
    auto integrand = [&](double w) { return inner(T * w * w) * 2.0 * T * w; };
    quad::Result r = quad::adaptive(integrand, 0.0, 1.0, 1e-10);
    if (!r.converged)
        throw std::runtime_error("jump_sensitivity_numeric: quadrature did not converge");
    return {r.value, Method::quadrature, r.error, std::nullopt};
}

OracleReport fd_greeks(const OptionSpec& opt, const BsContext& ctx, double s,
                       int order) {
    if (order < 1 || order > 6)
        throw std::invalid_argument("fd_greeks: order must be in [1, 6]");
    if (!(ctx.t < opt.maturity))
        throw std::domain_error("fd_greeks: evaluation time must be before maturity");

    static const std::vector<std::vector<double>> stencils = {
        {-0.5, 0.0, 0.5},
        {1.0, -2.0, 1.0},
        {-0.5, 1.0, 0.0, -1.0, 0.5},
        {1.0, -4.0, 6.0, -4.0, 1.0},
        {-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5},
        {1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0}};
    const std::vector<double>& c = stencils[order - 1];
    const int half = (static_cast<int>(c.size()) - 1) / 2;

    auto diff = [&](double h) {
        double sum = 0.0;
        for (int i = -half; i <= half; ++i)
            if (c[half + i] != 0.0)
                sum += c[half + i] * bs_price(opt, ctx, s + i * h);
        return sum / std::pow(h, order);
    };

    const double h = s * std::pow(std::numeric_limits<double>::epsilon(),
                                  1.0 / (order + 2));
    // Richardson over steps (h, 2h, 4h): noise stays at the h level while
    // the h^2 and h^4 truncation terms cancel
    const double d1 = diff(h), d2 = diff(2.0 * h), d4 = diff(4.0 * h);
    const double r1 = (4.0 * d1 - d2) / 3.0;
    const double r2 = (4.0 * d2 - d4) / 3.0;
    const double value = (16.0 * r1 - r2) / 15.0;
    const double err = std::abs(value - r1);
    OracleReport rep{value * std::pow(s, order), Method::finite_diff,
                     err * std::pow(s, order), std::nullopt};
    if (!(std::abs(rep.error_estimate)
          <= 1e-3 * (1.0 + std::abs(rep.value))))
        throw std::runtime_error("fd_greeks: extrapolation did not settle");
    return rep;
}

OracleReport mc_linear_price(const OptionSpec& opt, const LevyModel& m,
                             long n_paths, std::uint64_t seed) {
    opt.validate();
    if (n_paths < 10000)
        throw std::invalid_argument("mc_linear_price needs at least 1e4 paths");
    if (!m.is_martingale(1e-6))
        throw std::invalid_argument("mc_linear_price requires a martingale model");

    const double T = opt.maturity;
    const double total = m.measure().total_mass();
    const double drift_c = m.mean_rate() - m.measure().moment(1);   // between jumps
    const double sig = m.sigma();
    const double base_log = std::log(opt.spot) + drift_c * T - 0.5 * sig * sig * T;

    // atom sampling table / merton rejection setup
    const bool atomic = m.measure().is_atomic();
    std::vector<double> cum, logs;
    MertonParams mp;
    double tilt = 0.0, y_lo = 0.0, y_hi = 0.0, log_w_max = 0.0;
    if (atomic) {
        double acc = 0.0;
        for (const JumpAtom& a : m.measure().atom_list()) {
            acc += a.mass * std::exp(m.measure().tilt() * a.size);
            cum.push_back(acc);
            logs.push_back(std::log1p(a.size));
        }
        for (double& cw : cum) cw /= acc;
    } else {
        mp = m.measure().merton_params();
        tilt = m.measure().tilt();
        y_lo = mp.jump_mean - m.measure().trunc_mult() * mp.jump_std;
        y_hi = mp.jump_mean + m.measure().trunc_mult() * mp.jump_std;
        log_w_max = std::max(tilt * std::expm1(y_lo), tilt * std::expm1(y_hi));
    }

    const long batch_size = 65536;
    double sum = 0.0, sum_sq = 0.0;
    long done = 0;
    for (long batch = 0; done < n_paths; ++batch) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * (batch + 1));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::poisson_distribution<long> poisson(total * T);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const long count = std::min(batch_size, n_paths - done);
        for (long i = 0; i < count; ++i) {
            double log_s = base_log + sig * std::sqrt(T) * normal(rng);
            const long jumps = total > 0.0 ? poisson(rng) : 0;
            for (long k = 0; k < jumps; ++k) {
                if (atomic) {
                    const double u = unif(rng);
                    size_t idx = 0;
                    while (idx + 1 < cum.size() && cum[idx] < u) ++idx;
                    log_s += logs[idx];
                } else {
                    // exact lognormal draw, rejection for window and tilt
                    while (true) {
                        const double y = mp.jump_mean + mp.jump_std * normal(rng);
                        if (y < y_lo || y > y_hi) continue;
                        if (tilt != 0.0
                            && std::log(unif(rng)) > tilt * std::expm1(y) - log_w_max)
                            continue;
                        log_s += y;
                        break;
                    }
                }
            }
            const double s_T = std::exp(log_s);
            const double pay = opt.kind == OptionKind::put
                                   ? std::max(opt.strike - s_T, 0.0)
                                   : std::max(s_T - opt.strike, 0.0);
            sum += pay;
            sum_sq += pay * pay;
        }
        done += count;
    }
    const double mean = sum / n_paths;
    const double var = std::max(0.0, sum_sq / n_paths - mean * mean);
    const double stderr_est = std::sqrt(var / n_paths);
    return {mean, Method::monte_carlo, stderr_est, seed};
}

}  // namespace indiff::oracles
