#include "indiff/asymptotic.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace indiff {

AsymptoticPrice asymptotic_price(const OptionSpec& opt, const GroupParams& gp,
                                 double alpha) {
    opt.validate();
    gp.validate();
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");

    const double T = opt.maturity;
    const double sbar = gp.sigma_bar();
    const BsContext ctx{sbar, 0.0};
    const Eigen::VectorXd d = cash_greeks(opt, ctx, opt.spot, 6);

    AsymptoticPrice p;
    p.alpha = alpha;
    p.outside_theorem = opt.kind == OptionKind::call;
    p.bs_term = bs_price(opt, ctx, opt.spot);
    p.m3_term = gp.m3 * T / 6.0 * d[2];
    p.m4_term = gp.m4 * T / 24.0 * d[3];
    p.m3sq_term = gp.m3 * gp.m3 * T * T / 72.0
                  * (6.0 * d[2] + 18.0 * d[3] + 9.0 * d[4] + d[5]);
    p.nonlinear_term = alpha / 8.0 * (gp.m4 - gp.m3 * gp.m3 / gp.sigma_bar_sq)
                       * put_gamma_integral(opt, sbar);
    p.total = p.bs_term + p.m3_term + p.m4_term + p.m3sq_term + p.nonlinear_term;
    return p;
}

double bid_ask_spread(const OptionSpec& opt, const GroupParams& gp, double alpha) {
    opt.validate();
    gp.validate();
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    return alpha / 4.0 * (gp.m4 - gp.m3 * gp.m3 / gp.sigma_bar_sq)
           * put_gamma_integral(opt, gp.sigma_bar());
}

double jump_sensitivity(const OptionSpec& opt, double sigma_bar) {
    return put_gamma_integral(opt, sigma_bar);
}

SweepSpec SweepSpec::linspace(SweepKey key, double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("sweep needs at least one point");
    SweepSpec s;
    s.key = key;
    if (n == 1) s.values = Eigen::VectorXd::Constant(1, a);
    else s.values = Eigen::VectorXd::LinSpaced(n, a, b);
    return s;
}

std::vector<CurvePoint> price_curve(const OptionSpec& opt, const GroupParams& gp,
                                    double alpha, const SweepSpec& sweep,
                                    int threads) {
    if (sweep.values.size() == 0) throw std::invalid_argument("empty sweep grid");
    const int n = static_cast<int>(sweep.values.size());
    std::vector<CurvePoint> out(n);

    auto eval = [&](int i) {
        const double v = sweep.values[i];
        OptionSpec o = opt;
        double a = alpha;
        switch (sweep.key) {
            case SweepKey::spot: o.spot = v; break;
            case SweepKey::alpha: a = v; break;
            case SweepKey::strike: o.strike = v; break;
            case SweepKey::maturity: o.maturity = v; break;
        }
        out[i] = {v, asymptotic_price(o, gp, a)};
    };

    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) eval(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (int i = t; i < n; i += threads) eval(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (std::thread& th : pool) th.join();
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace indiff
