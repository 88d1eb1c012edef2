#include "indiff/black_scholes.hpp"

#include <cmath>
#include <stdexcept>

#include "indiff/quadrature.hpp"

namespace indiff {

double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

void OptionSpec::validate() const {
    if (!(strike > 0.0)) throw std::invalid_argument("option.strike must be > 0");
    if (!(maturity > 0.0)) throw std::invalid_argument("option.maturity must be > 0");
    if (!(spot > 0.0)) throw std::invalid_argument("option.spot must be > 0");
}

namespace {

struct Coeffs {
    double tau;      // T - t
    double delta1;   // (log(s/K) + vol^2 tau / 2) / (vol sqrt(tau))
    double root;     // vol * sqrt(tau)
};

Coeffs bs_coeffs(const OptionSpec& opt, const BsContext& ctx, double s) {
    const double tau = opt.maturity - ctx.t;
    if (!(tau > 0.0)) throw std::domain_error("evaluation time must be before maturity");
    if (!(ctx.vol > 0.0)) throw std::invalid_argument("vol must be > 0");
    if (!(s > 0.0)) throw std::invalid_argument("spot must be > 0");
    const double root = ctx.vol * std::sqrt(tau);
    const double delta1 = (std::log(s / opt.strike) + 0.5 * ctx.vol * ctx.vol * tau) / root;
    return {tau, delta1, root};
}

}  // namespace

double bs_price(const OptionSpec& opt, const BsContext& ctx, double s) {
    const Coeffs c = bs_coeffs(opt, ctx, s);
    const double delta2 = c.delta1 - c.root;
    const double call = s * norm_cdf(c.delta1) - opt.strike * norm_cdf(delta2);
    if (opt.kind == OptionKind::call) return call;
    return call - s + opt.strike;
}

Eigen::VectorXd cash_greeks(const OptionSpec& opt, const BsContext& ctx,
                            double s, int n_max) {
    if (n_max < 1 || n_max > 6)
        throw std::invalid_argument("cash_greeks: n_max must be in [1, 6]");
    const Coeffs c = bs_coeffs(opt, ctx, s);
    const double vol_sq_tau = ctx.vol * ctx.vol * c.tau;
    const double dl = c.delta1 / c.root + 1.0;   // delta(t, s)

    Eigen::VectorXd d = Eigen::VectorXd::Zero(n_max);
    d[0] = s * norm_cdf(c.delta1);
    if (opt.kind == OptionKind::put) d[0] -= s;   // parity: d1_put = d1_call - s
    if (n_max >= 2) d[1] = s * norm_pdf(c.delta1) / c.root;

    // d_{3+n} = sum_{k=0}^n C(n,k) D_{n-k} d_{2+k},
    // D_k = (-1)^{k+1} k! [delta - (sum_{p<=k} 1/p) / (vol^2 tau)]
    auto D = [&](int k) {
        double harmonic = 0.0;
        double factorial = 1.0;
        for (int p = 1; p <= k; ++p) {
            harmonic += 1.0 / p;
            factorial *= p;
        }
        const double sign = (k % 2 == 0) ? -1.0 : 1.0;
        return sign * factorial * (dl - harmonic / vol_sq_tau);
    };
    for (int n = 0; n + 3 <= n_max; ++n) {
        double sum = 0.0;
        double binom = 1.0;   // C(n, k), updated multiplicatively
        for (int k = 0; k <= n; ++k) {
            sum += binom * D(n - k) * d[1 + k];
            binom = binom * (n - k) / (k + 1);
        }
        d[2 + n] = sum;
    }
    return d;
}

double put_gamma_integral(const OptionSpec& opt, double sigma_bar) {
    opt.validate();
    if (!(sigma_bar > 0.0)) throw std::invalid_argument("sigma_bar must be > 0");
    const double T = opt.maturity;
    const double dd = (std::log(opt.spot / opt.strike) - 0.5 * sigma_bar * sigma_bar * T)
                      / (sigma_bar * std::sqrt(T));
    const double d_sq = dd * dd;
    auto integrand = [d_sq](double theta) {
        return std::exp(-d_sq / (1.0 + std::sin(theta)));
    };
    // 64-node rule plus one refinement pass over the two half panels
    const quad::Rule& rule = quad::gauss_legendre(64);
    const double half_pi = 0.5 * M_PI;
    const double coarse = quad::fixed(integrand, 0.0, half_pi, rule);
    const double fine = quad::fixed(integrand, 0.0, 0.5 * half_pi, rule)
                      + quad::fixed(integrand, 0.5 * half_pi, half_pi, rule);
    if (std::abs(fine - coarse) > 1e-10 * (1.0 + std::abs(fine))) {
        quad::Result r = quad::adaptive(integrand, 0.0, half_pi, 1e-13);
        if (!r.converged)
            throw std::runtime_error("put_gamma_integral: quadrature did not converge");
        return opt.strike * opt.strike / (2.0 * M_PI * sigma_bar * sigma_bar) * r.value;
    }
    return opt.strike * opt.strike / (2.0 * M_PI * sigma_bar * sigma_bar) * fine;
}

}  // namespace indiff
