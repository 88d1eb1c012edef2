#ifndef INDIFF_BLACK_SCHOLES_HPP
#define INDIFF_BLACK_SCHOLES_HPP

#include <Eigen/Dense>

namespace indiff {

double norm_pdf(double x);
double norm_cdf(double x);

enum class OptionKind { put, call };

// European contract. Interest rate is zero throughout the library.
struct OptionSpec {
    OptionKind kind = OptionKind::put;
    double strike = 0.0;
    double maturity = 0.0;   // years
    double spot = 0.0;
    void validate() const;   // throws std::invalid_argument
};

struct BsContext {
    double vol = 0.0;   // per sqrt(year), > 0
    double t = 0.0;     // evaluation time, strictly < maturity
};

// Black-Scholes price at spot s. Puts are priced through put-call parity
// (zero rate): put = call - s + K.
double bs_price(const OptionSpec& opt, const BsContext& ctx, double s);

// Cash greeks d_1..d_n, where d_n(t,s) = s^n d^nP/ds^n. Entry [k] holds
// d_{k+1}. Put and call share every d_n with n >= 2; d_1 differs by parity.
// Throws std::domain_error when ctx.t >= maturity.
Eigen::VectorXd cash_greeks(const OptionSpec& opt, const BsContext& ctx,
                            double s, int n_max);

// E^BS[ int_0^T (S_t^2 d^2P/dS^2)^2 dt ] for the put, via the closed-form
// one-dimensional integral; the u->1 endpoint singularity is removed with
// u = sin(theta). Calls share the value (put and call gammas coincide).
double put_gamma_integral(const OptionSpec& opt, double sigma_bar);

}  // namespace indiff

#endif
