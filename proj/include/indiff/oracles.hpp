#ifndef INDIFF_ORACLES_HPP
#define INDIFF_ORACLES_HPP

#include <cstdint>
#include <optional>

#include "indiff/black_scholes.hpp"
#include "indiff/levy.hpp"

// Reference computations used by tests and the selftest command. Each one
// reaches the target quantity by a route independent of the module it
// validates.
namespace indiff::oracles {

enum class Method { series, quadrature, finite_diff, monte_carlo };

struct OracleReport {
    double value = 0.0;
    Method method = Method::series;
    double error_estimate = 0.0;
    std::optional<std::uint64_t> seed;
};

// Merton closed-form series: condition on the jump count, price each branch
// as Black-Scholes at jump-adjusted forward and variance, weight by the
// Poisson probabilities. Requires martingale drift (p.drift empty or equal
// to the martingale value).
OracleReport merton_series_price(const OptionSpec& opt, const MertonParams& p);

// Direct quadrature of E^BS[ int_0^T (S_t^2 P_ss)^2 dt ]: composite
// Gauss-Legendre in time after the substitution T - t = T w^2, the
// Brownian marginal by Gauss-Hermite recentred on the integrand's own
// Gaussian scale (stays accurate as t -> T).
OracleReport jump_sensitivity_numeric(const OptionSpec& opt, double sigma_bar);

// order-n spot derivative of the Black-Scholes price (times s^n, matching
// cash_greeks) by central differences with Richardson extrapolation
OracleReport fd_greeks(const OptionSpec& opt, const BsContext& ctx, double s,
                       int order);

// Monte Carlo E[H] under a martingale model by exact terminal-law sampling
// (compound Poisson plus Gaussian; no path discretization). Batches carry
// counter-derived seeds, so the result depends only on (inputs, seed).
OracleReport mc_linear_price(const OptionSpec& opt, const LevyModel& m,
                             long n_paths, std::uint64_t seed);

}  // namespace indiff::oracles

#endif
