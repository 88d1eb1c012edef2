#ifndef INDIFF_ASYMPTOTIC_HPP
#define INDIFF_ASYMPTOTIC_HPP

#include <Eigen/Dense>
#include <vector>

#include "indiff/black_scholes.hpp"
#include "indiff/levy.hpp"

namespace indiff {

// Closed-form second-order indifference price with the per-term breakdown.
struct AsymptoticPrice {
    double bs_term = 0.0;         // P_BS at vol sigma_bar
    double m3_term = 0.0;         // (m3 T / 6) d3
    double m4_term = 0.0;         // (m4 T / 24) d4
    double m3sq_term = 0.0;       // (m3^2 T^2 / 72)(6 d3 + 18 d4 + 9 d5 + d6)
    double nonlinear_term = 0.0;  // (alpha/8)(m4 - m3^2/sigma_bar^2) Gamma
    double total = 0.0;
    double alpha = 0.0;
    // calls have unbounded pay-off, outside the expansion's hypotheses
    bool outside_theorem = false;
};

AsymptoticPrice asymptotic_price(const OptionSpec& opt, const GroupParams& gp,
                                 double alpha);

// seller minus buyer price at second order: twice the nonlinear term
double bid_ask_spread(const OptionSpec& opt, const GroupParams& gp, double alpha);

// E^BS[ int_0^T (S_t^2 d^2P/dS^2)^2 dt ]: model-independent jump-risk
// sensitivity of the contract. Put and call values coincide.
double jump_sensitivity(const OptionSpec& opt, double sigma_bar);

enum class SweepKey { spot, alpha, strike, maturity };

struct SweepSpec {
    SweepKey key = SweepKey::spot;
    Eigen::VectorXd values;
    static SweepSpec linspace(SweepKey key, double a, double b, int n);
};

struct CurvePoint {
    double x = 0.0;   // the swept value
    AsymptoticPrice price;
};

// One row per grid point, in grid order. Grid points are independent and
// may be evaluated on several threads; ordering stays deterministic.
std::vector<CurvePoint> price_curve(const OptionSpec& opt, const GroupParams& gp,
                                    double alpha, const SweepSpec& sweep,
                                    int threads = 1);

}  // namespace indiff

#endif
