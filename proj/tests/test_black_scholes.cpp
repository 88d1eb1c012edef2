#include <doctest.h>

#include <cmath>
#include <random>

#include "indiff/black_scholes.hpp"
#include "indiff/levy.hpp"
#include "indiff/oracles.hpp"
#include "indiff/quadrature.hpp"

using namespace indiff;

namespace {
OptionSpec put(double K, double T, double S0) { return {OptionKind::put, K, T, S0}; }
OptionSpec call(double K, double T, double S0) { return {OptionKind::call, K, T, S0}; }
}

TEST_CASE("worthless strike: call price tends to spot") {
    const double s = 1.7;
    CHECK(bs_price(call(1e-12, 1.0, s), {0.2, 0.0}, s) == doctest::Approx(s).epsilon(1e-9));
}

TEST_CASE("deep out-of-the-money put is tiny") {
    const double K = 1.0, s = 1e6 * K;
    CHECK(bs_price(put(K, 1.0, s), {0.2, 0.0}, s) <= 1e-6 * K);
}

TEST_CASE("bs put against a quadrature of the normal expectation") {
    // vol from the Figure-1 group parameters
    const GroupParams gp = group_params_merton({0.2, 5.0, -0.05, 0.1, std::nullopt});
    const double sbar = gp.sigma_bar();
    const double K = 1.0, T = 1.0, s = 1.0;
    // E[(K - s e^{-sbar^2 T/2 + sbar sqrt(T) Z})^+]: the pay-off kinks at
    // z*, and is smooth below it, so integrate the smooth region only
    const double z_kink = (std::log(K / s) + 0.5 * sbar * sbar * T) / (sbar * std::sqrt(T));
    auto integrand = [&](double z) {
        const double sT = s * std::exp(-0.5 * sbar * sbar * T + sbar * std::sqrt(T) * z);
        return (K - sT) * norm_pdf(z);
    };
    auto r = quad::adaptive(integrand, -15.0, z_kink, 1e-13);
    REQUIRE(r.converged);
    CHECK(bs_price(put(K, T, s), {sbar, 0.0}, s) == doctest::Approx(r.value).epsilon(1e-10));
}

TEST_CASE("put-call parity holds exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double K = u(rng), T = u(rng), s = u(rng), vol = 0.1 + 0.3 * u(rng);
        const double c = bs_price(call(K, T, s), {vol, 0.0}, s);
        const double p = bs_price(put(K, T, s), {vol, 0.0}, s);
        CHECK(c - p == doctest::Approx(s - K).epsilon(1e-12));
    }
}

TEST_CASE("printed closed forms for d3..d6 match the recurrence") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double K = 0.5 + 1.5 * u(rng);
        const double s = K * (0.5 + 1.5 * u(rng));
        const double T = 0.1 + 2.0 * u(rng);
        const double t = T * 0.8 * u(rng);
        const double vol = 0.1 + 0.4 * u(rng);
        const BsContext ctx{vol, t};
        const Eigen::VectorXd d = cash_greeks(call(K, T, s), ctx, s, 6);

        const double tau = T - t;
        const double delta1 = (std::log(s / K) + 0.5 * vol * vol * tau) / (vol * std::sqrt(tau));
        const double dl = delta1 / (vol * std::sqrt(tau)) + 1.0;
        const double ist = 1.0 / (vol * vol * tau);
        const double d2 = s * norm_pdf(delta1) / (vol * std::sqrt(tau));
        const double d3 = -d2 * dl;
        const double d4 = d2 * (dl - ist) - d3 * dl;
        const double d5 = -d2 * (2.0 * dl - 3.0 * ist) + 2.0 * d3 * (dl - ist) - d4 * dl;
        const double d6 = d2 * (6.0 * dl - 11.0 * ist) - 3.0 * d3 * (2.0 * dl - 3.0 * ist)
                          + 3.0 * d4 * (dl - ist) - d5 * dl;
        CHECK(d[2] == doctest::Approx(d3).epsilon(1e-12));
        CHECK(d[3] == doctest::Approx(d4).epsilon(1e-12));
        CHECK(d[4] == doctest::Approx(d5).epsilon(1e-12));
        CHECK(d[5] == doctest::Approx(d6).epsilon(1e-12));
    }
}

TEST_CASE("put and call share every greek above d1; d1 differs by the spot") {
    const BsContext ctx{0.25, 0.3};
    const Eigen::VectorXd dc = cash_greeks(call(1.1, 2.0, 0.9), ctx, 0.9, 6);
    const Eigen::VectorXd dp = cash_greeks(put(1.1, 2.0, 0.9), ctx, 0.9, 6);
    CHECK(dc[0] - dp[0] == doctest::Approx(0.9).epsilon(1e-14));
    for (int n = 1; n < 6; ++n) CHECK(dc[n] == dp[n]);
}

TEST_CASE("d2 is positive and vanishes far from the money") {
    const BsContext ctx{0.2, 0.0};
    CHECK(cash_greeks(put(1.0, 1.0, 1.0), ctx, 1.0, 2)[1] > 0.0);
    CHECK(cash_greeks(put(1.0, 1.0, 1e5), ctx, 1e5, 2)[1] < 1e-12);
    CHECK(cash_greeks(put(1.0, 1.0, 1e-5), ctx, 1e-5, 2)[1] < 1e-12);
}

TEST_CASE("cash_greeks matches Richardson finite differences of bs_price") {
    const double K = 1.0, T = 1.0, vol = 0.2, s = 1.0;
    const BsContext ctx{vol, 0.0};
    const Eigen::VectorXd d = cash_greeks(put(K, T, s), ctx, s, 6);
    // rounding noise grows as h^{-n}, so the achievable tolerance loosens
    // with the order
    const double tol[] = {1e-8, 1e-8, 1e-6, 1e-5, 1e-5, 1e-4};
    for (int n = 1; n <= 6; ++n) {
        const auto fd = oracles::fd_greeks(put(K, T, s), ctx, s, n);
        CHECK(d[n - 1] == doctest::Approx(fd.value).epsilon(tol[n - 1]));
    }
}

TEST_CASE("greeks refuse evaluation at or past maturity") {
    CHECK_THROWS_AS(cash_greeks(put(1.0, 1.0, 1.0), {0.2, 1.0}, 1.0, 6), std::domain_error);
    CHECK_THROWS_AS(cash_greeks(put(1.0, 1.0, 1.0), {0.2, 1.5}, 1.0, 6), std::domain_error);
}

TEST_CASE("put gamma integral: d = 0 closed case") {
    const double sbar = 0.2, T = 1.0, K = 1.0;
    const double s0 = K * std::exp(0.5 * sbar * sbar * T);   // makes d = 0
    const double v = put_gamma_integral(put(K, T, s0), sbar);
    CHECK(v == doctest::Approx(K * K / (4.0 * sbar * sbar)).epsilon(1e-12));
}

TEST_CASE("put gamma integral: zero-strike degenerate put") {
    CHECK(put_gamma_integral(put(1e-12, 1.0, 1.0), 0.2) <= 1e-20);
}

TEST_CASE("put gamma integral scales as the square of the cash scale") {
    const double base = put_gamma_integral(put(0.9, 1.5, 1.2), 0.25);
    for (double c : {0.5, 2.0, 10.0}) {
        const double scaled = put_gamma_integral(put(0.9 * c, 1.5, 1.2 * c), 0.25);
        CHECK(scaled == doctest::Approx(c * c * base).epsilon(1e-12));
    }
}
