#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "indiff/levy.hpp"

using namespace indiff;

namespace {
const MertonParams kFig1{0.2, 5.0, -0.05, 0.1, std::nullopt};

MertonParams random_merton(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MertonParams p;
    p.sigma = 0.05 + 0.4 * u(rng);
    p.intensity = 0.2 + 8.0 * u(rng);
    p.jump_mean = -0.2 + 0.4 * u(rng);
    p.jump_std = 0.02 + 0.2 * u(rng);
    return p;
}
}  // namespace

TEST_CASE("merton levy density") {
    SUBCASE("value at the mode argument") {
        const double x = std::expm1(kFig1.jump_mean);
        const double expected = kFig1.intensity
                                / (kFig1.jump_std * std::exp(kFig1.jump_mean)
                                   * std::sqrt(2.0 * M_PI));
        CHECK(merton_levy_density(x, kFig1) == doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("zero intensity") {
        MertonParams p = kFig1;
        p.intensity = 0.0;
        p.sigma = 0.2;
        CHECK(merton_levy_density(0.3, p) == 0.0);
    }
    SUBCASE("zero at and below -1") {
        CHECK(merton_levy_density(-1.0, kFig1) == 0.0);
        CHECK(merton_levy_density(-1.5, kFig1) == 0.0);
    }
    SUBCASE("direct formula evaluation at x = 0") {
        const double x = 0.0;
        const double direct = kFig1.intensity
                              / (kFig1.jump_std * (x + 1.0) * std::sqrt(2.0 * M_PI))
                              * std::exp(-std::pow(std::log(x + 1.0) - kFig1.jump_mean, 2)
                                         / (2.0 * kFig1.jump_std * kFig1.jump_std));
        CHECK(merton_levy_density(x, kFig1) == doctest::Approx(direct).epsilon(1e-14));
        CHECK(direct == doctest::Approx(17.603266338214972).epsilon(1e-12));
    }
}

TEST_CASE("group params closed form") {
    SUBCASE("no jumps") {
        const GroupParams gp = group_params_merton({0.2, 0.0, 0.0, 0.1, std::nullopt});
        CHECK(gp.sigma_bar_sq == doctest::Approx(0.04).epsilon(1e-15));
        CHECK(gp.m3 == 0.0);
        CHECK(gp.m4 == 0.0);
    }
    SUBCASE("degenerate jumps at zero") {
        const GroupParams gp = group_params_merton({0.2, 5.0, 0.0, 1e-8, std::nullopt});
        CHECK(gp.sigma_bar_sq == doctest::Approx(0.04).epsilon(1e-12));
        CHECK(std::abs(gp.m3) < 1e-12);
        CHECK(std::abs(gp.m4) < 1e-12);
    }
    SUBCASE("figure-1 parameters against quadrature") {
        const GroupParams cf = group_params_merton(kFig1);
        const GroupParams nq = group_params_numeric(LevyModel::merton(kFig1));
        CHECK(cf.sigma_bar_sq == doctest::Approx(nq.sigma_bar_sq).epsilon(1e-8));
        CHECK(cf.m3 == doctest::Approx(nq.m3).epsilon(1e-8));
        CHECK(cf.m4 == doctest::Approx(nq.m4).epsilon(1e-8));
    }
}

TEST_CASE("group params from atom lists by direct summation") {
    SUBCASE("symmetric two-atom list") {
        const LevyModel m = LevyModel::from_atoms(0.0, {{0.1, 2.0}, {-0.1, 2.0}});
        const GroupParams gp = group_params_numeric(m);
        CHECK(gp.sigma_bar_sq == doctest::Approx(0.04).epsilon(1e-14));
        CHECK(gp.m3 == doctest::Approx(0.0).epsilon(1e-16));
        // direct summation: 2 (0.1)^4 + 2 (-0.1)^4 = 0.0004
        CHECK(gp.m4 == doctest::Approx(0.0004).epsilon(1e-14));
    }
    SUBCASE("single atom with diffusion") {
        const LevyModel m = LevyModel::from_atoms(0.1, {{0.2, 1.0}});
        const GroupParams gp = group_params_numeric(m);
        CHECK(gp.sigma_bar_sq == doctest::Approx(0.05).epsilon(1e-14));
        CHECK(gp.m3 == doctest::Approx(0.008).epsilon(1e-14));
        CHECK(gp.m4 == doctest::Approx(0.0016).epsilon(1e-14));
    }
}

TEST_CASE("cauchy-schwarz invariant over random merton draws") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const GroupParams gp = group_params_merton(random_merton(rng));
        CHECK(gp.m4 * gp.sigma_bar_sq - gp.m3 * gp.m3 >= -1e-15);
        CHECK_NOTHROW(gp.validate());
    }
}

TEST_CASE("ell") {
    SUBCASE("ell(0) = 0 for every model") {
        CHECK(ell(0.0, LevyModel::merton(kFig1)) == 0.0);
        CHECK(ell(0.0, LevyModel::from_atoms(0.1, {{0.3, 1.0}, {-0.2, 0.5}})) == 0.0);
    }
    SUBCASE("pure gaussian") {
        const LevyModel m = LevyModel::from_atoms(1.0, {{0.1, 0.0}}, 0.0);
        CHECK(ell(2.0, m) == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("single atom") {
        const LevyModel m = LevyModel::from_atoms(0.0, {{0.1, 1.0}}, 0.0);
        CHECK(ell(1.0, m) == doctest::Approx(std::exp(0.1) - 1.0 - 0.1).epsilon(1e-13));
    }
    SUBCASE("convexity on a random grid") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-20.0, 20.0);
        const LevyModel m = LevyModel::from_atoms(0.15, {{0.08, 2.0}, {-0.06, 3.0}});
        for (int i = 0; i < 300; ++i) {
            const double a = u(rng), h = 0.01 + std::abs(u(rng)) * 0.01;
            const double second = ell(a - h, m) - 2.0 * ell(a, m) + ell(a + h, m);
            CHECK(second >= -1e-10);
        }
    }
}

TEST_CASE("find_memm_tilt") {
    SUBCASE("symmetric atoms give phi* = 0") {
        const LevyModel m = LevyModel::from_atoms(0.2, {{0.1, 1.0}, {-0.1, 1.0}}, 0.0);
        CHECK(std::abs(find_memm_tilt(m, 10.0)) <= 1e-10);
    }
    SUBCASE("pure gaussian closed form") {
        for (double g : {0.03, -0.07, 0.4}) {
            for (double alpha : {0.5, 10.0}) {
                const LevyModel m = LevyModel::from_atoms(0.2, {{0.1, 0.0}}, g);
                CHECK(find_memm_tilt(m, alpha)
                      == doctest::Approx(g / (alpha * 0.04)).epsilon(1e-10));
            }
        }
    }
    SUBCASE("martingale merton model is its own MEMM") {
        CHECK(std::abs(find_memm_tilt(LevyModel::merton(kFig1), 10.0)) <= 1e-10);
    }
    SUBCASE("non-martingale merton against a bisection oracle") {
        MertonParams p = kFig1;
        p.drift = 0.08;   // physical-measure drift
        const LevyModel m = LevyModel::merton(p);
        const double phi = find_memm_tilt(m, 10.0);
        // bisection on ell'
        double lo = -50.0, hi = 50.0;
        REQUIRE(ell_prime(lo, m) < 0.0);
        REQUIRE(ell_prime(hi, m) > 0.0);
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (ell_prime(mid, m) < 0.0 ? lo : hi) = mid;
        }
        CHECK(phi == doctest::Approx(-0.5 * (lo + hi) / 10.0).epsilon(1e-8));
    }
    SUBCASE("minimizer location is independent of alpha") {
        MertonParams p = kFig1;
        p.drift = -0.05;
        const LevyModel m = LevyModel::merton(p);
        const double phi1 = find_memm_tilt(m, 3.0);
        const double phi2 = find_memm_tilt(m, 6.0);
        CHECK(phi2 == doctest::Approx(0.5 * phi1).epsilon(1e-9));
    }
    SUBCASE("ell at the minimizer is below 1000 random evaluations") {
        MertonParams p = kFig1;
        p.drift = 0.05;
        const LevyModel m = LevyModel::merton(p);
        const double u_star = -10.0 * find_memm_tilt(m, 10.0);
        const double min_val = ell(u_star, m);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-50.0, 50.0);
        for (int i = 0; i < 1000; ++i) CHECK(min_val <= ell(u(rng), m) + 1e-9);
    }
    SUBCASE("monotone model is rejected") {
        // positive jumps only, non-negative drift between jumps: a.s. increasing
        const LevyModel m = LevyModel::from_atoms(0.0, {{0.2, 1.0}}, 0.25);
        CHECK_THROWS_AS(find_memm_tilt(m, 1.0), std::domain_error);
    }
}

TEST_CASE("tilt_measure") {
    SUBCASE("phi* = 0 keeps the measure, drift becomes martingale") {
        const LevyModel m = LevyModel::merton(kFig1);
        const LevyModel q = tilt_measure(m, 10.0, 0.0);
        CHECK(q.measure().tilt() == 0.0);
        CHECK(std::abs(q.mean_rate()) <= 1e-12);
        CHECK(q.measure().moment(2) == doctest::Approx(m.measure().moment(2)).epsilon(1e-12));
    }
    SUBCASE("single atom mass reweights by the exponential factor") {
        const double w = 2.0, z = 0.1, alpha = 5.0;
        const LevyModel m = LevyModel::from_atoms(0.3, {{z, w}}, 0.0);
        const double phi = find_memm_tilt(m, alpha);
        const LevyModel q = tilt_measure(m, alpha, phi);
        CHECK(q.measure().atom_list()[0].mass
              == doctest::Approx(w * std::exp(-alpha * phi * z)).epsilon(1e-12));
    }
    SUBCASE("wrong phi* fails the drift residual check") {
        const LevyModel m = LevyModel::merton(kFig1);
        CHECK_THROWS_AS(tilt_measure(m, 10.0, 0.05), std::runtime_error);
    }
    SUBCASE("tilted merton second moment against direct quadrature") {
        MertonParams p = kFig1;
        p.drift = 0.08;
        const LevyModel m = LevyModel::merton(p);
        const double alpha = 10.0;
        const double phi = find_memm_tilt(m, alpha);
        const LevyModel q = tilt_measure(m, alpha, phi);
        // independent route: reweighted-density quadrature in the jump variable
        const double u = -alpha * phi;
        const int n = 4000;
        const double ylo = p.jump_mean - 8.0 * p.jump_std;
        const double yhi = p.jump_mean + 8.0 * p.jump_std;
        const double dy = (yhi - ylo) / n;
        double second = 0.0;   // Simpson
        for (int i = 0; i <= n; ++i) {
            const double y = ylo + i * dy;
            const double x = std::expm1(y);
            const double z = (y - p.jump_mean) / p.jump_std;
            const double f = x * x * std::exp(u * x) * p.intensity
                             * std::exp(-0.5 * z * z)
                             / (p.jump_std * std::sqrt(2.0 * M_PI));
            const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            second += wgt * f;
        }
        second *= dy / 3.0;
        CHECK(q.measure().moment(2) == doctest::Approx(second).epsilon(1e-8));
        // the tilted model passes its own martingale check
        CHECK(std::abs(ell_prime(0.0, q)) <= 1e-9);
    }
}

TEST_CASE("martingale flag solves the drift") {
    const LevyModel m = LevyModel::merton(kFig1);
    CHECK(m.is_martingale(1e-12));
    const LevyModel a = LevyModel::from_atoms(0.2, {{0.1, 1.0}, {-0.05, 2.0}});
    CHECK(a.is_martingale(1e-12));
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(MertonParams({-0.1, 5.0, 0.0, 0.1, std::nullopt}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(MertonParams({0.2, 5.0, 0.0, 0.0, std::nullopt}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(MertonParams({0.0, 0.0, 0.0, 0.1, std::nullopt}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(LevyModel::from_atoms(0.1, {{-1.5, 1.0}}), std::invalid_argument);
    GroupParams bad{0.04, 0.05, 0.0};   // m3^2 > sigma_bar_sq * m4
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
