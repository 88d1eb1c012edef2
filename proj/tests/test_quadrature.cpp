#include <doctest.h>

#include <cmath>

#include "indiff/quadrature.hpp"

using namespace indiff;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    for (int n : {2, 5, 16, 64}) {
        const quad::Rule& r = quad::gauss_legendre(n);
        // int_{-1}^{1} x^{2n-2} dx = 2 / (2n-1)
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            sum += r.weights[i] * std::pow(r.nodes[i], 2 * n - 2);
        CHECK(sum == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
        CHECK(r.weights.sum() == doctest::Approx(2.0).epsilon(1e-13));
    }
}

TEST_CASE("gauss-hermite matches Gaussian moments") {
    const quad::Rule& r = quad::gauss_hermite(40);
    // int e^{-x^2} dx = sqrt(pi); int x^2 e^{-x^2} dx = sqrt(pi)/2
    CHECK(r.weights.sum() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    double m2 = 0.0;
    for (int i = 0; i < 40; ++i) m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
    CHECK(m2 == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("fixed rule on a shifted interval") {
    const quad::Rule& r = quad::gauss_legendre(16);
    const double v = quad::fixed([](double x) { return std::exp(x); }, 0.5, 2.0, r);
    CHECK(v == doctest::Approx(std::exp(2.0) - std::exp(0.5)).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature reaches tight tolerances") {
    auto res = quad::adaptive([](double x) { return std::sin(10.0 * x); }, 0.0, M_PI, 1e-13);
    CHECK(res.converged);
    // int_0^pi sin(10 x) dx = (1 - cos(10 pi)) / 10 = 0
    CHECK(res.value == doctest::Approx(0.0).epsilon(1e-12));

    auto narrow = quad::adaptive(
        [](double x) { return std::exp(-1e4 * (x - 0.3) * (x - 0.3)); }, 0.0, 1.0,
        1e-12, 0.0, 48, {0.3});
    CHECK(narrow.converged);
    CHECK(narrow.value == doctest::Approx(std::sqrt(M_PI) / 100.0).epsilon(1e-10));
}

TEST_CASE("adaptive quadrature reports non-convergence") {
    // |x - pi/8|^{-1/2} is integrable but saturates the depth budget
    auto res = quad::adaptive(
        [](double x) { return 1.0 / std::sqrt(std::abs(x - M_PI / 8.0)); }, 0.0, 1.0,
        1e-14, 0.0, 8);
    CHECK_FALSE(res.converged);
}
