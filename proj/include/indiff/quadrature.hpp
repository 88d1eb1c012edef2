#ifndef INDIFF_QUADRATURE_HPP
#define INDIFF_QUADRATURE_HPP

#include <Eigen/Dense>
#include <functional>

namespace indiff::quad {

// Nodes and weights of a Gaussian rule.
struct Rule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

// n-point Gauss-Legendre rule on [-1, 1]. Rules are cached per n.
const Rule& gauss_legendre(int n);

// n-point Gauss-Hermite rule for the weight e^{-x^2} on the real line.
const Rule& gauss_hermite(int n);

// Integral of f over [a, b] with a fixed rule mapped onto the interval.
double fixed(const std::function<double(double)>& f, double a, double b,
             const Rule& rule);

struct Result {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    int evaluations = 0;
    bool converged = false;
};

// Adaptive bisection built on a 15-point Gauss-Legendre panel: a panel is
// accepted when its value agrees with the sum over its two halves.
// seeds, when given, are interior points inserted into the initial partition
// (used to make sure narrow features are seen by the first pass).
Result adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol = 1e-12, double abs_tol = 0.0,
                int max_depth = 48, const std::vector<double>& seeds = {});

}  // namespace indiff::quad

#endif
