#include "indiff/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace indiff::quad {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
// Jacobi matrix of the orthogonal-polynomial recurrence, weights come from
// the first components of the eigenvectors.
Rule golub_welsch(const Eigen::VectorXd& off_diag, double weight_total) {
    const int n = static_cast<int>(off_diag.size()) + 1;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n - 1; ++k) {
        jacobi(k, k + 1) = off_diag[k];
        jacobi(k + 1, k) = off_diag[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    Rule rule;
    rule.nodes = es.eigenvalues();
    rule.weights = weight_total * es.eigenvectors().row(0).transpose().array().square();
    return rule;
}

const Rule& cached(std::map<int, Rule>& cache, std::mutex& mtx, int n,
                   const std::function<Rule(int)>& make) {
    std::lock_guard lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

}  // namespace

const Rule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    static std::map<int, Rule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, [](int m) {
        Eigen::VectorXd beta(m - 1);
        for (int k = 1; k < m; ++k)
            beta[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
        return golub_welsch(beta, 2.0);
    });
}

const Rule& gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    static std::map<int, Rule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, [](int m) {
        Eigen::VectorXd beta(m - 1);
        for (int k = 1; k < m; ++k) beta[k - 1] = std::sqrt(0.5 * k);
        return golub_welsch(beta, std::sqrt(M_PI));
    });
}

double fixed(const std::function<double(double)>& f, double a, double b,
             const Rule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

Result adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol, double abs_tol, int max_depth,
                const std::vector<double>& seeds) {
    const Rule& rule = gauss_legendre(15);

    struct Panel {
        double a, b, value;
        int depth;
    };

    // initial partition: [a, b] split at the seed points
    std::vector<double> splits{a};
    for (double s : seeds)
        if (s > a && s < b) splits.push_back(s);
    splits.push_back(b);
    std::sort(splits.begin(), splits.end());

    Result res;
    std::vector<Panel> stack;
    double pending_abs = 0.0;   // L1 mass of the panels still on the stack
    for (size_t i = 0; i + 1 < splits.size(); ++i) {
        stack.push_back({splits[i], splits[i + 1],
                         fixed(f, splits[i], splits[i + 1], rule), 0});
        pending_abs += std::abs(stack.back().value);
        res.evaluations += 15;
    }

    double accepted_abs = 0.0;
    res.converged = true;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        pending_abs -= std::abs(p.value);
        const double mid = 0.5 * (p.a + p.b);
        const double left = fixed(f, p.a, mid, rule);
        const double right = fixed(f, mid, p.b, rule);
        res.evaluations += 30;
        const double err = std::abs(left + right - p.value);
        // the scale for the relative test is the running L1 mass estimate
        const double scale = accepted_abs + pending_abs + std::abs(left) + std::abs(right);
        const double tol = std::max(abs_tol, rel_tol * scale);
        // per-panel share of the global budget
        const double local_tol = std::max(tol * (p.b - p.a) / (b - a), 1e-300);
        if (err <= local_tol || p.depth >= max_depth) {
            if (!(err <= local_tol)) res.converged = false;
            res.value += left + right;
            res.error += err;
            accepted_abs += std::abs(left) + std::abs(right);
        } else {
            stack.push_back({p.a, mid, left, p.depth + 1});
            stack.push_back({mid, p.b, right, p.depth + 1});
            pending_abs += std::abs(left) + std::abs(right);
        }
    }
    return res;
}

}  // namespace indiff::quad
