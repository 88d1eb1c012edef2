#include "indiff/pide.hpp"

#include <cmath>
#include <stdexcept>

namespace indiff {

void PideGrid::validate() const {
    if (n_time < 1) throw std::invalid_argument("grid.n_time must be >= 1");
    if (m_half < 2) throw std::invalid_argument("grid.m_half must be >= 2");
    if (k_half < 1) throw std::invalid_argument("grid.k_half must be >= 1");
    if (k_half > m_half)
        throw std::invalid_argument("grid.k_half must not exceed grid.m_half");
    if (!(dx > 0.0)) throw std::invalid_argument("grid.dx must be > 0");
    if (!(dx < 2.0))
        throw std::invalid_argument("grid.dx must be < 2 (scheme coefficient sign)");
    if (!(alpha > 0.0)) throw std::invalid_argument("grid.alpha must be > 0");
}

PideGrid PideGrid::reference(double strike, double alpha) {
    PideGrid g;
    g.n_time = 40;
    g.m_half = 100;
    g.k_half = 50;
    g.dx = 0.02;
    g.x0 = std::log(strike) - g.m_half * g.dx;
    g.alpha = alpha;
    return g;
}

LevyAtoms discretize_levy(const LevyModel& m, const PideGrid& grid, double tail_tol) {
    grid.validate();
    const int K = grid.k_half;
    const double d = grid.dx;
    LevyAtoms atoms;
    atoms.k_half = K;
    atoms.masses = Eigen::VectorXd::Zero(2 * K + 1);
    for (int k = -K; k <= K; ++k) {
        if (k == 0) continue;   // e^{0}-1 = 0: the cell drops out of B_j and H_j
        atoms.masses[K + k] = m.measure().mass_log_interval((k - 0.5) * d, (k + 0.5) * d);
    }
    const double total = m.measure().total_mass();
    const double covered = atoms.total()
                           + m.measure().mass_log_interval(-0.5 * d, 0.5 * d);
    if (total > 0.0 && total - covered > tail_tol * total)
        throw std::range_error(
            "discretize_levy: jump mass beyond the stencil ("
            + std::to_string(total - covered) + " of " + std::to_string(total)
            + "); increase k_half or dx");
    return atoms;
}

Eigen::VectorXd extend_row(const Eigen::VectorXd& row, const PideGrid& grid,
                           const std::function<double(double)>& off_grid_value) {
    const int n = grid.n_space();
    const int K = grid.k_half;
    if (row.size() != n)
        throw std::invalid_argument("extend_row: row length does not match grid");
    Eigen::VectorXd ext(n + 2 * K);
    for (int j = -K; j < 0; ++j) ext[K + j] = off_grid_value(grid.x(j));
    ext.segment(K, n) = row;
    for (int j = n; j < n + K; ++j) ext[K + j] = off_grid_value(grid.x(j));
    return ext;
}

namespace {

constexpr double kExpClamp = 700.0;

inline double clamped_exp(double e, bool& clamped) {
    if (e > kExpClamp) { clamped = true; e = kExpClamp; }
    else if (e < -kExpClamp) { clamped = true; e = -kExpClamp; }
    return std::exp(e);
}

// central-difference delta at node j of an extended row
inline double cd_delta(int j, const Eigen::VectorXd& p_ext, const PideGrid& g) {
    return (p_ext[g.k_half + j + 1] - p_ext[g.k_half + j - 1]) / (2.0 * g.dx);
}

}  // namespace

double hamiltonian(int j, const Eigen::VectorXd& p_ext, double theta,
                   const PideGrid& grid, const LevyAtoms& atoms, double sigma) {
    const int K = atoms.k_half;
    const double a = grid.alpha;
    const double delta = cd_delta(j, p_ext, grid);
    const double pj = p_ext[K + j];
    double value = 0.5 * a * sigma * sigma * (theta - delta) * (theta - delta);
    bool clamped = false;
    for (int k = -K; k <= K; ++k) {
        const double w = atoms.mass(k);
        if (w == 0.0) continue;
        const double jump = std::expm1(k * grid.dx);   // e^{kd} - 1
        const double dp = p_ext[K + j + k] - pj;
        const double arg = a * (dp - jump * theta);
        value += (clamped_exp(arg, clamped) - 1.0 - arg) * w / a;
    }
    return value;
}

MinimizeResult minimize_hamiltonian(int j, const Eigen::VectorXd& p_ext,
                                    const PideGrid& grid, const LevyAtoms& atoms,
                                    double sigma) {
    const int K = atoms.k_half;
    const double a = grid.alpha;
    const double delta = cd_delta(j, p_ext, grid);
    const double pj = p_ext[K + j];

    // precompute the active stencil entries
    struct Entry { double jump, dp, w; };
    std::vector<Entry> entries;
    entries.reserve(2 * K);
    for (int k = -K; k <= K; ++k) {
        const double w = atoms.mass(k);
        if (w == 0.0) continue;
        entries.push_back({std::expm1(k * grid.dx), p_ext[K + j + k] - pj, w});
    }

    MinimizeResult res;
    const double sig_sq = sigma * sigma;
    if (entries.empty()) {
        // no jump terms: pure quadratic (minimum at the delta), or fully
        // degenerate, where (delta, 0) is returned by convention
        res.theta_star = delta;
        return res;
    }

    auto derivs = [&](double theta, double& g1, double& g2, double& value) {
        g1 = a * sig_sq * (theta - delta);
        g2 = a * sig_sq;
        value = 0.5 * a * sig_sq * (theta - delta) * (theta - delta);
        for (const Entry& e : entries) {
            const double arg = a * (e.dp - e.jump * theta);
            const double ex = clamped_exp(arg, res.clamped);
            g1 -= e.jump * (ex - 1.0) * e.w;
            g2 += a * e.jump * e.jump * ex * e.w;
            value += (ex - 1.0 - arg) * e.w / a;
        }
    };

    // doubling bracket around the root of the increasing dH/dtheta
    double g1, g2, value;
    double lo = delta, hi = delta;
    derivs(delta, g1, g2, value);
    double width = std::max(1.0, std::abs(delta));
    while (g1 < 0.0) {   // root is to the right
        lo = hi;
        hi += width;
        width *= 2.0;
        if (width > 1e15)
            throw std::runtime_error("minimize_hamiltonian: bracket search failed");
        derivs(hi, g1, g2, value);
    }
    derivs(lo, g1, g2, value);
    while (g1 > 0.0) {   // root is to the left
        hi = lo;
        lo -= width;
        width *= 2.0;
        if (width > 1e15)
            throw std::runtime_error("minimize_hamiltonian: bracket search failed");
        derivs(lo, g1, g2, value);
    }

    double theta = delta;
    for (int it = 0; it <= 100; ++it) {
        derivs(theta, g1, g2, value);
        // always take one Newton step: at tiny alpha the residual scale
        // (proportional to alpha) would otherwise accept the start point
        if (it > 0 && std::abs(g1) <= 1e-10 * (1.0 + std::abs(value))) {
            res.theta_star = theta;
            res.h_min = value;
            res.iterations = it;
            return res;
        }
        if (it == 100) break;
        if (g1 > 0.0) hi = theta; else lo = theta;
        double next = theta - g1 / g2;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        theta = next;
    }
    throw std::runtime_error("minimize_hamiltonian: Newton residual "
                             + std::to_string(g1) + " after iteration cap");
}

Eigen::VectorXd step_backward(const Eigen::VectorXd& p_next, double h,
                              const PideGrid& grid, const LevyAtoms& atoms,
                              double sigma,
                              const std::function<double(double)>& off_grid_value,
                              StepDiagnostics* diag, Eigen::VectorXd* hedge) {
    grid.validate();
    const int n = grid.n_space();
    const int K = grid.k_half;
    if (atoms.k_half != K)
        throw std::invalid_argument("step_backward: atom stencil does not match grid");
    if (!(h > 0.0)) throw std::invalid_argument("step_backward: h must be > 0");

    const Eigen::VectorXd p_ext = extend_row(p_next, grid, off_grid_value);
    const double d = grid.dx;
    const double sig_sq = sigma * sigma;

    // P_{i,j}(1 + s^2h/d^2) - P_{i,j-1}(s^2h/2d^2 + s^2h/4d)
    //                       - P_{i,j+1}(s^2h/2d^2 - s^2h/4d) = rhs_j
    const double sub = sig_sq * h / (2.0 * d * d) + sig_sq * h / (4.0 * d);
    const double sup = sig_sq * h / (2.0 * d * d) - sig_sq * h / (4.0 * d);
    const double diag_c = 1.0 + sig_sq * h / (d * d);

    Eigen::VectorXd rhs(n);
    if (hedge) hedge->setZero(n);
    for (int j = 1; j < n - 1; ++j) {
        const double delta = cd_delta(j, p_ext, grid);
        double B = 0.0;
        for (int k = -K; k <= K; ++k) {
            const double w = atoms.mass(k);
            if (w == 0.0) continue;
            B += (p_ext[K + j + k] - p_ext[K + j] - std::expm1(k * d) * delta) * w;
        }
        MinimizeResult mr = minimize_hamiltonian(j, p_ext, grid, atoms, sigma);
        if (diag) {
            diag->newton_iterations += mr.iterations;
            diag->minimizations += 1;
            diag->clamp_hits += mr.clamped ? 1 : 0;
        }
        if (hedge) (*hedge)[j] = mr.theta_star;
        rhs[j] = p_next[j] + h * B + h * mr.h_min;
    }

    Eigen::VectorXd out(n);
    out[0] = off_grid_value(grid.x(0));
    out[n - 1] = off_grid_value(grid.x(n - 1));

    // Thomas algorithm on the interior; boundary values folded into the rhs
    const int ni = n - 2;
    Eigen::VectorXd cp(ni), dp(ni);
    rhs[1] += sub * out[0];
    rhs[n - 2] += sup * out[n - 1];
    cp[0] = -sup / diag_c;
    dp[0] = rhs[1] / diag_c;
    for (int j = 1; j < ni; ++j) {
        const double m = diag_c + sub * cp[j - 1];
        cp[j] = -sup / m;
        dp[j] = (rhs[1 + j] + sub * dp[j - 1]) / m;
    }
    out[ni] = dp[ni - 1];
    for (int j = ni - 2; j >= 0; --j) out[1 + j] = dp[j] - cp[j] * out[2 + j];
    return out;
}

// ---------------------------------------------------------------------------

PideSolution::PideSolution(Eigen::MatrixXd values, Eigen::MatrixXd hedge,
                           const PideGrid& grid, StepDiagnostics diag)
    : values_(std::move(values)), hedge_(std::move(hedge)), grid_(grid), diag_(diag) {}

double PideSolution::avg_newton_iterations() const {
    return diag_.minimizations == 0
               ? 0.0
               : static_cast<double>(diag_.newton_iterations) / diag_.minimizations;
}

double PideSolution::price_at(double spot) const {
    if (!(spot > 0.0)) throw std::invalid_argument("spot must be > 0");
    const double x = std::log(spot);
    if (x <= grid_.x(0) || x >= grid_.x(grid_.n_space() - 1))
        throw std::range_error("spot outside the grid interior");
    Eigen::VectorXd xs(grid_.n_space());
    for (int j = 0; j < grid_.n_space(); ++j) xs[j] = grid_.x(j);
    MonotoneCubic interp(xs, values_.row(0).transpose());
    return interp(x);
}

PideSolution solve_pide(const OptionSpec& opt, const LevyModel& m,
                        const PideGrid& grid, const PideOptions& options) {
    opt.validate();
    grid.validate();
    if (opt.kind != OptionKind::put)
        throw std::invalid_argument("solve_pide prices European puts only");
    if (!m.is_martingale(1e-6))
        throw std::invalid_argument(
            "solve_pide requires a martingale model; tilt through the MEMM first");

    const double K = opt.strike;
    const double logK = std::log(K);
    if (!(grid.x(0) < logK && logK < grid.x(grid.n_space() - 1)))
        throw std::invalid_argument("grid does not straddle the strike");

    const double sign = options.payoff_sign;
    auto payoff = [K, sign](double x) { return sign * std::max(K - std::exp(x), 0.0); };

    const LevyAtoms atoms = discretize_levy(m, grid);
    const double h = opt.maturity / grid.n_time;
    const int n = grid.n_space();

    Eigen::MatrixXd surface(grid.n_time + 1, n);
    Eigen::MatrixXd hedge;
    if (options.keep_hedge) hedge.setZero(grid.n_time, n);

    Eigen::VectorXd row(n);
    for (int j = 0; j < n; ++j) row[j] = payoff(grid.x(j));
    surface.row(grid.n_time) = row.transpose();

    StepDiagnostics diag;
    Eigen::VectorXd hedge_row;
    for (int i = grid.n_time - 1; i >= 0; --i) {
        row = step_backward(row, h, grid, atoms, m.sigma(), payoff, &diag,
                            options.keep_hedge ? &hedge_row : nullptr);
        surface.row(i) = row.transpose();
        if (options.keep_hedge) hedge.row(i) = hedge_row.transpose();
    }
    return PideSolution(std::move(surface), std::move(hedge), grid, diag);
}

SpreadResult indifference_spread_pide(const OptionSpec& opt, const LevyModel& m,
                                      const PideGrid& grid) {
    PideOptions sell, buy;
    buy.payoff_sign = -1.0;
    SpreadResult r;
    r.seller = solve_pide(opt, m, grid, sell).price_at(opt.spot);
    r.buyer = -solve_pide(opt, m, grid, buy).price_at(opt.spot);
    r.spread = r.seller - r.buyer;
    return r;
}

// ---------------------------------------------------------------------------

MonotoneCubic::MonotoneCubic(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
    : x_(x), y_(y), slope_(x.size()) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || y.size() != n)
        throw std::invalid_argument("MonotoneCubic needs matching grids, n >= 2");
    Eigen::VectorXd hgap(n - 1), sec(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        hgap[i] = x[i + 1] - x[i];
        if (!(hgap[i] > 0.0)) throw std::invalid_argument("grid must be ascending");
        sec[i] = (y[i + 1] - y[i]) / hgap[i];
    }
    // Fritsch-Carlson derivatives: weighted harmonic mean of the secants,
    // zero at local extrema
    for (int i = 1; i < n - 1; ++i) {
        if (sec[i - 1] * sec[i] <= 0.0) {
            slope_[i] = 0.0;
        } else {
            const double w1 = 2.0 * hgap[i] + hgap[i - 1];
            const double w2 = hgap[i] + 2.0 * hgap[i - 1];
            slope_[i] = (w1 + w2) / (w1 / sec[i - 1] + w2 / sec[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0) return 0.0;
        if (s0 * s1 <= 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
        return d;
    };
    slope_[0] = end_slope(hgap[0], hgap[1], sec[0], sec[1]);
    slope_[n - 1] = end_slope(hgap[n - 2], hgap[n - 3], sec[n - 2], sec[n - 3]);
}

double MonotoneCubic::operator()(double x) const {
    const int n = static_cast<int>(x_.size());
    if (x <= x_[0]) return y_[0];
    if (x >= x_[n - 1]) return y_[n - 1];
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (x_[mid] <= x ? lo : hi) = mid;
    }
    const double hseg = x_[lo + 1] - x_[lo];
    const double t = (x - x_[lo]) / hseg;
    const double y0 = y_[lo], y1 = y_[lo + 1];
    const double m0 = slope_[lo] * hseg, m1 = slope_[lo + 1] * hseg;
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0
           + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
}

}  // namespace indiff
