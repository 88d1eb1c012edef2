#ifndef INDIFF_PIDE_HPP
#define INDIFF_PIDE_HPP

#include <Eigen/Dense>
#include <functional>

#include "indiff/black_scholes.hpp"
#include "indiff/levy.hpp"

namespace indiff {

// Discretization of the backward HJB equation in log-price x. Space nodes
// are x_j = x0 + j dx for j = 0..2*m_half; jump atoms sit at k dx for
// k = -k_half..k_half.
struct PideGrid {
    int n_time = 0;      // time steps, h = T / n_time
    int m_half = 0;      // half the space-node count
    double x0 = 0.0;     // left boundary in log-price
    double dx = 0.0;     // log-space step, must satisfy dx < 2
    int k_half = 0;      // half the jump-stencil width
    double alpha = 0.0;  // risk aversion, > 0

    int n_space() const { return 2 * m_half + 1; }
    double x(int j) const { return x0 + j * dx; }
    void validate() const;

    // grid centered on the strike with the reference resolution of the
    // data set: n_time 40, 2M = 200 space steps, 2K = 100 jump atoms
    static PideGrid reference(double strike, double alpha);
};

// Cell masses of the log-jump measure at nodes k dx; the k = 0 entry is
// always zero (its contribution to the scheme cancels identically).
struct LevyAtoms {
    Eigen::VectorXd masses;   // size 2*k_half + 1, entry [k_half + k]
    int k_half = 0;
    double mass(int k) const { return masses[k_half + k]; }
    double total() const { return masses.sum(); }
};

// Cell integration of the pushforward of nu under log(1+x) over
// ((k-1/2)dx, (k+1/2)dx]. Throws std::range_error when the mass lost
// beyond the stencil exceeds tail_tol * total intensity.
LevyAtoms discretize_levy(const LevyModel& m, const PideGrid& grid,
                          double tail_tol = 1e-6);

// Rows extended by k_half ghost nodes on each side, so that p[k_half + j]
// is node j and the jump stencil never leaves the array.
Eigen::VectorXd extend_row(const Eigen::VectorXd& row, const PideGrid& grid,
                           const std::function<double(double)>& off_grid_value);

// H_j(p_next, theta): quadratic hedging-error term plus the exponential
// jump penalty. p_ext is an extended row. Strictly convex in theta when
// sigma > 0 or some off-zero atom mass is positive.
double hamiltonian(int j, const Eigen::VectorXd& p_ext, double theta,
                   const PideGrid& grid, const LevyAtoms& atoms, double sigma);

struct MinimizeResult {
    double theta_star = 0.0;
    double h_min = 0.0;
    int iterations = 0;
    bool clamped = false;   // exponent clamp was hit during the search
};

// Safeguarded Newton on dH/dtheta, started at the central-difference delta
// with a doubling-bracket bisection fallback.
MinimizeResult minimize_hamiltonian(int j, const Eigen::VectorXd& p_ext,
                                    const PideGrid& grid, const LevyAtoms& atoms,
                                    double sigma);

struct StepDiagnostics {
    long newton_iterations = 0;
    long minimizations = 0;
    double max_residual = 0.0;
    long clamp_hits = 0;
};

// One implicit-explicit step: explicit jump terms B_j and min_theta H_j on
// the next-time row, implicit tridiagonal diffusion solve for the current
// row. off_grid_value supplies boundary nodes and the stencil extension.
// When hedge is non-null it receives the minimizing theta per node.
Eigen::VectorXd step_backward(const Eigen::VectorXd& p_next, double h,
                              const PideGrid& grid, const LevyAtoms& atoms,
                              double sigma,
                              const std::function<double(double)>& off_grid_value,
                              StepDiagnostics* diag = nullptr,
                              Eigen::VectorXd* hedge = nullptr);

class PideSolution {
public:
    PideSolution(Eigen::MatrixXd values, Eigen::MatrixXd hedge,
                 const PideGrid& grid, StepDiagnostics diag);

    // surface P_{i,j}: row i = time level t_i = i h, column j = space node
    const Eigen::MatrixXd& values() const { return values_; }
    const Eigen::MatrixXd& hedge() const { return hedge_; }
    const PideGrid& grid() const { return grid_; }
    const StepDiagnostics& diagnostics() const { return diag_; }
    double avg_newton_iterations() const;

    // p(0, spot) by monotone cubic interpolation in log(spot) on row 0;
    // throws std::range_error outside the grid interior
    double price_at(double spot) const;

private:
    Eigen::MatrixXd values_;
    Eigen::MatrixXd hedge_;
    PideGrid grid_;
    StepDiagnostics diag_;
};

struct PideOptions {
    double payoff_sign = 1.0;   // -1 prices the claim -H (buyer route)
    bool keep_hedge = false;
};

// Backward induction for the seller's indifference price of a European put
// under a martingale exponential Levy model (tilt physical models through
// the MEMM first).
PideSolution solve_pide(const OptionSpec& opt, const LevyModel& m,
                        const PideGrid& grid, const PideOptions& options = {});

struct SpreadResult {
    double seller = 0.0;
    double buyer = 0.0;
    double spread = 0.0;
};

// seller = price of H, buyer = -price of -H, spread = seller - buyer
SpreadResult indifference_spread_pide(const OptionSpec& opt, const LevyModel& m,
                                      const PideGrid& grid);

// Monotone (Fritsch-Carlson) cubic interpolant on an ascending grid.
class MonotoneCubic {
public:
    MonotoneCubic(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
    double operator()(double x) const;

private:
    Eigen::VectorXd x_, y_, slope_;
};

}  // namespace indiff

#endif
