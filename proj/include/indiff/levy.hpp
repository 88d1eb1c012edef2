#ifndef INDIFF_LEVY_HPP
#define INDIFF_LEVY_HPP

#include <functional>
#include <optional>
#include <vector>

namespace indiff {

// Merton jump-diffusion: X_t = mu t + sigma W_t + sum (e^{Y_i} - 1),
// Y_i ~ N(jump_mean, jump_std^2), Poisson intensity `intensity`.
struct MertonParams {
    double sigma = 0.0;        // diffusion volatility, >= 0
    double intensity = 0.0;    // jumps per year, >= 0
    double jump_mean = 0.0;    // mean of log jump size
    double jump_std = 0.0;     // std of log jump size, > 0
    std::optional<double> drift;   // mu; empty = solve the martingale condition
    void validate() const;
};

// The three reduced parameters driving the price expansion.
struct GroupParams {
    double sigma_bar_sq = 0.0;   // sigma^2 + int x^2 nu(dx)
    double m3 = 0.0;             // int x^3 nu(dx)
    double m4 = 0.0;             // int x^4 nu(dx)
    double sigma_bar() const;
    void validate() const;       // positivity and m4*sigma_bar_sq - m3^2 >= 0
};

struct JumpAtom {
    double size = 0.0;   // jump of the price relative return, > -1
    double mass = 0.0;   // >= 0
};

// Jump measure nu(dx): either a finite atom list or a (possibly
// exponentially tilted) Merton lognormal density truncated to a bounded
// log-jump window. Tilting by e^{u x} keeps the representation closed.
class JumpMeasure {
public:
    static JumpMeasure merton(const MertonParams& p, double trunc_mult = 8.0);
    static JumpMeasure atoms(std::vector<JumpAtom> atoms);

    bool is_atomic() const { return atomic_; }
    const std::vector<JumpAtom>& atom_list() const { return atoms_; }
    const MertonParams& merton_params() const { return merton_; }
    double tilt() const { return tilt_; }
    double trunc_mult() const { return trunc_mult_; }

    // support of the measure in jump space, lo > -1
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }

    double total_mass() const;
    double moment(int p) const;                                    // int x^p nu(dx)
    double integrate(const std::function<double(double)>& f) const;   // int f(x) nu(dx)
    double mean_above(double cut) const;                           // int_{x > cut} x nu(dx)
    // mass of the log-jump measure (pushforward under log(1+x)) on (ylo, yhi]
    double mass_log_interval(double ylo, double yhi) const;

    JumpMeasure tilted(double u) const;   // nu*(dx) = e^{u x} nu(dx)
    void validate() const;

private:
    JumpMeasure() = default;
    bool atomic_ = false;
    std::vector<JumpAtom> atoms_;
    MertonParams merton_;
    double tilt_ = 0.0;
    double trunc_mult_ = 8.0;
    double lo_ = 0.0, hi_ = 0.0;
};

// Levy triplet (sigma^2, nu, gamma) with truncation 1_{|x|<=1}. All
// measures carried here have bounded support and finite mass.
class LevyModel {
public:
    LevyModel(double sigma, JumpMeasure measure, double gamma_trunc);

    // drift taken from p.drift, or solved from the martingale condition
    static LevyModel merton(const MertonParams& p, double trunc_mult = 8.0);
    // gamma_trunc empty = martingale condition
    static LevyModel from_atoms(double sigma, std::vector<JumpAtom> atoms,
                                std::optional<double> gamma_trunc = std::nullopt);

    double sigma() const { return sigma_; }
    const JumpMeasure& measure() const { return measure_; }
    double gamma_trunc() const { return gamma_trunc_; }

    // E[X_1] = gamma_trunc + int_{|x|>1} x nu(dx); zero for martingale models
    double mean_rate() const;
    bool is_martingale(double tol = 1e-9) const;
    void validate() const;

private:
    double sigma_;
    JumpMeasure measure_;
    double gamma_trunc_;
};

// Lognormal Levy density of the Merton model (untruncated); 0 for x <= -1.
double merton_levy_density(double x, const MertonParams& p);

// Closed forms for (sigma_bar^2, m3, m4) of the Merton model.
GroupParams group_params_merton(const MertonParams& p);

// Quadrature / exact-summation route to the same three moments.
GroupParams group_params_numeric(const LevyModel& m);

// ell(u) = gamma u + sigma^2 u^2 / 2 + int (e^{ux} - 1 - ux) nu(dx),
// with gamma the full-compensation drift E[X_1]. Strictly convex.
double ell(double u, const LevyModel& m);
double ell_prime(double u, const LevyModel& m);
double ell_second(double u, const LevyModel& m);

// phi* with ell(-alpha phi*) = inf_u ell(u). The minimizer location
// -alpha phi* does not depend on alpha.
double find_memm_tilt(const LevyModel& m, double alpha);

// Minimal entropy martingale measure: nu* = e^{-alpha phi* x} nu, same
// sigma, drift reset so the tilted model is a martingale. Verifies that
// phi* satisfies the first-order condition of the input model.
LevyModel tilt_measure(const LevyModel& m, double alpha, double phi_star);

}  // namespace indiff

#endif
