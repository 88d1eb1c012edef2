#include "indiff/levy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "indiff/black_scholes.hpp"
#include "indiff/quadrature.hpp"

namespace indiff {

void MertonParams::validate() const {
    if (!(sigma >= 0.0)) throw std::invalid_argument("merton.sigma must be >= 0");
    if (!(intensity >= 0.0)) throw std::invalid_argument("merton.lambda_m must be >= 0");
    if (!(jump_std > 0.0)) throw std::invalid_argument("merton.delta_j must be > 0");
    if (sigma == 0.0 && intensity == 0.0)
        throw std::invalid_argument("degenerate model: sigma and lambda_m both zero");
}

double GroupParams::sigma_bar() const { return std::sqrt(sigma_bar_sq); }

void GroupParams::validate() const {
    if (!(sigma_bar_sq > 0.0)) throw std::invalid_argument("sigma_bar_sq must be > 0");
    if (!(m4 >= 0.0)) throw std::invalid_argument("m4 must be >= 0");
    if (m4 * sigma_bar_sq - m3 * m3 < -1e-12 * std::max(1.0, m4 * sigma_bar_sq))
        throw std::invalid_argument("group params violate m4*sigma_bar_sq >= m3^2");
}

double merton_levy_density(double x, const MertonParams& p) {
    if (x <= -1.0) return 0.0;
    const double y = std::log1p(x);
    const double z = (y - p.jump_mean) / p.jump_std;
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return p.intensity * inv_sqrt_2pi / (p.jump_std * (x + 1.0)) * std::exp(-0.5 * z * z);
}

// ---------------------------------------------------------------------------
// JumpMeasure

JumpMeasure JumpMeasure::merton(const MertonParams& p, double trunc_mult) {
    p.validate();
    if (!(trunc_mult > 0.0))
        throw std::invalid_argument("truncation multiplier must be > 0");
    JumpMeasure m;
    m.atomic_ = false;
    m.merton_ = p;
    m.trunc_mult_ = trunc_mult;
    m.lo_ = std::expm1(p.jump_mean - trunc_mult * p.jump_std);
    m.hi_ = std::expm1(p.jump_mean + trunc_mult * p.jump_std);
    return m;
}

JumpMeasure JumpMeasure::atoms(std::vector<JumpAtom> atoms) {
    JumpMeasure m;
    m.atomic_ = true;
    m.atoms_ = std::move(atoms);
    m.validate();
    m.lo_ = 0.0;
    m.hi_ = 0.0;
    for (const JumpAtom& a : m.atoms_) {
        m.lo_ = std::min(m.lo_, a.size);
        m.hi_ = std::max(m.hi_, a.size);
    }
    return m;
}

void JumpMeasure::validate() const {
    if (atomic_) {
        for (const JumpAtom& a : atoms_) {
            if (!(a.size > -1.0))
                throw std::invalid_argument("jump atom size must be > -1");
            if (!(a.mass >= 0.0))
                throw std::invalid_argument("jump atom mass must be >= 0");
        }
    } else {
        merton_.validate();
    }
}

// Integrate f(x) e^{tilt x} against the untilted base measure. The Merton
// branch works in the log-jump variable y = log(1+x) over the truncated
// window, where the integrand is smooth.
double JumpMeasure::integrate(const std::function<double(double)>& f) const {
    if (atomic_) {
        double sum = 0.0;
        for (const JumpAtom& a : atoms_)
            sum += a.mass * std::exp(tilt_ * a.size) * f(a.size);
        return sum;
    }
    if (merton_.intensity == 0.0) return 0.0;
    const double ylo = merton_.jump_mean - trunc_mult_ * merton_.jump_std;
    const double yhi = merton_.jump_mean + trunc_mult_ * merton_.jump_std;
    auto g = [&](double y) {
        const double x = std::expm1(y);
        const double z = (y - merton_.jump_mean) / merton_.jump_std;
        static const double inv_sqrt_2pi = 0.3989422804014326779;
        const double dens = merton_.intensity * inv_sqrt_2pi / merton_.jump_std
                            * std::exp(-0.5 * z * z);
        return f(x) * std::exp(std::min(tilt_ * x, 700.0)) * dens;
    };
    quad::Result r = quad::adaptive(g, ylo, yhi, 1e-12);
    if (!r.converged)
        throw std::runtime_error("jump measure quadrature did not converge, error "
                                 + std::to_string(r.error));
    return r.value;
}

double JumpMeasure::total_mass() const {
    return integrate([](double) { return 1.0; });
}

double JumpMeasure::mean_above(double cut) const {
    if (atomic_) {
        double sum = 0.0;
        for (const JumpAtom& a : atoms_)
            if (a.size > cut) sum += a.mass * std::exp(tilt_ * a.size) * a.size;
        return sum;
    }
    if (merton_.intensity == 0.0 || hi_ <= cut) return 0.0;
    const double ylo = std::max(std::log1p(cut),
                                merton_.jump_mean - trunc_mult_ * merton_.jump_std);
    const double yhi = merton_.jump_mean + trunc_mult_ * merton_.jump_std;
    auto g = [&](double y) {
        const double x = std::expm1(y);
        const double z = (y - merton_.jump_mean) / merton_.jump_std;
        static const double inv_sqrt_2pi = 0.3989422804014326779;
        return x * std::exp(std::min(tilt_ * x, 700.0)) * merton_.intensity
               * inv_sqrt_2pi / merton_.jump_std * std::exp(-0.5 * z * z);
    };
    quad::Result r = quad::adaptive(g, ylo, yhi, 1e-12);
    if (!r.converged)
        throw std::runtime_error("jump tail quadrature did not converge");
    return r.value;
}

double JumpMeasure::moment(int p) const {
    return integrate([p](double x) { return std::pow(x, p); });
}

double JumpMeasure::mass_log_interval(double ylo, double yhi) const {
    if (atomic_) {
        double sum = 0.0;
        for (const JumpAtom& a : atoms_) {
            const double y = std::log1p(a.size);
            if (y > ylo && y <= yhi) sum += a.mass * std::exp(tilt_ * a.size);
        }
        return sum;
    }
    if (merton_.intensity == 0.0) return 0.0;
    const double wlo = std::max(ylo, merton_.jump_mean - trunc_mult_ * merton_.jump_std);
    const double whi = std::min(yhi, merton_.jump_mean + trunc_mult_ * merton_.jump_std);
    if (whi <= wlo) return 0.0;
    if (tilt_ == 0.0) {
        const double s = merton_.jump_std;
        return merton_.intensity * (norm_cdf((whi - merton_.jump_mean) / s)
                                    - norm_cdf((wlo - merton_.jump_mean) / s));
    }
    auto g = [&](double y) {
        const double x = std::expm1(y);
        const double z = (y - merton_.jump_mean) / merton_.jump_std;
        static const double inv_sqrt_2pi = 0.3989422804014326779;
        return merton_.intensity * inv_sqrt_2pi / merton_.jump_std
               * std::exp(-0.5 * z * z + std::min(tilt_ * x, 700.0));
    };
    quad::Result r = quad::adaptive(g, wlo, whi, 1e-12);
    if (!r.converged)
        throw std::runtime_error("jump cell quadrature did not converge");
    return r.value;
}

JumpMeasure JumpMeasure::tilted(double u) const {
    JumpMeasure m = *this;
    if (atomic_) {
        for (JumpAtom& a : m.atoms_) a.mass *= std::exp(u * a.size);
    } else {
        m.tilt_ += u;
    }
    return m;
}

// ---------------------------------------------------------------------------
// LevyModel

LevyModel::LevyModel(double sigma, JumpMeasure measure, double gamma_trunc)
    : sigma_(sigma), measure_(std::move(measure)), gamma_trunc_(gamma_trunc) {
    validate();
}

void LevyModel::validate() const {
    if (!(sigma_ >= 0.0)) throw std::invalid_argument("model sigma must be >= 0");
    measure_.validate();
    if (!(measure_.support_lo() > -1.0))
        throw std::invalid_argument("jump support must stay above -1");
}

namespace {

double tail_mean_above_one(const JumpMeasure& nu) {
    // int_{|x|>1} x nu(dx); the support lower bound > -1 rules out x < -1
    return nu.mean_above(1.0);
}

}  // namespace

LevyModel LevyModel::merton(const MertonParams& p, double trunc_mult) {
    JumpMeasure nu = JumpMeasure::merton(p, trunc_mult);
    const double mean_jump = nu.moment(1);
    // mu is the no-compensation drift: E[X_1] = mu + int x nu(dx)
    const double mu = p.drift ? *p.drift : -mean_jump;
    const double gamma_trunc = mu + mean_jump - tail_mean_above_one(nu);
    return LevyModel(p.sigma, std::move(nu), gamma_trunc);
}

LevyModel LevyModel::from_atoms(double sigma, std::vector<JumpAtom> atoms,
                                std::optional<double> gamma_trunc) {
    JumpMeasure nu = JumpMeasure::atoms(std::move(atoms));
    const double gamma = gamma_trunc ? *gamma_trunc : -tail_mean_above_one(nu);
    return LevyModel(sigma, std::move(nu), gamma);
}

double LevyModel::mean_rate() const {
    return gamma_trunc_ + tail_mean_above_one(measure_);
}

bool LevyModel::is_martingale(double tol) const {
    return std::abs(mean_rate()) <= tol;
}

// ---------------------------------------------------------------------------
// Group parameters

GroupParams group_params_merton(const MertonParams& p) {
    p.validate();
    const double g = p.jump_mean, dsq = p.jump_std * p.jump_std;
    const double e1 = std::exp(g + 0.5 * dsq);
    const double e2 = std::exp(2.0 * g + 2.0 * dsq);
    const double e3 = std::exp(3.0 * g + 4.5 * dsq);
    const double e4 = std::exp(4.0 * g + 8.0 * dsq);
    GroupParams gp;
    gp.sigma_bar_sq = p.sigma * p.sigma + p.intensity * (e2 - 2.0 * e1 + 1.0);
    gp.m3 = p.intensity * (e3 - 3.0 * e2 + 3.0 * e1 - 1.0);
    gp.m4 = p.intensity * (e4 - 4.0 * e3 + 6.0 * e2 - 4.0 * e1 + 1.0);
    return gp;
}

GroupParams group_params_numeric(const LevyModel& m) {
    GroupParams gp;
    gp.sigma_bar_sq = m.sigma() * m.sigma() + m.measure().moment(2);
    gp.m3 = m.measure().moment(3);
    gp.m4 = m.measure().moment(4);
    return gp;
}

// ---------------------------------------------------------------------------
// ell and the MEMM

double ell(double u, const LevyModel& m) {
    const double gamma = m.mean_rate();
    const double jump = m.measure().integrate([u](double x) {
        const double e = u * x;
        return std::expm1(std::min(e, 700.0)) - e;
    });
    return gamma * u + 0.5 * m.sigma() * m.sigma() * u * u + jump;
}

double ell_prime(double u, const LevyModel& m) {
    const double gamma = m.mean_rate();
    const double jump = m.measure().integrate([u](double x) {
        return x * std::expm1(std::min(u * x, 700.0));
    });
    return gamma + m.sigma() * m.sigma() * u + jump;
}

double ell_second(double u, const LevyModel& m) {
    const double jump = m.measure().integrate([u](double x) {
        return x * x * std::exp(std::min(u * x, 700.0));
    });
    return m.sigma() * m.sigma() + jump;
}

double find_memm_tilt(const LevyModel& m, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");

    // monotone models (one-sided jumps, sigma = 0, drift not opposing the
    // jump side) have no interior minimum of ell
    if (m.sigma() == 0.0 && m.measure().is_atomic()) {
        bool has_pos = false, has_neg = false;
        for (const JumpAtom& a : m.measure().atom_list()) {
            if (a.mass <= 0.0) continue;
            has_pos |= a.size > 0.0;
            has_neg |= a.size < 0.0;
        }
        const double c = m.mean_rate() - m.measure().moment(1);   // drift between jumps
        const bool non_monotone = (has_pos && has_neg)
                                  || (has_pos && !has_neg && c < 0.0)
                                  || (!has_pos && has_neg && c > 0.0);
        if (!non_monotone)
            throw std::domain_error("monotone model: ell has no interior minimum");
    }

    // bracket the root of the increasing ell' by doubling from u = 0
    double lo = -1.0, hi = 1.0;
    int doublings = 0;
    while (ell_prime(lo, m) > 0.0) {
        lo *= 2.0;
        if (++doublings > 80)
            throw std::domain_error("monotone model: ell' has no sign change");
    }
    while (ell_prime(hi, m) < 0.0) {
        hi *= 2.0;
        if (++doublings > 160)
            throw std::domain_error("monotone model: ell' has no sign change");
    }

    // safeguarded Newton on ell'
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double g1 = ell_prime(u, m);
        const double g2 = ell_second(u, m);
        if (std::abs(g1) <= 1e-10 * (1.0 + std::abs(g2))) return -u / alpha;
        if (g1 > 0.0) hi = u; else lo = u;
        double next = u - g1 / g2;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        u = next;
    }
    throw std::runtime_error("find_memm_tilt: Newton did not converge in 200 iterations");
}

LevyModel tilt_measure(const LevyModel& m, double alpha, double phi_star) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    const double u = -alpha * phi_star;
    // first-order condition of the input model at the proposed tilt
    const double residual = ell_prime(u, m);
    if (std::abs(residual) > 1e-9 * (1.0 + ell_second(u, m)))
        throw std::runtime_error("tilt_measure: martingale drift residual "
                                 + std::to_string(residual) + " above tolerance");
    JumpMeasure tilted = m.measure().tilted(u);
    const double gamma_trunc = -tail_mean_above_one(tilted);
    return LevyModel(m.sigma(), std::move(tilted), gamma_trunc);
}

}  // namespace indiff
