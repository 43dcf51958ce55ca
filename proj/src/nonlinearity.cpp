#include "rdlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdlab {

namespace {
constexpr double kBandLo = -0.1;
constexpr double kBandHi = 1.1;
constexpr double kBandSlack = 1e-12;
constexpr double kSigmaMin = 1e-8; // numerical strictness for f'(0) < 0
} // namespace

double cubic_beta_star(double a) {
    double disc = 16.0 * (1.0 + a) * (1.0 + a) - 72.0 * a;
    return (4.0 * (1.0 + a) - std::sqrt(disc)) / 6.0;
}

void Nonlinearity::check_band(double u) {
    if (!(u >= kBandLo - kBandSlack && u <= kBandHi + kBandSlack))
        throw std::domain_error("nonlinearity: state far outside [0,1], solver blow-up");
}

Nonlinearity Nonlinearity::cubic(double a) {
    if (!(a > 0.0 && a < 0.5))
        throw std::invalid_argument("cubic nonlinearity requires a in (0, 1/2)");
    Nonlinearity nl;
    nl.kind_ = Kind::cubic;
    nl.a_ = a;
    nl.run_certificate(true);
    return nl;
}

Nonlinearity Nonlinearity::custom(std::vector<double> u_knots,
                                  std::vector<double> f_vals,
                                  std::vector<double> fp_vals,
                                  bool require_bistable) {
    size_t n = u_knots.size();
    if (n < 2 || f_vals.size() != n || fp_vals.size() != n)
        throw std::invalid_argument("custom nonlinearity: inconsistent table sizes");
    for (size_t i = 1; i < n; ++i)
        if (!(u_knots[i] > u_knots[i - 1]))
            throw std::invalid_argument("custom nonlinearity: knots must be strictly increasing");
    if (u_knots.front() > 0.0 || u_knots.back() < 1.0)
        throw std::invalid_argument("custom nonlinearity: knots must cover [0,1]");

    Nonlinearity nl;
    nl.kind_ = Kind::custom;
    nl.knots_u_ = std::move(u_knots);
    nl.knots_f_ = std::move(f_vals);
    nl.knots_fp_ = std::move(fp_vals);

    // Cumulative trapezoid primitive on the knots.
    nl.knots_F_.assign(n, 0.0);
    for (size_t i = 1; i < n; ++i)
        nl.knots_F_[i] = nl.knots_F_[i - 1] +
                         0.5 * (nl.knots_f_[i] + nl.knots_f_[i - 1]) *
                             (nl.knots_u_[i] - nl.knots_u_[i - 1]);
    // Shift so F(0) = 0.
    Nonlinearity& ref = nl;
    double F0 = [&] {
        // primitive() needs knots_F_ already; do a local interpolation here
        size_t k = 0;
        while (k + 2 < n && ref.knots_u_[k + 1] <= 0.0) ++k;
        double h = 0.0 - ref.knots_u_[k];
        double slope = (ref.knots_f_[k + 1] - ref.knots_f_[k]) /
                       (ref.knots_u_[k + 1] - ref.knots_u_[k]);
        return ref.knots_F_[k] + ref.knots_f_[k] * h + 0.5 * slope * h * h;
    }();
    for (double& v : nl.knots_F_) v -= F0;

    // hypothesis: exact zeros at u = 0 and u = 1; interpolation slack only
    if (std::abs(nl.raw_f(0.0)) > 1e-9 || std::abs(nl.raw_f(1.0)) > 1e-9)
        throw std::invalid_argument("custom nonlinearity: f must vanish at u = 0 and u = 1");

    nl.run_certificate(require_bistable);
    return nl;
}

Nonlinearity Nonlinearity::with_heterogeneity(std::function<double(double)> m,
                                              double m_min) const {
    if (!m) throw std::invalid_argument("heterogeneity: null multiplier");
    if (!(m_min > -1.0))
        throw std::invalid_argument("heterogeneity: need m >= m_min > -1");
    Nonlinearity nl(*this);
    nl.m_ = std::move(m);
    return nl;
}

double Nonlinearity::raw_f(double u) const {
    if (kind_ == Kind::cubic) return u * (1.0 - u) * (u - a_);
    size_t n = knots_u_.size();
    size_t k = std::upper_bound(knots_u_.begin(), knots_u_.end(), u) - knots_u_.begin();
    k = (k == 0) ? 0 : std::min(k - 1, n - 2);
    double s = (u - knots_u_[k]) / (knots_u_[k + 1] - knots_u_[k]);
    return (1.0 - s) * knots_f_[k] + s * knots_f_[k + 1];
}

double Nonlinearity::raw_fp(double u) const {
    if (kind_ == Kind::cubic) return -3.0 * u * u + 2.0 * (1.0 + a_) * u - a_;
    size_t n = knots_u_.size();
    size_t k = std::upper_bound(knots_u_.begin(), knots_u_.end(), u) - knots_u_.begin();
    k = (k == 0) ? 0 : std::min(k - 1, n - 2);
    double s = (u - knots_u_[k]) / (knots_u_[k + 1] - knots_u_[k]);
    return (1.0 - s) * knots_fp_[k] + s * knots_fp_[k + 1];
}

double Nonlinearity::f(double x, double u) const {
    check_band(u);
    double v = raw_f(u);
    return m_ ? (1.0 + m_(x)) * v : v;
}

double Nonlinearity::fp(double x, double u) const {
    check_band(u);
    double v = raw_fp(u);
    return m_ ? (1.0 + m_(x)) * v : v;
}

double Nonlinearity::f0(double u) const {
    check_band(u);
    return raw_f(u);
}

double Nonlinearity::fp0(double u) const {
    check_band(u);
    return raw_fp(u);
}

double Nonlinearity::primitive(double u) const {
    check_band(u);
    if (kind_ == Kind::cubic)
        return u * u * (-0.25 * u * u + (1.0 + a_) * u / 3.0 - 0.5 * a_);
    size_t n = knots_u_.size();
    size_t k = std::upper_bound(knots_u_.begin(), knots_u_.end(), u) - knots_u_.begin();
    k = (k == 0) ? 0 : std::min(k - 1, n - 2);
    double h = u - knots_u_[k];
    double slope = (knots_f_[k + 1] - knots_f_[k]) / (knots_u_[k + 1] - knots_u_[k]);
    return knots_F_[k] + knots_f_[k] * h + 0.5 * slope * h * h;
}

double Nonlinearity::theta() const {
    if (!bistable_) throw std::logic_error("theta undefined: nonlinearity not certified bistable");
    return theta_;
}

double Nonlinearity::beta_star() const {
    if (!bistable_) throw std::logic_error("beta* undefined: nonlinearity not certified bistable");
    return beta_star_;
}

double Nonlinearity::cubic_a() const {
    if (kind_ != Kind::cubic) throw std::logic_error("not a cubic nonlinearity");
    return a_;
}

void Nonlinearity::run_certificate(bool require) {
    fprime0_ = raw_fp(0.0);

    const int ns = 4096;
    lipK_ = 0.0;
    for (int i = 0; i <= ns; ++i)
        lipK_ = std::max(lipK_, std::abs(raw_fp(static_cast<double>(i) / ns)));

    bool ok = fprime0_ <= -kSigmaMin && raw_fp(1.0) < 0.0;

    double theta = 0.0, beta = 0.0;
    if (ok) {
        if (kind_ == Kind::cubic) {
            theta = a_;
            beta = cubic_beta_star(a_);
        } else {
            // theta: largest zero of f in (0,1), from the topmost sign change.
            bool found = false;
            for (int i = ns - 1; i >= 0; --i) {
                double u1 = static_cast<double>(i) / ns, u2 = static_cast<double>(i + 1) / ns;
                double f1 = raw_f(u1), f2 = raw_f(u2);
                if (f1 <= 0.0 && f2 > 0.0) {
                    theta = (f2 == f1) ? u1 : u1 + (0.0 - f1) * (u2 - u1) / (f2 - f1);
                    found = true;
                    break;
                }
            }
            ok = found && theta > 0.0 && theta < 1.0;
            // beta*: first vanishing of the primitive after its negative dip.
            if (ok) {
                bool bfound = false;
                for (int i = 1; i < ns; ++i) {
                    double u1 = static_cast<double>(i) / ns, u2 = static_cast<double>(i + 1) / ns;
                    double F1 = primitive(u1), F2 = primitive(u2);
                    if (F1 < 0.0 && F2 >= 0.0) {
                        beta = u1 + (0.0 - F1) * (u2 - u1) / (F2 - F1);
                        bfound = true;
                        break;
                    }
                }
                ok = bfound && beta > theta && beta < 1.0;
            }
        }
    }
    if (ok) {
        // F < 0 on (0, beta*), f > 0 on (beta*, 1), sampled away from the ends.
        for (int i = 1; i < ns && ok; ++i) {
            double u = beta * static_cast<double>(i) / ns;
            if (u > 1e-9 && u < beta - 1e-9 && !(primitive(u) < 0.0)) ok = false;
        }
        for (int i = 1; i < ns && ok; ++i) {
            double u = beta + (1.0 - beta) * static_cast<double>(i) / ns;
            if (u < 1.0 - 1e-9 && !(raw_f(u) > 0.0)) ok = false;
        }
    }

    if (ok) {
        bistable_ = true;
        theta_ = theta;
        beta_star_ = beta;
    } else {
        bistable_ = false;
        if (require) {
            if (kind_ == Kind::cubic)
                throw std::logic_error("cubic bistability certificate failed (internal error)");
            throw std::invalid_argument("custom nonlinearity failed the bistability certificate");
        }
    }
}

} // namespace rdlab
