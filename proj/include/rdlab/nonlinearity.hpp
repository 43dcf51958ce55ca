#pragma once

#include <functional>
#include <vector>

namespace rdlab {

/// Reaction term f(x,u) with partial derivative in u. Two kinds:
///   cubic(a):  f0(u) = u(1-u)(u-a), 0 < a < 1/2
///   custom:    tabulated (u, f0, f0') with linear interpolation between knots
/// An optional bounded heterogeneity multiplier turns f0 into
/// f(x,u) = (1+m(x)) * f0(u), which preserves the zeros at u = 0 and u = 1.
///
/// Construction runs a bistability certificate on a fine u-sample:
/// F(u) = int_0^u f0 < 0 on (0, beta*), f0 > 0 on (beta*, 1), f0'(0) < 0,
/// f0'(1) < 0. theta is the largest zero of f0 in (0,1); beta* is where F
/// first vanishes again. Certified nonlinearities expose theta and beta*.
class Nonlinearity {
public:
    static Nonlinearity cubic(double a);

    /// Tabulated nonlinearity on sorted knots covering [0,1] (values outside
    /// the knot range extrapolate linearly). Rejects tables that fail the
    /// bistability certificate unless require_bistable is false; uncertified
    /// instances serve solver plumbing only and have no theta/beta*.
    static Nonlinearity custom(std::vector<double> u_knots,
                               std::vector<double> f_vals,
                               std::vector<double> fp_vals,
                               bool require_bistable = true);

    /// Same reaction scaled by (1+m(x)). Requires m(x) >= m_min > -1.
    Nonlinearity with_heterogeneity(std::function<double(double)> m, double m_min) const;

    /// f(x,u). u must lie in the overshoot band [-0.1, 1.1]; values far outside
    /// [0,1] signal solver blow-up and raise std::domain_error.
    double f(double x, double u) const;
    /// d/du f(x,u) on the same band.
    double fp(double x, double u) const;

    /// Homogeneous fast paths (no x dependence).
    double f0(double u) const;
    double fp0(double u) const;

    /// Primitive F(u) = int_0^u f0 (closed form for cubic, cumulative
    /// trapezoid on the knot table for custom).
    double primitive(double u) const;

    double theta() const;
    double beta_star() const;
    double fprime0() const { return fprime0_; }
    /// sup |f0'| on [0,1]; explicit-reaction stability constant.
    double lipschitz_K() const { return lipK_; }

    bool bistable() const { return bistable_; }
    bool homogeneous() const { return !m_; }
    bool is_cubic() const { return kind_ == Kind::cubic; }
    double cubic_a() const;

private:
    enum class Kind { cubic, custom };

    Nonlinearity() = default;
    void run_certificate(bool require);
    double raw_f(double u) const;
    double raw_fp(double u) const;
    static void check_band(double u);

    Kind kind_ = Kind::cubic;
    double a_ = 0.0;
    std::vector<double> knots_u_, knots_f_, knots_fp_, knots_F_;
    std::function<double(double)> m_; // empty when homogeneous
    bool bistable_ = false;
    double theta_ = 0.0;
    double beta_star_ = 0.0;
    double fprime0_ = 0.0;
    double lipK_ = 0.0;
};

/// Closed-form root in (a,1) of 3b^2 - 4(1+a)b + 6a = 0, the vanishing point
/// of the cubic primitive.
double cubic_beta_star(double a);

} // namespace rdlab
