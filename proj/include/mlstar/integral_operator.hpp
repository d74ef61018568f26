#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlstar/mittag_leffler.hpp"

namespace mlstar {

inline constexpr double kDefaultOperatorTol = 1e-11;
inline constexpr double kSweepOperatorTol = 1e-9;

/// One factor (E_{alpha,beta}(t)/t)^{1/lambda} of the integrand, with the
/// starlikeness order eta assumed for it.
struct FactorSpec {
    MLParams params;
    double lambda = 1.0;
    double eta = 0.0;

    void validate() const;
    friend bool operator==(const FactorSpec&, const FactorSpec&) = default;
};

/// F(z) = { zeta int_0^z t^{zeta-1} prod_j (E_j(t)/t)^{1/lambda_j} dt }^{1/zeta}
struct OperatorSpec {
    std::vector<FactorSpec> factors;
    double zeta = 1.0;

    /// Throws DomainError for an empty factor list or invalid entries.
    void validate() const;
    friend bool operator==(const OperatorSpec&, const OperatorSpec&) = default;
};

struct EvalPoint {
    cplx z;
    double radius = 0.0;
    double angle = 0.0;

    static EvalPoint polar(double radius, double angle);
    static EvalPoint from(cplx z);
};

/// The integral operator for a fixed spec.
///
/// All evaluations integrate along the ray t = z s, s in [0, 1]. With
/// s = w^{1/zeta} the brace contents become
///     F^zeta(z) = z^zeta * I(z),   I(z) = int_0^1 P(z w^{1/zeta}) dw,
/// where P is the factor product, continued in phase from P(0) = 1.
class IntegralOperator {
public:
    explicit IntegralOperator(OperatorSpec spec);

    /// Operator whose factor product is identically 1, so F(z) = z.
    static IntegralOperator unit_product(double zeta);

    const OperatorSpec& spec() const noexcept { return spec_; }
    bool is_unit_product() const noexcept { return unit_product_; }

    /// prod_j tracked_power(E_j(t)/t, 1/lambda_j); trackers.size() must equal the factor count.
    cplx product_term(cplx t, std::span<BranchTracker> trackers,
                      double series_tol = kDefaultSeriesTol) const;

    /// I(z) with its quadrature diagnostics.
    QuadratureResult ray_integral(cplx z, double tol = kDefaultOperatorTol) const;

    /// z^zeta * I(z), principal z^zeta.
    cplx f_zeta_power(cplx z, double tol = kDefaultOperatorTol) const;

    /// F(z) = z * I(z)^{1/zeta}, with the phase of I continued outward along the ray.
    cplx f_value(cplx z, double tol = kDefaultOperatorTol) const;

    /// z F'(z) / F(z) = z^zeta P(z) / F^zeta(z) = P(z) / I(z).
    cplx star_log_deriv(cplx z, double tol = kDefaultOperatorTol) const;

    /// 1 + z G''/G' for G(z) = int_0^z P(t) dt (the zeta = 1 operator).
    cplx convex_log_deriv(cplx z, double series_tol = kDefaultSeriesTol) const;

    /// G(z) = int_0^z P(t) dt, independent of zeta.
    cplx f_conv_value(cplx z, double tol = kDefaultOperatorTol) const;

private:
    IntegralOperator(double zeta, bool unit_product);

    struct RayIntegral {
        QuadratureResult integral;  // I(z)
        cplx product_at_end;        // P(z), phase continued along the ray
    };
    RayIntegral integrate_ray(cplx z, double tol, double zeta) const;
    void check_point(cplx z, const char* who) const;

    OperatorSpec spec_;
    bool unit_product_ = false;
    std::vector<MittagLefflerSeries> series_;
};

/// Free-function forms over a plain factor list.
cplx convex_log_deriv(std::span<const FactorSpec> factors, cplx z,
                      double series_tol = kDefaultSeriesTol);
cplx f_conv_value(std::span<const FactorSpec> factors, cplx z, double tol = kDefaultOperatorTol);

}  // namespace mlstar
