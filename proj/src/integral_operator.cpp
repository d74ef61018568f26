#include "mlstar/integral_operator.hpp"

#include <cmath>
#include <sstream>

namespace mlstar {

namespace {

constexpr double kDegenerateGuard = 1e-12;
constexpr double kBranchSeedFraction = 1e-3;
constexpr int kBranchSteps = 64;
constexpr int kGradedLevels = 30;

bool is_integer(double x) {
    return std::abs(x - std::round(x)) <= 1e-12 * std::max(1.0, std::abs(x));
}

}  // namespace

void FactorSpec::validate() const {
    params.validate();
    if (!(lambda > 0.0) || std::isnan(lambda)) {
        std::ostringstream os;
        os << "FactorSpec: lambda must be > 0, got " << lambda;
        throw DomainError(os.str());
    }
    if (!(eta >= 0.0 && eta < 1.0)) {
        std::ostringstream os;
        os << "FactorSpec: eta must lie in [0, 1), got " << eta;
        throw DomainError(os.str());
    }
}

void OperatorSpec::validate() const {
    if (factors.empty()) {
        throw DomainError("OperatorSpec: factor list must not be empty");
    }
    if (!(zeta > 0.0) || !std::isfinite(zeta)) {
        std::ostringstream os;
        os << "OperatorSpec: zeta must be > 0, got " << zeta;
        throw DomainError(os.str());
    }
    for (const auto& f : factors) {
        f.validate();
    }
}

EvalPoint EvalPoint::polar(double radius, double angle) {
    return {std::polar(radius, angle), radius, angle};
}

EvalPoint EvalPoint::from(cplx z) {
    return {z, std::abs(z), std::arg(z)};
}

IntegralOperator::IntegralOperator(OperatorSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    series_.reserve(spec_.factors.size());
    for (const auto& f : spec_.factors) {
        series_.emplace_back(f.params);
    }
}

IntegralOperator::IntegralOperator(double zeta, bool unit_product) : unit_product_(unit_product) {
    if (!(zeta > 0.0) || !std::isfinite(zeta)) {
        throw DomainError("IntegralOperator: zeta must be > 0");
    }
    spec_.zeta = zeta;
}

IntegralOperator IntegralOperator::unit_product(double zeta) {
    return IntegralOperator(zeta, true);
}

void IntegralOperator::check_point(cplx z, const char* who) const {
    const double r = std::abs(z);
    if (!(r > 0.0 && r < 1.0)) {
        std::ostringstream os;
        os << who << ": need 0 < |z| < 1, got z = " << z;
        throw DomainError(os.str());
    }
}

cplx IntegralOperator::product_term(cplx t, std::span<BranchTracker> trackers,
                                    double series_tol) const {
    if (unit_product_) {
        return {1.0, 0.0};
    }
    if (trackers.size() != series_.size()) {
        throw DomainError("product_term: need one branch tracker per factor");
    }
    cplx product{1.0, 0.0};
    for (std::size_t j = 0; j < series_.size(); ++j) {
        const cplx ratio = series_[j].normalized_over_z(t, series_tol).value;
        if (std::abs(ratio) < kDegenerateGuard) {
            std::ostringstream os;
            os << "product_term: factor " << j << " nearly vanishes at t = " << t;
            throw NearZeroDenominatorError(os.str(), t);
        }
        product *= tracked_power(ratio, 1.0 / spec_.factors[j].lambda, trackers[j]);
    }
    return product;
}

IntegralOperator::RayIntegral IntegralOperator::integrate_ray(cplx z, double tol,
                                                              double zeta) const {
    if (unit_product_) {
        return {{cplx{1.0, 0.0}, 0.0, 1}, cplx{1.0, 0.0}};
    }
    std::vector<BranchTracker> trackers(series_.size());
    const double inv_zeta = 1.0 / zeta;
    double last_w = INFINITY;
    auto integrand = [&](double w) {
        if (w < last_w) {
            // integrate_gl restarted from the left end: new path.
            for (auto& tr : trackers) {
                tr.reset();
            }
        }
        last_w = w;
        const double s = inv_zeta == 1.0 ? w : std::pow(w, inv_zeta);
        return product_term(z * s, trackers);
    };
    QuadratureOptions options;
    // w^{1/zeta} is analytic at 0 only for integer 1/zeta.
    if (!is_integer(inv_zeta)) {
        options.graded_levels = kGradedLevels;
    }
    const QuadratureResult integral = integrate_gl(integrand, tol, options);
    // Trackers now sit at the last node of the finest pass; continue to s = 1.
    const cplx end = product_term(z, trackers);
    return {integral, end};
}

QuadratureResult IntegralOperator::ray_integral(cplx z, double tol) const {
    check_point(z, "ray_integral");
    return integrate_ray(z, tol, spec_.zeta).integral;
}

cplx IntegralOperator::f_zeta_power(cplx z, double tol) const {
    check_point(z, "f_zeta_power");
    const RayIntegral ray = integrate_ray(z, tol, spec_.zeta);
    return principal_power(z, spec_.zeta) * ray.integral.value;
}

cplx IntegralOperator::f_value(cplx z, double tol) const {
    check_point(z, "f_value");
    if (spec_.zeta == 1.0) {
        return z * integrate_ray(z, tol, 1.0).integral.value;
    }
    // I(s z) ~ 1 near s = 0 fixes the branch; continue its phase outward.
    BranchTracker tracker;
    cplx root{1.0, 0.0};
    for (int k = 0; k <= kBranchSteps; ++k) {
        const double s = kBranchSeedFraction + (1.0 - kBranchSeedFraction) * k / kBranchSteps;
        const cplx integral = integrate_ray(z * s, tol, spec_.zeta).integral.value;
        if (std::abs(integral) < kDegenerateGuard) {
            std::ostringstream os;
            os << "f_value: F^zeta vanishes at z = " << z * s;
            throw DegenerateOperatorError(os.str());
        }
        root = tracked_power(integral, 1.0 / spec_.zeta, tracker);
    }
    return z * root;
}

cplx IntegralOperator::star_log_deriv(cplx z, double tol) const {
    check_point(z, "star_log_deriv");
    const RayIntegral ray = integrate_ray(z, tol, spec_.zeta);
    if (std::abs(ray.integral.value) < kDegenerateGuard) {
        std::ostringstream os;
        os << "star_log_deriv: F^zeta vanishes at z = " << z;
        throw DegenerateOperatorError(os.str());
    }
    return ray.product_at_end / ray.integral.value;
}

cplx IntegralOperator::convex_log_deriv(cplx z, double series_tol) const {
    if (unit_product_) {
        return {1.0, 0.0};
    }
    double weight_sum = 0.0;
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < series_.size(); ++j) {
        const double w = 1.0 / spec_.factors[j].lambda;
        acc += w * series_[j].log_deriv(z, series_tol);
        weight_sum += w;
    }
    return acc + (1.0 - weight_sum);
}

cplx IntegralOperator::f_conv_value(cplx z, double tol) const {
    check_point(z, "f_conv_value");
    return z * integrate_ray(z, tol, 1.0).integral.value;
}

cplx convex_log_deriv(std::span<const FactorSpec> factors, cplx z, double series_tol) {
    OperatorSpec spec{{factors.begin(), factors.end()}, 1.0};
    return IntegralOperator(std::move(spec)).convex_log_deriv(z, series_tol);
}

cplx f_conv_value(std::span<const FactorSpec> factors, cplx z, double tol) {
    OperatorSpec spec{{factors.begin(), factors.end()}, 1.0};
    return IntegralOperator(std::move(spec)).f_conv_value(z, tol);
}

}  // namespace mlstar
