#include "mlstar/mittag_leffler.hpp"

#include <cmath>
#include <sstream>

namespace mlstar {

namespace {

constexpr double kDenominatorGuard = 1e-12;
constexpr double kNearOrigin = 1e-8;
constexpr double kGammaOverflow = 170.0;

void check_disk(cplx z, const char* who) {
    if (!(std::abs(z) <= 1.0)) {
        std::ostringstream os;
        os << who << ": |z| must not exceed 1, got z = " << z;
        throw DomainError(os.str());
    }
}

void check_tol(double tol, const char* who) {
    if (!(tol > 0.0)) {
        throw DomainError(std::string(who) + ": tolerance must be positive");
    }
}

}  // namespace

void MLParams::validate() const {
    if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
        std::ostringstream os;
        os << "MLParams: alpha must be >= 1, got " << alpha;
        throw DomainError(os.str());
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        std::ostringstream os;
        os << "MLParams: beta must be > 0, got " << beta;
        throw DomainError(os.str());
    }
}

MittagLefflerSeries::MittagLefflerSeries(MLParams params, int term_cap)
    : params_(params), term_cap_(term_cap) {
    params_.validate();
    if (term_cap_ < 2) {
        throw DomainError("MittagLefflerSeries: term cap must be at least 2");
    }
    log_inv_gamma_.resize(static_cast<std::size_t>(term_cap_) + 1);
    inv_gamma_.resize(static_cast<std::size_t>(term_cap_) + 1);
    for (int n = 0; n <= term_cap_; ++n) {
        const double x = params_.alpha * n + params_.beta;
        log_inv_gamma_[n] = -log_gamma_real(x);
        // gamma_real itself is more accurate than exp(-log Gamma) until it overflows.
        inv_gamma_[n] = x < kGammaOverflow ? 1.0 / gamma_real(x) : std::exp(log_inv_gamma_[n]);
    }
    log_gamma_beta_ = -log_inv_gamma_[0];
    gamma_beta_ = params_.beta < kGammaOverflow ? gamma_real(params_.beta) : INFINITY;
}

double MittagLefflerSeries::normalized_coefficient(int n) const {
    if (n < 1 || n > term_cap_ + 1) {
        throw DomainError("normalized_coefficient: index out of range");
    }
    return coefficient(n - 1, true);
}

double MittagLefflerSeries::coefficient(int n, bool scaled) const {
    if (!scaled) {
        return inv_gamma_[n];
    }
    if (std::isfinite(gamma_beta_) && inv_gamma_[n] > 0.0) {
        return gamma_beta_ * inv_gamma_[n];
    }
    return std::exp(log_gamma_beta_ + log_inv_gamma_[n]);
}

// Sums sum_n w_n z^n with w_n = 1 / Gamma(alpha n + beta), scaled by Gamma(beta)
// if requested, times (n + 1) for the derivative series.
SeriesResult MittagLefflerSeries::sum(cplx z, double tol, bool scaled,
                                      bool derivative) const {
    const double abs_z = std::abs(z);
    cplx acc{0.0, 0.0};
    cplx zpow{1.0, 0.0};
    double last_bound = INFINITY;
    for (int n = 0; n < term_cap_; ++n) {
        const double weight = coefficient(n, scaled) * (derivative ? n + 1.0 : 1.0);
        const cplx term = weight * zpow;
        acc += term;
        double ratio = abs_z * std::exp(log_inv_gamma_[n + 1] - log_inv_gamma_[n]);
        if (derivative) {
            ratio *= (n + 2.0) / (n + 1.0);
        }
        if (ratio <= 0.5) {
            last_bound = std::abs(term) * ratio / (1.0 - ratio);
            if (last_bound <= tol) {
                return {acc, n + 1, last_bound};
            }
        }
        zpow *= z;
    }
    std::ostringstream os;
    os << "Mittag-Leffler series (alpha=" << params_.alpha << ", beta=" << params_.beta
       << ") did not reach tolerance " << tol << " within " << term_cap_ << " terms at z = " << z;
    throw TruncationError(os.str(), last_bound);
}

SeriesResult MittagLefflerSeries::raw(cplx z, double tol) const {
    check_disk(z, "ml_raw");
    check_tol(tol, "ml_raw");
    return sum(z, tol, false, false);
}

SeriesResult MittagLefflerSeries::normalized_over_z(cplx z, double tol) const {
    check_disk(z, "ml_norm");
    check_tol(tol, "ml_norm");
    return sum(z, tol, true, false);
}

SeriesResult MittagLefflerSeries::normalized(cplx z, double tol) const {
    check_disk(z, "ml_norm");
    check_tol(tol, "ml_norm");
    const double abs_z = std::abs(z);
    if (abs_z == 0.0) {
        return {cplx{0.0, 0.0}, 1, 0.0};
    }
    // |z| <= 1, so a tail bound of tol / |z| on the inner sum suffices.
    SeriesResult inner = sum(z, tol / abs_z, true, false);
    return {z * inner.value, inner.terms_used, abs_z * inner.tail_bound};
}

SeriesResult MittagLefflerSeries::normalized_deriv(cplx z, double tol) const {
    check_disk(z, "ml_norm_deriv");
    check_tol(tol, "ml_norm_deriv");
    return sum(z, tol, true, true);
}

cplx MittagLefflerSeries::log_deriv(cplx z, double tol) const {
    check_disk(z, "log_deriv");
    const double abs_z = std::abs(z);
    if (abs_z < kNearOrigin) {
        // z E'/E = (1 + 2 c2 z + ...) / (1 + c2 z + ...) = 1 + c2 z + O(z^2)
        return 1.0 + normalized_coefficient(2) * z;
    }
    const SeriesResult over_z = normalized_over_z(z, tol);
    if (abs_z * std::abs(over_z.value) < kDenominatorGuard) {
        std::ostringstream os;
        os << "log_deriv: normalized Mittag-Leffler value nearly vanishes at z = " << z;
        throw NearZeroDenominatorError(os.str(), z);
    }
    const SeriesResult deriv = normalized_deriv(z, tol);
    // z E'(z) / E(z) = E'(z) / (E(z) / z)
    return deriv.value / over_z.value;
}

SeriesResult ml_raw(const MLParams& p, cplx z, double tol) {
    return MittagLefflerSeries(p).raw(z, tol);
}

SeriesResult ml_norm(const MLParams& p, cplx z, double tol) {
    return MittagLefflerSeries(p).normalized(z, tol);
}

SeriesResult ml_norm_deriv(const MLParams& p, cplx z, double tol) {
    return MittagLefflerSeries(p).normalized_deriv(z, tol);
}

cplx log_deriv(const MLParams& p, cplx z, double tol) {
    return MittagLefflerSeries(p).log_deriv(z, tol);
}

MLParams closed_form_params(CoshKind kind) {
    switch (kind) {
        case CoshKind::E21: return {2.0, 1.0};
        case CoshKind::E22: return {2.0, 2.0};
        case CoshKind::E23: return {2.0, 3.0};
        case CoshKind::E24: return {2.0, 4.0};
    }
    throw DomainError("closed_form_params: unknown kind");
}

cplx closed_form(CoshKind kind, cplx z) {
    if (std::abs(z) < kNearOrigin) {
        // z + c2 z^2 with c2 = Gamma(k) / Gamma(2 + k)
        static constexpr double c2[] = {1.0 / 2.0, 1.0 / 6.0, 1.0 / 12.0, 1.0 / 20.0};
        return z + c2[static_cast<int>(kind)] * z * z;
    }
    const cplx s = std::sqrt(z);
    switch (kind) {
        case CoshKind::E21: return z * std::cosh(s);
        case CoshKind::E22: return s * std::sinh(s);
        case CoshKind::E23: return 2.0 * (std::cosh(s) - 1.0);
        case CoshKind::E24: return 6.0 * (std::sinh(s) - s) / s;
    }
    throw DomainError("closed_form: unknown kind");
}

}  // namespace mlstar
