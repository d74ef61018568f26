#include "mlstar/orders.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mlstar {

double psi(double eta) {
    if (!(eta >= 0.0 && eta < 1.0)) {
        std::ostringstream os;
        os << "psi: eta must lie in [0, 1), got " << eta;
        throw DomainError(os.str());
    }
    return ((3.0 - eta) + std::sqrt(5.0 * eta * eta - 18.0 * eta + 17.0)) / (2.0 * (1.0 - eta));
}

double phi(double beta) {
    if (!(beta > kGoldenRatio) || std::isnan(beta)) {
        std::ostringstream os;
        os << "phi: beta must exceed (1 + sqrt 5)/2, got " << beta;
        throw DomainError(os.str());
    }
    return (2.0 * beta + 1.0) / (beta * beta - beta - 1.0);
}

double lemma3_bound(const MLParams& p) {
    p.validate();
    return phi(p.beta);
}

StarlikeOrderReport starlike_delta(const OperatorSpec& spec) {
    StarlikeOrderReport report;
    report.zeta = spec.zeta;
    bool factors_ok = !spec.factors.empty();
    for (const auto& f : spec.factors) {
        report.hypothesis_sum += (1.0 - f.eta) / f.lambda;
        const bool eta_ok = f.eta >= 0.0 && f.eta < 1.0;
        factors_ok = factors_ok && eta_ok && f.params.alpha >= 1.0 && f.params.beta >= psi(eta_ok ? f.eta : 0.0);
    }
    const double zeta = spec.zeta;
    const double b = 2.0 * report.hypothesis_sum - 2.0 * zeta + 1.0;
    report.delta = (-b + std::sqrt(b * b + 8.0 * zeta)) / (4.0 * zeta);
    report.hypothesis_ok = factors_ok && report.hypothesis_sum <= zeta;
    return report;
}

ConvexOrderReport convex_delta(std::span<const FactorSpec> factors) {
    if (factors.empty()) {
        throw DomainError("convex_delta: factor list must not be empty");
    }
    ConvexOrderReport report;
    report.beta_min = std::ranges::min(factors, {}, [](const FactorSpec& f) { return f.params.beta; })
                          .params.beta;
    double inv_lambda_sum = 0.0;
    bool alpha_ok = true;
    for (const auto& f : factors) {
        phi(f.params.beta);  // domain check for every factor
        inv_lambda_sum += 1.0 / f.lambda;
        alpha_ok = alpha_ok && f.params.alpha >= 1.0;
    }
    report.bound_sum = phi(report.beta_min) * inv_lambda_sum;
    report.delta = 1.0 - report.bound_sum;
    report.hypothesis_ok = alpha_ok && report.delta >= 0.0 && report.delta < 1.0;
    return report;
}

}  // namespace mlstar
