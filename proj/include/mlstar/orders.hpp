#pragma once

#include <span>

#include "mlstar/integral_operator.hpp"

namespace mlstar {

/// (1 + sqrt 5) / 2; phi(beta) is only defined above it.
inline constexpr double kGoldenRatio = 1.6180339887498949;

/// Predicted starlikeness order of the operator and the status of its hypotheses.
struct StarlikeOrderReport {
    double delta = 0.0;
    double hypothesis_sum = 0.0;  // sum_j (1 - eta_j) / lambda_j
    double zeta = 1.0;
    bool hypothesis_ok = false;
};

/// Predicted convexity order of the zeta = 1 operator.
struct ConvexOrderReport {
    double delta = 0.0;
    double beta_min = 0.0;
    double bound_sum = 0.0;  // phi(beta_min) * sum_j 1 / lambda_j
    bool hypothesis_ok = false;
};

/// Smallest beta for which E_{alpha,beta} is guaranteed starlike of order eta:
/// ((3 - eta) + sqrt(5 eta^2 - 18 eta + 17)) / (2 (1 - eta)).
double psi(double eta);

/// (2 beta + 1) / (beta^2 - beta - 1), decreasing for beta > golden ratio.
double phi(double beta);

/// Bound on |z E'/E - 1| over the unit disk; equals phi(beta).
double lemma3_bound(const MLParams& p);

/// Positive root delta of 2 zeta d^2 + (S - 2 zeta + 1) d - 1 = 0 with
/// S = sum_j 2 (1 - eta_j) / lambda_j. Always reports; never throws on
/// violated hypotheses.
StarlikeOrderReport starlike_delta(const OperatorSpec& spec);

/// delta = 1 - phi(min_j beta_j) * sum_j 1 / lambda_j.
/// Throws DomainError if any beta_j <= golden ratio.
ConvexOrderReport convex_delta(std::span<const FactorSpec> factors);

}  // namespace mlstar
