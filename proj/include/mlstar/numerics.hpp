#pragma once

#include <complex>
#include <functional>

#include "mlstar/errors.hpp"

namespace mlstar {

using cplx = std::complex<double>;

/// Gamma function for real x > 0 (Lanczos, g = 7, 9 coefficients).
double gamma_real(double x);

/// log Gamma(x) for real x > 0. Stays finite where gamma_real overflows.
double log_gamma_real(double x);

/// exp(e * Log w) with the principal logarithm, Im Log w in (-pi, pi].
cplx principal_power(cplx w, double e);

/// Continuous branch of arg(w) along a single path.
///
/// The first call seeds with the principal argument. Each later call picks the
/// representative of arg(w) nearest to the previous tracked phase; a step of
/// pi or more is ambiguous and raises PathResolutionError. Not thread-safe:
/// one tracker per path per caller.
class BranchTracker {
public:
    /// Returns the continued phase of w and advances the tracker.
    double advance(cplx w);

    bool initialized() const noexcept { return initialized_; }
    double phase() const noexcept { return previous_log_imag_; }
    void reset() noexcept { initialized_ = false; previous_log_imag_ = 0.0; }

private:
    double previous_log_imag_ = 0.0;
    bool initialized_ = false;
};

/// exp(e * (log|w| + i theta)) with theta continued by `tracker`.
cplx tracked_power(cplx w, double e, BranchTracker& tracker);

struct QuadratureResult {
    cplx value;
    double error_estimate = 0.0;
    int panels_used = 0;
};

struct QuadratureOptions {
    int max_panels = 4096;
    // Extra geometric panels carved out of the leftmost panel toward 0,
    // for integrands with an algebraic singularity at the left end.
    int graded_levels = 0;
    double grading_ratio = 0.15;
};

/// Number of Gauss-Legendre nodes per panel.
inline constexpr int kGaussNodes = 16;

/// Adaptive composite Gauss-Legendre quadrature of f over [0, 1].
///
/// Panels double each pass (1, 2, 4, ...); the error estimate is the
/// difference between the last two passes and the finer result is returned.
/// Within a pass f is called at strictly increasing abscissae, so a stateful
/// integrand can detect the start of a new pass by a decreasing argument.
/// Throws QuadratureError when max_panels is reached without convergence.
QuadratureResult integrate_gl(const std::function<cplx(double)>& f, double target_tol,
                              const QuadratureOptions& options = {});

}  // namespace mlstar
