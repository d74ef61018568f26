#pragma once

#include <vector>

#include "mlstar/numerics.hpp"

namespace mlstar {

inline constexpr double kDefaultSeriesTol = 1e-14;
inline constexpr int kDefaultTermCap = 200;

/// Parameter pair (alpha, beta) of one Mittag-Leffler factor.
struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;

    /// Throws DomainError unless alpha >= 1 and beta > 0.
    void validate() const;

    friend bool operator==(const MLParams&, const MLParams&) = default;
};

/// A truncated series value with a proven bound on the discarded tail.
struct SeriesResult {
    cplx value;
    int terms_used = 0;
    double tail_bound = 0.0;
};

/// Mittag-Leffler series for one parameter pair, with the coefficient table
/// 1/Gamma(alpha n + beta) precomputed up to the term cap (in log form past
/// the point where Gamma overflows).
///
/// Evaluations are valid on the closed unit disk. Every term ratio is bounded
/// by r_n = |z| Gamma(alpha n + beta) / Gamma(alpha (n+1) + beta), which is
/// decreasing in n, so once r_N <= 1/2 the tail after term N is at most
/// |term_N| r_N / (1 - r_N).
class MittagLefflerSeries {
public:
    explicit MittagLefflerSeries(MLParams params, int term_cap = kDefaultTermCap);

    const MLParams& params() const noexcept { return params_; }
    int term_cap() const noexcept { return term_cap_; }

    /// E_{a,b}(z) = sum z^n / Gamma(a n + b).
    SeriesResult raw(cplx z, double tol = kDefaultSeriesTol) const;
    /// Gamma(b) z E_{a,b}(z); a member of the normalized class (value 0, slope 1 at 0).
    SeriesResult normalized(cplx z, double tol = kDefaultSeriesTol) const;
    /// Derivative of normalized(): 1 + sum_{n>=2} n c_n z^{n-1}.
    SeriesResult normalized_deriv(cplx z, double tol = kDefaultSeriesTol) const;
    /// normalized(z) / z = Gamma(b) E_{a,b}(z); equals 1 at z = 0.
    SeriesResult normalized_over_z(cplx z, double tol = kDefaultSeriesTol) const;

    /// z E'(z) / E(z) for the normalized function; 1 at z = 0.
    /// Throws NearZeroDenominatorError when |E(z)| < 1e-12.
    cplx log_deriv(cplx z, double tol = kDefaultSeriesTol) const;

    /// Taylor coefficient c_n = Gamma(b) / Gamma(a (n-1) + b) of the normalized function, n >= 1.
    double normalized_coefficient(int n) const;

private:
    SeriesResult sum(cplx z, double tol, bool scaled, bool derivative) const;
    double coefficient(int n, bool scaled) const;

    MLParams params_;
    int term_cap_;
    std::vector<double> log_inv_gamma_;  // -log Gamma(alpha n + beta), n = 0..cap
    std::vector<double> inv_gamma_;      // 1 / Gamma(alpha n + beta)
    double log_gamma_beta_;
    double gamma_beta_;
};

SeriesResult ml_raw(const MLParams& p, cplx z, double tol = kDefaultSeriesTol);
SeriesResult ml_norm(const MLParams& p, cplx z, double tol = kDefaultSeriesTol);
SeriesResult ml_norm_deriv(const MLParams& p, cplx z, double tol = kDefaultSeriesTol);
cplx log_deriv(const MLParams& p, cplx z, double tol = kDefaultSeriesTol);

/// The four (alpha = 2) normalized functions with elementary closed forms.
enum class CoshKind { E21, E22, E23, E24 };

/// Closed-form value of the normalized function of `kind`, with principal sqrt.
/// Falls back to the two-term series for |z| < 1e-8.
cplx closed_form(CoshKind kind, cplx z);

/// Parameters (2, k) matching a closed-form kind.
MLParams closed_form_params(CoshKind kind);

}  // namespace mlstar
