#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlstar/integral_operator.hpp"
#include "mlstar/orders.hpp"

namespace mlstar {

/// Disk-sampling plan: `angles` equispaced points on each circle of `radii`.
/// Points are ordered radius-major, angle index ascending.
struct GridSpec {
    std::vector<double> radii;
    double r_max = 0.999;
    int angles = 720;

    /// Radii {0.25, 0.5, 0.75, 0.9, 0.99, 0.999}, 720 angles.
    static GridSpec defaults();

    /// Throws DomainError unless radii ascend within (0, r_max], r_max < 1, angles >= 8.
    void validate() const;

    /// Keeps radii below r and makes r the outermost circle.
    GridSpec with_r_max(double r) const;

    std::size_t size() const noexcept { return radii.size() * static_cast<std::size_t>(angles); }
    EvalPoint point(std::size_t index) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class Quantity { StarlikeOperator, ConvexOperator, StarlikeML, Lemma3Bound };
enum class Verdict { Pass, Fail, HypothesisViolated };

std::string_view to_string(Quantity q);
std::string_view to_string(Verdict v);
std::optional<Quantity> quantity_from_string(std::string_view s);

struct SampleFailure {
    EvalPoint where;
    std::string reason;
};

/// Values in grid order; a failed point holds nullopt and appears in `failures`.
struct GridSample {
    std::vector<std::optional<cplx>> values;
    std::vector<SampleFailure> failures;
};

/// Evaluates `quantity` at every grid point. The evaluator must be safe to
/// call concurrently; results do not depend on `threads` (0 = hardware).
GridSample sample_grid(const std::function<cplx(cplx)>& quantity, const GridSpec& grid,
                       unsigned threads = 0);

struct CertifyOptions {
    double eval_tolerance = 1e-6;
    double quadrature_tol = kSweepOperatorTol;
    double series_tol = kDefaultSeriesTol;
    unsigned threads = 0;
    /// Strengthens the claim before comparison (negative controls): raises a
    /// predicted order, or lowers a predicted bound.
    double predicted_offset = 0.0;
    /// Fraction of failed points above which the certificate fails.
    double max_failed_fraction = 1e-3;
};

inline constexpr std::string_view kCertificateSemantics = "sampled-min certificate";

/// Finite-sample verdict on one predicted order.
///
/// For the starlike/convex quantities `observed` is the minimum real part over
/// the grid and margin = observed - predicted. For Lemma3Bound `observed` is
/// the maximum of |z E'/E - 1| and margin = predicted - observed. In both cases
/// a pass needs margin >= -eval_tolerance.
struct Certificate {
    Quantity quantity = Quantity::StarlikeOperator;
    double predicted = 0.0;
    double observed = 0.0;
    EvalPoint argmin;  // argmax for Lemma3Bound
    double margin = 0.0;
    double boundary_observed = 0.0;  // same reduction restricted to the outermost circle
    GridSpec grid;
    double eval_tolerance = 0.0;
    bool hypothesis_ok = false;
    Verdict verdict = Verdict::Fail;
    std::size_t points_evaluated = 0;
    std::vector<SampleFailure> failures;
    std::string semantics{kCertificateSemantics};
};

Certificate certify_starlike(const IntegralOperator& op, const GridSpec& grid,
                             const CertifyOptions& options = {});
Certificate certify_starlike(const OperatorSpec& spec, const GridSpec& grid,
                             const CertifyOptions& options = {});

Certificate certify_convex(const IntegralOperator& op, const GridSpec& grid,
                           const CertifyOptions& options = {});
Certificate certify_convex(std::span<const FactorSpec> factors, const GridSpec& grid,
                           const CertifyOptions& options = {});

/// Starlikeness of E_{alpha,beta} itself against order eta; hypothesis beta >= psi(eta).
Certificate certify_ml_starlike(const MLParams& p, double eta, const GridSpec& grid,
                                const CertifyOptions& options = {});

/// max |z E'/E - 1| against (2 beta + 1) / (beta^2 - beta - 1).
Certificate check_lemma3(const MLParams& p, const GridSpec& grid,
                         const CertifyOptions& options = {});

/// Reduces an arbitrary evaluator into a certificate for `quantity`: the
/// minimum real part, or for Lemma3Bound the maximum of |value - 1|.
/// Verdict: fail if more than max_failed_fraction of the points failed or
/// nothing was finite, else hypothesis-violated if !hypothesis_ok, else pass
/// iff margin >= -eval_tolerance.
Certificate certify_custom(Quantity quantity, double predicted, bool hypothesis_ok,
                           const std::function<cplx(cplx)>& evaluator, const GridSpec& grid,
                           const CertifyOptions& options = {});

/// Minimum real part of `quantity` over the grid, ignoring failed points.
double empirical_order(const std::function<cplx(cplx)>& quantity, const GridSpec& grid,
                       unsigned threads = 0);

}  // namespace mlstar
