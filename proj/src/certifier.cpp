#include "mlstar/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace mlstar {

namespace {

enum class Reduction { MinRealPart, MaxDistanceFromOne };

Reduction reduction_for(Quantity q) {
    return q == Quantity::Lemma3Bound ? Reduction::MaxDistanceFromOne : Reduction::MinRealPart;
}

double score(cplx v, Reduction r) {
    return r == Reduction::MinRealPart ? v.real() : std::abs(v - 1.0);
}

bool better(double candidate, double incumbent, Reduction r) {
    return r == Reduction::MinRealPart ? candidate < incumbent : candidate > incumbent;
}

}  // namespace

Certificate certify_custom(Quantity quantity, double predicted, bool hypothesis_ok,
                           const std::function<cplx(cplx)>& evaluator, const GridSpec& grid,
                           const CertifyOptions& options) {
    const Reduction reduction = reduction_for(quantity);
    grid.validate();
    const GridSample sample = sample_grid(evaluator, grid, options.threads);

    Certificate cert;
    cert.quantity = quantity;
    // A positive offset strengthens the claim: a higher order, or a tighter bound.
    cert.predicted = reduction == Reduction::MinRealPart ? predicted + options.predicted_offset
                                                         : predicted - options.predicted_offset;
    cert.grid = grid;
    cert.eval_tolerance = options.eval_tolerance;
    cert.hypothesis_ok = hypothesis_ok;
    cert.points_evaluated = sample.values.size();
    cert.failures = sample.failures;

    const double worst = reduction == Reduction::MinRealPart ? INFINITY : -INFINITY;
    cert.observed = worst;
    cert.boundary_observed = worst;
    const std::size_t boundary_start = grid.size() - static_cast<std::size_t>(grid.angles);
    // Grid order is radius then angle, so a strict comparison keeps the
    // smallest radius and angle index on ties.
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        if (!sample.values[i]) {
            continue;
        }
        const double s = score(*sample.values[i], reduction);
        if (better(s, cert.observed, reduction)) {
            cert.observed = s;
            cert.argmin = grid.point(i);
        }
        if (i >= boundary_start && better(s, cert.boundary_observed, reduction)) {
            cert.boundary_observed = s;
        }
    }
    cert.margin = reduction == Reduction::MinRealPart ? cert.observed - cert.predicted
                                                      : cert.predicted - cert.observed;

    const double failed_fraction =
        static_cast<double>(sample.failures.size()) / static_cast<double>(grid.size());
    if (failed_fraction > options.max_failed_fraction || !std::isfinite(cert.observed)) {
        cert.verdict = Verdict::Fail;
    } else if (!hypothesis_ok) {
        cert.verdict = Verdict::HypothesisViolated;
    } else {
        cert.verdict = cert.margin >= -options.eval_tolerance ? Verdict::Pass : Verdict::Fail;
    }
    return cert;
}

namespace {

// Orders for the degenerate unit-product operator: all factor sums vanish.
StarlikeOrderReport unit_starlike_report(double zeta) {
    return starlike_delta(OperatorSpec{{}, zeta});
}

}  // namespace

GridSpec GridSpec::defaults() {
    return GridSpec{{0.25, 0.5, 0.75, 0.9, 0.99, 0.999}, 0.999, 720};
}

void GridSpec::validate() const {
    if (!(r_max > 0.0 && r_max < 1.0)) {
        throw DomainError("GridSpec: r_max must lie in (0, 1)");
    }
    if (angles < 8) {
        throw DomainError("GridSpec: at least 8 angles are required");
    }
    if (radii.empty()) {
        throw DomainError("GridSpec: radii must not be empty");
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0 && radii[i] <= r_max)) {
            std::ostringstream os;
            os << "GridSpec: radius " << radii[i] << " outside (0, r_max = " << r_max << "]";
            throw DomainError(os.str());
        }
        if (i > 0 && !(radii[i] > radii[i - 1])) {
            throw DomainError("GridSpec: radii must be strictly ascending");
        }
    }
}

GridSpec GridSpec::with_r_max(double r) const {
    GridSpec out;
    out.angles = angles;
    out.r_max = r;
    std::copy_if(radii.begin(), radii.end(), std::back_inserter(out.radii),
                 [r](double x) { return x < r; });
    out.radii.push_back(r);
    return out;
}

EvalPoint GridSpec::point(std::size_t index) const {
    const auto per_circle = static_cast<std::size_t>(angles);
    const double radius = radii.at(index / per_circle);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(index % per_circle) / angles;
    return EvalPoint::polar(radius, angle);
}

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::StarlikeOperator: return "starlike-operator";
        case Quantity::ConvexOperator: return "convex-operator";
        case Quantity::StarlikeML: return "starlike-ml";
        case Quantity::Lemma3Bound: return "lemma3-bound";
    }
    return "unknown";
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::HypothesisViolated: return "hypothesis-violated";
    }
    return "unknown";
}

std::optional<Quantity> quantity_from_string(std::string_view s) {
    for (auto q : {Quantity::StarlikeOperator, Quantity::ConvexOperator, Quantity::StarlikeML,
                   Quantity::Lemma3Bound}) {
        if (s == to_string(q)) {
            return q;
        }
    }
    return std::nullopt;
}

GridSample sample_grid(const std::function<cplx(cplx)>& quantity, const GridSpec& grid,
                       unsigned threads) {
    grid.validate();
    const std::size_t n = grid.size();
    std::vector<std::optional<cplx>> values(n);
    std::vector<std::string> errors(n);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                const cplx v = quantity(grid.point(i).z);
                if (std::isfinite(v.real()) && std::isfinite(v.imag())) {
                    values[i] = v;
                } else {
                    errors[i] = "non-finite value";
                }
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin < end) {
                pool.emplace_back(work, begin, end);
            }
        }
    }

    GridSample sample;
    sample.values = std::move(values);
    for (std::size_t i = 0; i < n; ++i) {
        if (!sample.values[i]) {
            sample.failures.push_back({grid.point(i), errors[i]});
        }
    }
    return sample;
}

Certificate certify_starlike(const IntegralOperator& op, const GridSpec& grid,
                             const CertifyOptions& options) {
    const StarlikeOrderReport orders =
        op.is_unit_product() ? unit_starlike_report(op.spec().zeta) : starlike_delta(op.spec());
    const double tol = options.quadrature_tol;
    return certify_custom(
        Quantity::StarlikeOperator, orders.delta, orders.hypothesis_ok && !op.is_unit_product(),
        [&op, tol](cplx z) { return op.star_log_deriv(z, tol); }, grid, options);
}

Certificate certify_starlike(const OperatorSpec& spec, const GridSpec& grid,
                             const CertifyOptions& options) {
    return certify_starlike(IntegralOperator(spec), grid, options);
}

Certificate certify_convex(const IntegralOperator& op, const GridSpec& grid,
                           const CertifyOptions& options) {
    double predicted = 1.0;
    bool hypothesis_ok = false;
    if (!op.is_unit_product()) {
        const ConvexOrderReport orders = convex_delta(op.spec().factors);
        predicted = orders.delta;
        hypothesis_ok = orders.hypothesis_ok;
    }
    const double tol = options.series_tol;
    return certify_custom(
        Quantity::ConvexOperator, predicted, hypothesis_ok,
        [&op, tol](cplx z) { return op.convex_log_deriv(z, tol); }, grid, options);
}

Certificate certify_convex(std::span<const FactorSpec> factors, const GridSpec& grid,
                           const CertifyOptions& options) {
    return certify_convex(IntegralOperator(OperatorSpec{{factors.begin(), factors.end()}, 1.0}),
                          grid, options);
}

Certificate certify_ml_starlike(const MLParams& p, double eta, const GridSpec& grid,
                                const CertifyOptions& options) {
    const MittagLefflerSeries series(p);
    const bool hypothesis_ok = p.alpha >= 1.0 && p.beta >= psi(eta);
    const double tol = options.series_tol;
    return certify_custom(
        Quantity::StarlikeML, eta, hypothesis_ok,
        [&series, tol](cplx z) { return series.log_deriv(z, tol); }, grid, options);
}

Certificate check_lemma3(const MLParams& p, const GridSpec& grid, const CertifyOptions& options) {
    const MittagLefflerSeries series(p);
    const double bound = lemma3_bound(p);
    const double tol = options.series_tol;
    return certify_custom(
        Quantity::Lemma3Bound, bound, true,
        [&series, tol](cplx z) { return series.log_deriv(z, tol); }, grid, options);
}

double empirical_order(const std::function<cplx(cplx)>& quantity, const GridSpec& grid,
                       unsigned threads) {
    const GridSample sample = sample_grid(quantity, grid, threads);
    double lowest = INFINITY;
    for (const auto& v : sample.values) {
        if (v) {
            lowest = std::min(lowest, v->real());
        }
    }
    return lowest;
}

}  // namespace mlstar
