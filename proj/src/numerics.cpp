#include "mlstar/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mlstar {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos series sum at x - 1 (x >= 0.5).
double lanczos_sum(double xm1) {
    double a = kLanczosCoefficients[0];
    for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
        a += kLanczosCoefficients[i] / (xm1 + static_cast<double>(i));
    }
    return a;
}

void require_positive(double x, const char* who) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << who << ": argument must be a positive finite real, got " << x;
        throw DomainError(os.str());
    }
}

struct GaussRule {
    std::array<double, kGaussNodes> nodes{};    // on [0, 1], ascending
    std::array<double, kGaussNodes> weights{};  // sum to 1
};

// Newton iteration on P_n from the Chebyshev initial guess.
GaussRule make_gauss_rule() {
    GaussRule rule;
    constexpr int n = kGaussNodes;
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root; map [-1, 1] -> [0, 1].
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.weights[n - 1 - i] = 0.5 * w;
        rule.weights[i] = 0.5 * w;
    }
    return rule;
}

const GaussRule& gauss_rule() {
    static const GaussRule rule = make_gauss_rule();
    return rule;
}

cplx panel_sum(const std::function<cplx(double)>& f, double a, double b) {
    const auto& rule = gauss_rule();
    const double h = b - a;
    cplx acc{0.0, 0.0};
    for (int k = 0; k < kGaussNodes; ++k) {
        acc += rule.weights[k] * f(a + h * rule.nodes[k]);
    }
    return h * acc;
}

cplx composite_sum(const std::function<cplx(double)>& f, int panels, const QuadratureOptions& opt) {
    const double h = 1.0 / panels;
    cplx total{0.0, 0.0};
    // Leftmost panel, optionally graded geometrically toward 0.
    if (opt.graded_levels > 0) {
        double left = 0.0;
        double right = h * std::pow(opt.grading_ratio, opt.graded_levels);
        total += panel_sum(f, left, right);
        for (int level = opt.graded_levels - 1; level >= 0; --level) {
            left = right;
            right = h * std::pow(opt.grading_ratio, level);
            total += panel_sum(f, left, right);
        }
    } else {
        total += panel_sum(f, 0.0, h);
    }
    for (int p = 1; p < panels; ++p) {
        total += panel_sum(f, p * h, (p + 1) * h);
    }
    return total;
}

}  // namespace

double gamma_real(double x) {
    require_positive(x, "gamma_real");
    if (x < 0.5) {
        return gamma_real(x + 1.0) / x;
    }
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, xm1 + 0.5) * std::exp(-t) *
           lanczos_sum(xm1);
}

double log_gamma_real(double x) {
    require_positive(x, "log_gamma_real");
    if (x < 0.5) {
        return log_gamma_real(x + 1.0) - std::log(x);
    }
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
           std::log(lanczos_sum(xm1));
}

cplx principal_power(cplx w, double e) {
    if (w == cplx{0.0, 0.0}) {
        throw DomainError("principal_power: base must be nonzero");
    }
    if (e == 0.0) {
        return {1.0, 0.0};
    }
    if (e == 1.0) {
        return w;
    }
    return std::exp(e * std::log(w));
}

double BranchTracker::advance(cplx w) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double principal = std::arg(w);
    if (!initialized_) {
        previous_log_imag_ = principal;
        initialized_ = true;
        return principal;
    }
    const double turns = std::round((previous_log_imag_ - principal) / two_pi);
    const double theta = principal + two_pi * turns;
    if (std::abs(theta - previous_log_imag_) >= std::numbers::pi) {
        std::ostringstream os;
        os << "phase step of " << std::abs(theta - previous_log_imag_)
           << " rad between consecutive path points; refine the path";
        throw PathResolutionError(os.str());
    }
    previous_log_imag_ = theta;
    return theta;
}

cplx tracked_power(cplx w, double e, BranchTracker& tracker) {
    if (w == cplx{0.0, 0.0}) {
        throw DomainError("tracked_power: base must be nonzero");
    }
    const double theta = tracker.advance(w);
    if (e == 0.0) {
        return {1.0, 0.0};
    }
    return std::exp(e * cplx{std::log(std::abs(w)), theta});
}

QuadratureResult integrate_gl(const std::function<cplx(double)>& f, double target_tol,
                              const QuadratureOptions& options) {
    if (!(target_tol > 0.0)) {
        throw DomainError("integrate_gl: tolerance must be positive");
    }
    if (options.max_panels < 2) {
        throw DomainError("integrate_gl: max_panels must be at least 2");
    }
    cplx coarse = composite_sum(f, 1, options);
    int panels = 1;
    double error = 0.0;
    cplx fine = coarse;
    while (panels < options.max_panels) {
        panels *= 2;
        fine = composite_sum(f, panels, options);
        error = std::abs(fine - coarse);
        if (!std::isfinite(error)) {
            throw QuadratureError("integrate_gl: integrand produced a non-finite value", fine, error);
        }
        if (error <= target_tol) {
            return {fine, error, panels};
        }
        coarse = fine;
    }
    std::ostringstream os;
    os << "integrate_gl: no convergence to " << target_tol << " within " << options.max_panels
       << " panels (estimate " << error << ")";
    throw QuadratureError(os.str(), fine, error);
}

}  // namespace mlstar
