// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mlstar/cli.hpp"
#include "mlstar/report.hpp"

using namespace mlstar;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail << "failed: " << what << "; ";
        }
    }
};

int failures = 0;

void criterion(int number, const std::string& title, double time_limit,
               const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail << "exception: " << e.what() << "; ";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit > 0.0 && seconds >= time_limit) {
        o.ok = false;
        o.detail << "runtime " << seconds << " s over the " << time_limit << " s limit; ";
    }
    failures += o.ok ? 0 : 1;
    std::cout << "criterion " << number << ": " << (o.ok ? "PASS" : "FAIL") << "  " << title << "  ["
              << o.detail.str() << "time " << std::setprecision(3) << seconds << " s]" << std::endl;
}

cplx random_disk_point(std::mt19937_64& rng, double r_max) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(r_max * std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
}

std::vector<FactorSpec> one_factor(double alpha, double beta, double lambda) {
    return {FactorSpec{{alpha, beta}, lambda, 0.0}};
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::vector<const char*> argv{"mlstar"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text != nullptr) {
        *out_text = out.str();
    }
    return code;
}

std::string job_path(const char* name) {
    return (std::filesystem::path(MLSTAR_JOBS_DIR) / name).string();
}

}  // namespace

int main() {
    std::cout << std::setprecision(10);
    const GridSpec grid = GridSpec::defaults();

    criterion(1, "series matches the four cosh/sinh closed forms to 1e-12 on 1000 points", 5.0, [](Outcome& o) {
        std::mt19937_64 rng(2024);
        std::vector<cplx> points(1000);
        for (auto& z : points) {
            z = random_disk_point(rng, 0.999);
        }
        for (auto kind : {CoshKind::E21, CoshKind::E22, CoshKind::E23, CoshKind::E24}) {
            const MittagLefflerSeries s(closed_form_params(kind));
            double worst = 0.0;
            for (cplx z : points) {
                worst = std::max(worst, std::abs(s.normalized(z).value - closed_form(kind, z)));
            }
            o.detail << "E2" << static_cast<int>(kind) + 1 << " max err " << worst << "; ";
            o.require(worst <= 1e-12, "closed-form agreement");
        }
    });

    criterion(2, "starlike order 1/2 for the single (2,4) factor, lambda = zeta = 1", 60.0, [&](Outcome& o) {
        const Certificate c = certify_starlike(OperatorSpec{{FactorSpec{{2, 4}, 1.0, 0.0}}, 1.0}, grid);
        o.detail << "predicted " << c.predicted << " observed " << c.observed << " margin " << c.margin << "; ";
        o.require(c.predicted == 0.5, "predicted 0.5");
        o.require(c.verdict == Verdict::Pass, "verdict pass");
        o.require(c.margin >= 1e-6, "margin >= 1e-6");
    });

    criterion(3, "delta = 1/2 exactly and the quadratic root property on 10000 specs", 0.0, [](Outcome& o) {
        const StarlikeOrderReport r = starlike_delta({{FactorSpec{{2, 4}, 1.0, 0.0}}, 1.0});
        o.require(r.delta == 0.5, "delta exactly 0.5");
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> zeta_d(0.1, 5.0);
        std::uniform_real_distribution<double> lam_d(0.05, 20.0);
        std::uniform_real_distribution<double> eta_d(0.0, 0.95);
        std::uniform_int_distribution<int> n_d(1, 4);
        int accepted = 0;
        double worst = 0.0;
        while (accepted < 10000) {
            OperatorSpec spec{{}, zeta_d(rng)};
            double s = 0.0;
            for (int j = n_d(rng); j > 0; --j) {
                const double eta = eta_d(rng);
                const double lambda = lam_d(rng);
                spec.factors.push_back({{1.5, psi(eta) + 0.05}, lambda, eta});
                s += 2.0 * (1.0 - eta) / lambda;
            }
            const StarlikeOrderReport rep = starlike_delta(spec);
            if (!rep.hypothesis_ok) {
                continue;
            }
            ++accepted;
            const double d = rep.delta;
            const double zeta = spec.zeta;
            worst = std::max(worst, std::abs(2.0 * zeta * d * d + (s - 2.0 * zeta + 1.0) * d - 1.0));
        }
        o.detail << "max residual " << worst << "; ";
        o.require(worst <= 1e-12, "residual <= 1e-12");
    });

    criterion(4, "convexity examples with beta = 2, 3, 4 at lambda = threshold and 2x threshold", 60.0, [&](Outcome& o) {
        struct Case {
            double beta;
            double threshold;
            double coefficient;
        };
        for (const Case k : {Case{2, 5.0, 5.0}, Case{3, 7.0 / 5.0, 7.0 / 5.0}, Case{4, 9.0 / 11.0, 9.0 / 11.0}}) {
            for (double lambda : {k.threshold, 2.0 * k.threshold}) {
                const Certificate c = certify_convex(one_factor(2, k.beta, lambda), grid);
                const double expected = 1.0 - k.coefficient / lambda;
                o.detail << "beta " << k.beta << " lambda " << lambda << " margin " << c.margin << "; ";
                o.require(std::abs(c.predicted - expected) <= 1e-12, "predicted delta");
                o.require(c.verdict == Verdict::Pass && c.margin >= 1e-6, "pass with margin");
            }
        }
    });

    criterion(5, "|zE'/E - 1| strictly below (2b+1)/(b^2-b-1) on the 4x4 parameter table", 30.0, [&](Outcome& o) {
        double min_margin = INFINITY;
        for (double alpha : {1.0, 1.5, 2.0, 3.0}) {
            for (double beta : {2.0, 3.0, 4.0, 10.0}) {
                const Certificate c = check_lemma3({alpha, beta}, grid);
                const double bound = (2.0 * beta + 1.0) / (beta * beta - beta - 1.0);
                o.require(std::abs(c.predicted - bound) <= 1e-15, "bound value");
                o.require(c.verdict == Verdict::Pass, "verdict pass");
                o.require(c.observed < bound, "strictly below the bound");
                min_margin = std::min(min_margin, bound - c.observed);
            }
        }
        o.detail << "smallest gap " << min_margin << "; ";
    });

    criterion(6, "starlikeness of order eta for beta = psi(eta) + 0.01", 0.0, [&](Outcome& o) {
        double min_margin = INFINITY;
        for (double eta : {0.0, 0.25, 0.5}) {
            for (double alpha : {1.0, 1.5, 2.0, 5.0}) {
                const Certificate c = certify_ml_starlike({alpha, psi(eta) + 0.01}, eta, grid);
                o.require(c.verdict == Verdict::Pass, "verdict pass");
                o.require(c.observed >= eta - 1e-6, "empirical order >= eta - 1e-6");
                min_margin = std::min(min_margin, c.margin);
            }
        }
        o.detail << "smallest margin " << min_margin << "; ";
    });

    criterion(7, "predictions inflated by +0.2 make certification fail (exit 1)", 0.0, [&](Outcome& o) {
        std::string report;
        const int baseline = run_cli({"--format", "json", "--no-timing", "certify", job_path("corpus.json")}, &report);
        o.require(baseline == cli::kOk, "corpus itself passes");
        const nlohmann::json doc = nlohmann::json::parse(report);
        double smallest = INFINITY;
        for (const auto& c : doc["certificates"]) {
            smallest = std::min(smallest, c["margin"].get<double>());
        }
        const int code = run_cli({"certify", job_path("negative_control.json")});
        o.detail << "exit code " << code << ", smallest corpus margin " << smallest << "; ";
        o.require(code == cli::kCertificationFailed, "exit code 1 (the corpus margins all exceed 0.2)");
    });

    criterion(8, "property suites", 0.0, [&](Outcome& o) {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> bd(1.7, 100.0);
        std::uniform_real_distribution<double> ed(0.0, 0.999);
        for (int k = 0; k < 1000; ++k) {
            double x = bd(rng), y = bd(rng);
            if (x > y) std::swap(x, y);
            o.require(x == y || phi(x) > phi(y), "phi decreasing");
            double a = ed(rng), b = ed(rng);
            if (a > b) std::swap(a, b);
            o.require(a == b || psi(a) < psi(b), "psi increasing");
        }

        double worst_order = INFINITY;
        for (const MLParams p : {MLParams{1, 1}, MLParams{2, 4}, MLParams{1.5, 0.7}}) {
            const MittagLefflerSeries s(p);
            for (int k = 0; k < 20; ++k) {
                const cplx z = random_disk_point(rng, 0.9);
                const cplx exact = s.normalized_deriv(z, 1e-17).value;
                auto err = [&](double h) {
                    return std::abs((s.normalized(z + h, 1e-17).value - s.normalized(z - h, 1e-17).value) / (2.0 * h) -
                                    exact);
                };
                worst_order = std::min(worst_order, std::log10(err(1e-2) / err(1e-3)));
            }
        }
        o.detail << "fd order " << worst_order << "; ";
        o.require(worst_order >= 1.9, "finite-difference order >= 1.9");

        double worst_boundary = 0.0;
        double worst_refine = 0.0;
        GridSpec doubled = grid;
        doubled.angles *= 2;
        const OperatorSpec star_spec{{FactorSpec{{2, 4}, 1.0, 0.0}}, 1.0};
        std::vector<std::pair<Certificate, Certificate>> pairs{
            {certify_starlike(star_spec, grid), certify_starlike(star_spec, doubled)},
            {certify_convex(one_factor(2, 2, 5.0), grid), certify_convex(one_factor(2, 2, 5.0), doubled)},
            {certify_convex(one_factor(2, 3, 1.4), grid), certify_convex(one_factor(2, 3, 1.4), doubled)},
            {certify_convex(one_factor(2, 4, 9.0 / 11.0), grid), certify_convex(one_factor(2, 4, 9.0 / 11.0), doubled)},
            {certify_ml_starlike({2, 4}, 0.0, grid), certify_ml_starlike({2, 4}, 0.0, doubled)},
            {check_lemma3({2, 4}, grid), check_lemma3({2, 4}, doubled)},
        };
        for (const auto& [c, d] : pairs) {
            worst_boundary = std::max(worst_boundary, std::abs(c.observed - c.boundary_observed));
            worst_refine = std::max(worst_refine, std::abs(c.observed - d.observed));
        }
        o.detail << "boundary gap " << worst_boundary << ", refinement change " << worst_refine << "; ";
        o.require(worst_boundary <= 2e-6, "boundary dominance within 2x eval tolerance");
        o.require(worst_refine < 1e-4, "doubling angles moves the observed value < 1e-4");

        const IntegralOperator single({{FactorSpec{{1.5, 2.5}, 1.0, 0.0}}, 1.0});
        const IntegralOperator split({{FactorSpec{{1.5, 2.5}, 2.0, 0.0}, FactorSpec{{1.5, 2.5}, 2.0, 0.0}}, 1.0});
        double worst_split = 0.0;
        for (int k = 0; k < 20; ++k) {
            const cplx t = random_disk_point(rng, 0.99);
            std::vector<BranchTracker> a(1), b(2);
            const cplx p1 = single.product_term(t, a);
            worst_split = std::max(worst_split, std::abs(p1 - split.product_term(t, b)) / std::abs(p1));
        }
        o.detail << "additivity " << worst_split << "; ";
        o.require(worst_split <= 1e-13, "branch-tracked exponent additivity");

        double worst_poly = 0.0;
        std::uniform_real_distribution<double> cd(-1.0, 1.0);
        for (int degree = 0; degree < 2 * kGaussNodes; ++degree) {
            std::vector<double> c(degree + 1);
            double exact = 0.0;
            for (int k = 0; k <= degree; ++k) {
                c[k] = cd(rng);
                exact += c[k] / (k + 1);
            }
            QuadratureOptions opts;
            opts.max_panels = 2;
            const auto r = integrate_gl(
                [&](double w) {
                    double acc = 0.0;
                    for (int k = degree; k >= 0; --k) acc = acc * w + c[k];
                    return cplx{acc, 0.0};
                },
                1e-13, opts);
            worst_poly = std::max(worst_poly, std::abs(r.value - exact));
        }
        o.detail << "polynomial error " << worst_poly << "; ";
        o.require(worst_poly <= 1e-14, "Gauss-Legendre exact through degree 31");
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
