#include "mlstar/report.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>

namespace mlstar {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

Verdict ReportDocument::summary() const {
    bool any_violation = false;
    for (const auto& e : entries) {
        if (e.certificate.verdict == Verdict::Fail) {
            return Verdict::Fail;
        }
        any_violation = any_violation || e.certificate.verdict == Verdict::HypothesisViolated;
    }
    return any_violation ? Verdict::HypothesisViolated : Verdict::Pass;
}

namespace {

json point_json(const EvalPoint& p) {
    return {{"radius", p.radius}, {"angle", p.angle}, {"re", p.z.real()}, {"im", p.z.imag()}};
}

// JSON has no infinities; an all-failed grid reports null.
json finite_or_null(double x) {
    return std::isfinite(x) ? json(x) : json(nullptr);
}

}  // namespace

json to_json(const Certificate& cert) {
    json failures = json::array();
    for (const auto& f : cert.failures) {
        failures.push_back({{"radius", f.where.radius}, {"angle", f.where.angle}, {"reason", f.reason}});
    }
    return {{"quantity", std::string(to_string(cert.quantity))},
            {"semantics", cert.semantics},
            {"predicted", cert.predicted},
            {"observed", finite_or_null(cert.observed)},
            {"margin", finite_or_null(cert.margin)},
            {"boundary_observed", finite_or_null(cert.boundary_observed)},
            {"argmin", point_json(cert.argmin)},
            {"eval_tolerance", cert.eval_tolerance},
            {"hypothesis_ok", cert.hypothesis_ok},
            {"verdict", std::string(to_string(cert.verdict))},
            {"points_evaluated", cert.points_evaluated},
            {"failures", std::move(failures)},
            {"grid", to_json(cert.grid)}};
}

json to_json(const ReportDocument& report, bool include_timing) {
    json certs = json::array();
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t violated = 0;
    for (const auto& e : report.entries) {
        json c = to_json(e.certificate);
        c["operator"] = e.operator_name;
        c["factor"] = e.factor_index ? json(*e.factor_index) : json(nullptr);
        if (include_timing) {
            c["seconds"] = e.seconds;
        }
        certs.push_back(std::move(c));
        switch (e.certificate.verdict) {
            case Verdict::Pass: ++passed; break;
            case Verdict::Fail: ++failed; break;
            case Verdict::HypothesisViolated: ++violated; break;
        }
    }
    return {{"schema", kReportSchema},
            {"tool", "mlstar"},
            {"version", std::string(kToolVersion)},
            {"semantics", std::string(kCertificateSemantics)},
            {"job", to_json(report.job)},
            {"settings",
             {{"grid", to_json(report.grid)},
              {"eval_tolerance", report.options.eval_tolerance},
              {"quadrature_tolerance", report.options.quadrature_tol},
              {"series_tolerance", report.options.series_tol},
              {"max_failed_fraction", report.options.max_failed_fraction}}},
            {"certificates", std::move(certs)},
            {"summary",
             {{"verdict", std::string(to_string(report.summary()))},
              {"passed", passed},
              {"failed", failed},
              {"hypothesis_violated", violated}}}};
}

void write_text(std::ostream& os, const ReportDocument& report, bool include_timing) {
    const auto saved = os.precision();
    os << "mlstar " << kToolVersion << " (" << kCertificateSemantics << ")\n";
    os << "grid: " << report.grid.radii.size() << " radii x " << report.grid.angles
       << " angles, r_max " << format_double(report.grid.r_max) << ", eval tolerance "
       << format_double(report.options.eval_tolerance) << "\n";
    for (const auto& e : report.entries) {
        const auto& c = e.certificate;
        os << "[" << to_string(c.verdict) << "] " << e.operator_name;
        if (e.factor_index) {
            os << "#" << *e.factor_index;
        }
        os << " " << to_string(c.quantity) << std::setprecision(10)
           << "  predicted=" << c.predicted << "  observed=" << c.observed
           << "  margin=" << c.margin << "  at r=" << c.argmin.radius
           << " theta=" << c.argmin.angle;
        if (!c.failures.empty()) {
            os << "  failed_points=" << c.failures.size();
        }
        if (include_timing) {
            os << std::setprecision(3) << "  (" << e.seconds << " s)";
        }
        os << "\n";
    }
    os << "summary: " << to_string(report.summary()) << "\n";
    os.precision(saved);
}

}  // namespace mlstar
