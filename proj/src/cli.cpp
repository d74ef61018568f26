#include "mlstar/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlstar/report.hpp"

namespace mlstar::cli {

namespace {

using nlohmann::json;

struct GlobalOptions {
    std::optional<double> tol;
    std::optional<int> grid_angles;
    std::optional<double> r_max;
    std::optional<unsigned> threads;
    bool strict = false;
    bool no_timing = false;
    std::string format = "text";
};

class UsageError : public Error {
public:
    using Error::Error;
};

cplx parse_complex(const std::string& text) {
    auto to_double = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw UsageError("cannot parse complex number '" + text + "'");
        }
        if (used != s.size()) {
            throw UsageError("cannot parse complex number '" + text + "'");
        }
        return v;
    };
    if (const auto comma = text.find(','); comma != std::string::npos) {
        return {to_double(text.substr(0, comma)), to_double(text.substr(comma + 1))};
    }
    if (text.empty() || text.back() != 'i') {
        return {to_double(text), 0.0};
    }
    const std::string body = text.substr(0, text.size() - 1);
    // Split at the last sign that is not a leading sign or an exponent sign.
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            const std::string im = body.substr(k);
            return {to_double(body.substr(0, k)), to_double(im == "+" || im == "-" ? im + "1" : im)};
        }
    }
    if (body.empty() || body == "+" || body == "-") {
        return {0.0, body == "-" ? -1.0 : 1.0};
    }
    return {0.0, to_double(body)};
}

GridSpec effective_grid(const JobFile& job, const GlobalOptions& g) {
    GridSpec grid = job.effective_grid();
    if (g.grid_angles) {
        grid.angles = *g.grid_angles;
    }
    if (g.r_max) {
        grid = grid.with_r_max(*g.r_max);
    }
    try {
        grid.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return grid;
}

CertifyOptions effective_options(const JobFile& job, const GlobalOptions& g) {
    CertifyOptions options = job.effective_options();
    if (g.tol) {
        options.quadrature_tol = *g.tol;
    }
    if (g.threads) {
        options.threads = *g.threads;
    }
    return options;
}

const JobOperator& require_operator(const JobFile& job, const std::string& name) {
    const JobOperator* op = job.find(name);
    if (op == nullptr) {
        throw UsageError("job has no operator named '" + name + "'");
    }
    return *op;
}

const FactorSpec& require_factor(const JobOperator& op, std::size_t index) {
    if (index >= op.spec.factors.size()) {
        throw UsageError("operator '" + op.name + "' has no factor " + std::to_string(index));
    }
    return op.spec.factors[index];
}

// ---------------------------------------------------------------- eval

struct EvalRow {
    cplx z;
    std::optional<cplx> value;
    std::string diagnostics;  // "terms=.. tail_bound=.." or "panels=.. error_estimate=.."
    json diagnostics_json;
    std::string error;
};

int emit_rows(const std::vector<EvalRow>& rows, const std::string& header, const json& meta,
              const GlobalOptions& g, std::ostream& out) {
    bool any_error = false;
    if (g.format == "json") {
        json doc = meta;
        doc["schema"] = kReportSchema;
        json arr = json::array();
        for (const auto& r : rows) {
            json row = {{"z", {r.z.real(), r.z.imag()}}};
            if (r.value) {
                row["value"] = {r.value->real(), r.value->imag()};
                row["diagnostics"] = r.diagnostics_json;
            } else {
                row["error"] = r.error;
                any_error = true;
            }
            arr.push_back(std::move(row));
        }
        doc["rows"] = std::move(arr);
        out << doc.dump(2) << "\n";
    } else {
        out << "# " << header << "\n";
        out << "z_re z_im value_re value_im diagnostics\n";
        for (const auto& r : rows) {
            out << format_double(r.z.real()) << " " << format_double(r.z.imag()) << " ";
            if (r.value) {
                out << format_double(r.value->real()) << " " << format_double(r.value->imag()) << " "
                    << r.diagnostics << "\n";
            } else {
                out << "ERROR ERROR " << r.error << "\n";
                any_error = true;
            }
        }
    }
    return any_error ? kEvaluationError : kOk;
}

struct EvalArgs {
    std::optional<double> alpha;
    std::optional<double> beta;
    std::vector<std::string> z;
    bool raw = false;
    bool deriv = false;
    bool log_deriv = false;
    std::string job;
    std::string op;
    std::string quantity = "F";
};

int cmd_eval(const EvalArgs& a, const GlobalOptions& g, std::ostream& out) {
    std::vector<cplx> points;
    for (const auto& s : a.z) {
        points.push_back(parse_complex(s));
    }
    std::vector<EvalRow> rows;

    if (!a.job.empty()) {
        if (a.alpha || a.beta || a.raw || a.deriv || a.log_deriv) {
            throw UsageError("eval: --job cannot be combined with --alpha/--beta/--raw/--deriv/--log-deriv");
        }
        const JobFile job = load_job(a.job);
        const JobOperator& jop = require_operator(job, a.op);
        const IntegralOperator op = jop.build();
        const IntegralOperator conv_op = jop.unit_product
                                             ? IntegralOperator::unit_product(1.0)
                                             : IntegralOperator(OperatorSpec{jop.spec.factors, 1.0});
        const double tol = g.tol.value_or(kDefaultOperatorTol);
        for (cplx z : points) {
            EvalRow row{z};
            try {
                if (a.quantity == "convex") {
                    row.value = z == cplx{0.0, 0.0} ? cplx{1.0, 0.0} : op.convex_log_deriv(z);
                    row.diagnostics = "closed-form";
                    row.diagnostics_json = {{"method", "closed-form"}};
                } else if (z == cplx{0.0, 0.0}) {
                    // F(0) = 0 and every log-derivative is 1 at the origin.
                    row.value = (a.quantity == "star") ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
                    row.diagnostics = "origin";
                    row.diagnostics_json = {{"method", "origin"}};
                } else {
                    const QuadratureResult q =
                        a.quantity == "conv" ? conv_op.ray_integral(z, tol) : op.ray_integral(z, tol);
                    if (a.quantity == "F") {
                        row.value = op.f_value(z, tol);
                    } else if (a.quantity == "F-zeta") {
                        row.value = op.f_zeta_power(z, tol);
                    } else if (a.quantity == "star") {
                        row.value = op.star_log_deriv(z, tol);
                    } else {
                        row.value = conv_op.f_conv_value(z, tol);
                    }
                    std::ostringstream d;
                    d << "panels=" << q.panels_used << " error_estimate=" << format_double(q.error_estimate);
                    row.diagnostics = d.str();
                    row.diagnostics_json = {{"panels", q.panels_used}, {"error_estimate", q.error_estimate}};
                }
            } catch (const Error& e) {
                row.value.reset();
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
        const json meta = {{"operator", jop.name}, {"quantity", a.quantity}, {"tolerance", tol}};
        return emit_rows(rows, "operator=" + jop.name + " quantity=" + a.quantity +
                                   " tol=" + format_double(tol),
                         meta, g, out);
    }

    if (!a.alpha || !a.beta) {
        throw UsageError("eval: need --alpha and --beta, or --job and --operator");
    }
    if (static_cast<int>(a.raw) + static_cast<int>(a.deriv) + static_cast<int>(a.log_deriv) > 1) {
        throw UsageError("eval: choose at most one of --raw, --deriv, --log-deriv");
    }
    const MLParams params{*a.alpha, *a.beta};
    std::optional<MittagLefflerSeries> series;
    try {
        series.emplace(params);
    } catch (const DomainError& e) {
        throw UsageError(std::string("eval: ") + e.what());
    }
    const double tol = g.tol.value_or(kDefaultSeriesTol);
    const std::string what = a.raw ? "raw" : a.deriv ? "deriv" : a.log_deriv ? "log-deriv" : "norm";
    for (cplx z : points) {
        EvalRow row{z};
        try {
            if (a.log_deriv) {
                row.value = series->log_deriv(z, tol);
                row.diagnostics = "ratio";
                row.diagnostics_json = {{"method", "ratio"}};
            } else {
                const SeriesResult r = a.raw ? series->raw(z, tol)
                                     : a.deriv ? series->normalized_deriv(z, tol)
                                               : series->normalized(z, tol);
                row.value = r.value;
                std::ostringstream d;
                d << "terms=" << r.terms_used << " tail_bound=" << format_double(r.tail_bound);
                row.diagnostics = d.str();
                row.diagnostics_json = {{"terms", r.terms_used}, {"tail_bound", r.tail_bound}};
            }
        } catch (const Error& e) {
            row.value.reset();
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    const json meta = {{"alpha", params.alpha}, {"beta", params.beta}, {"quantity", what}, {"tolerance", tol}};
    return emit_rows(rows,
                     "alpha=" + format_double(params.alpha) + " beta=" + format_double(params.beta) +
                         " quantity=" + what + " tol=" + format_double(tol),
                     meta, g, out);
}

// ---------------------------------------------------------------- orders

int cmd_orders(const std::string& path, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    const JobFile job = load_job(path);
    if (job.operators.empty()) {
        throw UsageError("job contains no operators");
    }
    json doc = {{"schema", kReportSchema}, {"tool", "mlstar"}, {"version", std::string(kToolVersion)}};
    json ops = json::array();
    bool any_violation = false;
    auto requested = [](const JobOperator& op, Check c) {
        return std::find(op.checks.begin(), op.checks.end(), c) != op.checks.end();
    };
    for (const auto& op : job.operators) {
        json entry = {{"name", op.name}};
        const OperatorSpec& spec = op.spec;
        const StarlikeOrderReport star = starlike_delta(spec);
        const bool star_ok = star.hypothesis_ok && !op.unit_product;
        entry["starlike"] = {{"delta", star.delta},
                             {"hypothesis_sum", star.hypothesis_sum},
                             {"zeta", star.zeta},
                             {"hypothesis_ok", star_ok}};
        if (requested(op, Check::Starlike) && !star_ok) {
            any_violation = true;
            err << "warning: " << op.name << ": starlikeness hypotheses violated\n";
        }
        if (!op.unit_product) {
            try {
                const ConvexOrderReport conv = convex_delta(spec.factors);
                entry["convex"] = {{"delta", conv.delta},
                                   {"beta_min", conv.beta_min},
                                   {"bound_sum", conv.bound_sum},
                                   {"hypothesis_ok", conv.hypothesis_ok}};
                if (requested(op, Check::Convex) && !conv.hypothesis_ok) {
                    any_violation = true;
                    err << "warning: " << op.name << ": convexity hypotheses violated\n";
                }
            } catch (const DomainError& e) {
                entry["convex"] = {{"error", e.what()}};
                if (requested(op, Check::Convex)) {
                    any_violation = true;
                    err << "warning: " << op.name << ": " << e.what() << "\n";
                }
            }
            json factors = json::array();
            for (const auto& f : spec.factors) {
                json fj = {{"psi_eta", psi(f.eta)}, {"ml_starlike_ok", f.params.beta >= psi(f.eta)}};
                fj["lemma3_bound"] = f.params.beta > kGoldenRatio ? json(phi(f.params.beta)) : json(nullptr);
                factors.push_back(std::move(fj));
            }
            entry["factors"] = std::move(factors);
        }
        ops.push_back(std::move(entry));
    }
    doc["operators"] = ops;

    if (g.format == "json") {
        out << doc.dump(2) << "\n";
    } else {
        for (const auto& e : ops) {
            out << e["name"].get<std::string>() << ":\n";
            const auto& s = e["starlike"];
            out << "  starlike delta=" << format_double(s["delta"].get<double>())
                << " hypothesis_sum=" << format_double(s["hypothesis_sum"].get<double>())
                << " zeta=" << format_double(s["zeta"].get<double>())
                << (s["hypothesis_ok"].get<bool>() ? " [hypotheses ok]" : " [hypotheses violated]") << "\n";
            if (e.contains("convex")) {
                const auto& c = e["convex"];
                if (c.contains("error")) {
                    out << "  convex unavailable: " << c["error"].get<std::string>() << "\n";
                } else {
                    out << "  convex delta=" << format_double(c["delta"].get<double>())
                        << " beta_min=" << format_double(c["beta_min"].get<double>())
                        << " bound_sum=" << format_double(c["bound_sum"].get<double>())
                        << (c["hypothesis_ok"].get<bool>() ? " [hypotheses ok]" : " [hypotheses violated]")
                        << "\n";
                }
            }
        }
    }
    if (any_violation) {
        err << "warning: some hypotheses are violated; predicted orders are not guaranteed\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- certify

ReportEntry run_check(const JobOperator& op, Check check, std::optional<std::size_t> factor,
                      const GridSpec& grid, CertifyOptions options) {
    options.predicted_offset = op.predicted_offset;
    const auto start = std::chrono::steady_clock::now();
    Certificate cert;
    switch (check) {
        case Check::Starlike: cert = certify_starlike(op.build(), grid, options); break;
        case Check::Convex: cert = certify_convex(op.build(), grid, options); break;
        case Check::MLStarlike: {
            const FactorSpec& f = op.spec.factors.at(*factor);
            cert = certify_ml_starlike(f.params, f.eta, grid, options);
            break;
        }
        case Check::Lemma3: cert = check_lemma3(op.spec.factors.at(*factor).params, grid, options); break;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return {op.name, factor, std::move(cert), elapsed.count()};
}

void write_report(std::ostream& os, const ReportDocument& report, const std::string& format, bool timing) {
    if (format == "json") {
        os << to_json(report, timing).dump(2) << "\n";
    } else {
        write_text(os, report, timing);
    }
}

int cmd_certify(const std::string& path, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    ReportDocument report;
    report.job = load_job(path);
    if (report.job.operators.empty()) {
        throw UsageError("job contains no operators; nothing to certify");
    }
    report.grid = effective_grid(report.job, g);
    report.options = effective_options(report.job, g);
    for (const auto& op : report.job.operators) {
        for (Check check : op.checks) {
            try {
                if (check == Check::MLStarlike || check == Check::Lemma3) {
                    for (std::size_t j = 0; j < op.spec.factors.size(); ++j) {
                        report.entries.push_back(run_check(op, check, j, report.grid, report.options));
                    }
                } else {
                    report.entries.push_back(run_check(op, check, std::nullopt, report.grid, report.options));
                }
            } catch (const DomainError& e) {
                throw UsageError(op.name + " (" + std::string(to_string(check)) + "): " + e.what());
            }
        }
    }
    write_report(out, report, g.format, !g.no_timing);
    for (const auto& o : report.job.outputs) {
        std::ofstream file(o.path);
        if (!file) {
            throw UsageError("cannot write report to " + o.path);
        }
        write_report(file, report, o.format, !g.no_timing);
    }
    switch (report.summary()) {
        case Verdict::Pass: return kOk;
        case Verdict::Fail: return kCertificationFailed;
        case Verdict::HypothesisViolated:
            err << "warning: some certificates ran with violated hypotheses\n";
            return g.strict ? kCertificationFailed : kOk;
    }
    return kCertificationFailed;
}

// ---------------------------------------------------------------- dump

struct DumpArgs {
    std::string job;
    std::string op;
    std::string quantity = "starlike";
    std::size_t factor = 0;
    std::string output;
};

int cmd_dump(const DumpArgs& a, const GlobalOptions& g, std::ostream& out) {
    const JobFile job = load_job(a.job);
    const JobOperator& jop = require_operator(job, a.op);
    const GridSpec grid = effective_grid(job, g);
    const CertifyOptions options = effective_options(job, g);
    const auto check = check_from_string(a.quantity);
    if (!check) {
        throw UsageError("dump: unknown quantity '" + a.quantity + "'");
    }
    const IntegralOperator op = jop.build();
    std::optional<MittagLefflerSeries> series;
    if (*check == Check::MLStarlike || *check == Check::Lemma3) {
        if (jop.unit_product) {
            throw UsageError("dump: unit-product operators have no Mittag-Leffler factors");
        }
        series.emplace(require_factor(jop, a.factor).params);
    }
    std::function<cplx(cplx)> quantity;
    switch (*check) {
        case Check::Starlike:
            quantity = [&](cplx z) { return op.star_log_deriv(z, options.quadrature_tol); };
            break;
        case Check::Convex:
            quantity = [&](cplx z) { return op.convex_log_deriv(z, options.series_tol); };
            break;
        case Check::MLStarlike:
            quantity = [&](cplx z) { return series->log_deriv(z, options.series_tol); };
            break;
        case Check::Lemma3:
            quantity = [&](cplx z) { return series->log_deriv(z, options.series_tol) - 1.0; };
            break;
    }
    const GridSample sample = sample_grid(quantity, grid, options.threads);

    std::ofstream file;
    if (!a.output.empty()) {
        file.open(a.output);
        if (!file) {
            throw UsageError("cannot write dump to " + a.output);
        }
    }
    std::ostream& os = a.output.empty() ? out : file;
    os << "# mlstar dump spec-digest=" << spec_digest(jop) << " operator=" << jop.name
       << " quantity=" << a.quantity;
    if (series) {
        os << " factor=" << a.factor;
    }
    os << "\n";
    os << "radius,angle,re,im\n";
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        const EvalPoint p = grid.point(i);
        os << format_double(p.radius) << "," << format_double(p.angle) << ",";
        if (sample.values[i]) {
            os << format_double(sample.values[i]->real()) << "," << format_double(sample.values[i]->imag());
        } else {
            os << "nan,nan";
        }
        os << "\n";
    }
    return sample.failures.empty() ? kOk : kEvaluationError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Normalized Mittag-Leffler functions, their integral operators, and sampled "
                 "certificates of starlikeness and convexity orders",
                 "mlstar"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--tol", g.tol, "Evaluation tolerance (series or quadrature)")
        ->check(CLI::PositiveNumber);
    app.add_option("--grid-angles", g.grid_angles, "Angles per circle")->check(CLI::Range(8, 1 << 24));
    app.add_option("--r-max", g.r_max, "Outermost sampling radius")->check(CLI::Range(0.0, 1.0));
    app.add_option("--threads", g.threads, "Worker threads for grid sweeps (0 = all cores)");
    app.add_flag("--strict", g.strict, "Treat violated hypotheses as failures");
    app.add_flag("--no-timing", g.no_timing, "Omit wall times from reports");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a Mittag-Leffler function or an operator at points");
    eval_cmd->add_option("--alpha", eval.alpha, "alpha >= 1");
    eval_cmd->add_option("--beta", eval.beta, "beta > 0");
    eval_cmd->add_option("--z", eval.z, "Point: 0.3, 0.3,0.2 or 0.3+0.2i (repeatable)")->required();
    eval_cmd->add_flag("--raw", eval.raw, "E_{alpha,beta}(z) instead of the normalized function");
    eval_cmd->add_flag("--deriv", eval.deriv, "Derivative of the normalized function");
    eval_cmd->add_flag("--log-deriv", eval.log_deriv, "z E'(z)/E(z) of the normalized function");
    eval_cmd->add_option("--job", eval.job, "Job file holding the operator");
    eval_cmd->add_option("--operator", eval.op, "Operator name within the job");
    eval_cmd->add_option("--quantity", eval.quantity, "Operator quantity")
        ->check(CLI::IsMember({"F", "F-zeta", "star", "convex", "conv"}));

    std::string orders_job;
    auto* orders_cmd = app.add_subcommand("orders", "Predicted orders and hypothesis checks for a job");
    orders_cmd->add_option("job", orders_job, "Job file")->required();

    std::string certify_job;
    auto* certify_cmd = app.add_subcommand("certify", "Certify every check of a job on the sampling grid");
    certify_cmd->add_option("job", certify_job, "Job file")->required();

    DumpArgs dump;
    auto* dump_cmd = app.add_subcommand("dump", "CSV dump of a certified quantity over the grid");
    dump_cmd->add_option("job", dump.job, "Job file")->required();
    dump_cmd->add_option("--operator", dump.op, "Operator name")->required();
    dump_cmd->add_option("--quantity", dump.quantity, "starlike, convex, ml-starlike or lemma3")
        ->check(CLI::IsMember({"starlike", "convex", "ml-starlike", "lemma3"}));
    dump_cmd->add_option("--factor", dump.factor, "Factor index for ml-starlike and lemma3");
    dump_cmd->add_option("--output", dump.output, "Write to this file instead of stdout");

    for (auto* sub : {eval_cmd, orders_cmd, certify_cmd, dump_cmd}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (eval_cmd->parsed()) {
            if (!eval.job.empty() && eval.op.empty()) {
                throw UsageError("eval: --job needs --operator");
            }
            return cmd_eval(eval, g, out);
        }
        if (orders_cmd->parsed()) {
            return cmd_orders(orders_job, g, out, err);
        }
        if (certify_cmd->parsed()) {
            return cmd_certify(certify_job, g, out, err);
        }
        if (dump_cmd->parsed()) {
            return cmd_dump(dump, g, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const JobParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kEvaluationError;
    }
    return kUsageError;
}

}  // namespace mlstar::cli
