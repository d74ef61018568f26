#include "mlstar/jobfile.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace mlstar {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
    if (!obj.is_object()) {
        throw JobParseError(where + ": expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw JobParseError(where + ": unknown key '" + key + "'");
        }
    }
}

double number(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw JobParseError(where + ": missing required key '" + key + "'");
    }
    if (!it->is_number()) {
        throw JobParseError(where + ": '" + key + "' must be a number");
    }
    return it->get<double>();
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) {
        return std::nullopt;
    }
    return number(obj, key, where);
}

FactorSpec parse_factor(const json& f, const std::string& where) {
    reject_unknown(f, {"alpha", "beta", "lambda", "eta"}, where);
    FactorSpec spec;
    spec.params.alpha = number(f, "alpha", where);
    spec.params.beta = number(f, "beta", where);
    spec.lambda = number(f, "lambda", where);
    spec.eta = optional_number(f, "eta", where).value_or(0.0);
    return spec;
}

JobOperator parse_operator(const json& o, std::size_t index) {
    std::string where = "operators[" + std::to_string(index) + "]";
    reject_unknown(o, {"name", "zeta", "factors", "checks", "unit_product", "predicted_offset"},
                   where);
    JobOperator op;
    if (!o.contains("name") || !o["name"].is_string() || o["name"].get<std::string>().empty()) {
        throw JobParseError(where + ": 'name' must be a nonempty string");
    }
    op.name = o["name"].get<std::string>();
    where += " (" + op.name + ")";
    op.spec.zeta = optional_number(o, "zeta", where).value_or(1.0);
    op.predicted_offset = optional_number(o, "predicted_offset", where).value_or(0.0);
    if (o.contains("unit_product")) {
        if (!o["unit_product"].is_boolean()) {
            throw JobParseError(where + ": 'unit_product' must be a boolean");
        }
        op.unit_product = o["unit_product"].get<bool>();
    }
    if (o.contains("factors")) {
        if (op.unit_product) {
            throw JobParseError(where + ": 'factors' not allowed with unit_product");
        }
        if (!o["factors"].is_array()) {
            throw JobParseError(where + ": 'factors' must be an array");
        }
        for (std::size_t j = 0; j < o["factors"].size(); ++j) {
            op.spec.factors.push_back(
                parse_factor(o["factors"][j], where + ".factors[" + std::to_string(j) + "]"));
        }
    }
    if (o.contains("checks")) {
        if (!o["checks"].is_array() || o["checks"].empty()) {
            throw JobParseError(where + ": 'checks' must be a nonempty array");
        }
        op.checks.clear();
        for (const auto& c : o["checks"]) {
            const auto check = c.is_string() ? check_from_string(c.get<std::string>()) : std::nullopt;
            if (!check) {
                throw JobParseError(where + ": unknown check " + c.dump());
            }
            op.checks.push_back(*check);
        }
    }
    try {
        if (op.unit_product) {
            IntegralOperator::unit_product(op.spec.zeta);
            for (auto c : op.checks) {
                if (c == Check::MLStarlike || c == Check::Lemma3) {
                    throw JobParseError(where + ": unit_product supports only starlike/convex checks");
                }
            }
        } else {
            op.spec.validate();
        }
    } catch (const DomainError& e) {
        throw JobParseError(where + ": " + e.what());
    }
    return op;
}

}  // namespace

std::string_view to_string(Check c) {
    switch (c) {
        case Check::Starlike: return "starlike";
        case Check::Convex: return "convex";
        case Check::MLStarlike: return "ml-starlike";
        case Check::Lemma3: return "lemma3";
    }
    return "unknown";
}

std::optional<Check> check_from_string(std::string_view s) {
    for (auto c : {Check::Starlike, Check::Convex, Check::MLStarlike, Check::Lemma3}) {
        if (s == to_string(c)) {
            return c;
        }
    }
    return std::nullopt;
}

IntegralOperator JobOperator::build() const {
    return unit_product ? IntegralOperator::unit_product(spec.zeta) : IntegralOperator(spec);
}

GridSpec JobFile::effective_grid() const {
    GridSpec grid = GridSpec::defaults();
    if (angles) {
        grid.angles = *angles;
    }
    if (radii) {
        grid.radii = *radii;
        grid.r_max = r_max.value_or(radii->empty() ? grid.r_max : radii->back());
    }
    if (r_max) {
        grid = grid.with_r_max(*r_max);
    }
    return grid;
}

CertifyOptions JobFile::effective_options() const {
    CertifyOptions options;
    if (tolerance.eval) {
        options.eval_tolerance = *tolerance.eval;
    }
    if (tolerance.quadrature) {
        options.quadrature_tol = *tolerance.quadrature;
    }
    if (tolerance.series) {
        options.series_tol = *tolerance.series;
    }
    return options;
}

const JobOperator* JobFile::find(std::string_view name) const {
    for (const auto& op : operators) {
        if (op.name == name) {
            return &op;
        }
    }
    return nullptr;
}

JobFile parse_job(const json& doc) {
    reject_unknown(doc, {"operators", "grid", "tolerance", "outputs"}, "job");
    JobFile job;
    if (doc.contains("operators")) {
        if (!doc["operators"].is_array()) {
            throw JobParseError("job: 'operators' must be an array");
        }
        for (std::size_t i = 0; i < doc["operators"].size(); ++i) {
            job.operators.push_back(parse_operator(doc["operators"][i], i));
            for (std::size_t k = 0; k + 1 < job.operators.size(); ++k) {
                if (job.operators[k].name == job.operators.back().name) {
                    throw JobParseError("job: duplicate operator name '" + job.operators.back().name + "'");
                }
            }
        }
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        reject_unknown(g, {"radii", "angles", "r_max"}, "grid");
        if (g.contains("radii")) {
            if (!g["radii"].is_array()) {
                throw JobParseError("grid: 'radii' must be an array");
            }
            std::vector<double> radii;
            for (const auto& r : g["radii"]) {
                if (!r.is_number()) {
                    throw JobParseError("grid: radii must be numbers");
                }
                radii.push_back(r.get<double>());
            }
            job.radii = std::move(radii);
        }
        if (g.contains("angles")) {
            if (!g["angles"].is_number_integer()) {
                throw JobParseError("grid: 'angles' must be an integer");
            }
            job.angles = g["angles"].get<int>();
        }
        job.r_max = optional_number(g, "r_max", "grid");
        try {
            job.effective_grid().validate();
        } catch (const DomainError& e) {
            throw JobParseError(std::string("grid: ") + e.what());
        }
    }
    if (doc.contains("tolerance")) {
        const json& t = doc["tolerance"];
        reject_unknown(t, {"eval", "quadrature", "series"}, "tolerance");
        job.tolerance.eval = optional_number(t, "eval", "tolerance");
        job.tolerance.quadrature = optional_number(t, "quadrature", "tolerance");
        job.tolerance.series = optional_number(t, "series", "tolerance");
        for (const auto& v : {job.tolerance.eval, job.tolerance.quadrature, job.tolerance.series}) {
            if (v && !(*v > 0.0)) {
                throw JobParseError("tolerance: values must be positive");
            }
        }
    }
    if (doc.contains("outputs")) {
        if (!doc["outputs"].is_array()) {
            throw JobParseError("job: 'outputs' must be an array");
        }
        for (const auto& o : doc["outputs"]) {
            reject_unknown(o, {"format", "path"}, "outputs");
            if (!o.contains("format") || !o["format"].is_string() || !o.contains("path") ||
                !o["path"].is_string()) {
                throw JobParseError("outputs: entries need string 'format' and 'path'");
            }
            OutputRequest req{o["format"].get<std::string>(), o["path"].get<std::string>()};
            if (req.format != "text" && req.format != "json") {
                throw JobParseError("outputs: format must be 'text' or 'json'");
            }
            job.outputs.push_back(std::move(req));
        }
    }
    return job;
}

JobFile parse_job_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw JobParseError(std::string("job: invalid JSON: ") + e.what());
    }
    return parse_job(doc);
}

JobFile load_job(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw JobParseError("cannot open job file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_job_text(buffer.str());
}

json to_json(const JobOperator& op) {
    json o;
    o["name"] = op.name;
    o["zeta"] = op.spec.zeta;
    if (op.unit_product) {
        o["unit_product"] = true;
    } else {
        json factors = json::array();
        for (const auto& f : op.spec.factors) {
            factors.push_back({{"alpha", f.params.alpha},
                               {"beta", f.params.beta},
                               {"lambda", f.lambda},
                               {"eta", f.eta}});
        }
        o["factors"] = std::move(factors);
    }
    json checks = json::array();
    for (auto c : op.checks) {
        checks.push_back(std::string(to_string(c)));
    }
    o["checks"] = std::move(checks);
    if (op.predicted_offset != 0.0) {
        o["predicted_offset"] = op.predicted_offset;
    }
    return o;
}

json to_json(const GridSpec& grid) {
    return {{"radii", grid.radii}, {"angles", grid.angles}, {"r_max", grid.r_max}};
}

json to_json(const JobFile& job) {
    json doc;
    json ops = json::array();
    for (const auto& op : job.operators) {
        ops.push_back(to_json(op));
    }
    doc["operators"] = std::move(ops);
    if (job.radii || job.angles || job.r_max) {
        json g = json::object();
        if (job.radii) {
            g["radii"] = *job.radii;
        }
        if (job.angles) {
            g["angles"] = *job.angles;
        }
        if (job.r_max) {
            g["r_max"] = *job.r_max;
        }
        doc["grid"] = std::move(g);
    }
    if (job.tolerance.eval || job.tolerance.quadrature || job.tolerance.series) {
        json t = json::object();
        if (job.tolerance.eval) {
            t["eval"] = *job.tolerance.eval;
        }
        if (job.tolerance.quadrature) {
            t["quadrature"] = *job.tolerance.quadrature;
        }
        if (job.tolerance.series) {
            t["series"] = *job.tolerance.series;
        }
        doc["tolerance"] = std::move(t);
    }
    if (!job.outputs.empty()) {
        json outs = json::array();
        for (const auto& o : job.outputs) {
            outs.push_back({{"format", o.format}, {"path", o.path}});
        }
        doc["outputs"] = std::move(outs);
    }
    return doc;
}

std::string spec_digest(const JobOperator& op) {
    json canonical = to_json(op);
    canonical.erase("name");
    const std::string text = canonical.dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace mlstar
