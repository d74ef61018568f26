#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlstar/cli.hpp"
#include "mlstar/jobfile.hpp"

using namespace mlstar;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::vector<const char*> argv{"mlstar"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(MLSTAR_TEST_BINARY_DIR) / "cli_scratch";
    fs::create_directories(dir);
    return dir / name;
}

std::string write_job(const std::string& name, const std::string& text) {
    const fs::path p = scratch(name);
    std::ofstream(p) << text;
    return p.string();
}

std::string corpus() { return (fs::path(MLSTAR_JOBS_DIR) / "corpus.json").string(); }
std::string identity() { return (fs::path(MLSTAR_JOBS_DIR) / "identity.json").string(); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

const char* kSmallJob = R"({
  "operators": [
    {"name": "s24", "zeta": 1, "factors": [{"alpha": 2, "beta": 4, "lambda": 1}], "checks": ["starlike"]}
  ],
  "grid": {"radii": [0.5, 0.99], "angles": 8, "r_max": 0.99}
})";

}  // namespace

TEST_CASE("eval: normalized, raw and origin values") {
    const Run r = run({"--format", "json", "eval", "--alpha", "2", "--beta", "3", "--z", "0.49", "--z", "0"});
    REQUIRE(r.code == cli::kOk);
    const json doc = json::parse(r.out);
    CHECK(doc["schema"] == 1);
    const auto& rows = doc["rows"];
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(rows[0]["value"][0].get<double>() - 2.0 * (std::cosh(0.7) - 1.0)) <= 1e-14);
    CHECK(rows[1]["value"][0].get<double>() == 0.0);
    CHECK(rows[1]["value"][1].get<double>() == 0.0);

    const Run raw = run({"--format", "json", "eval", "--raw", "--alpha", "1", "--beta", "1", "--z", "0.5"});
    REQUIRE(raw.code == cli::kOk);
    CHECK(std::abs(json::parse(raw.out)["rows"][0]["value"][0].get<double>() - std::exp(0.5)) <= 1e-14);

    const Run text = run({"eval", "--alpha", "1", "--beta", "1", "--z", "0.3+0.2i", "--z", "0.3,0.2", "--log-deriv"});
    REQUIRE(text.code == cli::kOk);
    const auto ls = lines(text.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[2].substr(0, 8) == "0.3 0.2 ");
    CHECK(ls[2] == ls[3]);
    // log-derivative of z e^z is 1 + z
    const Run js = run({"--format", "json", "eval", "--alpha", "1", "--beta", "1", "--z", "0.3+0.2i", "--log-deriv"});
    const json v = json::parse(js.out)["rows"][0]["value"];
    CHECK(std::abs(v[0].get<double>() - 1.3) <= 1e-14);
    CHECK(std::abs(v[1].get<double>() - 0.2) <= 1e-14);
}

TEST_CASE("eval: operator quantities from a job") {
    const std::string job = write_job("small.json", kSmallJob);
    const Run r = run({"--format", "json", "eval", "--job", job, "--operator", "s24", "--quantity", "star",
                       "--z", "0.25", "--z", "0"});
    REQUIRE(r.code == cli::kOk);
    const json doc = json::parse(r.out);
    CHECK(doc["rows"][1]["value"][0] == 1.0);
    // Real z keeps zF'/F real; near the origin it is 1 + O(z).
    CHECK(doc["rows"][0]["value"][1].get<double>() == 0.0);
    CHECK(std::abs(doc["rows"][0]["value"][0].get<double>() - 1.0) < 0.05);

    const Run id = run({"eval", "--job", identity(), "--operator", "identity", "--quantity", "F", "--z", "0.3,0.4"});
    REQUIRE(id.code == cli::kOk);
    CHECK(lines(id.out)[2].substr(0, 16) == "0.3 0.4 0.3 0.4 ");
}

TEST_CASE("eval: error rows give exit code 3, bad arguments exit code 2") {
    const Run outside = run({"eval", "--alpha", "1", "--beta", "1", "--z", "0.2", "--z", "0.9,0.9"});
    CHECK(outside.code == cli::kEvaluationError);
    CHECK(outside.out.find("ERROR") != std::string::npos);
    CHECK(run({"eval", "--alpha", "0.5", "--beta", "1", "--z", "0.2"}).code == cli::kUsageError);
    CHECK(run({"eval", "--alpha", "1", "--z", "0.2"}).code == cli::kUsageError);
    CHECK(run({"eval", "--alpha", "1", "--beta", "1", "--z", "abc"}).code == cli::kUsageError);
    CHECK(run({"eval", "--alpha", "1", "--beta", "1", "--z", "0.2", "--raw", "--deriv"}).code == cli::kUsageError);
    CHECK(run({"--format", "xml", "eval", "--alpha", "1", "--beta", "1", "--z", "0.2"}).code == cli::kUsageError);
    CHECK(run({}).code == cli::kUsageError);
    CHECK(run({"frobnicate"}).code == cli::kUsageError);
}

TEST_CASE("orders: corpus predictions and violated hypotheses") {
    const Run r = run({"--format", "json", "orders", corpus()});
    REQUIRE(r.code == cli::kOk);
    const json doc = json::parse(r.out);
    CHECK(doc["schema"] == 1);
    CHECK(doc["operators"][0]["starlike"]["delta"].get<double>() == doctest::Approx(0.5));
    CHECK(std::abs(doc["operators"][1]["convex"]["delta"].get<double>()) <= 1e-15);

    const std::string bad = write_job("violated.json", R"({"operators": [
        {"name": "wide", "factors": [{"alpha": 2, "beta": 4, "lambda": 0.3}], "checks": ["starlike"]}]})");
    const Run v = run({"orders", bad});
    CHECK(v.code == cli::kOk);
    CHECK(v.err.find("warning") != std::string::npos);
    CHECK(v.out.find("[hypotheses violated]") != std::string::npos);
}

TEST_CASE("certify: exit code contract") {
    CHECK(run({"certify", corpus()}).code == cli::kOk);

    // Claims stronger than the smallest corpus margin (about 0.475) must fail.
    json strong = json::parse(slurp(corpus()));
    for (auto& op : strong["operators"]) {
        op["predicted_offset"] = 0.6;
    }
    const Run neg = run({"certify", write_job("strong.json", strong.dump())});
    CHECK(neg.code == cli::kCertificationFailed);
    CHECK(neg.out.find("[fail]") != std::string::npos);

    const Run empty = run({"certify", write_job("empty.json", R"({"operators": []})")});
    CHECK(empty.code == cli::kUsageError);
    CHECK(run({"certify", scratch("missing.json").string()}).code == cli::kUsageError);

    // Unit product: hypotheses are not applicable, so the verdict is flagged.
    const Run id = run({"certify", identity()});
    CHECK(id.code == cli::kOk);
    CHECK(id.err.find("warning") != std::string::npos);
    CHECK(run({"--strict", "certify", identity()}).code == cli::kCertificationFailed);

    CHECK(run({"--r-max", "1.5", "certify", identity()}).code == cli::kUsageError);
    CHECK(run({"--grid-angles", "4", "certify", identity()}).code == cli::kUsageError);
}

TEST_CASE("certify: JSON report schema and stability") {
    const std::string job = write_job("small.json", kSmallJob);
    const Run a = run({"--format", "json", "--no-timing", "certify", job});
    const Run b = run({"--format", "json", "--no-timing", "certify", job});
    REQUIRE(a.code == cli::kOk);
    CHECK(a.out == b.out);
    const json doc = json::parse(a.out);
    CHECK(doc["schema"] == 1);
    CHECK(doc["version"] == "0.1.0");
    CHECK(doc["summary"]["verdict"] == "pass");
    REQUIRE(doc["certificates"].size() == 1);
    const json& c = doc["certificates"][0];
    for (const char* key : {"quantity", "predicted", "observed", "argmin", "margin", "grid", "eval_tolerance",
                            "verdict", "semantics", "hypothesis_ok", "failures", "operator"}) {
        CAPTURE(key);
        CHECK(c.contains(key));
    }
    CHECK_FALSE(c.contains("seconds"));
    CHECK(c["semantics"] == "sampled-min certificate");
    CHECK(c["grid"]["angles"] == 8);
    CHECK(doc["job"] == to_json(parse_job_text(kSmallJob)));
}

TEST_CASE("certify: job outputs are written") {
    const fs::path report = scratch("out_report.json");
    fs::remove(report);
    json job = json::parse(kSmallJob);
    job["outputs"] = json::array({{{"format", "json"}, {"path", report.string()}}});
    const Run r = run({"certify", write_job("with_outputs.json", job.dump())});
    CHECK(r.code == cli::kOk);
    REQUIRE(fs::exists(report));
    CHECK(json::parse(slurp(report))["schema"] == 1);
}

TEST_CASE("dump: rows, stub values and determinism") {
    const std::string job = write_job("small.json", kSmallJob);
    const Run r = run({"--r-max", "0.9", "dump", job, "--operator", "s24"});
    REQUIRE(r.code == cli::kOk);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 2 + 2 * 8);
    CHECK(ls[0].rfind("# mlstar dump spec-digest=", 0) == 0);
    CHECK(ls[0].find("operator=s24 quantity=starlike") != std::string::npos);
    CHECK(ls[1] == "radius,angle,re,im");
    CHECK(ls[2].rfind("0.5,0,", 0) == 0);

    // 1 radius, 8 angles.
    const Run one = run({"--r-max", "0.3", "dump", job, "--operator", "s24"});
    REQUIRE(one.code == cli::kOk);
    CHECK(lines(one.out).size() == 2 + 8);

    const Run id = run({"dump", identity(), "--operator", "identity"});
    REQUIRE(id.code == cli::kOk);
    ls = lines(id.out);
    REQUIRE(ls.size() == 2 + 2 * 16);
    for (std::size_t i = 2; i < ls.size(); ++i) {
        CHECK(ls[i].substr(ls[i].size() - 4) == ",1,0");
    }

    const fs::path f1 = scratch("dump1.csv");
    const fs::path f2 = scratch("dump2.csv");
    CHECK(run({"dump", job, "--operator", "s24", "--quantity", "lemma3", "--output", f1.string()}).code == cli::kOk);
    CHECK(run({"--threads", "3", "dump", job, "--operator", "s24", "--quantity", "lemma3", "--output",
               f2.string()}).code == cli::kOk);
    CHECK(slurp(f1) == slurp(f2));
    CHECK(slurp(f1).find("factor=0") != std::string::npos);

    CHECK(run({"dump", job, "--operator", "nope"}).code == cli::kUsageError);
    CHECK(run({"dump", job, "--operator", "s24", "--quantity", "lemma3", "--factor", "4"}).code ==
          cli::kUsageError);
}

TEST_CASE("job files: round trip and strict keys") {
    const JobFile job = load_job(corpus());
    REQUIRE(job.operators.size() == 4);
    CHECK(job.operators[0].checks.size() == 3);
    const JobFile again = parse_job(json::parse(to_json(job).dump()));
    CHECK(again == job);
    const JobFile small = parse_job_text(kSmallJob);
    CHECK(parse_job(to_json(small)) == small);
    CHECK(small.effective_grid().radii == std::vector<double>{0.5, 0.99});

    CHECK_THROWS_AS(parse_job_text(R"({"operators": [], "extra": 1})"), JobParseError);
    CHECK_THROWS_AS(parse_job_text(R"({"operators": [{"name": "a", "factors": [{"alpha": 2, "beta": 4, "lambda": 1, "gamma": 3}]}]})"),
                    JobParseError);
    CHECK_THROWS_AS(parse_job_text(R"({"operators": [{"name": "a", "factors": [{"alpha": 2, "beta": 4}]}]})"),
                    JobParseError);
    CHECK_THROWS_AS(parse_job_text(R"({"operators": [{"name": "a", "factors": [{"alpha": 2, "beta": 4, "lambda": 1}], "checks": ["bogus"]}]})"),
                    JobParseError);
    CHECK_THROWS_AS(parse_job_text("{not json"), JobParseError);

    const Run unknown = run({"certify", write_job("unknown.json", R"({"operators": [], "grids": {}})")});
    CHECK(unknown.code == cli::kUsageError);
    CHECK(unknown.err.find("unknown key 'grids'") != std::string::npos);
}

TEST_CASE("spec digest ignores the operator name only") {
    JobFile job = parse_job_text(kSmallJob);
    JobOperator a = job.operators[0];
    JobOperator b = a;
    b.name = "renamed";
    CHECK(spec_digest(a) == spec_digest(b));
    b.spec.factors[0].lambda = 1.5;
    CHECK(spec_digest(a) != spec_digest(b));
    CHECK(spec_digest(a).size() == 16);
}
