#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlstar/certifier.hpp"

namespace mlstar {

/// Malformed or inconsistent job file.
class JobParseError : public Error {
public:
    using Error::Error;
};

enum class Check { Starlike, Convex, MLStarlike, Lemma3 };

std::string_view to_string(Check c);
std::optional<Check> check_from_string(std::string_view s);

/// One named operator of a job.
///
/// With `unit_product` set the factor list is empty and the operator is the
/// identity F(z) = z; it exists to exercise the tooling end to end.
struct JobOperator {
    std::string name;
    OperatorSpec spec;
    bool unit_product = false;
    std::vector<Check> checks{Check::Starlike};
    double predicted_offset = 0.0;

    IntegralOperator build() const;
    friend bool operator==(const JobOperator&, const JobOperator&) = default;
};

struct ToleranceOverrides {
    std::optional<double> eval;
    std::optional<double> quadrature;
    std::optional<double> series;
    friend bool operator==(const ToleranceOverrides&, const ToleranceOverrides&) = default;
};

struct OutputRequest {
    std::string format;  // "text" or "json"
    std::string path;
    friend bool operator==(const OutputRequest&, const OutputRequest&) = default;
};

/// Parsed job document (JSON).
///
///     {
///       "operators": [{"name": "...", "zeta": 1, "checks": ["starlike"],
///                      "factors": [{"alpha": 2, "beta": 4, "lambda": 1, "eta": 0}]}],
///       "grid": {"radii": [...], "angles": 720, "r_max": 0.999},
///       "tolerance": {"eval": 1e-6, "quadrature": 1e-9, "series": 1e-14},
///       "outputs": [{"format": "json", "path": "report.json"}]
///     }
///
/// Unknown keys are rejected at every level.
struct JobFile {
    std::vector<JobOperator> operators;
    std::optional<std::vector<double>> radii;
    std::optional<int> angles;
    std::optional<double> r_max;
    ToleranceOverrides tolerance;
    std::vector<OutputRequest> outputs;

    /// Defaults overlaid with the job's grid section.
    GridSpec effective_grid() const;
    /// Defaults overlaid with the job's tolerance section.
    CertifyOptions effective_options() const;

    const JobOperator* find(std::string_view name) const;

    friend bool operator==(const JobFile&, const JobFile&) = default;
};

JobFile parse_job(const nlohmann::json& doc);
JobFile parse_job_text(const std::string& text);
JobFile load_job(const std::filesystem::path& path);

nlohmann::json to_json(const JobFile& job);
nlohmann::json to_json(const JobOperator& op);
nlohmann::json to_json(const GridSpec& grid);

/// 64-bit FNV-1a of the operator's canonical JSON, as 16 hex digits.
std::string spec_digest(const JobOperator& op);

}  // namespace mlstar
