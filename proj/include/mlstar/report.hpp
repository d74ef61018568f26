#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mlstar/jobfile.hpp"

namespace mlstar {

inline constexpr int kReportSchema = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

/// One certificate plus where it came from.
struct ReportEntry {
    std::string operator_name;
    std::optional<std::size_t> factor_index;  // set for per-factor checks
    Certificate certificate;
    double seconds = 0.0;
};

struct ReportDocument {
    JobFile job;
    GridSpec grid;
    CertifyOptions options;
    std::vector<ReportEntry> entries;

    /// pass iff every certificate passes; otherwise fail if any failed,
    /// else hypothesis-violated.
    Verdict summary() const;
};

nlohmann::json to_json(const Certificate& cert);
/// include_timing = false drops the per-certificate wall times so that
/// identical runs serialize identically.
nlohmann::json to_json(const ReportDocument& report, bool include_timing = true);
void write_text(std::ostream& os, const ReportDocument& report, bool include_timing = true);

/// Shortest decimal string that reads back to exactly `x`.
std::string format_double(double x);

}  // namespace mlstar
