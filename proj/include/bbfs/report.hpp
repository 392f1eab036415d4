#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace bbfs {

/// One labelled record inside a check: an inequality, a probe ratio, a
/// series term. `values` keys are check-specific ("lhs", "rhs", "slack",
/// "x", "value", ...).
struct CheckEntry {
    std::string id;
    bool pass = true;
    std::map<std::string, double> values;
    std::string note;
};

/// Per-check record of estimated constants, slacks and pass/fail, plus the
/// configuration snapshot needed to rerun it.
struct VerificationReport {
    std::string check;
    std::string description;
    bool asserted = true;  // informational reports never fail a run
    bool pass = true;
    std::vector<CheckEntry> entries;
    std::map<std::string, double> aggregates;
    nlohmann::ordered_json config;
    std::vector<std::string> notes;

    void add(CheckEntry e);
    void aggregate(const std::string& key, double v) { aggregates[key] = v; }
    nlohmann::ordered_json to_json() const;
};

inline constexpr int kReportSchemaVersion = 1;

nlohmann::ordered_json reports_json(std::span<const VerificationReport> reports,
                                    const nlohmann::ordered_json& meta);
std::string reports_text_table(std::span<const VerificationReport> reports);
/// Plot rows: check, probe_id, x, value (entries that carry "x"/"value").
std::string reports_plot_csv(std::span<const VerificationReport> reports);

}  // namespace bbfs
