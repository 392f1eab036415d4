#include "bbfs/report.hpp"

#include <iomanip>
#include <sstream>

namespace bbfs {

void VerificationReport::add(CheckEntry e) {
    if (asserted) pass = pass && e.pass;
    entries.push_back(std::move(e));
}

nlohmann::ordered_json VerificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["check"] = check;
    j["description"] = description;
    j["asserted"] = asserted;
    j["pass"] = pass;
    j["aggregates"] = aggregates;
    nlohmann::ordered_json es = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json je;
        je["id"] = e.id;
        je["pass"] = e.pass;
        je["values"] = e.values;
        if (!e.note.empty()) je["note"] = e.note;
        es.push_back(std::move(je));
    }
    j["entries"] = std::move(es);
    if (!notes.empty()) j["notes"] = notes;
    if (!config.is_null()) j["config"] = config;
    return j;
}

nlohmann::ordered_json reports_json(std::span<const VerificationReport> reports,
                                    const nlohmann::ordered_json& meta) {
    nlohmann::ordered_json root;
    root["schema_version"] = kReportSchemaVersion;
    root["meta"] = meta;
    bool all = true;
    for (const auto& r : reports) all = all && (!r.asserted || r.pass);
    root["pass"] = all;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    root["reports"] = std::move(arr);
    return root;
}

std::string reports_text_table(std::span<const VerificationReport> reports) {
    std::ostringstream os;
    os << std::left;
    for (const auto& r : reports) {
        os << "== " << r.check;
        if (!r.description.empty()) os << "  (" << r.description << ")";
        os << "  ->  " << (r.asserted ? (r.pass ? "PASS" : "FAIL") : "INFO") << "\n";
        for (const auto& [k, v] : r.aggregates)
            os << "   " << std::setw(38) << k << " = " << std::setprecision(12) << v
               << "\n";
        for (const auto& e : r.entries) {
            os << "   " << std::setw(30) << e.id << " " << (e.pass ? "ok  " : "FAIL");
            for (const auto& [k, v] : e.values)
                os << "  " << k << "=" << std::setprecision(9) << v;
            if (!e.note.empty()) os << "  # " << e.note;
            os << "\n";
        }
        for (const auto& n : r.notes) os << "   note: " << n << "\n";
    }
    return os.str();
}

std::string reports_plot_csv(std::span<const VerificationReport> reports) {
    std::ostringstream os;
    os.precision(17);
    os << "check,probe_id,x,value\n";
    for (const auto& r : reports) {
        for (const auto& e : r.entries) {
            auto xi = e.values.find("x");
            auto vi = e.values.find("value");
            if (xi == e.values.end() || vi == e.values.end()) continue;
            os << r.check << "," << e.id << "," << xi->second << "," << vi->second
               << "\n";
        }
    }
    return os.str();
}

}  // namespace bbfs
