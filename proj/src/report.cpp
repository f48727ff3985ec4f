#include "bwlat/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "bwlat/integer.hpp"

namespace bwlat {

std::string to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Skipped: return "skipped";
    }
    return "unknown";
}

CheckStatus check_status_from_string(const std::string& s) {
    if (s == "pass") return CheckStatus::Pass;
    if (s == "fail") return CheckStatus::Fail;
    if (s == "skipped") return CheckStatus::Skipped;
    throw std::invalid_argument("unknown check status '" + s + "'");
}

bool VerificationReport::all_passed() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.passed(); });
}

bool VerificationReport::any_failed() const { return count(CheckStatus::Fail) > 0; }

std::size_t VerificationReport::count(CheckStatus status) const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [status](const CheckItem& i) { return i.status == status; }));
}

nlohmann::ordered_json to_json(const CheckItem& item) {
    nlohmann::ordered_json j;
    j["check"] = item.check;
    j["parameters"] = item.parameters;
    j["status"] = to_string(item.status);
    if (!item.witness.is_null()) j["witness"] = item.witness;
    if (!item.reason.empty()) j["reason"] = item.reason;
    if (!item.details.empty()) j["details"] = item.details;
    j["elapsed_ms"] = item.elapsed_ms;
    j["nodes"] = item.nodes;
    if (item.seed) j["seed"] = *item.seed;
    return j;
}

nlohmann::ordered_json to_json(const VerificationReport& report) {
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    for (const auto& item : report.items) items.push_back(to_json(item));
    nlohmann::ordered_json j;
    j["items"] = std::move(items);
    j["summary"] = {{"passed", report.count(CheckStatus::Pass)},
                    {"failed", report.count(CheckStatus::Fail)},
                    {"skipped", report.count(CheckStatus::Skipped)}};
    return j;
}

CheckItem check_item_from_json(const nlohmann::ordered_json& j) {
    CheckItem item;
    item.check = j.at("check").get<std::string>();
    item.parameters = j.value("parameters", nlohmann::ordered_json::object());
    item.status = check_status_from_string(j.at("status").get<std::string>());
    if (j.contains("witness")) item.witness = j.at("witness");
    item.reason = j.value("reason", std::string{});
    item.details = j.value("details", nlohmann::ordered_json::object());
    item.elapsed_ms = j.value("elapsed_ms", 0.0);
    item.nodes = j.value("nodes", std::uint64_t{0});
    if (j.contains("seed")) item.seed = j.at("seed").get<std::uint64_t>();
    return item;
}

VerificationReport report_from_json(const nlohmann::ordered_json& j) {
    VerificationReport report;
    for (const auto& item : j.at("items")) report.add(check_item_from_json(item));
    return report;
}

namespace {

void format_counts(std::ostringstream& out, const nlohmann::ordered_json& counts) {
    for (const auto& [norm, count] : counts.items()) {
        out << "      norm " << dyadic_factorization(Integer(norm)) << ": " << count.dump() << '\n';
    }
}

}  // namespace

std::string format_text(const VerificationReport& report) {
    std::ostringstream out;
    for (const auto& item : report.items) {
        std::string status = to_string(item.status);
        std::transform(status.begin(), status.end(), status.begin(), ::toupper);
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.1f ms", item.elapsed_ms);
        out << '[' << status << "] " << item.check << ' ' << item.parameters.dump() << "  (" << timing;
        if (item.nodes > 0) out << ", " << item.nodes << " nodes";
        if (item.seed) out << ", seed " << *item.seed;
        out << ")\n";
        if (!item.reason.empty()) out << "    " << item.reason << '\n';
        for (const auto& [key, value] : item.details.items()) {
            if (value.is_object() && (key == "counts" || key.ends_with("_counts"))) {
                out << "    " << key << ":\n";
                format_counts(out, value);
            } else {
                out << "    " << key << ": " << value.dump() << '\n';
            }
        }
        if (!item.witness.is_null()) out << "    witness: " << item.witness.dump() << '\n';
    }
    out << report.count(CheckStatus::Pass) << " passed, " << report.count(CheckStatus::Fail) << " failed, "
        << report.count(CheckStatus::Skipped) << " skipped\n";
    return out.str();
}

}  // namespace bwlat
