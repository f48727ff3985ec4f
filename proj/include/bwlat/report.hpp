#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bwlat {

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus status);
CheckStatus check_status_from_string(const std::string& s);

/// One verified claim. `parameters` must be enough to rerun the check.
struct CheckItem {
    std::string check;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    CheckStatus status = CheckStatus::Pass;
    nlohmann::ordered_json witness;  // null when absent; required for failures
    std::string reason;              // for skipped items, or a short failure note
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
    double elapsed_ms = 0.0;
    std::uint64_t nodes = 0;
    std::optional<std::uint64_t> seed;

    bool passed() const { return status == CheckStatus::Pass; }
};

struct VerificationReport {
    std::vector<CheckItem> items;

    void add(CheckItem item) { items.push_back(std::move(item)); }
    bool all_passed() const;
    bool any_failed() const;
    std::size_t count(CheckStatus status) const;
};

nlohmann::ordered_json to_json(const CheckItem& item);
nlohmann::ordered_json to_json(const VerificationReport& report);
CheckItem check_item_from_json(const nlohmann::ordered_json& j);
VerificationReport report_from_json(const nlohmann::ordered_json& j);

std::string format_text(const VerificationReport& report);

/// Wall-clock stopwatch in milliseconds.
class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace bwlat
