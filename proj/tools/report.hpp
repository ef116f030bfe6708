#pragma once

#include "sgap/bounds.hpp"
#include "sgap/check_outcome.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace sgap::cli {

inline constexpr const char* kSchemaVersion = "1.0.0";

/// Builder for the run report; see schema/run_report.schema.json.
class RunReport {
public:
    RunReport(std::string command, std::uint64_t seed);

    nlohmann::json& parameters() { return parameters_; }

    void add_value(const std::string& name, double value, const std::string& kind = "value",
                   bool applicable = true);
    void add_bound(const BoundEntry& entry);
    void add_check(const CheckOutcome& outcome);
    void add_text(const std::string& name, const std::string& text);

    const std::vector<CheckOutcome>& checks() const { return checks_; }

    /// Serializes with the given wall time.
    nlohmann::json to_json(double wall_time_seconds) const;

private:
    std::string command_;
    std::uint64_t seed_;
    nlohmann::json parameters_ = nlohmann::json::object();
    nlohmann::json results_ = nlohmann::json::array();
    nlohmann::json values_ = nlohmann::json::object();
    std::vector<CheckOutcome> checks_;
};

nlohmann::json to_json(const CheckOutcome& c);

/// Finite doubles pass through; NaN and infinities become null.
nlohmann::json number(double x);

}  // namespace sgap::cli
