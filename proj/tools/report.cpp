#include "report.hpp"

#include <cmath>

#ifndef SGAP_VERSION
#define SGAP_VERSION "0.0.0"
#endif

namespace sgap::cli {

nlohmann::json number(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

nlohmann::json to_json(const CheckOutcome& c) {
    return {
        {"type", "check"},
        {"check_name", c.check_name},
        {"space_name", c.space_name},
        {"applicable", c.applicable},
        {"passed", c.passed},
        {"orientation", c.orientation == Orientation::AtLeast ? "at_least" : "at_most"},
        {"lhs", number(c.lhs)},
        {"rhs", number(c.rhs)},
        {"slack_used", number(c.slack_used)},
        {"worst", {{"index", c.detail.vertex}, {"magnitude", number(c.detail.magnitude)}}},
        {"note", c.note},
    };
}

RunReport::RunReport(std::string command, std::uint64_t seed)
    : command_(std::move(command)), seed_(seed) {}

void RunReport::add_value(const std::string& name, double value, const std::string& kind,
                          bool applicable) {
    results_.push_back({{"type", "value"},
                        {"name", name},
                        {"value", applicable ? number(value) : nlohmann::json(nullptr)},
                        {"kind", kind},
                        {"applicable", applicable}});
    if (applicable) values_[name] = number(value);
}

void RunReport::add_bound(const BoundEntry& e) {
    const char* kind = e.kind == BoundKind::Model       ? "model"
                       : e.kind == BoundKind::Reference ? "reference"
                                                        : "closed_form";
    add_value(e.name, e.value, kind, e.applicable);
}

void RunReport::add_check(const CheckOutcome& c) {
    results_.push_back(cli::to_json(c));
    checks_.push_back(c);
}

void RunReport::add_text(const std::string& name, const std::string& text) {
    results_.push_back({{"type", "text"}, {"name", name}, {"text", text}});
}

nlohmann::json RunReport::to_json(double wall_time_seconds) const {
    return {
        {"schema_version", kSchemaVersion},
        {"command", command_},
        {"parameters", parameters_},
        {"results", results_},
        {"values", values_},
        {"versions", {{"artifact", SGAP_VERSION}, {"seed", seed_}}},
        {"wall_time_seconds", wall_time_seconds},
    };
}

}  // namespace sgap::cli
