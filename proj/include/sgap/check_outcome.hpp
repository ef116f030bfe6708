#pragma once

#include <string>

namespace sgap {

/// AtLeast: passed iff lhs >= rhs - slack_used. AtMost: passed iff lhs <= rhs + slack_used.
enum class Orientation { AtLeast, AtMost };

struct Violation {
    long vertex = -1;        // worst vertex (or sample index), -1 when not pointwise
    double magnitude = 0.0;  // signed margin there; positive means violated before slack
};

struct CheckOutcome {
    std::string check_name;
    std::string space_name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack_used = 0.0;
    Orientation orientation = Orientation::AtLeast;
    bool applicable = true;
    bool passed = false;
    Violation detail;
    std::string note;  // reason when not applicable, or extra context
};

/// Fills `passed` from lhs, rhs, slack and orientation.
inline void settle(CheckOutcome& c) {
    c.passed = c.applicable && (c.orientation == Orientation::AtLeast
                                    ? c.lhs >= c.rhs - c.slack_used
                                    : c.lhs <= c.rhs + c.slack_used);
}

inline CheckOutcome not_applicable(std::string check, std::string space, std::string why) {
    CheckOutcome c;
    c.check_name = std::move(check);
    c.space_name = std::move(space);
    c.applicable = false;
    c.passed = false;
    c.note = std::move(why);
    return c;
}

}  // namespace sgap
