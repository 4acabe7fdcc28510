#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace fracmus {

// Outcome of a randomized inequality suite.
struct VerificationReport {
    std::string suite;
    std::string family;
    std::int64_t samples = 0;
    std::int64_t checks = 0;
    std::int64_t skipped = 0;
    std::int64_t violations = 0;
    // Smallest relative slack (rhs - lhs) / scale seen; negative means a
    // violation beyond tolerance.
    double worst_slack = std::numeric_limits<double>::infinity();
    std::map<std::string, double> constants;
    std::vector<std::string> notes;

    // Records lhs <= rhs with relative tolerance tol.
    void check_le(double lhs, double rhs, double tol);
    void merge(const VerificationReport& other);
    bool ok() const { return violations == 0; }
    nlohmann::ordered_json to_json() const;
};

}  // namespace fracmus
