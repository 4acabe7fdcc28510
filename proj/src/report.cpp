#include "fracmus/report.hpp"

#include <algorithm>
#include <cmath>

namespace fracmus {

void VerificationReport::check_le(double lhs, double rhs, double tol) {
    ++checks;
    double scale = std::max(std::fabs(lhs), std::fabs(rhs));
    double slack = scale > 0.0 ? (rhs - lhs) / scale : 0.0;
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) slack = -std::numeric_limits<double>::infinity();
    if (slack < worst_slack) worst_slack = slack;
    if (slack < -tol) ++violations;
}

void VerificationReport::merge(const VerificationReport& other) {
    samples += other.samples;
    checks += other.checks;
    skipped += other.skipped;
    violations += other.violations;
    worst_slack = std::min(worst_slack, other.worst_slack);
    for (const auto& [k, v] : other.constants) constants[k] = v;
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

nlohmann::ordered_json VerificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["family"] = family;
    j["samples"] = samples;
    j["checks"] = checks;
    j["skipped"] = skipped;
    j["violations"] = violations;
    if (std::isfinite(worst_slack))
        j["worst_slack"] = worst_slack;
    else
        j["worst_slack"] = nullptr;
    nlohmann::ordered_json c = nlohmann::ordered_json::object();
    for (const auto& [k, v] : constants) {
        if (std::isfinite(v))
            c[k] = v;
        else
            c[k] = nullptr;
    }
    j["constants"] = c;
    j["notes"] = notes;
    return j;
}

}  // namespace fracmus
