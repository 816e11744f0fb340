#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mcalc::numcheck {

/// Outcome of one numerical check. pass <=> rel_error <= tolerance, where
/// rel_error is abs_error divided by the report's error scale: |reference| by
/// default, 1 when the reference is exactly zero (an absolute test).
struct VerifyReport {
    std::string name;
    double estimate = 0;
    double reference = 0;
    double abs_error = 0;
    double rel_error = 0;
    double tolerance = 0;
    bool pass = false;
    std::uint64_t seed = 0;
    std::optional<double> h;
    std::string dims;
    std::vector<std::pair<std::string, double>> info;  ///< informational extras
};

/// Fills errors and verdict. `scale` overrides the default error scale, e.g.
/// 1 + |reference| for a mixed absolute/relative test.
VerifyReport make_report(std::string name, double estimate, double reference, double tolerance, std::uint64_t seed,
                         std::optional<double> h = {}, std::string dims = {}, std::optional<double> scale = {});

nlohmann::ordered_json to_json(const VerifyReport& r);
/// One JSON object on one line, fields in a fixed order.
std::string to_json_line(const VerifyReport& r);

bool all_pass(const std::vector<VerifyReport>& rs);

}  // namespace mcalc::numcheck
