#include "mcalc/numcheck/report.hpp"

#include <algorithm>
#include <cmath>

namespace mcalc::numcheck {

VerifyReport make_report(std::string name, double estimate, double reference, double tolerance, std::uint64_t seed,
                         std::optional<double> h, std::string dims, std::optional<double> scale) {
    VerifyReport r;
    r.name = std::move(name);
    r.estimate = estimate;
    r.reference = reference;
    r.tolerance = tolerance;
    r.seed = seed;
    r.h = h;
    r.dims = std::move(dims);
    r.abs_error = std::abs(estimate - reference);
    const double s = scale ? *scale : (reference == 0 ? 1.0 : std::abs(reference));
    r.rel_error = r.abs_error / s;
    r.pass = std::isfinite(r.rel_error) && r.rel_error <= tolerance;
    return r;
}

nlohmann::ordered_json to_json(const VerifyReport& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["estimate"] = r.estimate;
    j["reference"] = r.reference;
    j["rel_error"] = r.rel_error;
    j["tolerance"] = r.tolerance;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["seed"] = r.seed;
    j["abs_error"] = r.abs_error;
    if (r.h) j["h"] = *r.h;
    if (!r.dims.empty()) j["dims"] = r.dims;
    for (const auto& [k, v] : r.info) j[k] = v;
    return j;
}

std::string to_json_line(const VerifyReport& r) { return to_json(r).dump(); }

bool all_pass(const std::vector<VerifyReport>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const VerifyReport& r) { return r.pass; });
}

}  // namespace mcalc::numcheck
