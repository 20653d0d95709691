#pragma once

// Run reports written by every CLI subcommand, with a schema check and a
// JSON round trip.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace permon {

/// FNV-1a 64-bit hash as 16 lowercase hex digits.
inline std::string fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct CheckRecord {
    std::string name;
    bool passed = false;
    double measured = std::nan("");
    double tolerance = std::nan("");

    friend bool operator==(const CheckRecord& a, const CheckRecord& b) {
        auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
        return a.name == b.name && a.passed == b.passed && same(a.measured, b.measured) && same(a.tolerance, b.tolerance);
    }
};

struct RunReport {
    std::string command;
    std::string inputs_digest;
    std::vector<std::string> outputs;
    std::vector<CheckRecord> checks;
    nlohmann::json result = nlohmann::json::object();

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

namespace detail {

inline nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

inline double number_from(const nlohmann::json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

}  // namespace detail

inline nlohmann::json to_json(const RunReport& r) {
    nlohmann::json j;
    j["command"] = r.command;
    j["inputs_digest"] = r.inputs_digest;
    j["outputs"] = r.outputs;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name},
                               {"status", c.passed ? "pass" : "fail"},
                               {"measured", detail::number_or_null(c.measured)},
                               {"tolerance", detail::number_or_null(c.tolerance)}});
    j["result"] = r.result;
    return j;
}

/// Schema problems in a serialised report; empty means valid.
inline std::vector<std::string> validate_report(const nlohmann::json& j) {
    std::vector<std::string> errs;
    if (!j.is_object()) return {"report must be an object"};
    for (const auto& [key, _] : j.items())
        if (key != "command" && key != "inputs_digest" && key != "outputs" && key != "checks" && key != "result")
            errs.push_back("unknown key '" + key + "'");
    if (!j.contains("command") || !j["command"].is_string() || j["command"].get<std::string>().empty())
        errs.push_back("'command' must be a non-empty string");
    if (!j.contains("inputs_digest") || !j["inputs_digest"].is_string()) {
        errs.push_back("'inputs_digest' must be a string");
    } else {
        const auto d = j["inputs_digest"].get<std::string>();
        if (d.size() != 16 || d.find_first_not_of("0123456789abcdef") != std::string::npos)
            errs.push_back("'inputs_digest' must be 16 hex digits");
    }
    if (!j.contains("outputs") || !j["outputs"].is_array()) {
        errs.push_back("'outputs' must be an array");
    } else {
        for (const auto& o : j["outputs"])
            if (!o.is_string()) errs.push_back("'outputs' entries must be strings");
    }
    if (!j.contains("checks") || !j["checks"].is_array()) {
        errs.push_back("'checks' must be an array");
    } else {
        for (const auto& c : j["checks"]) {
            if (!c.is_object() || c.size() != 4 || !c.contains("name") || !c["name"].is_string() || !c.contains("status") ||
                !(c["status"] == "pass" || c["status"] == "fail") || !c.contains("measured") ||
                !(c["measured"].is_number() || c["measured"].is_null()) || !c.contains("tolerance") ||
                !(c["tolerance"].is_number() || c["tolerance"].is_null())) {
                errs.push_back("malformed check entry " + c.dump());
            }
        }
    }
    if (j.contains("result") && !j["result"].is_object()) errs.push_back("'result' must be an object");
    return errs;
}

inline RunReport report_from_json(const nlohmann::json& j) {
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.inputs_digest = j.at("inputs_digest").get<std::string>();
    r.outputs = j.at("outputs").get<std::vector<std::string>>();
    for (const auto& c : j.at("checks"))
        r.checks.push_back({c.at("name").get<std::string>(), c.at("status") == "pass", detail::number_from(c.at("measured")),
                            detail::number_from(c.at("tolerance"))});
    if (j.contains("result")) r.result = j.at("result");
    return r;
}

}  // namespace permon
