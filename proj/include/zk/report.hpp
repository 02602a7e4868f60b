#pragma once

// Structured verification outcomes shared by every suite, plus text / JSON
// serialization for the CLI.

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

namespace zk {

enum class Status { Pass, Fail, Corrected, AbstainedNumericPass };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Corrected: return "corrected";
        case Status::AbstainedNumericPass: return "abstained-numeric-pass";
    }
    return "?";
}

struct CheckResult {
    std::string id;
    std::string anchor;        // formula reference the check verifies
    Status status = Status::Pass;
    std::string mode = "symbolic";
    std::string residual;      // printed residual when not empty
    double max_abs = 0;
    double max_rel = 0;
    std::vector<std::string> notes;
    long ms = 0;

    bool ok() const { return status != Status::Fail; }

    static CheckResult pass(std::string id, std::string anchor) {
        CheckResult r;
        r.id = std::move(id);
        r.anchor = std::move(anchor);
        return r;
    }
    static CheckResult fail(std::string id, std::string anchor, std::string residual) {
        CheckResult r;
        r.id = std::move(id);
        r.anchor = std::move(anchor);
        r.status = Status::Fail;
        r.residual = std::move(residual);
        return r;
    }
    CheckResult& note(std::string n) {
        notes.push_back(std::move(n));
        return *this;
    }
};

struct ReportDocument {
    std::string version = "1.0.0";
    std::string command;
    std::vector<CheckResult> entries;

    bool verdict_pass() const {
        for (auto& e : entries)
            if (!e.ok()) return false;
        return true;
    }

    int fail_count() const {
        int n = 0;
        for (auto& e : entries)
            if (!e.ok()) ++n;
        return n;
    }
    int corrected_count() const {
        int n = 0;
        for (auto& e : entries)
            if (e.status == Status::Corrected) ++n;
        return n;
    }

    // JSON reports suppress wall-clock timing (ms: 0) so identical seeded runs
    // are byte-identical; the text report carries real timings.
    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["version"] = version;
        j["command"] = command;
        j["entries"] = nlohmann::ordered_json::array();
        for (auto& e : entries) {
            nlohmann::ordered_json je;
            je["id"] = e.id;
            je["anchor"] = e.anchor;
            je["status"] = status_name(e.status);
            je["residual"] = {{"mode", e.mode}, {"max_abs", e.max_abs}, {"max_rel", e.max_rel}};
            if (!e.residual.empty()) je["residual"]["form"] = e.residual;
            if (!e.notes.empty()) je["notes"] = e.notes;
            je["ms"] = 0;
            j["entries"].push_back(je);
        }
        j["verdict"] = verdict_pass() ? "pass" : "fail";
        return j;
    }

    std::string to_text() const {
        std::string out;
        for (auto& e : entries) {
            out += "[";
            out += status_name(e.status);
            out += "] ";
            out += e.id;
            out += "  (";
            out += e.anchor;
            out += ")";
            if (!e.residual.empty()) out += "  residual: " + e.residual;
            if (e.mode == "numeric") {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.3g", e.max_rel);
                out += std::string("  max_rel=") + buf;
            }
            for (auto& n : e.notes) out += "\n    note: " + n;
            out += "  [" + std::to_string(e.ms) + " ms]";
            out += "\n";
        }
        out += verdict_pass() ? "verdict: pass\n" : "verdict: fail\n";
        return out;
    }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace zk
