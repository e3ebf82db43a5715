#pragma once

#include <string>
#include <vector>

namespace ttcalc {

/// One named check, e.g. `tt.eq1.m1.n1.z2` or `sbi.exact.n3`.
struct Check {
    std::string id;
    bool passed = true;
    std::string detail;     // witness on failure, optional note on success
    bool required = true;   // informational checks do not affect ok()
};

class Report {
public:
    void add(std::string id, bool passed, std::string detail = {}) {
        checks_.push_back({std::move(id), passed, std::move(detail)});
    }
    void pass(std::string id, std::string detail = {}) { add(std::move(id), true, std::move(detail)); }
    void fail(std::string id, std::string detail) { add(std::move(id), false, std::move(detail)); }
    /// Informational entry, listed but never failing the report.
    void note(std::string id, bool passed, std::string detail = {}) {
        checks_.push_back({std::move(id), passed, std::move(detail), false});
    }
    void append(const Report& other) { checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end()); }

    bool ok() const {
        for (const auto& c : checks_)
            if (c.required && !c.passed) return false;
        return true;
    }
    bool empty() const { return checks_.empty(); }
    const std::vector<Check>& checks() const { return checks_; }
    std::vector<Check> failures() const {
        std::vector<Check> out;
        for (const auto& c : checks_)
            if (c.required && !c.passed) out.push_back(c);
        return out;
    }
    const Check* find(const std::string& id) const {
        for (const auto& c : checks_)
            if (c.id == id) return &c;
        return nullptr;
    }

private:
    std::vector<Check> checks_;
};

}  // namespace ttcalc
