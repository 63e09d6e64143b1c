#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace isingclt {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// parity, estimation, bounds, enumeration, taylor, clt
const std::vector<std::string>& suite_names();

/// Runs one property suite. Throws std::invalid_argument for unknown names.
std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed = 20261019);

}  // namespace isingclt
