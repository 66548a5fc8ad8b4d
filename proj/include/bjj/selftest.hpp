#pragma once

#include <string>
#include <vector>

namespace bjj {

/// One comparison of a production kernel against an independent dense oracle.
struct OracleCheck {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;

    bool passed() const { return error <= tolerance; }
};

/// Small dense-oracle suite used by the `oracle` CLI subcommand.
std::vector<OracleCheck> run_oracle_suite();

}  // namespace bjj
