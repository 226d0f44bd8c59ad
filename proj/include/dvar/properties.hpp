#pragma once

// Seeded numerical checks of the structural properties of the directional
// VaR estimators. Each suite draws its own instances from the master seed
// and reports one check per instance.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dvar {

struct SuiteCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<SuiteCheck> checks;
    /// Fraction of checks that must pass; below 1 only for asymptotic suites.
    double required_rate = 1.0;

    std::size_t passed() const;
    double pass_rate() const;
    bool ok() const;
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    /// 0 means the suite's default instance count.
    std::size_t instances = 0;
    /// 0 means default_thread_count(). Results do not depend on it.
    std::size_t threads = 0;
};

/// P1 .. P7, marginal, eq15, bound.
const std::vector<std::string>& suite_names();

/// Throws DomainError for an unknown suite.
SuiteReport run_suite(std::string_view name, const SuiteOptions& opts = {});

}  // namespace dvar
