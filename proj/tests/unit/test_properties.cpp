#include <gtest/gtest.h>

#include "dvar/errors.hpp"
#include "dvar/properties.hpp"

using namespace dvar;

class Suite : public ::testing::TestWithParam<std::string> {};

TEST_P(Suite, PassesAtSeedOne) {
    const auto r = run_suite(GetParam(), SuiteOptions{1, 0, 0});
    ASSERT_FALSE(r.checks.empty());
    for (const auto& c : r.checks)
        if (!c.passed) ADD_FAILURE() << c.name << ": " << c.detail;
    EXPECT_TRUE(r.ok()) << r.passed() << "/" << r.checks.size();
}

TEST_P(Suite, Deterministic) {
    const SuiteOptions o{5, 4, 0};
    const auto a = run_suite(GetParam(), o);
    const auto b = run_suite(GetParam(), o);
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        EXPECT_EQ(a.checks[i].passed, b.checks[i].passed);
        EXPECT_EQ(a.checks[i].detail, b.checks[i].detail);
    }
}

INSTANTIATE_TEST_SUITE_P(All, Suite, ::testing::ValuesIn(suite_names()),
                         [](const auto& info) { return info.param; });

TEST(SuiteNames, UnknownIsRejected) {
    EXPECT_THROW(run_suite("P9"), DomainError);
}
