#include "cvhbac/properties.hpp"

#include <gtest/gtest.h>

using namespace cvhbac;

namespace {

SuiteOptions small(bool inject = false, int jobs = 1) {
  SuiteOptions o;
  o.trials = 300;
  o.seed = 9;
  o.jobs = jobs;
  o.inject_failure = inject;
  return o;
}

}  // namespace

TEST(Properties, RandomSpecRanges) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const MachineSpec s = random_spec(rng);
    EXPECT_LE(s.machine_modes(), 5);
    EXPECT_GE(s.lambda(), 1.1 - 1e-12);
    EXPECT_LE(s.lambda(), 50.0 + 1e-9);
    EXPECT_TRUE(s.can_cool());
  }
}

TEST(Properties, AllSuitesPass) {
  for (const PropertyReport& r : run_all_suites(small())) {
    EXPECT_TRUE(r.passed()) << r.name << " worst margin " << r.worst_margin;
    EXPECT_GT(r.checked, 0) << r.name;
  }
}

TEST(Properties, InjectedFailureIsDetected) {
  for (const PropertyReport& r : run_all_suites(small(true))) {
    EXPECT_FALSE(r.passed()) << r.name;
    EXPECT_GT(r.violations, 0) << r.name;
  }
}

TEST(Properties, ResultsIndependentOfWorkerCount) {
  const auto a = run_all_suites(small(false, 1));
  const auto b = run_all_suites(small(false, 4));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].checked, b[i].checked);
    EXPECT_EQ(a[i].violations, b[i].violations);
    EXPECT_EQ(a[i].worst_margin, b[i].worst_margin);
  }
}
