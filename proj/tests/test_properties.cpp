#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace scatlin;

TEST(Properties, RandomSuitePassesAtTThree) {
    PropertyOptions opt;
    opt.exhaustive = false;
    opt.samples = 300;
    const auto rs = run_property_suite(make_field(3, 1, 3), 1, opt);
    std::set<std::string> names;
    for (const auto& r : rs) {
        EXPECT_TRUE(r.passed()) << r.name << ": " << r.first_failure;
        EXPECT_GT(r.checked, 0u) << r.name;
        names.insert(r.name);
    }
    for (const char* n : {"trace_direct_sum", "pset_intersection", "h_conditions", "image_equations", "r_t_kernels",
                          "basis_components", "product_equivalence_a", "product_equivalence_b", "trace_membership"})
        EXPECT_TRUE(names.count(n)) << n;
    EXPECT_TRUE(all_passed(rs));
}

TEST(Properties, EvenTAndOtherSteps) {
    PropertyOptions opt;
    opt.exhaustive = false;
    opt.samples = 100;
    EXPECT_TRUE(all_passed(run_property_suite(make_field(3, 1, 4), 3, opt)));
    EXPECT_TRUE(all_passed(run_property_suite(make_field(3, 1, 3), 5, opt)));
}

TEST(Properties, SeedsAreReproducible) {
    PropertyOptions opt;
    opt.exhaustive = false;
    opt.samples = 50;
    opt.seed = 9;
    const auto a = run_property_suite(make_field(3, 1, 3), 1, opt);
    const auto b = run_property_suite(make_field(3, 1, 3), 1, opt);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_EQ(a[i].checked, b[i].checked);
}

TEST(Properties, RejectsBadStep) {
    EXPECT_THROW(run_property_suite(make_field(3, 1, 3), 3), Error);
}

TEST(Properties, FailureIsReported) {
    PropertyResult r("demo", "always fails");
    r.checked = 3;
    r.failed = 1;
    EXPECT_FALSE(r.passed());
    EXPECT_FALSE(all_passed({r}));
}
