// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "checks.hpp"
#include "oracles.hpp"

TEST(Listings, BranchEvaluatorSelectsOneBranch) {
  auto text = oracle::read_fixture("branches.c");
  auto acc = oracle::pragma_lines(oracle::preprocess(text, {"OFFLOAD_BY_OPENACC", "OFFLOAD_BY_OPENACC_KERNELS"}));
  EXPECT_EQ(acc, (std::vector<std::string>{"#pragma acc kernels", "#pragma acc loop", "#pragma acc kernels",
                                           "#pragma acc loop"}));
  auto dist = oracle::pragma_lines(oracle::preprocess(text, {"OFFLOAD_BY_OPENMP_TARGET"}));
  EXPECT_EQ(dist, (std::vector<std::string>{"#pragma omp target teams distribute parallel for",
                                            "#pragma omp target teams distribute parallel for"}));
  EXPECT_TRUE(oracle::pragma_lines(oracle::preprocess(text, {})).empty());
}

TEST(Listings, SplitExample) {
  auto v = checks::split_example();
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Listings, AnnotatedLoopReproducesBranches) {
  auto v = checks::listing_equivalence();
  EXPECT_TRUE(v.pass) << v.detail << "\n" << (v.failures.empty() ? "" : v.failures[0]);
}
