// Copyright 2026 The mzi-herald Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "mzi/verify.hpp"
#include "testing.hpp"

using namespace mzi;

TEST(verify, single_sample_passes) {
    const VerifyReport r = run_checks(VerifyOptions{1, 0});
    EXPECT_TRUE(r.passed()) << r.failed_names();
    EXPECT_EQ(r.samples, 1);
    EXPECT_EQ(r.checks.size(), 9u);
    for (const CheckResult& c : r.checks) EXPECT_LE(c.max_deviation, c.tolerance) << c.name;
}

TEST(verify, seeded_run_passes) {
    EXPECT_NO_THROW(verify(VerifyOptions{5, 7}));
}

TEST(verify, reproducible_from_seed) {
    const VerifyReport a = run_checks(VerifyOptions{3, 42});
    const VerifyReport b = run_checks(VerifyOptions{3, 42});
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) EXPECT_EQ(a.checks[i].max_deviation, b.checks[i].max_deviation);
}

TEST(verify, zero_samples_rejected) {
    EXPECT_MZI_ERROR(run_checks(VerifyOptions{0, 0}), ErrorCode::InvalidArgument);
}

TEST(verify, tampered_tolerance_fails) {
    VerifyOptions opt{1, 0};
    opt.tolerance_scale = 0.0;
    const VerifyReport r = run_checks(opt);
    EXPECT_FALSE(r.passed());
    EXPECT_NE(r.failed_names().find("moment_way2_vs_oracle"), std::string::npos);
    EXPECT_MZI_ERROR(verify(opt), ErrorCode::VerificationFailed);
}
