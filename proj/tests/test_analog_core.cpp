// Copyright 2026 The ptcsim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

namespace ptc
{
namespace
{

const double r2 = std::sqrt(2.0) / 2.0;

TEST(Mzm, Encoding)
{
    EXPECT_EQ(mzm_encode(0.0, Field{1.0}), Field{0.0});
    EXPECT_EQ(mzm_encode(1.0, Field{1.0}), Field{1.0});
    EXPECT_NEAR(std::abs(mzm_encode(1.0, Field{1.0}, 10.0)), std::sqrt(0.9), 1e-15);
    EXPECT_THROW(mzm_encode(1.5, Field{1.0}), RangeError);
}

TEST(Engine, TransferExamples)
{
    auto o = engine_transfer({Field{1.0}, Field{0.0}});
    EXPECT_NEAR(o.e1.real(), r2, 1e-15);
    EXPECT_NEAR(o.e2.imag(), r2, 1e-15);
    EXPECT_NEAR(std::norm(o.e1), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(o.e2), 0.5, 1e-15);

    o = engine_transfer({Field{0.6}, Field{0.2}});
    EXPECT_NEAR(std::abs(o.e1 - Field{r2 * 0.8}), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(o.e2 - Field{0.0, r2 * 0.4}), 0.0, 1e-15);

    o = engine_transfer({Field{0.3}, Field{0.3}});
    EXPECT_NEAR(std::abs(o.e1 - Field{std::sqrt(2.0) * 0.3}), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(o.e2), 0.0, 1e-15);
}

TEST(Engine, MatrixIsCouplerTimesPhase)
{
    // Independent construction: 50:50 coupler after a -pi/2 shift on arm 2.
    const Field j{0.0, 1.0};
    const Field dc[2][2] = {{r2, j * r2}, {j * r2, r2}};
    const Field ps[2] = {1.0, -j};
    const auto &m = dot_engine_matrix();
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            EXPECT_NEAR(std::abs(m[a][b] - dc[a][b] * ps[b]), 0.0, 1e-15);
        }
    }
}

TEST(Engine, BalancedDetection)
{
    const auto out = balanced_detect(engine_transfer({Field{0.6}, Field{0.2}}), 1.0);
    // Fields in sqrt(mW): i = R (|e1|^2 - |e2|^2) mW = 2 x y mA.
    EXPECT_NEAR(out.i_out_a, 2.0 * 0.12 * 1e-3, 1e-18);
    EXPECT_NEAR(balanced_detect(engine_transfer({Field{0.0}, Field{0.7}}), 1.0).i_out_a, 0.0, 1e-18);
    const auto a = balanced_detect(engine_transfer({Field{0.6}, Field{-0.4}}), 1.0).i_out_a;
    const auto b = balanced_detect(engine_transfer({Field{-0.4}, Field{0.6}}), 1.0).i_out_a;
    EXPECT_DOUBLE_EQ(a, b);
}

TEST(Engine, RandomPairsMatchClosedForm)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 0; n < 2000; ++n) {
        const double x = u(rng);
        const double y = u(rng);
        const double loss = 3.0 * (u(rng) + 1.0);
        const FieldPair in{Field{x}, Field{y}};
        const auto out = engine_transfer(in);
        EXPECT_NEAR(std::norm(out.e1) + std::norm(out.e2), x * x + y * y, 1e-12 * (x * x + y * y) + 1e-300);
        const double i = balanced_detect(out, 0.8, 0.0, loss).i_out_a;
        const double expect = 2.0 * 0.8 * std::pow(10.0, -loss / 10.0) * x * y * 1e-3;
        EXPECT_NEAR(i, expect, 1e-12 * std::abs(expect) + 1e-24);
        EXPECT_NEAR(balanced_detect(engine_transfer({Field{-x}, Field{y}}), 0.8, 0.0, loss).i_out_a, -i, 1e-20);
    }
}

TEST(Integrator, SizingAnchor)
{
    EXPECT_NEAR(size_capacitor(110e-6, 60, 5e9, 0.24), 5500e-15, 1e-27);
    EXPECT_NEAR(size_capacitor(110e-6, 1, 5e9, 0.24), 91.6667e-15, 1e-19);
    EXPECT_NEAR(size_capacitor(110e-6, 120, 5e9, 0.24), 2.0 * size_capacitor(110e-6, 60, 5e9, 0.24), 1e-27);
    EXPECT_THROW(size_capacitor(0.0, 60, 5e9, 0.24), DomainError);
}

TEST(Integrator, RailAndSaturation)
{
    auto s = IntegratorState::make(5500e-15, 0.24, 61, 2);
    for (int t = 0; t < 60; ++t) {
        s = integrate_step(s, 110e-6, 2e-10);
    }
    EXPECT_NEAR(s.v, 0.24, 1e-12);
    EXPECT_FALSE(s.saturated);
    s = integrate_step(s, 110e-6, 2e-10);
    EXPECT_DOUBLE_EQ(s.v, 0.24);
    EXPECT_TRUE(s.saturated);

    auto z = IntegratorState::make(1e-12, 0.24, 60, 2);
    const auto z1 = integrate_step(z, 0.0, 2e-10);
    EXPECT_EQ(z1.v, 0.0);
    EXPECT_EQ(z1.steps_accumulated, 1);
}

TEST(Integrator, PastWindowIsSchedulingError)
{
    auto s = IntegratorState::make(1e-12, 0.24, 2, 0);
    s = integrate_step(s, 0.0, 1e-10);
    s = integrate_step(s, 0.0, 1e-10);
    EXPECT_THROW(integrate_step(s, 0.0, 1e-10), SchedulingError);
}

TEST(Integrator, ResetClearsAndIsIdempotent)
{
    auto s = IntegratorState::make(1e-15, 0.24, 60, 2);
    s = integrate_step(s, 1.0, 1e-10);
    ASSERT_TRUE(s.saturated);
    const auto r = reset(s);
    EXPECT_EQ(r.v, 0.0);
    EXPECT_EQ(r.steps_accumulated, 0);
    EXPECT_FALSE(r.saturated);
    EXPECT_EQ(reset(r), r);
}

TEST(Integrator, ClampNeverExceedsRail)
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    auto s = IntegratorState::make(50e-15, 0.24, 1000, 0);
    for (int t = 0; t < 1000; ++t) {
        s = integrate_step(s, u(rng), 2e-10);
        EXPECT_LE(std::abs(s.v), 0.24);
    }
}

EngineConfig anchor_engine()
{
    // Single-engine peak 110 uA, C sized for T = 60 at 5 GHz.
    return ideal_engine(110e-6, 5e9, 60, 2, 0.24, size_capacitor(110e-6, 60, 5e9, 0.24));
}

TEST(EngineSequence, Examples)
{
    const auto cfg = anchor_engine();
    const std::vector<double> x{1.0, 0.0, -1.0};
    const std::vector<double> y{1.0, 1.0, 1.0};
    EXPECT_NEAR(run_engine_sequence(x, y, cfg) / cfg.normalization(), 0.0, 1e-12);

    const std::vector<double> ones(60, 1.0);
    EXPECT_NEAR(run_engine_sequence(ones, ones, cfg), 0.24, 1e-12);
}

TEST(EngineSequence, MatchesDotProduct)
{
    const auto cfg = anchor_engine();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 0; n < 200; ++n) {
        std::vector<double> x(8);
        std::vector<double> y(8);
        double dot = 0.0;
        for (int k = 0; k < 8; ++k) {
            x[k] = u(rng);
            y[k] = u(rng);
            dot += x[k] * y[k];
        }
        EXPECT_NEAR(run_engine_sequence(x, y, cfg) / cfg.normalization(), dot, 1e-9 * std::max(1.0, std::abs(dot)));
    }
}

TEST(EngineSequence, BilinearAndSignSymmetric)
{
    const auto cfg = anchor_engine();
    const std::vector<double> x1{0.1, -0.3, 0.2};
    const std::vector<double> x2{0.05, 0.2, -0.4};
    const std::vector<double> y{0.7, 0.5, -0.2};
    std::vector<double> sum(3);
    std::vector<double> neg(3);
    for (int k = 0; k < 3; ++k) {
        sum[k] = x1[k] + x2[k];
        neg[k] = -x1[k];
    }
    const double v1 = run_engine_sequence(x1, y, cfg);
    const double v2 = run_engine_sequence(x2, y, cfg);
    EXPECT_NEAR(run_engine_sequence(sum, y, cfg), v1 + v2, 1e-15);
    EXPECT_NEAR(run_engine_sequence(neg, y, cfg), -v1, 1e-15);
}

TEST(EngineSequence, FiniteExtinctionRatioIsNormalizedOut)
{
    auto cfg = anchor_engine();
    cfg.extinction_ratio_db = 6.0;
    const std::vector<double> x{0.5, -0.25};
    const std::vector<double> y{0.5, 0.5};
    EXPECT_NEAR(run_engine_sequence(x, y, cfg) / cfg.normalization(), 0.125, 1e-12);
}

} // namespace
} // namespace ptc
