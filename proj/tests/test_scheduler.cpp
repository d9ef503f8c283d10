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

#include <random>
#include <set>

#include "test_support.hpp"

namespace ptc
{
namespace
{

using test::custom_sl;
using test::small_arch;

Matrix uniform(std::size_t r, std::size_t c, std::mt19937_64 &rng, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(r, c);
    for (double &v : m.flat()) v = u(rng);
    return m;
}

TEST(Plan, HeadlineWorkload)
{
    const ArchConfig a;
    const auto s = plan(192, 36, 192, a);
    EXPECT_EQ(s.block_count(), 36);
    EXPECT_EQ(s.rounds, 6);
    EXPECT_EQ(s.p, 6);
    const auto c = cycle_count(s, a);
    EXPECT_EQ(c.compute_cycles, 36);
    EXPECT_EQ(c.compute_cycles, 192LL * 192 * 36 / (6 * 6 * 32 * 32));
    EXPECT_EQ(c.readouts, 36);
    EXPECT_EQ(c.reset_cycles, 72);
}

TEST(Plan, MinimalWorkload)
{
    const auto a = small_arch(2, 3, 4);
    const auto c = cycle_count(4, 3, 4, a);
    EXPECT_EQ(plan(4, 3, 4, a).block_count(), 1);
    EXPECT_EQ(plan(4, 3, 4, a).rounds, 1);
    EXPECT_EQ(c.compute_cycles, 1);
    EXPECT_EQ(c.readouts, 1);
}

TEST(Plan, ReductionPadding)
{
    const auto s = plan(8, 13, 8, small_arch(1, 6, 8));
    EXPECT_EQ(s.p, 3);
    EXPECT_EQ(s.n_pad, 18);
}

TEST(Plan, EpochsAndDegenerateT)
{
    auto a = small_arch(1, 2, 4);
    a.t_int = 4;
    auto s = plan(8, 22, 4, a);
    ASSERT_EQ(s.p, 11);
    EXPECT_EQ(s.epoch_lengths, (std::vector<int>{4, 4, 3}));
    EXPECT_EQ(cycle_count(s, a).readouts, 2 * 3);

    a.t_int = 1;
    s = plan(8, 22, 4, a);
    const auto c = cycle_count(s, a);
    EXPECT_EQ(c.readouts, c.compute_cycles);
    a.t_rst = 0;
    EXPECT_EQ(cycle_count(s, a).reset_cycles, 0);
}

TEST(Plan, WallCycles)
{
    auto a = small_arch(2, 2, 4);
    a.t_int = 3;
    a.t_rst = 2;
    const auto s = plan(16, 14, 8, a); // 8 blocks, 4 rounds, P = 7, 3 epochs
    EXPECT_EQ(cycle_count(s, a).wall_cycles, 4 * 7 + 4 * 3 * 2);
    a.pipelined_readout = false;
    EXPECT_EQ(cycle_count(s, a).wall_cycles, 4 * 7 + 4 * 3 * 3);
}

TEST(Plan, CoverageAndNoDoubleBooking)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dim(1, 70);
    std::uniform_int_distribution<int> small(1, 5);
    for (int n = 0; n < 100; ++n) {
        const auto a = small_arch(small(rng), small(rng), small(rng));
        const auto s = plan(dim(rng), dim(rng), dim(rng), a);
        std::set<std::pair<int, int>> seen;
        std::set<std::pair<int, int>> booked;
        for (const auto &b : s.blocks) {
            EXPECT_TRUE(seen.insert({b.block_row, b.block_col}).second);
            EXPECT_TRUE(booked.insert({b.round, b.tile}).second);
            EXPECT_LT(b.tile, a.r_tiles);
            EXPECT_LT(b.round, s.rounds);
        }
        EXPECT_EQ(static_cast<std::int64_t>(seen.size()), s.block_rows * s.block_cols);
        int total = 0;
        for (const int e : s.epoch_lengths) {
            EXPECT_GE(e, 1);
            EXPECT_LE(e, a.t_int);
            total += e;
        }
        EXPECT_EQ(total, s.p);
    }
}

TEST(Plan, DivisibleCycleFormula)
{
    for (int r = 1; r <= 3; ++r) {
        for (int c = 1; c <= 3; ++c) {
            for (int k : {2, 4, 8}) {
                const auto a = small_arch(r, c, k);
                const std::int64_t m = 2LL * k * r;
                const std::int64_t q = 3LL * k;
                const std::int64_t n = 5LL * c;
                // Divisible means the block count is a multiple of R as well.
                EXPECT_EQ(cycle_count(m, n, q, a).compute_cycles, m * q * n / (r * c * k * k));
            }
        }
    }
}

TEST(Hierarchical, EqualsDirectProduct)
{
    std::mt19937_64 rng(4);
    for (int n = 0; n < 50; ++n) {
        std::uniform_int_distribution<int> dim(1, 40);
        const Matrix x = uniform(dim(rng), dim(rng), rng);
        const Matrix y = uniform(x.cols(), dim(rng), rng);
        const auto a = small_arch(1 + n % 3, 1 + n % 4, 2 + n % 5);
        EXPECT_LT(relative_frobenius_error(hierarchical_matmul(x, y, a), matmul(x, y)), 1e-13);
    }
}

TEST(Simulate, IdentityOperand)
{
    std::mt19937_64 rng(5);
    const auto a = small_arch(2, 2, 8);
    Matrix eye(8, 8);
    for (int i = 0; i < 8; ++i) eye(i, i) = 1.0;
    const Matrix y = uniform(8, 5, rng);
    const auto res = simulate_gemm({eye, y}, a, custom_sl(), NoiseModel{}, SimMode::Ideal);
    EXPECT_LT(relative_frobenius_error(res.z_hat, y), 1e-9);
}

TEST(Simulate, IdealMatchesMatmul)
{
    std::mt19937_64 rng(6);
    const Matrix x = uniform(64, 36, rng);
    const Matrix y = uniform(36, 64, rng);
    const auto res = simulate_gemm({x, y}, ArchConfig{}, custom_sl(), NoiseModel{}, SimMode::Ideal);
    EXPECT_LT(relative_frobenius_error(res.z_hat, matmul(x, y)), 1e-6);
    EXPECT_EQ(res.stats.saturation_events, 0);
}

TEST(Simulate, OracleEquivalenceProperty)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim(1, 64);
    std::uniform_int_distribution<int> rc(1, 3);
    std::uniform_int_distribution<int> kk(1, 8);
    for (int n = 0; n < 40; ++n) {
        auto a = small_arch(rc(rng), rc(rng), kk(rng));
        a.t_int = 1 + n % 7;
        const Matrix x = uniform(dim(rng), dim(rng), rng, -3.0, 3.0);
        const Matrix y = uniform(x.cols(), dim(rng), rng, -0.2, 0.2);
        const auto res = simulate_gemm({x, y}, a, n % 2 ? custom_sl() : test::foundry(), NoiseModel{}, SimMode::Ideal);
        EXPECT_LT(relative_frobenius_error(res.z_hat, matmul(x, y)), 1e-6) << "instance " << n;
    }
}

TEST(Simulate, PaddingNeutrality)
{
    std::mt19937_64 rng(8);
    const auto a = small_arch(2, 3, 4);
    Matrix x = uniform(6, 7, rng);
    const Matrix y = uniform(7, 5, rng);
    Matrix xz(8, 7);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 7; ++j) xz(i, j) = x(i, j);
    }
    const auto z = simulate_gemm({x, y}, a, custom_sl(), NoiseModel{}, SimMode::Ideal).z_hat;
    const auto zz = simulate_gemm({xz, y}, a, custom_sl(), NoiseModel{}, SimMode::Ideal).z_hat;
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            if (i < 6) {
                EXPECT_DOUBLE_EQ(zz(i, j), z(i, j));
            } else {
                EXPECT_EQ(zz(i, j), 0.0);
            }
        }
    }
}

TEST(Simulate, FullScaleInputsDoNotSaturate)
{
    auto a = small_arch(1, 3, 4);
    a.t_int = 5;
    const Matrix x(4, 30, 1.0); // P = 10, two full epochs at the rail
    const Matrix y(30, 4, 1.0);
    const auto res = simulate_gemm({x, y}, a, custom_sl(), NoiseModel{}, SimMode::Ideal);
    EXPECT_EQ(res.stats.saturation_events, 0);
    EXPECT_NEAR(res.stats.max_abs_v, 0.24, 1e-12);
    EXPECT_NEAR(res.z_hat(0, 0), 30.0, 1e-9);
}

TEST(Simulate, UndersizedCapacitorIsSizingError)
{
    const auto a = small_arch(1, 2, 2);
    SimOptions opt;
    opt.engine = make_engine_config(a, custom_sl());
    opt.engine->c_int_f /= 10.0;
    const Matrix x(2, 20, 1.0);
    const Matrix y(20, 2, 1.0);
    EXPECT_THROW(simulate_gemm({x, y}, a, custom_sl(), NoiseModel{}, SimMode::Ideal, opt), SizingError);
    const auto res = simulate_gemm({x, y}, a, custom_sl(), NoiseModel{}, SimMode::Quantized, opt);
    EXPECT_GT(res.stats.saturation_events, 0);
}

TEST(Simulate, QuantizedMatchesFakeQuantizedProduct)
{
    std::mt19937_64 rng(9);
    const Matrix x = uniform(64, 36, rng);
    const Matrix y = uniform(36, 64, rng);
    const ArchConfig a;
    const auto res = simulate_gemm({x, y}, a, custom_sl(), NoiseModel{}, SimMode::Quantized);
    const auto xq = minmax_quantizer(x, 6, false);
    const auto yq = minmax_quantizer(y, 6, false);
    const Matrix oracle = matmul(fake_quantize(x, xq), fake_quantize(y, yq));
    EXPECT_LT(relative_frobenius_error(res.z_hat, oracle), 1e-9);
    // Per-element quantization error against the float product.
    const Matrix exact = matmul(x, y);
    const double bound = 36.0 * (xq.alpha[0] / 2.0 + yq.alpha[0] / 2.0 + xq.alpha[0] * yq.alpha[0] / 4.0);
    for (std::size_t i = 0; i < exact.size(); ++i) {
        EXPECT_LE(std::abs(res.z_hat.flat()[i] - exact.flat()[i]), bound);
    }
}

TEST(Simulate, AdcErrorBound)
{
    std::mt19937_64 rng(10);
    auto a = small_arch(2, 2, 4);
    a.t_int = 3;
    const Matrix x = uniform(8, 20, rng);
    const Matrix y = uniform(20, 8, rng);
    const auto q = simulate_gemm({x, y}, a, custom_sl(), NoiseModel{}, SimMode::Quantized);
    const auto adc = simulate_gemm({x, y}, a, custom_sl(), NoiseModel{}, SimMode::QuantizedNoiseAdc);
    const auto s = plan(8, 20, 8, a);
    const double lsb = 0.24 / 32.0;
    const double bound = static_cast<double>(s.readouts_per_block()) * lsb / 2.0 / adc.stats.normalization_v
                         * adc.stats.x_scale * adc.stats.y_scale;
    for (std::size_t i = 0; i < q.z_hat.size(); ++i) {
        EXPECT_LE(std::abs(adc.z_hat.flat()[i] - q.z_hat.flat()[i]), bound * (1.0 + 1e-9));
    }
}

TEST(Simulate, NoiseIsSeeded)
{
    std::mt19937_64 rng(11);
    const auto a = small_arch(2, 2, 4);
    const GemmWorkload w{uniform(8, 8, rng), uniform(8, 8, rng)};
    const auto r1 = simulate_gemm(w, a, custom_sl(), NoiseModel{0.05, 7, true}, SimMode::QuantizedNoise);
    const auto r2 = simulate_gemm(w, a, custom_sl(), NoiseModel{0.05, 7, true}, SimMode::QuantizedNoise);
    const auto r3 = simulate_gemm(w, a, custom_sl(), NoiseModel{0.05, 8, true}, SimMode::QuantizedNoise);
    EXPECT_EQ(r1.z_hat, r2.z_hat);
    EXPECT_NE(r1.z_hat, r3.z_hat);
}

TEST(Simulate, ShapeErrors)
{
    EXPECT_THROW(simulate_gemm({Matrix(2, 3), Matrix(4, 2)}, ArchConfig{}, custom_sl(), NoiseModel{}, SimMode::Ideal),
                 ShapeError);
    EXPECT_THROW(parse_sim_mode("fast"), SchemaError);
}

TEST(Simulate, EngineConfigFromLossChain)
{
    const ArchConfig a;
    const auto e = make_engine_config(a, custom_sl());
    // 100 mW laser, 47.333 dB total, 0.1 dB of it after the coupler.
    EXPECT_NEAR(e.arm_power_mw, 100.0 * std::pow(10.0, -(47.333 - 0.1) / 10.0), 1e-9);
    EXPECT_NEAR(e.loss_db, 0.1, 1e-12);
    EXPECT_NEAR(e.c_int_f, 6.0 * e.engine_current_max_a() * 60 / (5e9 * 0.24), 1e-24);
}

} // namespace
} // namespace ptc
