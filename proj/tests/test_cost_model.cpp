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

#include "test_support.hpp"

namespace ptc
{
namespace
{

using test::custom_sl;
using test::foundry;
using test::rel_diff;

// Sensitivity bound at equality, written out independently (mW).
double laser_oracle_mw(double il, double r, double i_dark, double er, double s_dbm, int b)
{
    const double penalty = std::isinf(er) ? 1.0 : 1.0 - std::pow(10.0, -er / 10.0);
    return (i_dark / r * 1000.0 + std::pow(2.0, b) * std::pow(10.0, s_dbm / 10.0)) * std::pow(10.0, il / 10.0)
           / penalty;
}

TEST(InsertionLoss, CustomSlK32)
{
    const auto b = insertion_loss(32, custom_sl());
    EXPECT_NEAR(b.total_db, 2.0 + 10.0 * std::log10(1024.0) + 6.4 + 31 * 0.23 + 32 * 0.05 + 0.05 + 0.05, 1e-9);
    EXPECT_NEAR(b.total_db, 47.33, 0.005);
    EXPECT_NEAR(b.il_couple + b.split_fanout_db + b.il_mzm + b.il_cross_total + b.il_split_total + b.il_ps + b.il_dc,
                b.total_db, 1e-9);
    const auto d = insertion_loss(32, custom_sl(), Topology::DoubleLayer);
    EXPECT_NEAR(d.il_cross_total, 221.03, 1e-9);
    EXPECT_GT(d.total_db, b.total_db);
}

TEST(InsertionLoss, DegenerateCore)
{
    CatalogVariant c = custom_sl();
    for (auto kind : {DeviceKind::SLMZM, DeviceKind::Crossing, DeviceKind::Splitter1xN, DeviceKind::PhaseShifter,
                      DeviceKind::Coupler2x2}) {
        c.devices.at(kind).insertion_loss_db = 0.0;
    }
    EXPECT_NEAR(insertion_loss(1, c).total_db, 2.0, 1e-12);
    EXPECT_THROW(insertion_loss(0, c), DomainError);
}

TEST(InsertionLoss, LinearAfterFanoutTerm)
{
    const auto &c = custom_sl();
    for (int k = 2; k < 64; ++k) {
        const double a = insertion_loss(k, c).total_db - 20.0 * std::log10(k);
        const double b = insertion_loss(k + 1, c).total_db - 20.0 * std::log10(k + 1);
        EXPECT_NEAR(b - a, 0.23 + 0.05, 1e-9);
    }
}

TEST(Laser, Anchor)
{
    const double p = min_laser_power(20.0, 1.0, 20e-9, 10.0, -27.0, 6) * 1e3;
    EXPECT_NEAR(p, 14.2, 0.05);
    EXPECT_NEAR(p, laser_oracle_mw(20.0, 1.0, 20e-9, 10.0, -27.0, 6), 1e-9);
    const double inf = std::numeric_limits<double>::infinity();
    const double p_inf = min_laser_power(20.0, 1.0, 20e-9, inf, -27.0, 6) * 1e3;
    EXPECT_NEAR(p_inf, laser_oracle_mw(20.0, 1.0, 20e-9, inf, -27.0, 6), 1e-9);
    EXPECT_NEAR(p_inf, p * 0.9, 1e-9);
}

TEST(Laser, Monotonicity)
{
    const double p6 = min_laser_power(20.0, 1.0, 20e-9, 10.0, -27.0, 6);
    const double p7 = min_laser_power(20.0, 1.0, 20e-9, 10.0, -27.0, 7);
    EXPECT_GT(p7 / p6, 1.9);
    EXPECT_LT(p7 / p6, 2.0);
    double prev = 0.0;
    for (double il = 0.0; il < 60.0; il += 2.5) {
        const double p = min_laser_power(il, 1.0, 20e-9, 10.0, -27.0, 6);
        EXPECT_GT(p, prev);
        prev = p;
    }
    EXPECT_THROW(min_laser_power(20.0, 0.0, 20e-9, 10.0, -27.0, 6), DomainError);
    EXPECT_THROW(min_laser_power(20.0, 1.0, 20e-9, 10.0, -27.0, 0), DomainError);
    EXPECT_THROW(min_laser_power(20.0, custom_sl().get(DeviceKind::TIA), 10.0, 6), DomainError);
}

TEST(DacPower, Examples)
{
    EXPECT_NEAR(dac_power_scale(50e-3, 8, 14e9, 8, 5e9), 50e-3 * 5.0 / 14.0, 1e-15);
    EXPECT_NEAR(dac_power_scale(50e-3, 8, 14e9, 8, 5e9), 17.86e-3, 1e-5);
    EXPECT_DOUBLE_EQ(dac_power_scale(50e-3, 8, 14e9, 8, 14e9), 50e-3);
    EXPECT_NEAR(dac_power_scale(50e-3, 8, 14e9, 6, 5e9), 5.95e-3, 5e-6);
    EXPECT_THROW(dac_power_scale(0.0, 8, 14e9, 6, 5e9), DomainError);
    EXPECT_THROW(dac_power_scale(50e-3, 8, 14e9, 17, 5e9), DomainError);
}

TEST(Metrics, SpeedConventions)
{
    const ArchConfig a;
    const auto peak = metrics(a, 321.0, 17.5, SpeedConvention::Peak);
    EXPECT_NEAR(peak.tops, 368.64, 1e-9);
    EXPECT_NEAR(metrics(a, 321.0, 17.5, SpeedConvention::ResetDerated).tops, 368.64 * 60.0 / 62.0, 1e-9);
    EXPECT_NEAR(metrics(a, 321.0, 17.5, SpeedConvention::ResetDerated).tops, 356.75, 0.01);
    EXPECT_NEAR(peak.tops_per_mm2, 1.148, 1e-3);
    EXPECT_DOUBLE_EQ(peak.tops_per_w * 17.5, peak.tops);
    EXPECT_THROW(metrics(a, 0.0, 17.5, SpeedConvention::Peak), DomainError);
}

TEST(Area, NodeBoundingBox)
{
    // (L_dc + 4 R_bend + W_pd + W_dc + spacing) x (W_dc + R_bend + W_ps + L_pd + spacing)
    EXPECT_NEAR(node_area_um2(custom_sl()), (31.0 + 20.0 + 16.0 + 6.5 + 10.0) * (6.5 + 5.0 + 0.5 + 20.0 + 50.0), 1e-9);
    EXPECT_NEAR(node_area_um2(foundry()), (36.0 + 20.0 + 16.0 + 10.0 + 10.0) * (10.0 + 5.0 + 75.0 + 20.0 + 50.0), 1e-9);
}

TEST(Area, UnitScaleAudit)
{
    CatalogVariant c = custom_sl();
    for (auto kind : {DeviceKind::DAC, DeviceKind::SLMZM, DeviceKind::Integrator, DeviceKind::TIA, DeviceKind::ADC}) {
        auto &d = c.devices.at(kind);
        d.area_um2 = 1.0;
        d.length_um.reset();
        d.width_um.reset();
    }
    c.fanout_mmi.fanout_n = 2;
    c.fanout_mmi.l_mmi_um = 1.0;
    c.fanout_mmi.w_mmi_um = 1.0;
    ArchConfig a = test::small_arch(1, 1, 1);
    a.share_readout = false;
    const double a_node = node_area_um2(c);
    EXPECT_NEAR(per_core_area_um2(a, c), 2 + 2 + 1 + 1 * (a_node + 3), 1e-9);
    EXPECT_NEAR(sum(area_estimate(a, c, false)) * 1e6, 2 + 2 + 1 + 1 * (a_node + 3), 1e-6);
}

TEST(Cost, NoSharingIsRcTimesPerCore)
{
    for (const auto *cat : {&custom_sl(), &foundry(), &test::foundry_sl()}) {
        ArchConfig a = test::small_arch(3, 5, 16);
        a.share_readout = false;
        a.share_y_modulators = false;
        EXPECT_NEAR(sum(area_estimate(a, *cat, false)), 15.0 * um2_to_mm2(per_core_area_um2(a, *cat)), 1e-9);
        EXPECT_NEAR(sum(power_estimate(a, *cat, false)), 15.0 * per_core_power_w(a, *cat), 1e-9);
    }
}

TEST(Cost, SharingNeverIncreasesEntries)
{
    ArchConfig off = test::small_arch(4, 3, 16);
    off.share_readout = false;
    for (int mask = 1; mask < 4; ++mask) {
        ArchConfig on = off;
        on.share_y_modulators = mask & 1;
        on.share_readout = mask & 2;
        const auto a0 = area_estimate(off, custom_sl(), true);
        const auto a1 = area_estimate(on, custom_sl(), true);
        const auto p0 = power_estimate(off, custom_sl(), true);
        const auto p1 = power_estimate(on, custom_sl(), true);
        for (const auto &[k, v] : a1) EXPECT_LE(v, a0.at(k)) << k;
        for (const auto &[k, v] : p1) EXPECT_LE(v, p0.at(k)) << k;
    }
}

TEST(Cost, MonotoneInK)
{
    CostReport prev;
    for (int k = 1; k <= 64; ++k) {
        ArchConfig a;
        a.k = k;
        const auto r = estimate_cost(a, custom_sl());
        if (k > 1) {
            EXPECT_GE(r.total_area_mm2, prev.total_area_mm2);
            EXPECT_GE(r.total_power_w, prev.total_power_w);
            EXPECT_GE(r.loss.total_db, prev.loss.total_db);
        }
        prev = r;
    }
}

TEST(Cost, ReportConsistency)
{
    CostOptions o;
    o.include_memory = true;
    const auto r = estimate_cost(ArchConfig{}, custom_sl(), o);
    EXPECT_DOUBLE_EQ(r.total_area_mm2, sum(r.area_by_component));
    EXPECT_DOUBLE_EQ(r.total_power_w, sum(r.power_by_component));
    for (const auto &[k, v] : r.area_by_component) EXPECT_GE(v, 0.0) << k;
    for (const auto &[k, v] : r.power_by_component) EXPECT_GE(v, 0.0) << k;
    EXPECT_DOUBLE_EQ(r.tops_per_mm2 * r.total_area_mm2, r.tops);
    EXPECT_NEAR(r.wall_power_w, r.total_power_w + r.laser_power_w, 1e-12);
    const auto j = to_json(r);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["config"]["variant"], "CustomSL");
}

TEST(Cost, HeadlineCustomSl)
{
    CostOptions o;
    o.include_memory = true;
    const auto r = estimate_cost(ArchConfig{}, custom_sl(), o);
    EXPECT_LT(rel_diff(r.total_area_mm2, 321.0), 0.10);
    EXPECT_LT(rel_diff(r.total_power_w, 17.5), 0.20);
    EXPECT_NEAR(r.power_share("DAC"), 0.76, 0.08);
    EXPECT_GE(r.tops_per_w, 20.0);
    EXPECT_LE(r.tops_per_w, 24.0);
    EXPECT_GE(r.tops_per_mm2, 1.0);
    EXPECT_LE(r.tops_per_mm2, 1.3);
}

TEST(Cost, PerDevicePowers)
{
    const auto p = device_powers(ArchConfig{}, custom_sl());
    EXPECT_NEAR(p.dac, 50e-3 * 8 * 64 * 5e9 / (256 * 6 * 14e9), 1e-15);
    EXPECT_NEAR(p.modulator, 70e-9 + 50e-15 * 5e9, 1e-15);
    EXPECT_NEAR(p.adc, 14.8e-3 * 5e9 / (60 * 10e9), 1e-15);
    EXPECT_NEAR(p.tia, 3e-3 * 5e9 / (60 * 40e9), 1e-15);
    EXPECT_EQ(p.phase_shifter, 0.0);
    EXPECT_NEAR(device_powers(ArchConfig{}, foundry()).phase_shifter, 3.5e-3, 1e-15);
}

TEST(Cost, VariantRatios)
{
    const auto c = estimate_cost(ArchConfig{}, custom_sl());
    const auto f = estimate_cost(ArchConfig{}, foundry());
    EXPECT_LT(rel_diff(f.total_area_mm2 / c.total_area_mm2, 6.8), 0.15);
    EXPECT_LT(rel_diff(f.total_power_w / c.total_power_w, 9.1), 0.15);
}

TEST(Sweep, IntegrationWindow)
{
    const std::vector<int> ts{1, 2, 5, 10, 20, 30, 60};
    const auto pts = sweep(ArchConfig{}, custom_sl(), SweepAxis::T, ts);
    ASSERT_EQ(pts.size(), ts.size());
    for (std::size_t i = 1; i < pts.size(); ++i) {
        EXPECT_LT(pts[i].report.total_power_w, pts[i - 1].report.total_power_w);
    }
    const auto &t60 = pts.back().report;
    EXPECT_LT(t60.power_share("ADC") + t60.power_share("TIA"), 0.05);
    EXPECT_LT(rel_diff(pts.front().report.total_power_w, 68.0), 0.20);
    EXPECT_LT(rel_diff(t60.total_power_w, 16.0), 0.20);
}

TEST(Sweep, ErrorsNameThePoint)
{
    const std::vector<int> ks{4, 0, 8};
    try {
        (void)sweep(ArchConfig{}, custom_sl(), SweepAxis::K, ks);
        FAIL() << "expected an error";
    } catch (const Error &e) {
        EXPECT_NE(std::string(e.what()).find("K=0"), std::string::npos) << e.what();
    }
    EXPECT_THROW(sweep(ArchConfig{}, custom_sl(), SweepAxis::K, std::vector<int>{}), DomainError);
}

TEST(Sweep, CsvHasOneRowPerPoint)
{
    const std::vector<int> ks{2, 4, 8};
    const auto csv = sweep_to_csv("K", sweep(ArchConfig{}, custom_sl(), SweepAxis::K, ks));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_EQ(csv.rfind("K,total_area_mm2,total_power_w", 0), 0U);
}

TEST(ArchConfigJson, RoundTripAndStrictness)
{
    ArchConfig a = test::small_arch(3, 2, 16);
    a.t_int = 17;
    EXPECT_EQ(arch_from_json(to_json(a)), a);
    auto j = to_json(a);
    j["r_tiels"] = 3;
    EXPECT_THROW(arch_from_json(j), SchemaError);
    j = to_json(a);
    j["k"] = 0;
    EXPECT_THROW(arch_from_json(j), ValidationError);
    EXPECT_EQ(load_arch(test::data_path("configs/r6c6k32.json")), ArchConfig{});
}

} // namespace
} // namespace ptc
