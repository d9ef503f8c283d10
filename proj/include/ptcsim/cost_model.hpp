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

#ifndef PTCSIM_COST_MODEL_HPP
#define PTCSIM_COST_MODEL_HPP

#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ptcsim/arch_config.hpp"
#include "ptcsim/device_catalog.hpp"
#include "ptcsim/error.hpp"
#include "ptcsim/units.hpp"

namespace ptc
{

enum class Topology
{
    EmbeddedUneven, // 1:(K-a) splitters, at most K-1 crossings per path
    DoubleLayer,    // 1x2K then 1xK splitters, up to (K-1)^2 crossings
};

inline std::string to_string(Topology t) { return t == Topology::DoubleLayer ? "double-layer" : "embedded-uneven"; }

inline Topology parse_topology(std::string_view s)
{
    if (s == "embedded-uneven" || s == "EmbeddedUneven" || s == "E") return Topology::EmbeddedUneven;
    if (s == "double-layer" || s == "DoubleLayer" || s == "D") return Topology::DoubleLayer;
    throw SchemaError("unknown topology '" + std::string(s) + "' (expected embedded-uneven or double-layer)");
}

enum class SpeedConvention
{
    Peak,         // 2 K^2 R C f
    ResetDerated, // peak * T / (T + T_rst)
};

inline std::string to_string(SpeedConvention c) { return c == SpeedConvention::Peak ? "peak" : "reset_derated"; }

inline SpeedConvention parse_convention(std::string_view s)
{
    if (s == "peak") return SpeedConvention::Peak;
    if (s == "reset_derated" || s == "reset-derated") return SpeedConvention::ResetDerated;
    throw SchemaError("unknown convention '" + std::string(s) + "' (expected peak or reset_derated)");
}

// ---------------------------------------------------------------------------
// Insertion loss and laser power.

struct LossBudget
{
    double il_couple = 0.0;
    double il_mzm = 0.0;
    double il_cross_total = 0.0;
    double il_split_total = 0.0;
    double il_ps = 0.0;
    double il_dc = 0.0;
    double split_fanout_db = 0.0;
    double total_db = 0.0;
};

inline LossBudget insertion_loss(int k, const CatalogVariant &cat, Topology topology = Topology::EmbeddedUneven)
{
    if (k < 1) {
        throw DomainError("insertion_loss: K must be at least 1");
    }
    const double km1 = static_cast<double>(k - 1);
    LossBudget b;
    b.il_couple = cat.get(DeviceKind::FiberCoupling).il();
    b.split_fanout_db = 10.0 * std::log10(static_cast<double>(k) * k);
    b.il_mzm = cat.modulator().il();
    const double cross = cat.get(DeviceKind::Crossing).il();
    const double split = cat.get(DeviceKind::Splitter1xN).il();
    if (topology == Topology::EmbeddedUneven) {
        b.il_cross_total = km1 * cross;
        b.il_split_total = k * split;
    } else {
        b.il_cross_total = km1 * km1 * cross;
        b.il_split_total = split;
    }
    b.il_ps = cat.get(DeviceKind::PhaseShifter).il();
    b.il_dc = cat.get(DeviceKind::Coupler2x2).il();
    b.total_db = b.il_couple + b.split_fanout_db + b.il_mzm + b.il_cross_total + b.il_split_total + b.il_ps + b.il_dc;
    return b;
}

// Smallest laser power (W) meeting
//   P (1 - 10^(-ER/10)) / 10^(IL/10) >= I_noise / R + 2^b 10^(S/10)   [mW].
inline double min_laser_power(double il_db, double responsivity_a_per_w, double dark_current_a, double er_db,
                              double sensitivity_dbm, int bits_out)
{
    if (bits_out < 1) {
        throw DomainError("min_laser_power: bits_out must be at least 1");
    }
    if (!(responsivity_a_per_w > 0.0) || dark_current_a < 0.0 || !(er_db > 0.0)) {
        throw DomainError("min_laser_power: non-physical photodetector or modulator parameters");
    }
    const double floor_mw = dark_current_a / responsivity_a_per_w * mw_per_w;
    const double needed_mw = floor_mw + std::ldexp(1.0, bits_out) * dbm_to_mw(sensitivity_dbm);
    const double penalty = 1.0 - std::pow(10.0, -er_db / 10.0);
    return needed_mw * db_to_linear(il_db) / penalty / mw_per_w;
}

inline double min_laser_power(double il_db, const DeviceSpec &pd, double er_db, int bits_out)
{
    if (pd.kind != DeviceKind::Photodetector) {
        throw DomainError("min_laser_power: device '" + pd.name + "' is not a photodetector");
    }
    return min_laser_power(il_db, pd.responsivity(), pd.dark_current(), er_db, pd.sensitivity(), bits_out);
}

// ---------------------------------------------------------------------------
// Per-device operating power.

// P = P0 b0 2^b f / (2^b0 b fs).
inline double dac_power_scale(double p0_w, int b0, double fs0_hz, int b, double f_hz)
{
    if (!(p0_w > 0.0) || b0 < 1 || !(fs0_hz > 0.0) || b < 1 || b > 16 || !(f_hz > 0.0)) {
        throw DomainError("dac_power_scale: inputs must be positive and b <= 16");
    }
    return p0_w * b0 * std::ldexp(1.0, b) * f_hz / (std::ldexp(1.0, b0) * b * fs0_hz);
}

struct DevicePowers
{
    double dac = 0.0;
    double modulator = 0.0;
    double photodetector = 0.0;
    double phase_shifter = 0.0;
    double integrator = 0.0;
    double tia = 0.0;
    double adc = 0.0;
};

// Converters run at f / T after temporal integration; their power scales with
// the ratio to the rated rate. The phase shifter holds a pi/2 bias, half of
// the tabulated P_pi.
inline DevicePowers device_powers(const ArchConfig &arch, const CatalogVariant &cat)
{
    const auto &dac = cat.get(DeviceKind::DAC);
    const auto &mod = cat.modulator();
    const auto &adc = cat.get(DeviceKind::ADC);
    const auto &tia = cat.get(DeviceKind::TIA);
    const double readout_rate = arch.clock_hz / arch.t_int;
    DevicePowers p;
    p.dac = dac_power_scale(dac.power(), dac.bits(), dac.rated_frequency(), arch.bits_in, arch.clock_hz);
    p.modulator = mod.power() + mod.energy_per_bit() * arch.clock_hz;
    p.photodetector = cat.get(DeviceKind::Photodetector).power();
    p.phase_shifter = cat.get(DeviceKind::PhaseShifter).power() / 2.0;
    p.integrator = cat.get(DeviceKind::Integrator).power();
    p.adc = adc.power() * readout_rate / adc.rated_frequency();
    p.tia = tia.power() * readout_rate / tia.rated_frequency();
    return p;
}

// ---------------------------------------------------------------------------
// Instance counts with hardware sharing.

struct DeviceCounts
{
    double x_modulators = 0; // also the X-side DAC count
    double y_modulators = 0; // also the Y-side DAC count
    double nodes = 0;        // dot-product engines
    double readout_chains = 0;
    double fanout_mmis = 0;

    [[nodiscard]] double modulators() const { return x_modulators + y_modulators; }
};

inline DeviceCounts device_counts(const ArchConfig &a)
{
    const double r = a.r_tiles;
    const double c = a.c_cores;
    const double k = a.k;
    DeviceCounts n;
    n.x_modulators = r * c * k;
    n.y_modulators = a.share_y_modulators ? c * k : r * c * k;
    n.nodes = r * c * k * k;
    n.readout_chains = a.share_readout ? r * k * k : r * c * k * k;
    n.fanout_mmis = r * c;
    return n;
}

// Bounding box of one crossbar node: coupler, bends, PD pair and phase shifter.
inline double node_area_um2(const CatalogVariant &cat)
{
    const auto &split = cat.get(DeviceKind::Coupler2x2);
    const auto &pd = cat.get(DeviceKind::Photodetector);
    const auto &ps = cat.get(DeviceKind::PhaseShifter);
    const auto &d = cat.design;
    const double wbr = d.bend_radius_um;
    const double along = split.length() + 4.0 * wbr + pd.width() + split.width() + d.node_spacing_length_um;
    const double across = split.width() + wbr + ps.width() + pd.length() + d.node_spacing_width_um;
    return along * across;
}

inline MmiDesign fanout_mmi_for(int k, const CatalogVariant &cat) { return scale_1x2k_mmi(cat.fanout_mmi, 2 * k); }

// Area of one K x K core, um^2, without any sharing.
inline double per_core_area_um2(const ArchConfig &a, const CatalogVariant &cat)
{
    const double k = a.k;
    return 2.0 * k * cat.get(DeviceKind::DAC).area() + 2.0 * k * cat.modulator().area()
           + fanout_mmi_for(a.k, cat).area_um2()
           + k * k
                 * (node_area_um2(cat) + cat.get(DeviceKind::Integrator).area() + cat.get(DeviceKind::TIA).area()
                    + cat.get(DeviceKind::ADC).area());
}

// Power of one core, W, without sharing (phase-shifter bias included).
inline double per_core_power_w(const ArchConfig &a, const CatalogVariant &cat)
{
    const auto p = device_powers(a, cat);
    const double k = a.k;
    return 2.0 * k * (p.dac + p.modulator) + k * k * (2.0 * p.photodetector + p.phase_shifter + p.integrator + p.tia + p.adc);
}

using Breakdown = std::map<std::string, double>;

inline double sum(const Breakdown &b)
{
    double s = 0.0;
    for (const auto &[_, v] : b) {
        s += v;
    }
    return s;
}

inline double memory_kib(const ArchConfig &a) { return a.global_sram_kib + a.r_tiles * a.tile_sram_kib; }

// Architecture area by component class, mm^2.
inline Breakdown area_estimate(const ArchConfig &a, const CatalogVariant &cat, bool include_memory)
{
    validate(a);
    const auto n = device_counts(a);
    Breakdown b;
    b["DAC"] = um2_to_mm2(n.modulators() * cat.get(DeviceKind::DAC).area());
    b["Modulator"] = um2_to_mm2(n.modulators() * cat.modulator().area());
    b["FanoutMMI"] = um2_to_mm2(n.fanout_mmis * fanout_mmi_for(a.k, cat).area_um2());
    b["Node"] = um2_to_mm2(n.nodes * node_area_um2(cat));
    b["Integrator"] = um2_to_mm2(n.readout_chains * cat.get(DeviceKind::Integrator).area());
    b["TIA"] = um2_to_mm2(n.readout_chains * cat.get(DeviceKind::TIA).area());
    b["ADC"] = um2_to_mm2(n.readout_chains * cat.get(DeviceKind::ADC).area());
    if (include_memory) {
        b["Memory"] = um2_to_mm2(memory_kib(a) * cat.get(DeviceKind::SRAM).area());
    }
    return b;
}

// On-chip power by component class, W. The laser is off-chip and reported separately.
inline Breakdown power_estimate(const ArchConfig &a, const CatalogVariant &cat, bool include_memory)
{
    validate(a);
    const auto n = device_counts(a);
    const auto p = device_powers(a, cat);
    Breakdown b;
    b["DAC"] = n.modulators() * p.dac;
    b["Modulator"] = n.modulators() * p.modulator;
    b["Photodetector"] = 2.0 * n.nodes * p.photodetector;
    b["PhaseShifter"] = n.nodes * p.phase_shifter;
    b["Integrator"] = n.readout_chains * p.integrator;
    b["TIA"] = n.readout_chains * p.tia;
    b["ADC"] = n.readout_chains * p.adc;
    if (include_memory) {
        b["Memory"] = memory_kib(a) * cat.get(DeviceKind::SRAM).power();
    }
    return b;
}

// ---------------------------------------------------------------------------
// Metrics.

struct Metrics
{
    double tops = 0.0;
    double tops_per_w = 0.0;
    double tops_per_mm2 = 0.0;
};

inline double compute_speed_ops(const ArchConfig &a, SpeedConvention convention)
{
    const double k = a.k;
    double ops = 2.0 * k * k * a.r_tiles * a.c_cores * a.clock_hz;
    if (convention == SpeedConvention::ResetDerated) {
        ops *= static_cast<double>(a.t_int) / (a.t_int + a.t_rst);
    }
    return ops;
}

// Efficiency and density are speed / power and speed / area.
inline Metrics metrics(const ArchConfig &a, double area_mm2, double power_w, SpeedConvention convention)
{
    if (!(area_mm2 > 0.0) || !(power_w > 0.0)) {
        throw DomainError("metrics: area and power must be positive");
    }
    Metrics m;
    m.tops = compute_speed_ops(a, convention) / 1e12;
    m.tops_per_w = m.tops / power_w;
    m.tops_per_mm2 = m.tops / area_mm2;
    return m;
}

// ---------------------------------------------------------------------------
// Full report.

struct CostOptions
{
    Topology topology = Topology::EmbeddedUneven;
    SpeedConvention convention = SpeedConvention::Peak;
    bool include_memory = false;
};

struct CostReport
{
    ArchConfig arch;
    VariantName variant = VariantName::CustomSL;
    CostOptions options;
    Breakdown area_by_component;  // mm^2
    Breakdown power_by_component; // W
    double total_area_mm2 = 0.0;
    double total_power_w = 0.0;
    LossBudget loss;
    double laser_power_per_core_w = 0.0;
    double laser_power_w = 0.0;
    double wall_power_w = 0.0;
    double tops = 0.0;
    double tops_per_w = 0.0;
    double tops_per_mm2 = 0.0;

    [[nodiscard]] double power_share(const std::string &component) const
    {
        const auto it = power_by_component.find(component);
        return it == power_by_component.end() ? 0.0 : it->second / total_power_w;
    }
};

inline CostReport estimate_cost(const ArchConfig &a, const CatalogVariant &cat, const CostOptions &opt = {})
{
    CostReport r;
    r.arch = a;
    r.variant = cat.name;
    r.options = opt;
    r.area_by_component = area_estimate(a, cat, opt.include_memory);
    r.power_by_component = power_estimate(a, cat, opt.include_memory);
    r.total_area_mm2 = sum(r.area_by_component);
    r.total_power_w = sum(r.power_by_component);
    r.loss = insertion_loss(a.k, cat, opt.topology);
    r.laser_power_per_core_w = min_laser_power(r.loss.total_db, cat.get(DeviceKind::Photodetector),
                                               cat.modulator().extinction_ratio(), a.bits_out);
    r.laser_power_w = r.laser_power_per_core_w * a.r_tiles * a.c_cores;
    r.wall_power_w = r.total_power_w + r.laser_power_w;
    const auto m = metrics(a, r.total_area_mm2, r.total_power_w, opt.convention);
    r.tops = m.tops;
    r.tops_per_w = m.tops_per_w;
    r.tops_per_mm2 = m.tops_per_mm2;
    return r;
}

inline constexpr int report_schema_version = 1;

inline nlohmann::json to_json(const LossBudget &b)
{
    return {{"il_couple", b.il_couple},         {"il_mzm", b.il_mzm},   {"il_cross_total", b.il_cross_total},
            {"il_split_total", b.il_split_total}, {"il_ps", b.il_ps},     {"il_dc", b.il_dc},
            {"split_fanout_db", b.split_fanout_db}, {"total_db", b.total_db}};
}

inline nlohmann::json to_json(const CostReport &r)
{
    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["config"] = {{"arch", to_json(r.arch)},
                   {"variant", to_string(r.variant)},
                   {"topology", to_string(r.options.topology)},
                   {"convention", to_string(r.options.convention)},
                   {"include_memory", r.options.include_memory}};
    j["area_mm2"] = r.area_by_component;
    j["power_w"] = r.power_by_component;
    j["total_area_mm2"] = r.total_area_mm2;
    j["total_power_w"] = r.total_power_w;
    j["insertion_loss_db"] = to_json(r.loss);
    j["laser_power_per_core_w"] = r.laser_power_per_core_w;
    j["laser_power_w"] = r.laser_power_w;
    j["wall_power_w"] = r.wall_power_w;
    j["tops"] = r.tops;
    j["tops_per_w"] = r.tops_per_w;
    j["tops_per_mm2"] = r.tops_per_mm2;
    return j;
}

// Aligned human-readable table.
inline std::string to_text(const CostReport &r)
{
    std::ostringstream os;
    os << "variant " << cli_name(r.variant) << ", R=" << r.arch.r_tiles << " C=" << r.arch.c_cores
       << " K=" << r.arch.k << " f=" << r.arch.clock_hz / 1e9 << " GHz T=" << r.arch.t_int
       << " T_rst=" << r.arch.t_rst << ", " << to_string(r.options.topology) << ", "
       << to_string(r.options.convention) << (r.options.include_memory ? ", memory included" : ", memory excluded")
       << "\n\n";
    os << std::fixed;
    os << std::left << std::setw(16) << "component" << std::right << std::setw(14) << "area [mm2]"
       << std::setw(9) << "share" << std::setw(14) << "power [W]" << std::setw(9) << "share" << "\n";
    std::map<std::string, int> names;
    for (const auto &[k, _] : r.area_by_component) names[k];
    for (const auto &[k, _] : r.power_by_component) names[k];
    for (const auto &[name, _] : names) {
        const auto a = r.area_by_component.contains(name) ? r.area_by_component.at(name) : 0.0;
        const auto p = r.power_by_component.contains(name) ? r.power_by_component.at(name) : 0.0;
        os << std::left << std::setw(16) << name << std::right << std::setprecision(3) << std::setw(14) << a
           << std::setprecision(1) << std::setw(8) << 100.0 * a / r.total_area_mm2 << "%" << std::setprecision(3)
           << std::setw(14) << p << std::setprecision(1) << std::setw(8) << 100.0 * p / r.total_power_w << "%\n";
    }
    os << std::left << std::setw(16) << "total" << std::right << std::setprecision(3) << std::setw(14)
       << r.total_area_mm2 << std::setw(9) << "" << std::setw(14) << r.total_power_w << "\n\n";
    os << std::setprecision(3);
    os << "insertion loss      " << r.loss.total_db << " dB\n";
    os << "laser power         " << r.laser_power_per_core_w * 1e3 << " mW per core, " << r.laser_power_w
       << " W total (off-chip)\n";
    os << "wall power          " << r.wall_power_w << " W\n";
    os << std::setprecision(2);
    os << "speed               " << r.tops << " TOPS\n";
    os << "energy efficiency   " << r.tops_per_w << " TOPS/W\n";
    os << "compute density     " << r.tops_per_mm2 << " TOPS/mm2\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Sweeps.

enum class SweepAxis
{
    K,
    T,
    Variant,
};

inline SweepAxis parse_sweep_axis(std::string_view s)
{
    if (s == "K" || s == "k") return SweepAxis::K;
    if (s == "T" || s == "t") return SweepAxis::T;
    if (s == "variant") return SweepAxis::Variant;
    throw SchemaError("unknown sweep axis '" + std::string(s) + "' (expected K, T or variant)");
}

struct SweepPoint
{
    std::string label;
    CostReport report;
};

// One report per K or T value. A failing point is rethrown naming the point.
inline std::vector<SweepPoint> sweep(const ArchConfig &base, const CatalogVariant &cat, SweepAxis axis,
                                     std::span<const int> values, const CostOptions &opt = {})
{
    if (values.empty()) {
        throw DomainError("sweep: no values given");
    }
    if (axis == SweepAxis::Variant) {
        throw DomainError("sweep: use sweep_variants for the variant axis");
    }
    std::vector<SweepPoint> out;
    out.reserve(values.size());
    for (const int v : values) {
        ArchConfig a = base;
        (axis == SweepAxis::K ? a.k : a.t_int) = v;
        const std::string label = (axis == SweepAxis::K ? "K=" : "T=") + std::to_string(v);
        try {
            out.push_back({std::to_string(v), estimate_cost(a, cat, opt)});
        } catch (const Error &e) {
            throw Error("sweep point " + label + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<SweepPoint> sweep_variants(const ArchConfig &base, std::span<const CatalogVariant> catalogs,
                                              const CostOptions &opt = {})
{
    if (catalogs.empty()) {
        throw DomainError("sweep: no variants given");
    }
    std::vector<SweepPoint> out;
    for (const auto &cat : catalogs) {
        try {
            out.push_back({cli_name(cat.name), estimate_cost(base, cat, opt)});
        } catch (const Error &e) {
            throw Error("sweep point variant=" + cli_name(cat.name) + ": " + e.what());
        }
    }
    return out;
}

inline std::string sweep_to_csv(std::string_view axis_name, const std::vector<SweepPoint> &points)
{
    std::map<std::string, int> area_cols;
    std::map<std::string, int> power_cols;
    for (const auto &p : points) {
        for (const auto &[k, _] : p.report.area_by_component) area_cols[k];
        for (const auto &[k, _] : p.report.power_by_component) power_cols[k];
    }
    std::ostringstream os;
    os << std::setprecision(10);
    os << axis_name << ",total_area_mm2,total_power_w,insertion_loss_db,laser_power_w,tops,tops_per_w,tops_per_mm2";
    for (const auto &[k, _] : area_cols) os << ",area_" << k << "_mm2";
    for (const auto &[k, _] : power_cols) os << ",power_" << k << "_w";
    os << "\n";
    for (const auto &p : points) {
        const auto &r = p.report;
        os << p.label << "," << r.total_area_mm2 << "," << r.total_power_w << "," << r.loss.total_db << ","
           << r.laser_power_w << "," << r.tops << "," << r.tops_per_w << "," << r.tops_per_mm2;
        for (const auto &[k, _] : area_cols) {
            os << "," << (r.area_by_component.contains(k) ? r.area_by_component.at(k) : 0.0);
        }
        for (const auto &[k, _] : power_cols) {
            os << "," << (r.power_by_component.contains(k) ? r.power_by_component.at(k) : 0.0);
        }
        os << "\n";
    }
    return os.str();
}

} // namespace ptc

#endif
