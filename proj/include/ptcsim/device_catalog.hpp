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

#ifndef PTCSIM_DEVICE_CATALOG_HPP
#define PTCSIM_DEVICE_CATALOG_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ptcsim/error.hpp"
#include "ptcsim/units.hpp"

namespace ptc
{

inline constexpr int catalog_schema_version = 1;

enum class DeviceKind
{
    DAC,
    ADC,
    Photodetector,
    TIA,
    MZM,
    SLMZM,
    Coupler2x2,
    PhaseShifter,
    Splitter1xN,
    Crossing,
    FiberCoupling,
    Laser,
    Integrator,
    SRAM,
};

inline constexpr std::array<std::pair<DeviceKind, std::string_view>, 14> device_kind_names{{
    {DeviceKind::DAC, "DAC"},
    {DeviceKind::ADC, "ADC"},
    {DeviceKind::Photodetector, "Photodetector"},
    {DeviceKind::TIA, "TIA"},
    {DeviceKind::MZM, "MZM"},
    {DeviceKind::SLMZM, "SLMZM"},
    {DeviceKind::Coupler2x2, "Coupler2x2"},
    {DeviceKind::PhaseShifter, "PhaseShifter"},
    {DeviceKind::Splitter1xN, "Splitter1xN"},
    {DeviceKind::Crossing, "Crossing"},
    {DeviceKind::FiberCoupling, "FiberCoupling"},
    {DeviceKind::Laser, "Laser"},
    {DeviceKind::Integrator, "Integrator"},
    {DeviceKind::SRAM, "SRAM"},
}};

inline std::string to_string(DeviceKind kind)
{
    for (const auto &[k, name] : device_kind_names) {
        if (k == kind) {
            return std::string(name);
        }
    }
    return "?";
}

inline DeviceKind parse_device_kind(std::string_view text)
{
    for (const auto &[k, name] : device_kind_names) {
        if (name == text) {
            return k;
        }
    }
    throw SchemaError("unknown device kind '" + std::string(text) + "'");
}

// Tabulated parameters of one component. Which fields are mandatory depends
// on the kind (see required_fields). For SRAM, area_um2 and power_w are
// densities per KiB.
struct DeviceSpec
{
    DeviceKind kind = DeviceKind::DAC;
    std::string name;
    std::optional<double> power_w;
    std::optional<double> rated_frequency_hz;
    std::optional<int> rated_bits;
    std::optional<double> area_um2;
    std::optional<double> length_um;
    std::optional<double> width_um;
    std::optional<double> insertion_loss_db;
    std::optional<double> extinction_ratio_db;
    std::optional<double> responsivity_a_per_w;
    std::optional<double> sensitivity_dbm;
    std::optional<double> dark_current_a;
    std::optional<double> energy_per_bit_j;

    friend bool operator==(const DeviceSpec &, const DeviceSpec &) = default;

    // Footprint, preferring the explicit area and falling back to length x width.
    [[nodiscard]] std::optional<double> footprint_um2() const
    {
        if (area_um2) {
            return area_um2;
        }
        if (length_um && width_um) {
            return *length_um * *width_um;
        }
        return std::nullopt;
    }

    [[nodiscard]] double area() const { return need(footprint_um2(), "area_um2"); }
    [[nodiscard]] double power() const { return need(power_w, "power_w"); }
    [[nodiscard]] double il() const { return need(insertion_loss_db, "insertion_loss_db"); }
    [[nodiscard]] double length() const { return need(length_um, "length_um"); }
    [[nodiscard]] double width() const { return need(width_um, "width_um"); }
    [[nodiscard]] double rated_frequency() const { return need(rated_frequency_hz, "rated_frequency_hz"); }
    [[nodiscard]] int bits() const { return need(rated_bits, "rated_bits"); }
    [[nodiscard]] double extinction_ratio() const { return need(extinction_ratio_db, "extinction_ratio_db"); }
    [[nodiscard]] double responsivity() const { return need(responsivity_a_per_w, "responsivity_a_per_w"); }
    [[nodiscard]] double sensitivity() const { return need(sensitivity_dbm, "sensitivity_dbm"); }
    [[nodiscard]] double dark_current() const { return need(dark_current_a, "dark_current_a"); }
    [[nodiscard]] double energy_per_bit() const { return need(energy_per_bit_j, "energy_per_bit_j"); }

private:
    template <typename T>
    T need(const std::optional<T> &v, const char *field) const
    {
        if (!v) {
            throw SchemaError("device '" + name + "' (" + to_string(kind) + ") has no " + field);
        }
        return *v;
    }
};

// Fields that must be present for a device of the given kind. "area" is
// satisfied by area_um2 or by length_um + width_um.
inline std::vector<std::string_view> required_fields(DeviceKind kind)
{
    switch (kind) {
    case DeviceKind::DAC:
    case DeviceKind::ADC:
        return {"power_w", "rated_frequency_hz", "rated_bits", "area"};
    case DeviceKind::Photodetector:
        return {"power_w", "responsivity_a_per_w", "sensitivity_dbm", "dark_current_a", "area"};
    case DeviceKind::TIA:
        return {"power_w", "rated_frequency_hz", "area"};
    case DeviceKind::MZM:
    case DeviceKind::SLMZM:
        return {"power_w", "insertion_loss_db", "extinction_ratio_db", "energy_per_bit_j", "area"};
    case DeviceKind::Coupler2x2:
        return {"insertion_loss_db", "length_um", "width_um"};
    case DeviceKind::PhaseShifter:
        return {"insertion_loss_db", "power_w", "length_um", "width_um"};
    case DeviceKind::Splitter1xN:
    case DeviceKind::Crossing:
    case DeviceKind::FiberCoupling:
        return {"insertion_loss_db"};
    case DeviceKind::Laser:
        return {"power_w"};
    case DeviceKind::Integrator:
    case DeviceKind::SRAM:
        return {"power_w", "area"};
    }
    return {};
}

inline bool has_field(const DeviceSpec &d, std::string_view field)
{
    if (field == "power_w") return d.power_w.has_value();
    if (field == "rated_frequency_hz") return d.rated_frequency_hz.has_value();
    if (field == "rated_bits") return d.rated_bits.has_value();
    if (field == "area") return d.footprint_um2().has_value();
    if (field == "length_um") return d.length_um.has_value();
    if (field == "width_um") return d.width_um.has_value();
    if (field == "insertion_loss_db") return d.insertion_loss_db.has_value();
    if (field == "extinction_ratio_db") return d.extinction_ratio_db.has_value();
    if (field == "responsivity_a_per_w") return d.responsivity_a_per_w.has_value();
    if (field == "sensitivity_dbm") return d.sensitivity_dbm.has_value();
    if (field == "dark_current_a") return d.dark_current_a.has_value();
    if (field == "energy_per_bit_j") return d.energy_per_bit_j.has_value();
    return false;
}

// Throws SchemaError for a missing field, ValidationError for a non-physical value.
inline void validate(const DeviceSpec &d)
{
    const std::string who = "device '" + d.name + "' (" + to_string(d.kind) + ")";
    for (const auto field : required_fields(d.kind)) {
        if (!has_field(d, field)) {
            throw SchemaError(who + ": missing required field '" + std::string(field) + "'");
        }
    }
    const auto non_negative = [&](const std::optional<double> &v, const char *field) {
        if (v && !(*v >= 0.0 && std::isfinite(*v))) {
            throw ValidationError(who + ": " + field + " must be a finite non-negative number");
        }
    };
    const auto positive = [&](const std::optional<double> &v, const char *field) {
        if (v && !(*v > 0.0 && std::isfinite(*v))) {
            throw ValidationError(who + ": " + field + " must be positive");
        }
    };
    non_negative(d.power_w, "power_w");
    positive(d.rated_frequency_hz, "rated_frequency_hz");
    non_negative(d.area_um2, "area_um2");
    positive(d.length_um, "length_um");
    positive(d.width_um, "width_um");
    non_negative(d.insertion_loss_db, "insertion_loss_db");
    non_negative(d.dark_current_a, "dark_current_a");
    non_negative(d.energy_per_bit_j, "energy_per_bit_j");
    // ER may be +inf (ideal modulator) but never negative.
    if (d.extinction_ratio_db && !(*d.extinction_ratio_db > 0.0)) {
        throw ValidationError(who + ": extinction_ratio_db must be positive");
    }
    if (d.kind == DeviceKind::Photodetector) {
        positive(d.responsivity_a_per_w, "responsivity_a_per_w");
    }
    if (d.rated_bits && (*d.rated_bits < 1 || *d.rated_bits > 16)) {
        throw ValidationError(who + ": rated_bits must lie in [1, 16]");
    }
    if (d.area_um2 && d.length_um && d.width_um) {
        const double lw = *d.length_um * *d.width_um;
        if (std::abs(lw - *d.area_um2) > 0.005 * std::max(lw, *d.area_um2)) {
            throw ValidationError(who + ": area_um2 disagrees with length_um x width_um");
        }
    }
}

// ---------------------------------------------------------------------------
// Geometry of self-imaging MMIs, directional couplers and phase shifters.

// Multimode beating length L_pi ~= 4 n_eff w_e^2 / (3 lambda0), all in um.
inline double beating_length(double n_eff, double w_e_um, double lambda0_um)
{
    if (!(n_eff > 0.0) || !(w_e_um > 0.0) || !(lambda0_um > 0.0)) {
        throw DomainError("beating_length: n_eff, w_e and lambda0 must be positive");
    }
    return 4.0 * n_eff * w_e_um * w_e_um / (3.0 * lambda0_um);
}

namespace detail
{
inline void check_mmi_args(int k, int order_i, const char *fn)
{
    if (k < 2) {
        throw DomainError(std::string(fn) + ": fanout must be at least 2");
    }
    if (order_i < 1) {
        throw DomainError(std::string(fn) + ": imaging order must be at least 1");
    }
}
} // namespace detail

// Center-fed 1xK splitter: L = 3 i L_pi / (4K).
inline double mmi_length_center_fed(double l_pi_um, int fanout_k, int order_i)
{
    detail::check_mmi_args(fanout_k, order_i, "mmi_length_center_fed");
    return 3.0 * order_i * l_pi_um / (4.0 * fanout_k);
}

// Paired interference (inputs at +-W/6): L = i L_pi / K.
inline double mmi_length_paired(double l_pi_um, int k, int order_i)
{
    detail::check_mmi_args(k, order_i, "mmi_length_paired");
    return order_i * l_pi_um / k;
}

// General interference, unrestricted input positions: L = 3 i L_pi / K.
inline double mmi_length_general(double l_pi_um, int k, int order_i)
{
    detail::check_mmi_args(k, order_i, "mmi_length_general");
    return 3.0 * order_i * l_pi_um / k;
}

struct MmiDesign
{
    int fanout_n = 10;
    double l_mmi_um = 0.0;
    double w_mmi_um = 0.0;
    double il_db = 0.0;
    double n_eff = 0.0;
    double lambda0_um = 1.55;
    int order_i = 1;

    friend bool operator==(const MmiDesign &, const MmiDesign &) = default;

    [[nodiscard]] double area_um2() const { return l_mmi_um * w_mmi_um; }
};

inline void validate(const MmiDesign &m)
{
    if (m.fanout_n < 2) {
        throw ValidationError("MMI design: fanout_n must be at least 2");
    }
    if (!(m.l_mmi_um > 0.0) || !(m.w_mmi_um > 0.0)) {
        throw ValidationError("MMI design: length and width must be positive");
    }
    if (!(m.il_db >= 0.0)) {
        throw ValidationError("MMI design: il_db must be non-negative");
    }
}

// Linear scaling of length and width with fanout; insertion loss held.
inline MmiDesign scale_1x2k_mmi(const MmiDesign &base, int target_fanout)
{
    if (base.fanout_n < 2) {
        throw DomainError("scale_1x2k_mmi: base fanout must be at least 2");
    }
    if (target_fanout < 2) {
        throw DomainError("scale_1x2k_mmi: target fanout must be at least 2");
    }
    MmiDesign out = base;
    const double s = static_cast<double>(target_fanout) / base.fanout_n;
    out.fanout_n = target_fanout;
    out.l_mmi_um = base.l_mmi_um * s;
    out.w_mmi_um = base.w_mmi_um * s;
    return out;
}

// Coupling lengths (um) of the uneven directional couplers at 480 nm width and
// 200 nm gap, indexed by the major part of a 1:n ratio.
inline constexpr std::array<double, 5> coupler_lengths_um{14.6, 11.2, 9.2, 8.0, 7.0};

inline double coupling_length_for_ratio(int major)
{
    if (major < 1 || major > static_cast<int>(coupler_lengths_um.size())) {
        throw LookupError("coupling_length_for_ratio: no coupling length for ratio 1:" + std::to_string(major)
                          + "; supported ratios are 1:1, 1:2, 1:3, 1:4, 1:5");
    }
    return coupler_lengths_um[static_cast<std::size_t>(major - 1)];
}

// phi = (beta1 - beta2) L for two arms of identical length.
inline double phase_shifter_delta(double beta1_per_um, double beta2_per_um, double length_um)
{
    if (!(length_um > 0.0)) {
        throw DomainError("phase_shifter_delta: arm length must be positive");
    }
    return beta1_per_um * length_um - beta2_per_um * length_um;
}

// Width-difference phase shifter. The propagation-constant difference is
// linearized in the arm-width difference, Delta beta = offset + slope * dw,
// with both coefficients fixed by two calibration points.
struct PhaseShifterDesign
{
    double length_um = 30.0;
    double nominal_width1_nm = 488.0;
    double nominal_width2_nm = 472.0;
    double nominal_phase_pi = 0.5;
    double anchor_width1_nm = 490.0;
    double anchor_width2_nm = 470.0;
    double anchor_phase_pi = 0.6345;

    friend bool operator==(const PhaseShifterDesign &, const PhaseShifterDesign &) = default;

    [[nodiscard]] double slope_rad_per_um_per_nm() const
    {
        const double dw0 = nominal_width1_nm - nominal_width2_nm;
        const double dw1 = anchor_width1_nm - anchor_width2_nm;
        if (dw1 == dw0) {
            throw DomainError("phase shifter calibration needs two distinct width differences");
        }
        return (anchor_phase_pi - nominal_phase_pi) * pi / (length_um * (dw1 - dw0));
    }

    [[nodiscard]] double offset_rad_per_um() const
    {
        const double dw0 = nominal_width1_nm - nominal_width2_nm;
        return nominal_phase_pi * pi / length_um - slope_rad_per_um_per_nm() * dw0;
    }

    // Propagation-constant difference beta1 - beta2 (rad/um) for the given arm widths.
    [[nodiscard]] double delta_beta(double width1_nm, double width2_nm) const
    {
        return offset_rad_per_um() + slope_rad_per_um_per_nm() * (width1_nm - width2_nm);
    }

    // Phase of the shifter built with the given arm widths. beta2 is used as
    // the zero reference; only the difference matters.
    [[nodiscard]] double phase(double width1_nm, double width2_nm) const
    {
        return phase_shifter_delta(delta_beta(width1_nm, width2_nm), 0.0, length_um);
    }
};

// Layout constants feeding the node bounding box of the area model.
struct DesignParams
{
    double bend_radius_um = 5.0;
    double node_spacing_length_um = 0.0;
    double node_spacing_width_um = 0.0;
    PhaseShifterDesign phase_shifter;

    friend bool operator==(const DesignParams &, const DesignParams &) = default;
};

enum class VariantName
{
    Foundry,
    FoundrySL,
    CustomSL,
};

inline std::string to_string(VariantName v)
{
    switch (v) {
    case VariantName::Foundry: return "Foundry";
    case VariantName::FoundrySL: return "FoundrySL";
    case VariantName::CustomSL: return "CustomSL";
    }
    return "?";
}

// Accepts the catalog spelling ("FoundrySL") and the CLI spelling ("foundry-sl").
inline VariantName parse_variant(std::string_view text)
{
    std::string s;
    for (const char c : text) {
        if (c != '-' && c != '_') {
            s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (s == "foundry") return VariantName::Foundry;
    if (s == "foundrysl") return VariantName::FoundrySL;
    if (s == "customsl") return VariantName::CustomSL;
    throw SchemaError("unknown catalog variant '" + std::string(text)
                      + "' (expected foundry, foundry-sl or custom-sl)");
}

inline std::string cli_name(VariantName v)
{
    switch (v) {
    case VariantName::Foundry: return "foundry";
    case VariantName::FoundrySL: return "foundry-sl";
    case VariantName::CustomSL: return "custom-sl";
    }
    return "?";
}

// One column of the component table: a device per kind plus design constants.
// Immutable once loaded.
struct CatalogVariant
{
    VariantName name = VariantName::CustomSL;
    std::map<DeviceKind, DeviceSpec> devices;
    MmiDesign fanout_mmi;
    DesignParams design;

    friend bool operator==(const CatalogVariant &, const CatalogVariant &) = default;

    [[nodiscard]] bool has(DeviceKind kind) const { return devices.contains(kind); }

    [[nodiscard]] const DeviceSpec &get(DeviceKind kind) const
    {
        const auto it = devices.find(kind);
        if (it == devices.end()) {
            throw LookupError("catalog '" + to_string(name) + "' has no " + to_string(kind) + " device");
        }
        return it->second;
    }

    // The input modulator: exactly one of MZM / SLMZM.
    [[nodiscard]] const DeviceSpec &modulator() const
    {
        const bool mzm = has(DeviceKind::MZM);
        const bool sl = has(DeviceKind::SLMZM);
        if (mzm == sl) {
            throw LookupError("catalog '" + to_string(name) + "' must define exactly one of MZM, SLMZM");
        }
        return get(sl ? DeviceKind::SLMZM : DeviceKind::MZM);
    }
};

// ---------------------------------------------------------------------------
// JSON (de)serialization. Unknown keys are rejected everywhere.

namespace detail
{

using nlohmann::json;

inline void reject_unknown(const json &obj, std::initializer_list<std::string_view> allowed, const std::string &where)
{
    if (!obj.is_object()) {
        throw SchemaError(where + ": expected an object");
    }
    for (const auto &[key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw SchemaError(where + ": unknown field '" + key + "'");
        }
    }
}

inline double number(const json &obj, const char *key, const std::string &where)
{
    const auto &v = obj.at(key);
    if (v.is_string() && v.get<std::string>() == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (!v.is_number()) {
        throw SchemaError(where + ": field '" + key + "' must be a number");
    }
    return v.get<double>();
}

inline std::optional<double> opt_number(const json &obj, const char *key, const std::string &where)
{
    if (!obj.contains(key)) {
        return std::nullopt;
    }
    return number(obj, key, where);
}

inline json number_to_json(double v)
{
    if (std::isinf(v) && v > 0) {
        return "inf";
    }
    return v;
}

} // namespace detail

inline DeviceSpec device_from_json(const nlohmann::json &j)
{
    using detail::opt_number;
    const std::string where = "device " + (j.contains("name") ? j["name"].dump() : std::string("<unnamed>"));
    detail::reject_unknown(j,
                           {"kind", "name", "power_w", "rated_frequency_hz", "rated_bits", "area_um2", "length_um",
                            "width_um", "insertion_loss_db", "extinction_ratio_db", "responsivity_a_per_w",
                            "sensitivity_dbm", "dark_current_a", "energy_per_bit_j"},
                           where);
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw SchemaError(where + ": missing required field 'kind'");
    }
    DeviceSpec d;
    d.kind = parse_device_kind(j["kind"].get<std::string>());
    d.name = j.value("name", to_string(d.kind));
    d.power_w = opt_number(j, "power_w", where);
    d.rated_frequency_hz = opt_number(j, "rated_frequency_hz", where);
    if (j.contains("rated_bits")) {
        if (!j["rated_bits"].is_number_integer()) {
            throw SchemaError(where + ": rated_bits must be an integer");
        }
        d.rated_bits = j["rated_bits"].get<int>();
    }
    d.area_um2 = opt_number(j, "area_um2", where);
    d.length_um = opt_number(j, "length_um", where);
    d.width_um = opt_number(j, "width_um", where);
    d.insertion_loss_db = opt_number(j, "insertion_loss_db", where);
    d.extinction_ratio_db = opt_number(j, "extinction_ratio_db", where);
    d.responsivity_a_per_w = opt_number(j, "responsivity_a_per_w", where);
    d.sensitivity_dbm = opt_number(j, "sensitivity_dbm", where);
    d.dark_current_a = opt_number(j, "dark_current_a", where);
    d.energy_per_bit_j = opt_number(j, "energy_per_bit_j", where);
    validate(d);
    return d;
}

inline nlohmann::json to_json(const DeviceSpec &d)
{
    nlohmann::json j;
    j["kind"] = to_string(d.kind);
    j["name"] = d.name;
    const auto put = [&](const char *key, const std::optional<double> &v) {
        if (v) {
            j[key] = detail::number_to_json(*v);
        }
    };
    put("power_w", d.power_w);
    put("rated_frequency_hz", d.rated_frequency_hz);
    if (d.rated_bits) {
        j["rated_bits"] = *d.rated_bits;
    }
    put("area_um2", d.area_um2);
    put("length_um", d.length_um);
    put("width_um", d.width_um);
    put("insertion_loss_db", d.insertion_loss_db);
    put("extinction_ratio_db", d.extinction_ratio_db);
    put("responsivity_a_per_w", d.responsivity_a_per_w);
    put("sensitivity_dbm", d.sensitivity_dbm);
    put("dark_current_a", d.dark_current_a);
    put("energy_per_bit_j", d.energy_per_bit_j);
    return j;
}

inline CatalogVariant catalog_from_json(const nlohmann::json &j)
{
    using detail::number;
    detail::reject_unknown(j, {"schema_version", "variant", "devices", "fanout_mmi", "design"}, "catalog");
    if (j.contains("schema_version") && j["schema_version"] != catalog_schema_version) {
        throw SchemaError("catalog: unsupported schema_version " + j["schema_version"].dump());
    }
    if (!j.contains("variant") || !j["variant"].is_string()) {
        throw SchemaError("catalog: missing required field 'variant'");
    }
    if (!j.contains("devices") || !j["devices"].is_array()) {
        throw SchemaError("catalog: missing required array 'devices'");
    }
    CatalogVariant cat;
    cat.name = parse_variant(j["variant"].get<std::string>());
    for (const auto &dj : j["devices"]) {
        DeviceSpec d = device_from_json(dj);
        if (cat.devices.contains(d.kind)) {
            throw SchemaError("catalog: more than one " + to_string(d.kind) + " device");
        }
        cat.devices.emplace(d.kind, std::move(d));
    }
    if (cat.has(DeviceKind::MZM) && cat.has(DeviceKind::SLMZM)) {
        throw SchemaError("catalog: define either MZM or SLMZM, not both");
    }
    if (!j.contains("fanout_mmi")) {
        throw SchemaError("catalog: missing required object 'fanout_mmi'");
    }
    {
        const auto &m = j["fanout_mmi"];
        const std::string where = "catalog.fanout_mmi";
        detail::reject_unknown(m, {"fanout_n", "l_mmi_um", "w_mmi_um", "il_db", "n_eff", "lambda0_um", "order_i"},
                               where);
        try {
            cat.fanout_mmi.fanout_n = m.at("fanout_n").get<int>();
            cat.fanout_mmi.l_mmi_um = number(m, "l_mmi_um", where);
            cat.fanout_mmi.w_mmi_um = number(m, "w_mmi_um", where);
            cat.fanout_mmi.il_db = number(m, "il_db", where);
        } catch (const nlohmann::json::exception &e) {
            throw SchemaError(where + ": " + e.what());
        }
        cat.fanout_mmi.n_eff = m.value("n_eff", 0.0);
        cat.fanout_mmi.lambda0_um = m.value("lambda0_um", 1.55);
        cat.fanout_mmi.order_i = m.value("order_i", 1);
        validate(cat.fanout_mmi);
    }
    if (j.contains("design")) {
        const auto &dj = j["design"];
        const std::string where = "catalog.design";
        detail::reject_unknown(dj, {"bend_radius_um", "node_spacing_length_um", "node_spacing_width_um", "phase_shifter"},
                               where);
        auto &des = cat.design;
        des.bend_radius_um = dj.value("bend_radius_um", des.bend_radius_um);
        des.node_spacing_length_um = dj.value("node_spacing_length_um", des.node_spacing_length_um);
        des.node_spacing_width_um = dj.value("node_spacing_width_um", des.node_spacing_width_um);
        if (des.bend_radius_um < 0 || des.node_spacing_length_um < 0 || des.node_spacing_width_um < 0) {
            throw ValidationError(where + ": layout dimensions must be non-negative");
        }
        if (dj.contains("phase_shifter")) {
            const auto &pj = dj["phase_shifter"];
            detail::reject_unknown(pj,
                                   {"length_um", "nominal_width1_nm", "nominal_width2_nm", "nominal_phase_pi",
                                    "anchor_width1_nm", "anchor_width2_nm", "anchor_phase_pi"},
                                   where + ".phase_shifter");
            auto &ps = des.phase_shifter;
            ps.length_um = pj.value("length_um", ps.length_um);
            ps.nominal_width1_nm = pj.value("nominal_width1_nm", ps.nominal_width1_nm);
            ps.nominal_width2_nm = pj.value("nominal_width2_nm", ps.nominal_width2_nm);
            ps.nominal_phase_pi = pj.value("nominal_phase_pi", ps.nominal_phase_pi);
            ps.anchor_width1_nm = pj.value("anchor_width1_nm", ps.anchor_width1_nm);
            ps.anchor_width2_nm = pj.value("anchor_width2_nm", ps.anchor_width2_nm);
            ps.anchor_phase_pi = pj.value("anchor_phase_pi", ps.anchor_phase_pi);
            if (!(ps.length_um > 0.0)) {
                throw ValidationError(where + ".phase_shifter: length_um must be positive");
            }
        }
    }
    return cat;
}

inline nlohmann::json to_json(const CatalogVariant &cat)
{
    nlohmann::json j;
    j["schema_version"] = catalog_schema_version;
    j["variant"] = to_string(cat.name);
    j["devices"] = nlohmann::json::array();
    for (const auto &[_, d] : cat.devices) {
        j["devices"].push_back(to_json(d));
    }
    const auto &m = cat.fanout_mmi;
    j["fanout_mmi"] = {{"fanout_n", m.fanout_n}, {"l_mmi_um", m.l_mmi_um},    {"w_mmi_um", m.w_mmi_um},
                       {"il_db", m.il_db},       {"n_eff", m.n_eff},          {"lambda0_um", m.lambda0_um},
                       {"order_i", m.order_i}};
    const auto &d = cat.design;
    const auto &ps = d.phase_shifter;
    j["design"] = {{"bend_radius_um", d.bend_radius_um},
                   {"node_spacing_length_um", d.node_spacing_length_um},
                   {"node_spacing_width_um", d.node_spacing_width_um},
                   {"phase_shifter",
                    {{"length_um", ps.length_um},
                     {"nominal_width1_nm", ps.nominal_width1_nm},
                     {"nominal_width2_nm", ps.nominal_width2_nm},
                     {"nominal_phase_pi", ps.nominal_phase_pi},
                     {"anchor_width1_nm", ps.anchor_width1_nm},
                     {"anchor_width2_nm", ps.anchor_width2_nm},
                     {"anchor_phase_pi", ps.anchor_phase_pi}}}};
    return j;
}

inline CatalogVariant parse_catalog(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw SchemaError(std::string("catalog: malformed JSON: ") + e.what());
    }
    return catalog_from_json(j);
}

inline CatalogVariant load_catalog(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw NotFoundError("catalog not found: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_catalog(buf.str());
    } catch (const Error &e) {
        // Keep the concrete type; just prefix the file.
        const std::string msg = path.filename().string() + ": " + e.what();
        if (dynamic_cast<const ValidationError *>(&e)) throw ValidationError(msg);
        throw SchemaError(msg);
    }
}

inline std::string serialize(const CatalogVariant &cat) { return to_json(cat).dump(2); }

} // namespace ptc

#endif
