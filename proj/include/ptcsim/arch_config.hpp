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

#ifndef PTCSIM_ARCH_CONFIG_HPP
#define PTCSIM_ARCH_CONFIG_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "ptcsim/device_catalog.hpp"
#include "ptcsim/error.hpp"

namespace ptc
{

inline constexpr int arch_schema_version = 1;

// R tiles of C cores, each core a K x K crossbar of dot-product engines.
struct ArchConfig
{
    int r_tiles = 6;
    int c_cores = 6;
    int k = 32;
    double clock_hz = 5e9;
    int t_int = 60;  // integration window T, in cycles
    int t_rst = 2;   // integrator reset, in cycles
    int bits_in = 6;
    int bits_out = 6;
    // Y-side modulators shared by the R tiles of a column (C*K instead of R*C*K).
    bool share_y_modulators = false;
    // One integrator/TIA/ADC array per tile instead of per core.
    bool share_readout = true;
    // Readout of one epoch overlaps the next epoch's compute; reset still costs t_rst.
    bool pipelined_readout = true;
    double global_sram_kib = 2048.0;
    double tile_sram_kib = 4.0;

    friend bool operator==(const ArchConfig &, const ArchConfig &) = default;
};

inline void validate(const ArchConfig &a)
{
    if (a.r_tiles < 1 || a.c_cores < 1 || a.k < 1) {
        throw ValidationError("arch: R, C and K must be at least 1");
    }
    if (a.t_int < 1) {
        throw ValidationError("arch: integration window T must be at least 1");
    }
    if (a.t_rst < 0) {
        throw ValidationError("arch: t_rst must be non-negative");
    }
    if (!(a.clock_hz > 0.0) || !std::isfinite(a.clock_hz)) {
        throw ValidationError("arch: clock_hz must be positive");
    }
    if (a.bits_in < 1 || a.bits_in > 16 || a.bits_out < 1 || a.bits_out > 16) {
        throw ValidationError("arch: bit widths must lie in [1, 16]");
    }
    if (a.global_sram_kib < 0.0 || a.tile_sram_kib < 0.0) {
        throw ValidationError("arch: SRAM sizes must be non-negative");
    }
}

inline ArchConfig arch_from_json(const nlohmann::json &j)
{
    detail::reject_unknown(j,
                           {"schema_version", "r_tiles", "c_cores", "k", "clock_hz", "t_int", "t_rst", "bits_in",
                            "bits_out", "share_y_modulators", "share_readout", "pipelined_readout",
                            "global_sram_kib", "tile_sram_kib"},
                           "arch");
    if (j.contains("schema_version") && j["schema_version"] != arch_schema_version) {
        throw SchemaError("arch: unsupported schema_version " + j["schema_version"].dump());
    }
    ArchConfig a;
    try {
        a.r_tiles = j.value("r_tiles", a.r_tiles);
        a.c_cores = j.value("c_cores", a.c_cores);
        a.k = j.value("k", a.k);
        a.clock_hz = j.value("clock_hz", a.clock_hz);
        a.t_int = j.value("t_int", a.t_int);
        a.t_rst = j.value("t_rst", a.t_rst);
        a.bits_in = j.value("bits_in", a.bits_in);
        a.bits_out = j.value("bits_out", a.bits_out);
        a.share_y_modulators = j.value("share_y_modulators", a.share_y_modulators);
        a.share_readout = j.value("share_readout", a.share_readout);
        a.pipelined_readout = j.value("pipelined_readout", a.pipelined_readout);
        a.global_sram_kib = j.value("global_sram_kib", a.global_sram_kib);
        a.tile_sram_kib = j.value("tile_sram_kib", a.tile_sram_kib);
    } catch (const nlohmann::json::exception &e) {
        throw SchemaError(std::string("arch: ") + e.what());
    }
    validate(a);
    return a;
}

inline nlohmann::json to_json(const ArchConfig &a)
{
    return {{"schema_version", arch_schema_version},
            {"r_tiles", a.r_tiles},
            {"c_cores", a.c_cores},
            {"k", a.k},
            {"clock_hz", a.clock_hz},
            {"t_int", a.t_int},
            {"t_rst", a.t_rst},
            {"bits_in", a.bits_in},
            {"bits_out", a.bits_out},
            {"share_y_modulators", a.share_y_modulators},
            {"share_readout", a.share_readout},
            {"pipelined_readout", a.pipelined_readout},
            {"global_sram_kib", a.global_sram_kib},
            {"tile_sram_kib", a.tile_sram_kib}};
}

inline ArchConfig load_arch(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw NotFoundError("arch config not found: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return arch_from_json(nlohmann::json::parse(buf.str()));
    } catch (const nlohmann::json::parse_error &e) {
        throw SchemaError("arch: malformed JSON: " + std::string(e.what()));
    }
}

} // namespace ptc

#endif
