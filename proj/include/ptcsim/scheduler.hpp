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

#ifndef PTCSIM_SCHEDULER_HPP
#define PTCSIM_SCHEDULER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ptcsim/analog_core.hpp"
#include "ptcsim/arch_config.hpp"
#include "ptcsim/cost_model.hpp"
#include "ptcsim/device_catalog.hpp"
#include "ptcsim/error.hpp"
#include "ptcsim/matrix.hpp"
#include "ptcsim/quantizer.hpp"

namespace ptc
{

// Z = X Y with X: M x N and Y: N x Q. Any finite reals; operands are scaled
// into the encodable range by their max-abs before encoding.
struct GemmWorkload
{
    Matrix x;
    Matrix y;

    [[nodiscard]] std::size_t m() const { return x.rows(); }
    [[nodiscard]] std::size_t n() const { return x.cols(); }
    [[nodiscard]] std::size_t q() const { return y.cols(); }
};

inline void validate(const GemmWorkload &w)
{
    if (w.x.empty() || w.y.empty()) {
        throw ShapeError("workload: operands must be non-empty");
    }
    if (w.x.cols() != w.y.rows()) {
        throw ShapeError("workload: inner dimensions differ (" + std::to_string(w.x.cols()) + " vs "
                         + std::to_string(w.y.rows()) + ")");
    }
    const auto finite = [](const Matrix &a) {
        return std::all_of(a.flat().begin(), a.flat().end(), [](double v) { return std::isfinite(v); });
    };
    if (!finite(w.x) || !finite(w.y)) {
        throw RangeError("workload: operands contain non-finite values");
    }
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// ---------------------------------------------------------------------------
// Planning.

struct BlockAssignment
{
    int block_row = 0;
    int block_col = 0;
    int tile = 0;
    int round = 0;
};

struct Schedule
{
    std::int64_t m_pad = 0;
    std::int64_t n_pad = 0;
    std::int64_t q_pad = 0;
    std::int64_t block_rows = 0;
    std::int64_t block_cols = 0;
    std::int64_t rounds = 0;
    std::int64_t p = 0;                // reduction cycles per block
    std::vector<int> epoch_lengths;    // integration windows of one block, summing to p
    std::vector<BlockAssignment> blocks;

    [[nodiscard]] std::int64_t block_count() const { return block_rows * block_cols; }
    [[nodiscard]] std::int64_t readouts_per_block() const { return static_cast<std::int64_t>(epoch_lengths.size()); }
};

// Row-major blocks, round-robin over tiles. M and Q are padded to multiples of
// K, N to a multiple of C; core c owns reduction indices [c P, (c + 1) P).
inline Schedule plan(std::size_t m, std::size_t n, std::size_t q, const ArchConfig &arch)
{
    validate(arch);
    if (m == 0 || n == 0 || q == 0) {
        throw ShapeError("plan: GEMM dimensions must be positive");
    }
    Schedule s;
    s.block_rows = ceil_div(static_cast<std::int64_t>(m), arch.k);
    s.block_cols = ceil_div(static_cast<std::int64_t>(q), arch.k);
    s.m_pad = s.block_rows * arch.k;
    s.q_pad = s.block_cols * arch.k;
    s.p = ceil_div(static_cast<std::int64_t>(n), arch.c_cores);
    s.n_pad = s.p * arch.c_cores;
    s.rounds = ceil_div(s.block_count(), arch.r_tiles);
    for (std::int64_t left = s.p; left > 0; left -= arch.t_int) {
        s.epoch_lengths.push_back(static_cast<int>(std::min<std::int64_t>(left, arch.t_int)));
    }
    s.blocks.reserve(static_cast<std::size_t>(s.block_count()));
    for (std::int64_t idx = 0; idx < s.block_count(); ++idx) {
        s.blocks.push_back({static_cast<int>(idx / s.block_cols), static_cast<int>(idx % s.block_cols),
                            static_cast<int>(idx % arch.r_tiles), static_cast<int>(idx / arch.r_tiles)});
    }
    return s;
}

inline Schedule plan(const GemmWorkload &w, const ArchConfig &arch) { return plan(w.m(), w.n(), w.q(), arch); }

struct CycleCount
{
    std::int64_t compute_cycles = 0;
    std::int64_t reset_cycles = 0;
    std::int64_t readouts = 0;
    // Elapsed cycles with the R tiles running in parallel. Without pipelined
    // readout every epoch also stalls one cycle for the ADC conversion.
    std::int64_t wall_cycles = 0;
};

inline CycleCount cycle_count(const Schedule &s, const ArchConfig &arch)
{
    CycleCount c;
    c.compute_cycles = s.rounds * s.p;
    c.readouts = s.block_count() * s.readouts_per_block();
    c.reset_cycles = c.readouts * arch.t_rst;
    const std::int64_t stall = arch.t_rst + (arch.pipelined_readout ? 0 : 1);
    c.wall_cycles = c.compute_cycles + s.rounds * s.readouts_per_block() * stall;
    return c;
}

inline CycleCount cycle_count(std::size_t m, std::size_t n, std::size_t q, const ArchConfig &arch)
{
    return cycle_count(plan(m, n, q, arch), arch);
}

inline CycleCount cycle_count(const GemmWorkload &w, const ArchConfig &arch) { return cycle_count(plan(w, arch), arch); }

// Spatial, temporal and digital accumulation as plain arithmetic. Equal to
// X Y up to summation order.
inline Matrix hierarchical_matmul(const Matrix &x, const Matrix &y, const ArchConfig &arch)
{
    const Schedule s = plan(x.rows(), x.cols(), y.cols(), arch);
    if (x.cols() != y.rows()) {
        throw ShapeError("hierarchical_matmul: inner dimensions differ");
    }
    const auto n = static_cast<std::int64_t>(x.cols());
    Matrix z(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < y.cols(); ++j) {
            double digital = 0.0;
            std::int64_t p0 = 0;
            for (const int len : s.epoch_lengths) {
                double integrated = 0.0;
                for (std::int64_t p = p0; p < p0 + len; ++p) {
                    double photocurrent = 0.0;
                    for (std::int64_t c = 0; c < arch.c_cores; ++c) {
                        const std::int64_t idx = c * s.p + p;
                        if (idx < n) {
                            photocurrent += x(i, static_cast<std::size_t>(idx)) * y(static_cast<std::size_t>(idx), j);
                        }
                    }
                    integrated += photocurrent;
                }
                digital += integrated;
                p0 += len;
            }
            z(i, j) = digital;
        }
    }
    return z;
}

// ---------------------------------------------------------------------------
// Behavioral simulation.

enum class SimMode
{
    Ideal,
    Quantized,
    QuantizedNoise,
    QuantizedNoiseAdc,
};

inline std::string to_string(SimMode m)
{
    switch (m) {
    case SimMode::Ideal: return "ideal";
    case SimMode::Quantized: return "quantized";
    case SimMode::QuantizedNoise: return "quantized+noise";
    case SimMode::QuantizedNoiseAdc: return "quantized+noise+adc";
    }
    return "?";
}

inline SimMode parse_sim_mode(std::string_view s)
{
    if (s == "ideal") return SimMode::Ideal;
    if (s == "quantized") return SimMode::Quantized;
    if (s == "quantized+noise") return SimMode::QuantizedNoise;
    if (s == "quantized+noise+adc") return SimMode::QuantizedNoiseAdc;
    throw SchemaError("unknown mode '" + std::string(s)
                      + "' (expected ideal, quantized, quantized+noise or quantized+noise+adc)");
}

struct SimOptions
{
    std::optional<double> laser_power_w;     // per core; catalog Laser entry when unset
    double v_dd = 0.24;
    Topology topology = Topology::EmbeddedUneven;
    std::optional<EngineConfig> engine;      // replaces the catalog-derived engine
    std::optional<QuantizerParams> x_quant;  // min-max per tensor at bits_in when unset
    std::optional<QuantizerParams> y_quant;
};

// Engine seen by every crossbar node: laser power after the loss chain up to
// the coupler, with coupler and phase-shifter loss applied before detection.
// C_int is sized for the C-core aggregated peak current.
inline EngineConfig make_engine_config(const ArchConfig &arch, const CatalogVariant &cat, const SimOptions &opt = {})
{
    validate(arch);
    if (opt.engine) {
        return *opt.engine;
    }
    const double laser_w = opt.laser_power_w ? *opt.laser_power_w : cat.get(DeviceKind::Laser).power();
    if (!(laser_w > 0.0)) {
        throw DomainError("laser power must be positive");
    }
    const auto loss = insertion_loss(arch.k, cat, opt.topology);
    const auto &pd = cat.get(DeviceKind::Photodetector);
    EngineConfig e;
    e.loss_db = loss.il_ps + loss.il_dc;
    e.arm_power_mw = laser_w * mw_per_w * loss_factor(loss.total_db - e.loss_db);
    e.responsivity_a_per_w = pd.responsivity();
    e.dark_current_a = pd.dark_current();
    e.extinction_ratio_db = cat.modulator().extinction_ratio();
    e.dt_s = 1.0 / arch.clock_hz;
    e.v_dd = opt.v_dd;
    e.t_max = arch.t_int;
    e.t_rst = arch.t_rst;
    e.c_int_f = size_capacitor(arch.c_cores * e.engine_current_max_a(), arch.t_int, arch.clock_hz, e.v_dd);
    return e;
}

struct SimStats
{
    CycleCount cycles;
    std::int64_t blocks = 0;
    std::int64_t rounds = 0;
    std::int64_t saturation_events = 0;
    double max_abs_current_a = 0.0;  // aggregated over the C cores
    double max_abs_v = 0.0;
    double c_int_f = 0.0;
    double normalization_v = 0.0;
    double x_scale = 1.0;
    double y_scale = 1.0;
};

inline nlohmann::json to_json(const SimStats &s)
{
    return {{"compute_cycles", s.cycles.compute_cycles},
            {"reset_cycles", s.cycles.reset_cycles},
            {"readouts", s.cycles.readouts},
            {"wall_cycles", s.cycles.wall_cycles},
            {"blocks", s.blocks},
            {"rounds", s.rounds},
            {"saturation_events", s.saturation_events},
            {"max_abs_current_a", s.max_abs_current_a},
            {"max_abs_v", s.max_abs_v},
            {"c_int_f", s.c_int_f},
            {"normalization_v", s.normalization_v},
            {"x_scale", s.x_scale},
            {"y_scale", s.y_scale}};
}

struct SimResult
{
    Matrix z_hat;
    SimStats stats;
};

namespace detail
{

inline Matrix padded(const Matrix &a, std::size_t rows, std::size_t cols, double scale)
{
    Matrix out(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(i, j) = a(i, j) / scale;
        }
    }
    return out;
}

inline double encode_scale(const Matrix &a)
{
    const double m = max_abs(a.flat());
    return m > 0.0 ? m : 1.0;
}

} // namespace detail

// Operand preparation shared by every mode: fake quantization, relative
// noise on X (substream 0) and Y (substream 1).
inline GemmWorkload prepare_operands(const GemmWorkload &w, const ArchConfig &arch, const NoiseModel &nm, SimMode mode,
                                     const SimOptions &opt = {})
{
    if (mode == SimMode::Ideal) {
        return w;
    }
    const auto xq = opt.x_quant ? *opt.x_quant : minmax_quantizer(w.x, std::clamp(arch.bits_in, 2, 8), false);
    const auto yq = opt.y_quant ? *opt.y_quant : minmax_quantizer(w.y, std::clamp(arch.bits_in, 2, 8), false);
    GemmWorkload out{fake_quantize(w.x, xq), fake_quantize(w.y, yq)};
    if (mode != SimMode::Quantized) {
        out.x = inject_noise(out.x, nm, 0);
        out.y = inject_noise(out.y, nm, 1);
    }
    return out;
}

// Runs the GEMM through the analog model block by block. Each engine sums the
// photocurrents of the C cores into its integrator; every epoch of at most T
// cycles is read out (through the ADC in adc mode) and summed digitally.
inline SimResult simulate_gemm(const GemmWorkload &work, const ArchConfig &arch, const CatalogVariant &cat,
                               const NoiseModel &nm, SimMode mode, const SimOptions &opt = {})
{
    validate(work);
    validate(nm);
    const Schedule s = plan(work, arch);
    const EngineConfig eng = make_engine_config(arch, cat, opt);
    const GemmWorkload ops = prepare_operands(work, arch, nm, mode, opt);

    SimResult res;
    auto &st = res.stats;
    st.cycles = cycle_count(s, arch);
    st.blocks = s.block_count();
    st.rounds = s.rounds;
    st.c_int_f = eng.c_int_f;
    st.normalization_v = eng.normalization();
    st.x_scale = detail::encode_scale(ops.x);
    st.y_scale = detail::encode_scale(ops.y);

    const auto m_pad = static_cast<std::size_t>(s.m_pad);
    const auto n_pad = static_cast<std::size_t>(s.n_pad);
    const auto q_pad = static_cast<std::size_t>(s.q_pad);
    const Matrix xn = detail::padded(ops.x, m_pad, n_pad, st.x_scale);
    const Matrix yn = detail::padded(ops.y, n_pad, q_pad, st.y_scale);
    const bool use_adc = mode == SimMode::QuantizedNoiseAdc;
    if (use_adc) {
        check_adc_bits(arch.bits_out);
    }

    const auto k = static_cast<std::size_t>(arch.k);
    const auto cores = static_cast<std::size_t>(arch.c_cores);
    const auto p_len = static_cast<std::size_t>(s.p);
    const double rescale = st.x_scale * st.y_scale / st.normalization_v;
    res.z_hat = Matrix(work.m(), work.q());

    for (const auto &blk : s.blocks) {
        for (std::size_t bi = 0; bi < k; ++bi) {
            const std::size_t row = blk.block_row * k + bi;
            for (std::size_t bj = 0; bj < k; ++bj) {
                const std::size_t col = blk.block_col * k + bj;
                double digital = 0.0;
                std::size_t p = 0;
                for (const int len : s.epoch_lengths) {
                    IntegratorState integ = eng.fresh_integrator();
                    for (int t = 0; t < len; ++t, ++p) {
                        double current = 0.0;
                        for (std::size_t c = 0; c < cores; ++c) {
                            const std::size_t idx = c * p_len + p;
                            current += engine_current(xn(row, idx), yn(idx, col), eng);
                        }
                        st.max_abs_current_a = std::max(st.max_abs_current_a, std::abs(current));
                        integ = integrate_step(integ, current, eng.dt_s);
                    }
                    if (integ.saturated) {
                        ++st.saturation_events;
                    }
                    st.max_abs_v = std::max(st.max_abs_v, std::abs(integ.v));
                    digital += use_adc ? adc_value(adc_sample(integ.v, eng.v_dd, arch.bits_out), eng.v_dd,
                                                   arch.bits_out)
                                       : integ.v;
                }
                if (row < work.m() && col < work.q()) {
                    res.z_hat(row, col) = digital * rescale;
                }
            }
        }
    }
    if (mode == SimMode::Ideal && st.saturation_events > 0) {
        throw SizingError("simulate_gemm: " + std::to_string(st.saturation_events)
                          + " integrator saturation events in ideal mode; C_int is under-provisioned for the "
                            "aggregated C-core current");
    }
    return res;
}

} // namespace ptc

#endif
