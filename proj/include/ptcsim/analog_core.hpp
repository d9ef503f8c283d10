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

#ifndef PTCSIM_ANALOG_CORE_HPP
#define PTCSIM_ANALOG_CORE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>

#include "ptcsim/error.hpp"
#include "ptcsim/units.hpp"

namespace ptc
{

// Optical field amplitude in sqrt(mW): |E|^2 is the power in mW.
using Field = std::complex<double>;

struct FieldPair
{
    Field e1;
    Field e2;
};

struct EngineOutput
{
    double i_out_a = 0.0;   // signed differential photocurrent
    double p_out1_mw = 0.0; // optical power at PD 1
    double p_out2_mw = 0.0; // optical power at PD 2
    double noise_floor_a = 0.0;
};

using Transfer2x2 = std::array<std::array<Field, 2>, 2>;

inline Transfer2x2 operator*(const Transfer2x2 &a, const Transfer2x2 &b)
{
    Transfer2x2 out{};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    return out;
}

// Lossless directional coupler with through/cross coefficients t and kappa.
inline Transfer2x2 coupler_matrix(double t, double kappa)
{
    const Field j{0.0, 1.0};
    return {{{Field{t}, j * kappa}, {j * kappa, Field{t}}}};
}

// Phase shift applied to the second arm only.
inline Transfer2x2 arm2_phase_matrix(double phi)
{
    return {{{Field{1.0}, Field{0.0}}, {Field{0.0}, std::polar(1.0, phi)}}};
}

// 50:50 coupler preceded by the -pi/2 arm-2 shifter.
inline const Transfer2x2 &dot_engine_matrix()
{
    static const Transfer2x2 m = [] {
        const double h = std::sqrt(2.0) / 2.0;
        Transfer2x2 t = coupler_matrix(h, h) * arm2_phase_matrix(-pi / 2.0);
        // exp(-j pi/2) is not exactly -j in floating point; snap the negligible
        // real parts so the output matches (sqrt2/2)[x+y, j(x-y)] bit for bit.
        for (auto &row : t) {
            for (auto &v : row) {
                const double re = std::abs(v.real()) < 1e-15 ? 0.0 : v.real();
                const double im = std::abs(v.imag()) < 1e-15 ? 0.0 : v.imag();
                v = {re, im};
            }
        }
        return t;
    }();
    return m;
}

inline FieldPair engine_transfer(const FieldPair &in)
{
    const auto &m = dot_engine_matrix();
    return {m[0][0] * in.e1 + m[0][1] * in.e2, m[1][0] * in.e1 + m[1][1] * in.e2};
}

// Amplitude range left by a modulator with finite extinction ratio:
// sqrt(1 - 10^(-ER/10)). An infinite ER gives 1.
inline double er_amplitude_factor(double extinction_ratio_db)
{
    if (!(extinction_ratio_db > 0.0)) {
        throw DomainError("extinction ratio must be positive");
    }
    return std::sqrt(1.0 - std::pow(10.0, -extinction_ratio_db / 10.0));
}

// Encodes value in [-1, 1] as E_in cos(theta) with cos(theta) = value, then
// compresses by the extinction-ratio factor.
inline Field mzm_encode(double value, Field e_in, double extinction_ratio_db = std::numeric_limits<double>::infinity())
{
    if (!(std::abs(value) <= 1.0)) {
        throw RangeError("mzm_encode: value " + std::to_string(value) + " outside [-1, 1]");
    }
    return e_in * (value * er_amplitude_factor(extinction_ratio_db));
}

// Balanced detection. Dark current is reported as a noise floor; its mean
// cancels in the differential pair.
inline EngineOutput balanced_detect(const FieldPair &fields, double responsivity_a_per_w, double dark_current_a = 0.0,
                                    double loss_db = 0.0)
{
    if (!(responsivity_a_per_w > 0.0)) {
        throw DomainError("balanced_detect: responsivity must be positive");
    }
    const double keep = loss_factor(loss_db);
    EngineOutput out;
    out.p_out1_mw = std::norm(fields.e1) * keep;
    out.p_out2_mw = std::norm(fields.e2) * keep;
    out.i_out_a = responsivity_a_per_w * (out.p_out1_mw - out.p_out2_mw) / mw_per_w;
    out.noise_floor_a = dark_current_a;
    return out;
}

// ---------------------------------------------------------------------------
// Capacitive temporal integrator.

struct IntegratorState
{
    double v = 0.0;       // volts
    double c_int = 0.0;   // farads
    double v_dd = 0.0;    // symmetric rail
    int steps_accumulated = 0;
    int t_max = 1;
    int t_rst = 0;
    bool saturated = false;

    static IntegratorState make(double c_int, double v_dd, int t_max, int t_rst)
    {
        if (!(c_int > 0.0) || !(v_dd > 0.0) || t_max < 1 || t_rst < 0) {
            throw DomainError("integrator needs C > 0, V_DD > 0, T >= 1, T_rst >= 0");
        }
        IntegratorState s;
        s.c_int = c_int;
        s.v_dd = v_dd;
        s.t_max = t_max;
        s.t_rst = t_rst;
        return s;
    }

    friend bool operator==(const IntegratorState &, const IntegratorState &) = default;
};

// Overshoot of the rail this small (relative) is rounding, not saturation.
inline constexpr double rail_touch_tolerance = 1e-9;

inline IntegratorState integrate_step(IntegratorState state, double i_in_a, double dt_s)
{
    if (state.steps_accumulated >= state.t_max) {
        throw SchedulingError("integrate_step: integrator already holds " + std::to_string(state.steps_accumulated)
                              + " steps (T = " + std::to_string(state.t_max) + "); read out and reset first");
    }
    double v = state.v + i_in_a * dt_s / state.c_int;
    if (std::abs(v) > state.v_dd) {
        if (std::abs(v) - state.v_dd > rail_touch_tolerance * state.v_dd) {
            state.saturated = true;
        }
        v = std::copysign(state.v_dd, v);
    }
    state.v = v;
    ++state.steps_accumulated;
    return state;
}

inline IntegratorState reset(IntegratorState state)
{
    state.v = 0.0;
    state.steps_accumulated = 0;
    state.saturated = false;
    return state;
}

// C_int = I_max T / (f V_DD).
inline double size_capacitor(double i_pd_max_a, int t_steps, double clock_hz, double v_dd)
{
    if (!(i_pd_max_a > 0.0) || t_steps < 1 || !(clock_hz > 0.0) || !(v_dd > 0.0)) {
        throw DomainError("size_capacitor: all inputs must be positive");
    }
    return i_pd_max_a * t_steps / (clock_hz * v_dd);
}

// ---------------------------------------------------------------------------
// One dot-product engine end to end.

struct EngineConfig
{
    double arm_power_mw = 1.0;     // optical power reaching each engine input arm
    double responsivity_a_per_w = 1.0;
    double dark_current_a = 0.0;
    double loss_db = 0.0;          // loss between coupler and photodiodes
    double extinction_ratio_db = std::numeric_limits<double>::infinity();
    double dt_s = 2e-10;
    double c_int_f = 1e-12;
    double v_dd = 0.24;
    int t_max = 60;
    int t_rst = 2;

    // Largest |i_out| of a single engine: 2 R L P_arm er^2 at |x| = |y| = 1.
    [[nodiscard]] double engine_current_max_a() const
    {
        const double er = er_amplitude_factor(extinction_ratio_db);
        return 2.0 * responsivity_a_per_w * loss_factor(loss_db) * arm_power_mw * er * er / mw_per_w;
    }

    // Volts on the integrator per unit of accumulated x*y.
    [[nodiscard]] double normalization() const { return engine_current_max_a() * dt_s / c_int_f; }

    [[nodiscard]] IntegratorState fresh_integrator() const
    {
        return IntegratorState::make(c_int_f, v_dd, t_max, t_rst);
    }
};

// Ideal engine whose single-engine peak current is i_engine_max_a.
inline EngineConfig ideal_engine(double i_engine_max_a, double clock_hz, int t_max, int t_rst, double v_dd,
                                 double c_int_f)
{
    EngineConfig cfg;
    cfg.responsivity_a_per_w = 1.0;
    cfg.arm_power_mw = i_engine_max_a * mw_per_w / 2.0;
    cfg.dt_s = 1.0 / clock_hz;
    cfg.t_max = t_max;
    cfg.t_rst = t_rst;
    cfg.v_dd = v_dd;
    cfg.c_int_f = c_int_f;
    return cfg;
}

// Photocurrent of one engine for the operand pair (x, y).
inline double engine_current(double x, double y, const EngineConfig &cfg)
{
    const Field e_in{std::sqrt(cfg.arm_power_mw), 0.0};
    const FieldPair in{mzm_encode(x, e_in, cfg.extinction_ratio_db), mzm_encode(y, e_in, cfg.extinction_ratio_db)};
    return balanced_detect(engine_transfer(in), cfg.responsivity_a_per_w, cfg.dark_current_a, cfg.loss_db).i_out_a;
}

// Streams x[k], y[k] through one engine and integrator; returns V_int.
// V_int / cfg.normalization() is the dot product when nothing saturates.
inline double run_engine_sequence(std::span<const double> x, std::span<const double> y, const EngineConfig &cfg)
{
    if (x.size() != y.size()) {
        throw ShapeError("run_engine_sequence: operand lengths differ");
    }
    if (x.size() > static_cast<std::size_t>(cfg.t_max)) {
        throw SchedulingError("run_engine_sequence: sequence longer than the integration window T");
    }
    IntegratorState s = cfg.fresh_integrator();
    for (std::size_t k = 0; k < x.size(); ++k) {
        s = integrate_step(s, engine_current(x[k], y[k], cfg), cfg.dt_s);
    }
    return s.v;
}

} // namespace ptc

#endif
