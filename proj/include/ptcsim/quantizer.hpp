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

#ifndef PTCSIM_QUANTIZER_HPP
#define PTCSIM_QUANTIZER_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ptcsim/error.hpp"
#include "ptcsim/matrix.hpp"

namespace ptc
{

// Per-channel learnable-step-size quantizer. A single alpha entry means
// per-tensor. channel_axis 0 -> one channel per row, 1 -> per column.
struct QuantizerParams
{
    int bits = 6;
    std::vector<double> alpha{1.0};
    std::vector<double> zero_point{};
    int channel_axis = 0;

    [[nodiscard]] double qmin() const { return -std::ldexp(1.0, bits - 1); }
    [[nodiscard]] double qmax() const { return std::ldexp(1.0, bits - 1) - 1.0; }

    [[nodiscard]] std::size_t channels() const { return alpha.size(); }

    [[nodiscard]] double zero(std::size_t c) const { return zero_point.empty() ? 0.0 : zero_point[c]; }
};

inline void validate(const QuantizerParams &p)
{
    if (p.bits < 2 || p.bits > 8) {
        throw ValidationError("quantizer bits must lie in [2, 8], got " + std::to_string(p.bits));
    }
    if (p.alpha.empty()) {
        throw ValidationError("quantizer needs at least one alpha");
    }
    for (const double a : p.alpha) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw ValidationError("quantizer alpha must be positive and finite");
        }
    }
    if (!p.zero_point.empty() && p.zero_point.size() != p.alpha.size()) {
        throw ValidationError("quantizer zero_point length must match alpha");
    }
    for (const double z : p.zero_point) {
        if (!std::isfinite(z)) {
            throw ValidationError("quantizer zero_point must be finite");
        }
    }
    if (p.channel_axis != 0 && p.channel_axis != 1) {
        throw ValidationError("quantizer channel_axis must be 0 or 1");
    }
}

namespace detail
{

// Channel index of element (r, c); validates the channel count against the shape.
struct ChannelMap
{
    std::size_t per_tensor;
    int axis;

    [[nodiscard]] std::size_t operator()(std::size_t r, std::size_t c) const
    {
        return per_tensor ? 0 : (axis == 0 ? r : c);
    }
};

inline ChannelMap channel_map(const Matrix &x, const QuantizerParams &p)
{
    validate(p);
    if (p.channels() == 1) {
        return {1, p.channel_axis};
    }
    const std::size_t expect = p.channel_axis == 0 ? x.rows() : x.cols();
    if (p.channels() != expect) {
        throw ShapeError("quantizer has " + std::to_string(p.channels()) + " channels but tensor axis "
                         + std::to_string(p.channel_axis) + " has " + std::to_string(expect));
    }
    return {0, p.channel_axis};
}

} // namespace detail

// Round half away from zero.
inline double round_half_away(double v) { return std::round(v); }

// X_q = (round(clip(X / alpha + z, qmin, qmax)) - z) * alpha, per channel.
inline Matrix fake_quantize(const Matrix &x, const QuantizerParams &p)
{
    const auto ch = detail::channel_map(x, p);
    Matrix out(x.rows(), x.cols());
    const double lo = p.qmin();
    const double hi = p.qmax();
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const std::size_t k = ch(r, c);
            const double a = p.alpha[k];
            const double z = p.zero(k);
            const double v = std::clamp(x(r, c) / a + z, lo, hi);
            out(r, c) = (round_half_away(v) - z) * a;
        }
    }
    return out;
}

struct QuantGrad
{
    Matrix grad_x;
    std::vector<double> grad_alpha;
};

// Default step-size gradient scale 1 / sqrt(N * Q_max), N = elements per channel.
inline double lsq_grad_scale(const Matrix &x, const QuantizerParams &p)
{
    const double per_channel = static_cast<double>(x.size()) / static_cast<double>(p.channels());
    return 1.0 / std::sqrt(per_channel * p.qmax());
}

// Straight-through estimator. Inside the clip range the rounding is treated as
// identity for x, and dQ/dalpha = round(v) - v; at the clips dQ/dalpha is the
// clipped level minus z and x receives no gradient. grad_alpha is multiplied
// by grad_scale (pass 1.0 for the raw derivative).
inline QuantGrad quantize_grad_ste(const Matrix &upstream, const Matrix &x, const QuantizerParams &p,
                                   double grad_scale)
{
    if (upstream.rows() != x.rows() || upstream.cols() != x.cols()) {
        throw ShapeError("quantize_grad_ste: upstream and input shapes differ");
    }
    const auto ch = detail::channel_map(x, p);
    QuantGrad g{Matrix(x.rows(), x.cols()), std::vector<double>(p.channels(), 0.0)};
    const double lo = p.qmin();
    const double hi = p.qmax();
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const std::size_t k = ch(r, c);
            const double z = p.zero(k);
            const double v = x(r, c) / p.alpha[k] + z;
            double dq_dalpha;
            if (v < lo) {
                dq_dalpha = lo - z;
            } else if (v > hi) {
                dq_dalpha = hi - z;
            } else {
                dq_dalpha = round_half_away(v) - v;
                g.grad_x(r, c) = upstream(r, c);
            }
            g.grad_alpha[k] += upstream(r, c) * dq_dalpha;
        }
    }
    for (double &ga : g.grad_alpha) {
        ga *= grad_scale;
    }
    return g;
}

inline QuantGrad quantize_grad_ste(const Matrix &upstream, const Matrix &x, const QuantizerParams &p)
{
    return quantize_grad_ste(upstream, x, p, lsq_grad_scale(x, p));
}

// Min-max initialization: alpha = max|x| / qmax over each channel.
inline QuantizerParams minmax_quantizer(const Matrix &x, int bits, bool per_channel, int channel_axis = 0)
{
    QuantizerParams p;
    p.bits = bits;
    p.channel_axis = channel_axis;
    const std::size_t n = per_channel ? (channel_axis == 0 ? x.rows() : x.cols()) : 1;
    p.alpha.assign(n, 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const std::size_t k = per_channel ? (channel_axis == 0 ? r : c) : 0;
            p.alpha[k] = std::max(p.alpha[k], std::abs(x(r, c)));
        }
    }
    for (double &a : p.alpha) {
        a = a > 0.0 ? a / p.qmax() : 1.0;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Relative Gaussian noise.

struct NoiseModel
{
    double sigma = 0.0;
    std::uint64_t seed = 0;
    bool enabled = true;

    [[nodiscard]] bool active() const { return enabled && sigma > 0.0; }
};

inline void validate(const NoiseModel &nm)
{
    if (!(nm.sigma >= 0.0) || !std::isfinite(nm.sigma)) {
        throw ValidationError("noise sigma must be a finite non-negative number");
    }
}

// Independent, reproducible substream for (seed, stream_id).
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
}

// X + dX with dX ~ N(0, (sigma |X|)^2) elementwise.
inline Matrix inject_noise(const Matrix &x, const NoiseModel &nm, std::uint64_t stream_id = 0)
{
    validate(nm);
    if (!nm.active()) {
        return x;
    }
    auto rng = make_stream(nm.seed, stream_id);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix out = x;
    for (double &v : out.flat()) {
        v += nm.sigma * std::abs(v) * gauss(rng);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mid-rise ADC: 2^bits codes over [-FS, FS]; code k reconstructs to
// (k - (2^(bits-1) - 0.5)) / 2^(bits-1) * FS.

inline void check_adc_bits(int bits)
{
    if (bits < 2 || bits > 12) {
        throw DomainError("ADC bits must lie in [2, 12], got " + std::to_string(bits));
    }
}

inline int adc_sample(double v, double full_scale, int bits)
{
    check_adc_bits(bits);
    if (!std::isfinite(v)) {
        throw RangeError("adc_sample: non-finite input");
    }
    if (!(full_scale > 0.0)) {
        throw DomainError("adc_sample: full scale must be positive");
    }
    const double half = std::ldexp(1.0, bits - 1);
    const double code = std::floor(v / full_scale * half + half);
    return static_cast<int>(std::clamp(code, 0.0, 2.0 * half - 1.0));
}

inline double adc_value(int code, double full_scale, int bits)
{
    check_adc_bits(bits);
    const double half = std::ldexp(1.0, bits - 1);
    return (code - (half - 0.5)) / half * full_scale;
}

} // namespace ptc

#endif
