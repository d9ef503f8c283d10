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

#ifndef PTCSIM_INFERENCE_HPP
#define PTCSIM_INFERENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "ptcsim/error.hpp"
#include "ptcsim/matrix.hpp"
#include "ptcsim/quantizer.hpp"
#include "ptcsim/scheduler.hpp"
#include "ptcsim/units.hpp"

namespace ptc
{

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Synthetic datasets.

struct Dataset
{
    Matrix features; // samples x dims
    std::vector<int> labels;
    int classes = 0;

    [[nodiscard]] std::size_t size() const { return labels.size(); }
};

enum class DatasetKind
{
    Blobs,
    Spirals,
};

struct DatasetSpec
{
    DatasetKind kind = DatasetKind::Spirals;
    int samples_per_class = 200;
    int classes = 2;     // blobs only; spirals are always two
    double noise = 0.05; // blob std, or jitter on spiral points
    double turns = 1.0;  // spirals only
    std::uint64_t seed = 1;
};

inline std::string to_string(DatasetKind k) { return k == DatasetKind::Blobs ? "blobs" : "spirals"; }

inline DatasetKind parse_dataset_kind(std::string_view s)
{
    if (s == "blobs") return DatasetKind::Blobs;
    if (s == "spirals") return DatasetKind::Spirals;
    throw SchemaError("unknown dataset '" + std::string(s) + "' (expected blobs or spirals)");
}

// stream selects an independent draw (0 = train, 1 = test).
inline Dataset make_dataset(const DatasetSpec &spec, std::uint64_t stream = 0)
{
    if (spec.samples_per_class < 1) {
        throw ValidationError("dataset: samples_per_class must be at least 1");
    }
    if (spec.kind == DatasetKind::Blobs && spec.classes < 2) {
        throw ValidationError("dataset: blobs need at least two classes");
    }
    if (!(spec.noise >= 0.0)) {
        throw ValidationError("dataset: noise must be non-negative");
    }
    const int classes = spec.kind == DatasetKind::Spirals ? 2 : spec.classes;
    const auto n = static_cast<std::size_t>(spec.samples_per_class) * classes;
    auto rng = make_stream(spec.seed, 100 + stream);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Dataset ds{Matrix(n, 2), std::vector<int>(n), classes};
    std::size_t i = 0;
    for (int cls = 0; cls < classes; ++cls) {
        for (int s = 0; s < spec.samples_per_class; ++s, ++i) {
            double x;
            double y;
            if (spec.kind == DatasetKind::Blobs) {
                const double a = 2.0 * pi * cls / classes;
                x = 0.6 * std::cos(a) + spec.noise * gauss(rng);
                y = 0.6 * std::sin(a) + spec.noise * gauss(rng);
            } else {
                const double t = 0.15 + 0.85 * unif(rng);
                const double a = 2.0 * pi * spec.turns * t + pi * cls;
                x = t * std::cos(a) + spec.noise * gauss(rng);
                y = t * std::sin(a) + spec.noise * gauss(rng);
            }
            ds.features(i, 0) = x;
            ds.features(i, 1) = y;
            ds.labels[i] = cls;
        }
    }
    return ds;
}

// ---------------------------------------------------------------------------
// Model.

enum class Activation
{
    Relu,
    None,
};

struct MlpLayer
{
    Matrix w; // in x out, the Y operand of the layer GEMM
    std::vector<double> b;
    Activation act = Activation::Relu;
    QuantizerParams wq;
    QuantizerParams aq; // input activations, the X operand
};

// bits == float_bits turns quantization off.
inline constexpr int float_bits = 32;

struct TinyMlp
{
    std::vector<MlpLayer> layers;
    int bits = 6;

    [[nodiscard]] bool quantized() const { return bits != float_bits; }
    [[nodiscard]] std::size_t inputs() const { return layers.front().w.rows(); }
    [[nodiscard]] std::size_t outputs() const { return layers.back().w.cols(); }
};

inline void check_model_bits(int bits)
{
    if (bits != float_bits && (bits < 2 || bits > 8)) {
        throw ValidationError("model bits must lie in [2, 8] (or 32 for float), got " + std::to_string(bits));
    }
}

inline void validate(const TinyMlp &m)
{
    check_model_bits(m.bits);
    if (m.layers.empty()) {
        throw ValidationError("model has no layers");
    }
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const auto &L = m.layers[l];
        if (L.b.size() != L.w.cols()) {
            throw ShapeError("layer " + std::to_string(l) + ": bias length differs from output width");
        }
        if (l > 0 && m.layers[l - 1].w.cols() != L.w.rows()) {
            throw ShapeError("layer " + std::to_string(l) + ": input width does not chain");
        }
    }
}

// He-initialized weights; quantizer steps start at 2 mean|W| / sqrt(Q_max).
inline TinyMlp make_mlp(std::size_t inputs, const std::vector<std::size_t> &hidden, std::size_t classes, int bits,
                        std::uint64_t seed)
{
    check_model_bits(bits);
    TinyMlp m;
    m.bits = bits;
    auto rng = make_stream(seed, 200);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::size_t> dims{inputs};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(classes);
    const int qbits = m.quantized() ? bits : 8;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        MlpLayer L;
        L.w = Matrix(dims[l], dims[l + 1]);
        const double std_w = std::sqrt(2.0 / static_cast<double>(dims[l]));
        double mean_abs = 0.0;
        for (double &v : L.w.flat()) {
            v = std_w * gauss(rng);
            mean_abs += std::abs(v);
        }
        mean_abs /= static_cast<double>(L.w.size());
        L.b.assign(dims[l + 1], 0.0);
        L.act = l + 2 == dims.size() ? Activation::None : Activation::Relu;
        L.wq.bits = qbits;
        L.wq.alpha = {2.0 * mean_abs / std::sqrt(L.wq.qmax())};
        L.aq.bits = qbits;
        L.aq.alpha = {2.0 * 0.5 / std::sqrt(L.aq.qmax())};
        m.layers.push_back(std::move(L));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Training.

struct TrainConfig
{
    int epochs = 200;
    double learning_rate = 0.05;
    double momentum = 0.9;
    int batch_size = 32;
    std::vector<std::size_t> hidden{32, 32};
    int bits = 6;
    NoiseModel noise;
    std::uint64_t seed = 1;
};

struct LayerGrad
{
    Matrix dw;
    std::vector<double> db;
    double d_alpha_w = 0.0;
    double d_alpha_a = 0.0;
};

struct LossAndGrad
{
    double loss = 0.0;
    std::vector<LayerGrad> grads;
};

namespace detail
{

struct LayerCache
{
    Matrix a_in;  // raw input activation
    Matrix a_op;  // operand after quantization and noise
    Matrix w_op;
    Matrix z;
};

inline void add_bias(Matrix &z, const std::vector<double> &b)
{
    for (std::size_t i = 0; i < z.rows(); ++i) {
        for (std::size_t j = 0; j < z.cols(); ++j) {
            z(i, j) += b[j];
        }
    }
}

inline Matrix activate(const Matrix &z, Activation act)
{
    if (act == Activation::None) {
        return z;
    }
    Matrix out = z;
    for (double &v : out.flat()) {
        v = std::max(v, 0.0);
    }
    return out;
}

inline Matrix softmax_rows(const Matrix &logits)
{
    Matrix p = logits;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        auto r = p.row(i);
        const double mx = *std::max_element(r.begin(), r.end());
        double s = 0.0;
        for (double &v : r) {
            v = std::exp(v - mx);
            s += v;
        }
        for (double &v : r) {
            v /= s;
        }
    }
    return p;
}

inline Matrix select_rows(const Matrix &a, std::span<const std::size_t> idx)
{
    Matrix out(idx.size(), a.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        std::copy(a.row(idx[i]).begin(), a.row(idx[i]).end(), out.row(i).begin());
    }
    return out;
}

} // namespace detail

// Cross-entropy loss and gradients of one batch. Forward uses fake
// quantization and relative operand noise; backward passes the noise straight
// through and uses the STE for the quantizers.
inline LossAndGrad loss_and_gradients(const TinyMlp &m, const Matrix &x, std::span<const int> labels,
                                      const NoiseModel &nm, std::uint64_t noise_key = 0)
{
    validate(m);
    if (x.rows() != labels.size() || x.rows() == 0) {
        throw ShapeError("loss_and_gradients: batch and label counts differ or are zero");
    }
    std::vector<detail::LayerCache> cache(m.layers.size());
    Matrix a = x;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const auto &L = m.layers[l];
        auto &c = cache[l];
        c.a_in = a;
        c.a_op = m.quantized() ? fake_quantize(a, L.aq) : a;
        c.w_op = m.quantized() ? fake_quantize(L.w, L.wq) : L.w;
        if (nm.active()) {
            const NoiseModel layer_nm{nm.sigma, mix_seed(nm.seed, noise_key), true};
            c.a_op = inject_noise(c.a_op, layer_nm, 2 * l);
            c.w_op = inject_noise(c.w_op, layer_nm, 2 * l + 1);
        }
        c.z = matmul(c.a_op, c.w_op);
        detail::add_bias(c.z, L.b);
        a = detail::activate(c.z, L.act);
    }

    const double batch = static_cast<double>(x.rows());
    Matrix d = detail::softmax_rows(a);
    LossAndGrad out;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const auto y = static_cast<std::size_t>(labels[i]);
        if (y >= d.cols()) {
            throw ValidationError("label " + std::to_string(labels[i]) + " outside the model's class count");
        }
        out.loss -= std::log(std::max(d(i, y), 1e-300)) / batch;
        d(i, y) -= 1.0;
    }
    for (double &v : d.flat()) {
        v /= batch;
    }

    out.grads.resize(m.layers.size());
    for (std::size_t l = m.layers.size(); l-- > 0;) {
        const auto &L = m.layers[l];
        const auto &c = cache[l];
        auto &g = out.grads[l];
        if (L.act == Activation::Relu) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (c.z.flat()[i] <= 0.0) {
                    d.flat()[i] = 0.0;
                }
            }
        }
        g.db.assign(L.b.size(), 0.0);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            for (std::size_t j = 0; j < d.cols(); ++j) {
                g.db[j] += d(i, j);
            }
        }
        const Matrix dw_op = matmul(c.a_op.transposed(), d);
        Matrix da_op = matmul(d, c.w_op.transposed());
        if (m.quantized()) {
            auto gw = quantize_grad_ste(dw_op, L.w, L.wq);
            auto ga = quantize_grad_ste(da_op, c.a_in, L.aq);
            g.dw = std::move(gw.grad_x);
            g.d_alpha_w = gw.grad_alpha[0];
            g.d_alpha_a = ga.grad_alpha[0];
            d = std::move(ga.grad_x);
        } else {
            g.dw = dw_op;
            d = std::move(da_op);
        }
    }
    return out;
}

inline Matrix forward_float(const TinyMlp &m, const Matrix &x, bool apply_quantization = false)
{
    validate(m);
    Matrix a = x;
    for (const auto &L : m.layers) {
        const bool q = apply_quantization && m.quantized();
        Matrix z = matmul(q ? fake_quantize(a, L.aq) : a, q ? fake_quantize(L.w, L.wq) : L.w);
        detail::add_bias(z, L.b);
        a = detail::activate(z, L.act);
    }
    return a;
}

// Every layer GEMM runs through simulate_gemm; bias and activation are digital.
inline Matrix forward_sim(const TinyMlp &m, const Matrix &x, const ArchConfig &arch, const CatalogVariant &cat,
                          const NoiseModel &nm, SimMode mode, const SimOptions &base_opt = {})
{
    validate(m);
    Matrix a = x;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const auto &L = m.layers[l];
        SimOptions opt = base_opt;
        if (m.quantized()) {
            opt.x_quant = L.aq;
            opt.y_quant = L.wq;
        }
        const NoiseModel layer_nm{nm.sigma, mix_seed(nm.seed, l), nm.enabled};
        Matrix z = simulate_gemm(GemmWorkload{a, L.w}, arch, cat, layer_nm, mode, opt).z_hat;
        detail::add_bias(z, L.b);
        a = detail::activate(z, L.act);
    }
    return a;
}

inline double accuracy(const Matrix &logits, std::span<const int> labels)
{
    if (logits.rows() != labels.size() || labels.empty()) {
        throw ShapeError("accuracy: logits and labels differ in count");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        const auto r = logits.row(i);
        if (std::max_element(r.begin(), r.end()) - r.begin() == labels[i]) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

// Minibatch SGD with momentum. Deterministic under cfg.seed.
inline TinyMlp train(const Dataset &ds, const TrainConfig &cfg)
{
    if (ds.size() == 0) {
        throw ValidationError("train: dataset is empty");
    }
    check_model_bits(cfg.bits);
    validate(cfg.noise);
    if (cfg.epochs < 1 || cfg.batch_size < 1 || !(cfg.learning_rate > 0.0) || cfg.momentum < 0.0
        || cfg.momentum >= 1.0) {
        throw ValidationError("train: epochs and batch_size must be >= 1, lr > 0, momentum in [0, 1)");
    }
    TinyMlp m = make_mlp(ds.features.cols(), cfg.hidden, static_cast<std::size_t>(ds.classes), cfg.bits, cfg.seed);
    std::vector<LayerGrad> vel(m.layers.size());
    std::vector<std::pair<double, double>> vel_alpha(m.layers.size(), {0.0, 0.0});
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        vel[l].dw = Matrix(m.layers[l].w.rows(), m.layers[l].w.cols());
        vel[l].db.assign(m.layers[l].b.size(), 0.0);
    }
    std::vector<std::size_t> order(ds.size());
    std::iota(order.begin(), order.end(), 0);
    auto shuffle_rng = make_stream(cfg.seed, 300);
    const double lr = cfg.learning_rate;
    const double mu = cfg.momentum;
    std::uint64_t step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size, ++step) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const std::span<const std::size_t> idx(order.data() + start, end - start);
            const Matrix xb = detail::select_rows(ds.features, idx);
            std::vector<int> yb(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) {
                yb[i] = ds.labels[idx[i]];
            }
            const auto lg = loss_and_gradients(m, xb, yb, cfg.noise, step);
            if (!std::isfinite(lg.loss)) {
                std::ostringstream os;
                os << "training diverged at epoch " << epoch << ", step " << step << ": loss " << lg.loss
                   << " (lr " << lr << ", momentum " << mu << ", sigma " << cfg.noise.sigma << ", bits " << cfg.bits
                   << ")";
                throw TrainingError(os.str());
            }
            for (std::size_t l = 0; l < m.layers.size(); ++l) {
                auto &L = m.layers[l];
                const auto &g = lg.grads[l];
                auto &v = vel[l];
                for (std::size_t i = 0; i < L.w.size(); ++i) {
                    v.dw.flat()[i] = mu * v.dw.flat()[i] + g.dw.flat()[i];
                    L.w.flat()[i] -= lr * v.dw.flat()[i];
                }
                for (std::size_t j = 0; j < L.b.size(); ++j) {
                    v.db[j] = mu * v.db[j] + g.db[j];
                    L.b[j] -= lr * v.db[j];
                }
                if (m.quantized()) {
                    auto &[va_w, va_a] = vel_alpha[l];
                    va_w = mu * va_w + g.d_alpha_w;
                    va_a = mu * va_a + g.d_alpha_a;
                    L.wq.alpha[0] = std::max(L.wq.alpha[0] - lr * va_w, 1e-6);
                    L.aq.alpha[0] = std::max(L.aq.alpha[0] - lr * va_a, 1e-6);
                }
            }
        }
    }
    return m;
}

inline TinyMlp train(const Dataset &ds, int epochs, const NoiseModel &nm, int bits, std::uint64_t seed)
{
    TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.noise = nm;
    cfg.bits = bits;
    cfg.seed = seed;
    return train(ds, cfg);
}

// ---------------------------------------------------------------------------
// Robustness.

struct RobustnessRow
{
    double sigma = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> trials;
};

struct RobustnessTable
{
    std::vector<RobustnessRow> rows;

    [[nodiscard]] const RobustnessRow &at_sigma(double sigma) const
    {
        for (const auto &r : rows) {
            if (std::abs(r.sigma - sigma) <= 1e-12) {
                return r;
            }
        }
        throw LookupError("robustness table has no row for sigma " + std::to_string(sigma));
    }
};

// Accuracy per sigma over independent noise draws. Trial t uses the same noise
// seed at every sigma. Trials run concurrently; results do not depend on the
// thread count.
inline RobustnessTable evaluate_robustness(const TinyMlp &model, const Dataset &ds, std::span<const double> sigmas,
                                           const ArchConfig &arch, const CatalogVariant &cat, int trials,
                                           std::uint64_t seed = 0, SimMode mode = SimMode::QuantizedNoise)
{
    if (trials < 1) {
        throw ValidationError("evaluate_robustness: trials must be at least 1");
    }
    if (sigmas.empty()) {
        throw ValidationError("evaluate_robustness: no sigma values");
    }
    for (const double s : sigmas) {
        validate(NoiseModel{s, 0, true});
    }
    validate(model);
    const std::size_t n_jobs = sigmas.size() * static_cast<std::size_t>(trials);
    std::vector<double> acc(n_jobs, 0.0);
    const auto run_job = [&](std::size_t job) {
        const double sigma = sigmas[job / trials];
        const auto t = static_cast<std::uint64_t>(job % trials);
        const NoiseModel nm{sigma, mix_seed(seed, t), true};
        acc[job] = accuracy(forward_sim(model, ds.features, arch, cat, nm, mode), ds.labels);
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n_jobs));
    std::vector<std::future<void>> futures;
    for (std::size_t w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t job = w; job < n_jobs; job += workers) {
                run_job(job);
            }
        }));
    }
    for (auto &f : futures) {
        f.get();
    }

    RobustnessTable table;
    for (std::size_t s = 0; s < sigmas.size(); ++s) {
        RobustnessRow row;
        row.sigma = sigmas[s];
        row.trials.assign(acc.begin() + s * trials, acc.begin() + (s + 1) * trials);
        row.mean = std::accumulate(row.trials.begin(), row.trials.end(), 0.0) / trials;
        // Shifted by the first trial so identical trials give exactly zero.
        double sum = 0.0;
        double sum_sq = 0.0;
        for (const double a : row.trials) {
            const double d = a - row.trials.front();
            sum += d;
            sum_sq += d * d;
        }
        const double var = std::max(0.0, sum_sq - sum * sum / trials);
        row.stddev = trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0;
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline std::string robustness_to_csv(const RobustnessTable &t)
{
    std::ostringstream os;
    os << std::setprecision(10);
    os << "sigma,mean_accuracy,std_accuracy,trials\n";
    for (const auto &r : t.rows) {
        os << r.sigma << "," << r.mean << "," << r.stddev << "," << r.trials.size() << "\n";
    }
    return os.str();
}

inline nlohmann::json to_json(const RobustnessTable &t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : t.rows) {
        rows.push_back({{"sigma", r.sigma}, {"mean_accuracy", r.mean}, {"std_accuracy", r.stddev}, {"trials", r.trials}});
    }
    return rows;
}

} // namespace ptc

#endif
