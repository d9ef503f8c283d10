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

#ifndef PTCSIM_TOOLS_CLI_APP_HPP
#define PTCSIM_TOOLS_CLI_APP_HPP

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ptcsim/ptcsim.hpp"

#ifndef PTCSIM_DATA_DIR
#define PTCSIM_DATA_DIR "data"
#endif

namespace ptc::cli
{

namespace fs = std::filesystem;

enum ExitCode : int
{
    exit_ok = 0,
    exit_runtime = 1,
    exit_usage = 2,
};

inline fs::path data_dir(const std::string &override_dir)
{
    if (!override_dir.empty()) {
        return override_dir;
    }
    if (const char *env = std::getenv("PTCSIM_DATA_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return PTCSIM_DATA_DIR;
}

// A variant name resolves to the bundled catalog; anything else is a path.
inline CatalogVariant resolve_catalog(const std::string &ref, const std::string &data_override)
{
    const bool is_name = ref.find('/') == std::string::npos && !ref.ends_with(".json");
    if (is_name) {
        std::string file = cli_name(parse_variant(ref));
        std::replace(file.begin(), file.end(), '-', '_');
        return load_catalog(data_dir(data_override) / "catalogs" / (file + ".json"));
    }
    return load_catalog(ref);
}

inline void ensure_dir(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ValidationError("output directory not writable: " + dir.string());
    }
}

// "a..b" (every integer), "a..b:s" (step s), "a..b:x2" (doubling) or "a,b,c".
inline std::vector<int> parse_int_list(const std::string &text)
{
    std::vector<int> out;
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            std::stringstream ss(text);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                std::size_t used = 0;
                out.push_back(std::stoi(tok, &used));
                if (used != tok.size()) {
                    throw std::invalid_argument(tok);
                }
            }
        } else {
            const int lo = std::stoi(text.substr(0, dots));
            std::string rest = text.substr(dots + 2);
            std::string step = "1";
            if (const auto colon = rest.find(':'); colon != std::string::npos) {
                step = rest.substr(colon + 1);
                rest = rest.substr(0, colon);
            }
            const int hi = std::stoi(rest);
            if (step.starts_with('x')) {
                const int factor = std::stoi(step.substr(1));
                if (factor < 2 || lo < 1) {
                    throw std::invalid_argument(step);
                }
                for (long v = lo; v <= hi; v *= factor) {
                    out.push_back(static_cast<int>(v));
                }
            } else {
                const int s = std::stoi(step);
                if (s < 1) {
                    throw std::invalid_argument(step);
                }
                for (int v = lo; v <= hi; v += s) {
                    out.push_back(v);
                }
            }
        }
    } catch (const std::logic_error &) {
        throw SchemaError("bad value list '" + text + "' (expected a..b, a..b:step, a..b:x2 or a,b,c)");
    }
    if (out.empty()) {
        throw SchemaError("value list '" + text + "' is empty");
    }
    return out;
}

inline std::vector<double> parse_double_list(const std::string &text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::logic_error &) {
            throw SchemaError("bad number '" + tok + "' in list '" + text + "'");
        }
    }
    if (out.empty()) {
        throw SchemaError("empty number list");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Robustness experiment config.

inline constexpr int experiment_schema_version = 1;

struct Experiment
{
    DatasetSpec dataset;
    TrainConfig train;
    std::vector<double> sigmas_eval{0.0, 0.0031, 0.01, 0.02, 0.04, 0.06, 0.08};
    int trials = 5;
    ArchConfig arch = [] {
        ArchConfig a;
        a.r_tiles = 2;
        a.c_cores = 2;
        a.k = 8;
        return a;
    }();
    std::string catalog = "custom-sl";
    SimMode mode = SimMode::QuantizedNoise;
};

inline Experiment default_experiment()
{
    Experiment e;
    e.train.noise.sigma = 0.05;
    return e;
}

inline Experiment experiment_from_json(const nlohmann::json &j, const fs::path &base_dir)
{
    detail::reject_unknown(j,
                           {"schema_version", "dataset", "epochs", "bits", "sigma_train", "sigmas_eval", "trials",
                            "arch", "catalog", "learning_rate", "momentum", "batch_size", "hidden", "seed", "mode"},
                           "experiment");
    if (j.contains("schema_version") && j["schema_version"] != experiment_schema_version) {
        throw SchemaError("experiment: unsupported schema_version " + j["schema_version"].dump());
    }
    Experiment e = default_experiment();
    try {
        if (j.contains("dataset")) {
            const auto &d = j["dataset"];
            detail::reject_unknown(d, {"kind", "samples_per_class", "classes", "noise", "turns", "seed"},
                                   "experiment.dataset");
            if (d.contains("kind")) e.dataset.kind = parse_dataset_kind(d["kind"].get<std::string>());
            e.dataset.samples_per_class = d.value("samples_per_class", e.dataset.samples_per_class);
            e.dataset.classes = d.value("classes", e.dataset.classes);
            e.dataset.noise = d.value("noise", e.dataset.noise);
            e.dataset.turns = d.value("turns", e.dataset.turns);
            e.dataset.seed = d.value("seed", e.dataset.seed);
        }
        e.train.epochs = j.value("epochs", e.train.epochs);
        e.train.bits = j.value("bits", e.train.bits);
        e.train.noise.sigma = j.value("sigma_train", e.train.noise.sigma);
        e.train.learning_rate = j.value("learning_rate", e.train.learning_rate);
        e.train.momentum = j.value("momentum", e.train.momentum);
        e.train.batch_size = j.value("batch_size", e.train.batch_size);
        e.train.hidden = j.value("hidden", e.train.hidden);
        e.train.seed = j.value("seed", e.train.seed);
        e.sigmas_eval = j.value("sigmas_eval", e.sigmas_eval);
        e.trials = j.value("trials", e.trials);
        if (j.contains("mode")) e.mode = parse_sim_mode(j["mode"].get<std::string>());
        if (j.contains("catalog")) {
            const auto c = j["catalog"].get<std::string>();
            e.catalog = c.ends_with(".json") && fs::path(c).is_relative() ? (base_dir / c).string() : c;
        }
        if (j.contains("arch")) {
            if (j["arch"].is_string()) {
                const fs::path p = j["arch"].get<std::string>();
                e.arch = load_arch(p.is_relative() ? base_dir / p : p);
            } else {
                e.arch = arch_from_json(j["arch"]);
            }
        }
    } catch (const nlohmann::json::exception &ex) {
        throw SchemaError(std::string("experiment: ") + ex.what());
    }
    return e;
}

inline nlohmann::json to_json(const Experiment &e)
{
    return {{"schema_version", experiment_schema_version},
            {"dataset",
             {{"kind", to_string(e.dataset.kind)},
              {"samples_per_class", e.dataset.samples_per_class},
              {"classes", e.dataset.classes},
              {"noise", e.dataset.noise},
              {"turns", e.dataset.turns},
              {"seed", e.dataset.seed}}},
            {"epochs", e.train.epochs},
            {"bits", e.train.bits},
            {"sigma_train", e.train.noise.sigma},
            {"learning_rate", e.train.learning_rate},
            {"momentum", e.train.momentum},
            {"batch_size", e.train.batch_size},
            {"hidden", e.train.hidden},
            {"seed", e.train.seed},
            {"sigmas_eval", e.sigmas_eval},
            {"trials", e.trials},
            {"mode", to_string(e.mode)},
            {"arch", ptc::to_json(e.arch)},
            {"catalog", e.catalog}};
}

inline Experiment load_experiment(const fs::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw NotFoundError("experiment config not found: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return experiment_from_json(nlohmann::json::parse(buf.str()), path.parent_path());
    } catch (const nlohmann::json::parse_error &ex) {
        throw SchemaError("experiment: malformed JSON: " + std::string(ex.what()));
    }
}

// ---------------------------------------------------------------------------
// Commands.

struct SimulateArgs
{
    std::string arch;
    std::string catalog = "custom-sl";
    std::string workload = "rand:64x36x64:seed1";
    std::string x_path;
    std::string y_path;
    std::string mode = "ideal";
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> laser_power_w;
    std::string out_dir;
};

inline int cmd_simulate(const SimulateArgs &a, const std::string &data_override, std::ostream &out)
{
    const ArchConfig arch = a.arch.empty() ? ArchConfig{} : load_arch(a.arch);
    const CatalogVariant cat = resolve_catalog(a.catalog, data_override);
    const SimMode mode = parse_sim_mode(a.mode);
    const NoiseModel nm{a.sigma, a.seed, true};
    validate(nm);
    if (a.x_path.empty() != a.y_path.empty()) {
        throw ValidationError("--x and --y must be given together");
    }
    GemmWorkload w;
    std::string workload_desc;
    if (!a.x_path.empty()) {
        w = {load_csv_matrix(a.x_path), load_csv_matrix(a.y_path)};
        workload_desc = "csv:" + a.x_path + "," + a.y_path;
    } else {
        w = make_workload(parse_workload_spec(a.workload));
        workload_desc = a.workload;
    }
    validate(w);
    if (!a.out_dir.empty()) {
        ensure_dir(a.out_dir);
    }
    SimOptions opt;
    opt.laser_power_w = a.laser_power_w;
    const auto res = simulate_gemm(w, arch, cat, nm, mode, opt);
    const Matrix ref = matmul(w.x, w.y);
    const double rel = relative_frobenius_error(res.z_hat, ref);
    double max_err = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        max_err = std::max(max_err, std::abs(res.z_hat.flat()[i] - ref.flat()[i]));
    }
    const EngineConfig eng = make_engine_config(arch, cat, opt);

    nlohmann::json report;
    report["schema_version"] = report_schema_version;
    report["command"] = "simulate";
    report["config"] = {{"arch", to_json(arch)},
                        {"variant", cli_name(cat.name)},
                        {"workload", workload_desc},
                        {"m", w.m()},
                        {"n", w.n()},
                        {"q", w.q()},
                        {"mode", to_string(mode)},
                        {"sigma", a.sigma},
                        {"seed", a.seed}};
    report["engine"] = {{"arm_power_mw", eng.arm_power_mw},
                        {"responsivity_a_per_w", eng.responsivity_a_per_w},
                        {"loss_db", eng.loss_db},
                        {"extinction_ratio_db", detail::number_to_json(eng.extinction_ratio_db)},
                        {"engine_current_max_a", eng.engine_current_max_a()},
                        {"c_int_f", eng.c_int_f},
                        {"v_dd", eng.v_dd}};
    report["stats"] = to_json(res.stats);
    report["oracle"] = {{"relative_frobenius_error", rel}, {"max_abs_error", max_err}};

    out << "simulate " << w.m() << "x" << w.n() << "x" << w.q() << " on " << cli_name(cat.name) << " R=" << arch.r_tiles
        << " C=" << arch.c_cores << " K=" << arch.k << ", mode " << to_string(mode) << "\n";
    out << "  blocks " << res.stats.blocks << ", rounds " << res.stats.rounds << ", compute cycles "
        << res.stats.cycles.compute_cycles << ", readouts " << res.stats.cycles.readouts << ", reset cycles "
        << res.stats.cycles.reset_cycles << ", wall cycles " << res.stats.cycles.wall_cycles << "\n";
    out << "  saturation events " << res.stats.saturation_events << ", C_int " << eng.c_int_f * 1e15 << " fF\n";
    out << std::scientific << std::setprecision(3) << "  relative Frobenius error vs matmul " << rel
        << ", max abs error " << max_err << std::defaultfloat << "\n";
    if (!a.out_dir.empty()) {
        const fs::path dir = a.out_dir;
        write_text(dir / "z_hat.csv", to_csv(res.z_hat));
        write_text(dir / "report.json", report.dump(2) + "\n");
        out << "  wrote " << (dir / "z_hat.csv").string() << " and " << (dir / "report.json").string() << "\n";
    }
    return exit_ok;
}

struct CostArgs
{
    std::string arch;
    std::string catalog = "custom-sl";
    std::string convention = "peak";
    std::string topology = "embedded-uneven";
    bool include_memory = false;
    std::string compare;
    std::string sweep;
    std::string format = "text";
    std::string out_dir;
};

inline CostOptions cost_options(const CostArgs &a)
{
    return {parse_topology(a.topology), parse_convention(a.convention), a.include_memory};
}

inline void emit(const std::string &text, const std::string &out_dir, const std::string &file, std::ostream &out)
{
    if (out_dir.empty()) {
        out << text;
        return;
    }
    ensure_dir(out_dir);
    write_text(fs::path(out_dir) / file, text);
    out << "wrote " << (fs::path(out_dir) / file).string() << "\n";
}

// "K=2..64" or "T=1,10,60".
inline std::pair<SweepAxis, std::vector<int>> parse_sweep_arg(const std::string &s)
{
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
        throw SchemaError("bad --sweep '" + s + "' (expected K=a..b or T=a,b,c)");
    }
    const SweepAxis axis = parse_sweep_axis(s.substr(0, eq));
    if (axis == SweepAxis::Variant) {
        throw SchemaError("--sweep takes K or T; use the sweep command for variants");
    }
    return {axis, parse_int_list(s.substr(eq + 1))};
}

inline std::string sweep_output(const std::vector<SweepPoint> &pts, std::string_view axis, const std::string &format)
{
    if (format == "json") {
        nlohmann::json j;
        j["schema_version"] = report_schema_version;
        j["axis"] = axis;
        j["points"] = nlohmann::json::array();
        for (const auto &p : pts) {
            j["points"].push_back({{"value", p.label}, {"report", to_json(p.report)}});
        }
        return j.dump(2) + "\n";
    }
    return sweep_to_csv(axis, pts);
}

inline int cmd_cost(const CostArgs &a, const std::string &data_override, std::ostream &out)
{
    const ArchConfig arch = a.arch.empty() ? ArchConfig{} : load_arch(a.arch);
    const CatalogVariant cat = resolve_catalog(a.catalog, data_override);
    const CostOptions opt = cost_options(a);
    if (!a.sweep.empty()) {
        const auto [axis, values] = parse_sweep_arg(a.sweep);
        const auto pts = sweep(arch, cat, axis, values, opt);
        const std::string name = axis == SweepAxis::K ? "K" : "T";
        emit(sweep_output(pts, name, a.format == "json" ? "json" : "csv"), a.out_dir,
             a.format == "json" ? "sweep.json" : "sweep.csv", out);
        return exit_ok;
    }
    const auto rep = estimate_cost(arch, cat, opt);
    std::optional<CostReport> other;
    if (!a.compare.empty()) {
        other = estimate_cost(arch, resolve_catalog(a.compare, data_override), opt);
    }
    if (a.format == "json") {
        nlohmann::json j = to_json(rep);
        if (other) {
            j["compare"] = {{"variant", cli_name(other->variant)},
                            {"area_ratio", rep.total_area_mm2 / other->total_area_mm2},
                            {"power_ratio", rep.total_power_w / other->total_power_w}};
        }
        emit(j.dump(2) + "\n", a.out_dir, "cost.json", out);
    } else if (a.format == "csv") {
        emit(sweep_to_csv("variant", {SweepPoint{cli_name(rep.variant), rep}}), a.out_dir, "cost.csv", out);
    } else {
        std::ostringstream os;
        os << to_text(rep);
        if (other) {
            os << std::fixed << std::setprecision(2) << "\nversus " << cli_name(other->variant) << "\n";
            os << "area ratio " << cli_name(rep.variant) << "/" << cli_name(other->variant) << "   "
               << rep.total_area_mm2 / other->total_area_mm2 << "x\n";
            os << "power ratio " << cli_name(rep.variant) << "/" << cli_name(other->variant) << "  "
               << rep.total_power_w / other->total_power_w << "x\n";
        }
        emit(os.str(), a.out_dir, "cost.txt", out);
    }
    return exit_ok;
}

struct SweepArgs
{
    std::string arch;
    std::string catalog = "custom-sl";
    std::string axis = "K";
    std::string values;
    std::string convention = "peak";
    std::string topology = "embedded-uneven";
    bool include_memory = false;
    std::string format = "csv";
    std::string out_dir;
};

inline int cmd_sweep(const SweepArgs &a, const std::string &data_override, std::ostream &out)
{
    const ArchConfig arch = a.arch.empty() ? ArchConfig{} : load_arch(a.arch);
    const CostOptions opt{parse_topology(a.topology), parse_convention(a.convention), a.include_memory};
    const SweepAxis axis = parse_sweep_axis(a.axis);
    std::vector<SweepPoint> pts;
    std::string name;
    if (axis == SweepAxis::Variant) {
        std::vector<CatalogVariant> cats;
        std::stringstream ss(a.values.empty() ? std::string("foundry,foundry-sl,custom-sl") : a.values);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            cats.push_back(resolve_catalog(tok, data_override));
        }
        pts = sweep_variants(arch, cats, opt);
        name = "variant";
    } else {
        if (a.values.empty()) {
            throw SchemaError("sweep: --values is required for the K and T axes");
        }
        const auto values = parse_int_list(a.values);
        pts = sweep(arch, resolve_catalog(a.catalog, data_override), axis, values, opt);
        name = axis == SweepAxis::K ? "K" : "T";
    }
    if (a.format != "csv" && a.format != "json") {
        throw SchemaError("sweep: --format must be csv or json");
    }
    emit(sweep_output(pts, name, a.format), a.out_dir, "sweep." + a.format, out);
    return exit_ok;
}

struct RobustnessArgs
{
    std::string config;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> epochs;
    std::string sigmas;
    std::string out_dir;
};

inline int cmd_robustness(const RobustnessArgs &a, const std::string &data_override, std::ostream &out)
{
    Experiment e = a.config.empty() ? default_experiment() : load_experiment(a.config);
    if (a.trials) e.trials = *a.trials;
    if (a.seed) {
        e.train.seed = *a.seed;
        e.dataset.seed = *a.seed;
    }
    if (a.epochs) e.train.epochs = *a.epochs;
    if (!a.sigmas.empty()) e.sigmas_eval = parse_double_list(a.sigmas);
    for (const double s : e.sigmas_eval) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw ValidationError("robustness: sigma values must be finite and non-negative");
        }
    }
    if (e.trials < 1) {
        throw ValidationError("robustness: trials must be at least 1");
    }
    validate(e.arch);
    check_model_bits(e.train.bits);
    const CatalogVariant cat = resolve_catalog(e.catalog, data_override);
    e.train.noise.seed = e.train.seed;
    if (!a.out_dir.empty()) {
        ensure_dir(a.out_dir);
    }

    const Dataset train_set = make_dataset(e.dataset, 0);
    const Dataset test_set = make_dataset(e.dataset, 1);
    const TinyMlp model = train(train_set, e.train);
    const double train_acc = accuracy(forward_float(model, train_set.features, true), train_set.labels);
    const auto table = evaluate_robustness(model, test_set, e.sigmas_eval, e.arch, cat, e.trials,
                                           mix_seed(e.train.seed, 7), e.mode);

    const std::string csv = robustness_to_csv(table);
    nlohmann::json summary;
    summary["schema_version"] = report_schema_version;
    summary["command"] = "robustness";
    summary["config"] = to_json(e);
    summary["train_accuracy"] = train_acc;
    summary["table"] = to_json(table);
    if (a.out_dir.empty()) {
        out << csv;
    } else {
        const fs::path dir = a.out_dir;
        write_text(dir / "robustness.csv", csv);
        write_text(dir / "summary.json", summary.dump(2) + "\n");
        out << csv << "wrote " << (dir / "robustness.csv").string() << " and " << (dir / "summary.json").string()
            << "\n";
    }
    return exit_ok;
}

inline int cmd_catalog_validate(const std::vector<std::string> &paths, std::ostream &out)
{
    for (const auto &p : paths) {
        const auto cat = load_catalog(p);
        out << "ok  " << p << "  " << cli_name(cat.name) << ", " << cat.devices.size() << " devices\n";
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
    CLI::App app{"Photonic tensor-core simulator and cost model"};
    app.name("ptcsim");
    app.require_subcommand(1);
    std::string data_override;
    app.add_option("--data-dir", data_override, "Directory holding catalogs/ (default: bundled data)");

    SimulateArgs sim;
    auto *s = app.add_subcommand("simulate", "Run a GEMM through the analog model and compare with matmul");
    s->add_option("--arch", sim.arch, "Architecture JSON (default R=C=6, K=32)");
    s->add_option("--catalog", sim.catalog, "Catalog JSON path or variant name");
    s->add_option("--workload", sim.workload, "rand:MxNxQ:seedS");
    s->add_option("--x", sim.x_path, "CSV file for X (M x N)");
    s->add_option("--y", sim.y_path, "CSV file for Y (N x Q)");
    s->add_option("--mode", sim.mode, "ideal | quantized | quantized+noise | quantized+noise+adc");
    s->add_option("--sigma", sim.sigma, "Relative operand noise");
    s->add_option("--seed", sim.seed, "Noise seed");
    s->add_option("--laser-power-w", sim.laser_power_w, "Laser power per core, W");
    s->add_option("--out", sim.out_dir, "Directory for z_hat.csv and report.json");

    CostArgs cost;
    auto *c = app.add_subcommand("cost", "Area, power and throughput report");
    c->add_option("--arch", cost.arch, "Architecture JSON");
    c->add_option("--catalog,--variant", cost.catalog, "foundry | foundry-sl | custom-sl, or a catalog path");
    c->add_option("--convention", cost.convention, "peak | reset_derated");
    c->add_option("--topology", cost.topology, "embedded-uneven | double-layer");
    c->add_flag("--include-memory", cost.include_memory, "Add SRAM area and power");
    c->add_option("--compare", cost.compare, "Second variant; prints area and power ratios");
    c->add_option("--sweep", cost.sweep, "K=a..b or T=a,b,c; emits CSV");
    c->add_option("--format", cost.format, "text | json | csv")->check(CLI::IsMember({"text", "json", "csv"}));
    c->add_option("--out", cost.out_dir, "Output directory");

    SweepArgs sw;
    auto *w = app.add_subcommand("sweep", "Cost reports over K, T or device variant");
    w->add_option("--arch", sw.arch, "Architecture JSON");
    w->add_option("--catalog,--variant", sw.catalog, "Catalog for K and T sweeps");
    w->add_option("--axis", sw.axis, "K | T | variant");
    w->add_option("--values", sw.values, "a..b, a..b:step, a..b:x2, a,b,c or variant names");
    w->add_option("--convention", sw.convention, "peak | reset_derated");
    w->add_option("--topology", sw.topology, "embedded-uneven | double-layer");
    w->add_flag("--include-memory", sw.include_memory, "Add SRAM area and power");
    w->add_option("--format", sw.format, "csv | json");
    w->add_option("--out", sw.out_dir, "Output directory");

    RobustnessArgs rb;
    auto *r = app.add_subcommand("robustness", "Noise-aware training and accuracy versus noise");
    r->add_option("--config", rb.config, "Experiment JSON (default: built-in spirals experiment)");
    r->add_option("--trials", rb.trials, "Noise draws per sigma");
    r->add_option("--seed", rb.seed, "Seed for data, training and evaluation");
    r->add_option("--epochs", rb.epochs, "Training epochs");
    r->add_option("--sigmas", rb.sigmas, "Comma-separated sigma values");
    r->add_option("--out", rb.out_dir, "Directory for robustness.csv and summary.json");

    std::vector<std::string> catalogs;
    auto *v = app.add_subcommand("catalog-validate", "Check catalog files against the schema");
    v->add_option("catalogs", catalogs, "Catalog JSON files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*s) return cmd_simulate(sim, data_override, out);
        if (*c) return cmd_cost(cost, data_override, out);
        if (*w) return cmd_sweep(sw, data_override, out);
        if (*r) return cmd_robustness(rb, data_override, out);
        if (*v) return cmd_catalog_validate(catalogs, out);
    } catch (const SchemaError &e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const NotFoundError &e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const LookupError &e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_usage;
}

} // namespace ptc::cli

#endif
