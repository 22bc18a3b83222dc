#include "cftlab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "cftlab/cft_analytics.hpp"
#include "cftlab/channels.hpp"
#include "cftlab/codespace.hpp"
#include "cftlab/coherent_info.hpp"
#include "cftlab/errors.hpp"
#include "cftlab/gaussian.hpp"
#include "cftlab/models.hpp"
#include "cftlab/perturbation.hpp"
#include "cftlab/rng.hpp"
#include "cftlab/state_io.hpp"

namespace cftlab {

namespace {

using nlohmann::json;

const std::set<std::string> kKinds = {
    "spectrum",      "ci-exact",     "ci-flagged-exact", "ci-flagged-mc",
    "ci-renyi",      "b-coeff",      "b2-coeff",         "gaussian-ci",
    "predict-nu",    "descendant-budget", "collapse",    "threshold"};

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ArgumentError(where + " must be an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw ArgumentError("unknown key '" + key + "' in " + where);
}

std::vector<int> int_list(const json& value, const std::string& where) {
    std::vector<int> out;
    if (value.is_number_integer()) {
        out.push_back(value.get<int>());
    } else if (value.is_array()) {
        for (const auto& v : value) {
            if (!v.is_number_integer()) throw ArgumentError(where + " must hold integers");
            out.push_back(v.get<int>());
        }
    } else {
        throw ArgumentError(where + " must be an integer or integer list");
    }
    if (out.empty()) throw ArgumentError(where + " must be nonempty");
    return out;
}

std::vector<double> double_list(const json& value, const std::string& where) {
    std::vector<double> out;
    if (!value.is_array()) throw ArgumentError(where + " must be a list");
    for (const auto& v : value) {
        if (!v.is_number()) throw ArgumentError(where + " must hold numbers");
        out.push_back(v.get<double>());
    }
    if (out.empty()) throw ArgumentError(where + " must be nonempty");
    return out;
}

PauliAxis parse_axis(const std::string& axis) {
    if (axis == "x") return PauliAxis::x;
    if (axis == "y") return PauliAxis::y;
    if (axis == "z") return PauliAxis::z;
    throw ArgumentError("axis must be one of x, y, z; got '" + axis + "'");
}

json resolve_model(const json& config, bool needed) {
    json model = config.value("model", json::object());
    if (!needed && !model.empty()) throw ArgumentError("'model' is not used by this experiment kind");
    require_keys(model, "model", {"n", "g", "k"});
    if (needed && !model.contains("n")) throw ArgumentError("model.n is required");
    if (model.contains("n")) model["n"] = int_list(model["n"], "model.n");
    if (!model.contains("g")) model["g"] = 1.0;
    if (!model["g"].is_number()) throw ArgumentError("model.g must be a number");
    if (!model.contains("k")) model["k"] = 3;
    if (!model["k"].is_number_integer()) throw ArgumentError("model.k must be an integer");
    return model;
}

json resolve_code(const json& config) {
    json code = config.value("code", json::object());
    require_keys(code, "code", {"labels"});
    if (!code.contains("labels")) code["labels"] = json::array({"I", "epsilon"});
    if (!code["labels"].is_array() || code["labels"].size() < 2)
        throw ArgumentError("code.labels must list at least 2 labels");
    for (const auto& l : code["labels"])
        if (!l.is_string()) throw ArgumentError("code.labels must hold strings");
    return code;
}

json resolve_noise(const json& config, const std::string& kind) {
    json noise = config.value("noise", json::object());
    require_keys(noise, "noise", {"kind", "axis"});
    const bool flagged = kind == "ci-flagged-exact" || kind == "ci-flagged-mc";
    std::string noise_kind = noise.value("kind", flagged ? "flagged_dephasing" : "dephasing");
    if (flagged && noise_kind != "flagged_dephasing")
        throw ArgumentError("flagged experiments require noise.kind = flagged_dephasing");
    if (noise_kind != "dephasing" && noise_kind != "flagged_dephasing" && noise_kind != "depolarizing")
        throw ArgumentError("unsupported noise.kind '" + noise_kind + "'");
    noise["kind"] = noise_kind;
    if (noise_kind != "depolarizing") {
        if (!noise.contains("axis")) throw ArgumentError("noise.axis is required");
        parse_axis(noise["axis"].get<std::string>());
    } else if (noise.contains("axis")) {
        throw ArgumentError("depolarizing noise takes no axis");
    }
    return noise;
}

std::vector<double> resolve_p_grid(const json& config) {
    if (!config.contains("p_grid")) throw ArgumentError("p_grid is required");
    const auto grid = double_list(config["p_grid"], "p_grid");
    for (double p : grid)
        if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("p_grid entries must lie in [0, 1]");
    return grid;
}

NoiseSpec make_noise(const json& noise, double p) {
    const std::string kind = noise.at("kind").get<std::string>();
    if (kind == "dephasing") return dephasing(parse_axis(noise.at("axis").get<std::string>()), p);
    if (kind == "flagged_dephasing")
        return flagged_dephasing(parse_axis(noise.at("axis").get<std::string>()), p);
    return depolarizing(p);
}

// ---- spectrum acquisition with on-disk caching ----

SpectrumRecord labeled_spectrum(int n, double g, int k, const RunOptions& opts, bool require_labels) {
    const double tol = LanczosOptions{}.tol;
    const std::string key = spectrum_cache_key(n, g, k, tol);
    if (!opts.cache_dir.empty())
        if (auto cached = load_spectrum(opts.cache_dir, key)) return *cached;

    const TfimHamiltonian h = build_tfim(n, g);
    SpectrumRecord record = low_energy_spectrum(h, k);
    try {
        record = identify_scaling_states(record);
    } catch (const LabelingError&) {
        if (require_labels) throw;
    }
    if (!opts.cache_dir.empty()) save_spectrum(opts.cache_dir, key, record);
    return record;
}

CodeSpace code_from_spectrum(const SpectrumRecord& record, const std::vector<std::string>& labels) {
    std::vector<PureState> states;
    for (const auto& label : labels) {
        bool found = false;
        for (int i = 0; i < record.size(); ++i)
            if (record.labels[i] == label) {
                states.push_back(record.states[i]);
                found = true;
                break;
            }
        if (!found) throw ArgumentError("spectrum has no state labeled '" + label + "'");
    }
    return make_codespace(states, labels);
}

std::vector<std::string> config_labels(const json& resolved) {
    std::vector<std::string> labels;
    for (const auto& l : resolved.at("code").at("labels")) labels.push_back(l.get<std::string>());
    return labels;
}

// ---- per-kind runners ----

void run_spectrum(const json& resolved, const RunOptions& opts, ResultRecord& record) {
    record.columns = {"n", "index", "energy", "parity", "degenerate", "label", "assigned_dimension"};
    const json& model = resolved.at("model");
    for (int n : model.at("n").get<std::vector<int>>()) {
        const SpectrumRecord spec =
            labeled_spectrum(n, model.at("g").get<double>(), model.at("k").get<int>(), opts, false);
        for (int i = 0; i < spec.size(); ++i)
            record.rows.push_back({n, i, spec.energies[i], spec.parities[i],
                                   static_cast<int>(spec.degenerate[i]), spec.labels[i],
                                   std::isfinite(spec.assigned_dimensions[i])
                                       ? json(spec.assigned_dimensions[i])
                                       : json()});
    }
}

void run_ci(const json& resolved, const RunOptions& opts, ResultRecord& record) {
    const std::string kind = resolved.at("kind").get<std::string>();
    record.columns = {"n", "p", "ic", "stderr", "method"};
    const json& model = resolved.at("model");
    const json& noise = resolved.at("noise");
    const std::vector<double> p_grid = resolved.at("p_grid").get<std::vector<double>>();
    const double order = resolved.value("order", kind == "ci-renyi" ? 2.0 : 1.0);

    long cell = 0;
    for (int n : model.at("n").get<std::vector<int>>()) {
        const SpectrumRecord spec =
            labeled_spectrum(n, model.at("g").get<double>(), model.at("k").get<int>(), opts, true);
        const CodeSpace code = code_from_spectrum(spec, config_labels(resolved));
        for (double p : p_grid) {
            const NoiseSpec ns = make_noise(noise, p);
            CIEstimate est;
            if (kind == "ci-flagged-exact") {
                est = ci_flagged_exact(code, ns);
            } else if (kind == "ci-flagged-mc") {
                const json& sampler = resolved.at("sampler");
                const std::uint64_t run_seed = sampler.at("seed").get<std::uint64_t>();
                // one derived stream block per (n, p) cell
                est = ci_flagged_mc(code, ns, sampler.at("samples").get<long>(),
                                    splitmix64_mix(run_seed, static_cast<std::uint64_t>(cell)),
                                    opts.threads);
            } else {
                est = ci_unflagged_exact(code, ns, order);
            }
            record.rows.push_back({n, p, est.value, est.std_error, ci_method_name(est.method)});
            ++cell;
        }
    }
    if (kind == "ci-renyi") record.summary["order"] = order;
}

void run_b_coefficients(const json& resolved, const RunOptions& opts, ResultRecord& record) {
    const std::string kind = resolved.at("kind").get<std::string>();
    const json& model = resolved.at("model");
    const json& noise = resolved.at("noise");
    const PauliAxis axis = parse_axis(noise.at("axis").get<std::string>());
    const bool second_order = kind == "b2-coeff";
    record.columns = second_order ? std::vector<std::string>{"n", "b2_1", "b2_2", "b2_3"}
                                  : std::vector<std::string>{"n", "b"};

    std::vector<std::pair<double, double>> slope_data;
    for (int n : model.at("n").get<std::vector<int>>()) {
        const SpectrumRecord spec =
            labeled_spectrum(n, model.at("g").get<double>(), model.at("k").get<int>(), opts, true);
        const CodeSpace code = code_from_spectrum(spec, config_labels(resolved));
        const JumpSet jumps = dephasing_jumps(axis, n);
        if (second_order) {
            const auto b2 = b2_coefficients(code, jumps);
            record.rows.push_back({n, b2[0], b2[1], b2[2]});
            slope_data.emplace_back(n, b2[2]);
        } else {
            const double b = b_coefficient(code, jumps);
            record.rows.push_back({n, b});
            slope_data.emplace_back(n, b);
        }
    }
    if (slope_data.size() >= 3) {
        const ExponentFit fit = exponent_fit(slope_data);
        record.summary["slope"] = fit.slope;
        record.summary["intercept"] = fit.intercept;
        record.summary["residual"] = fit.residual;
    }
}

void run_gaussian(const json& resolved, ResultRecord& record) {
    record.columns = {"n", "p", "ic", "stderr", "method"};
    for (int m : resolved.at("modes").get<std::vector<int>>())
        for (double p : resolved.at("p_grid").get<std::vector<double>>()) {
            const CIEstimate est = gaussian_ci(m, p);
            record.rows.push_back({m, p, est.value, 0.0, ci_method_name(est.method)});
        }
}

void run_predict_nu(const json& resolved, ResultRecord& record) {
    record.columns = {"jump", "delta_min", "fusion_order", "nu", "correctable"};
    const std::string content_file = resolved.value("content_file", std::string());
    const OperatorContent content =
        content_file.empty() ? ising_content() : load_operator_content(content_file);
    std::vector<std::string> jump_names;
    if (resolved.contains("jump")) {
        jump_names.push_back(resolved.at("jump").get<std::string>());
    } else {
        for (const auto& [name, components] : content.jumps) jump_names.push_back(name);
    }
    for (const auto& name : jump_names) {
        const NuPrediction prediction = predict_nu(content, name);
        record.rows.push_back({name, prediction.delta_min, prediction.fusion_order_r, prediction.nu,
                               prediction.correctable});
        json trace = json::array();
        for (const auto& step : prediction.closure_trace)
            trace.push_back({{"order", step.order}, {"new_labels", step.new_labels}});
        record.summary["closure"][name] = trace;
    }
}

void run_descendant_budget(const json& resolved, ResultRecord& record) {
    record.columns = {"n", "M", "sum", "bound", "ratio"};
    const json& budget = resolved.at("budget");
    const double delta0 = budget.at("delta0").get<double>();
    const double h = budget.at("h").get<double>();
    const double h0 = budget.at("h0").get<double>();
    const std::vector<double> n_values = budget.at("n_values").get<std::vector<double>>();
    std::vector<int> m_values;
    if (budget.contains("m_values")) {
        m_values = budget.at("m_values").get<std::vector<int>>();
        if (m_values.size() != n_values.size())
            throw ArgumentError("budget.m_values must match budget.n_values in length");
    } else {
        for (double n : n_values) {
            const double logn = std::log(n);
            m_values.push_back(static_cast<int>(std::ceil(logn * logn)));
        }
    }
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const DescendantBudget result =
            descendant_code_budget(n_values[i], m_values[i], delta0, h, h0);
        record.rows.push_back({n_values[i], m_values[i], result.sum, result.bound, result.ratio});
    }
}

void run_collapse(const json& resolved, ResultRecord& record) {
    const CIDataset data = load_ci_dataset(resolved.at("dataset_file").get<std::string>());
    const auto range = resolved.at("nu_range").get<std::vector<double>>();
    const int grid = resolved.at("nu_grid").get<int>();
    const bool near_one = resolved.value("near_one", false);
    const CollapseResult fit = near_one ? near_one_collapse(data, range[0], range[1], grid)
                                        : collapse_fit(data, range[0], range[1], grid);
    record.columns = {"nu", "cost"};
    for (const auto& [nu, cost] : fit.cost_curve)
        record.rows.push_back({nu, std::isfinite(cost) ? json(cost) : json()});
    record.summary["nu_best"] = fit.nu_best;
    if (std::isfinite(fit.nu_sigma)) record.summary["nu_sigma"] = fit.nu_sigma;
    record.summary["nu_positive_2sigma"] = fit.nu_positive_2sigma;
}

void run_threshold(const json& resolved, ResultRecord& record) {
    const CIDataset data = load_ci_dataset(resolved.at("dataset_file").get<std::string>());
    const CrossingReport report = threshold_crossing(data);
    record.columns = {"n_low", "n_high", "p", "uncertainty", "significant"};
    for (const auto& crossing : report.crossings)
        record.rows.push_back({crossing.n_low, crossing.n_high, crossing.p, crossing.uncertainty,
                               crossing.significant});
    record.summary["curves_coincide"] = report.curves_coincide;
}

}  // namespace

json resolve_config(const json& config) {
    if (!config.is_object()) throw ArgumentError("config must be a JSON object");
    if (!config.contains("schema_version") || !config["schema_version"].is_number_integer() ||
        config["schema_version"].get<int>() != kConfigSchemaVersion)
        throw ArgumentError("config must declare schema_version = 1");
    if (!config.contains("kind") || !config["kind"].is_string())
        throw ArgumentError("config must declare an experiment kind");
    const std::string kind = config["kind"].get<std::string>();
    if (!kKinds.count(kind)) throw ArgumentError("unknown experiment kind '" + kind + "'");

    static const std::map<std::string, std::set<std::string>> kAllowed = {
        {"spectrum", {"model"}},
        {"ci-exact", {"model", "code", "noise", "p_grid"}},
        {"ci-renyi", {"model", "code", "noise", "p_grid", "order"}},
        {"ci-flagged-exact", {"model", "code", "noise", "p_grid"}},
        {"ci-flagged-mc", {"model", "code", "noise", "p_grid", "sampler"}},
        {"b-coeff", {"model", "code", "noise"}},
        {"b2-coeff", {"model", "code", "noise"}},
        {"gaussian-ci", {"modes", "p_grid"}},
        {"predict-nu", {"content_file", "jump"}},
        {"descendant-budget", {"budget"}},
        {"collapse", {"dataset_file", "nu_range", "nu_grid", "near_one"}},
        {"threshold", {"dataset_file"}},
    };
    std::set<std::string> allowed = kAllowed.at(kind);
    allowed.insert({"schema_version", "kind", "out"});
    require_keys(config, "config", allowed);

    json resolved = config;
    if (!resolved.contains("out")) resolved["out"] = "results/" + kind;
    if (!resolved["out"].is_string()) throw ArgumentError("out must be a string path");

    const bool needs_model = kind == "spectrum" || kind.rfind("ci-", 0) == 0 || kind == "b-coeff" ||
                             kind == "b2-coeff";
    if (needs_model) resolved["model"] = resolve_model(config, true);
    if (kind.rfind("ci-", 0) == 0 || kind == "b-coeff" || kind == "b2-coeff") {
        resolved["code"] = resolve_code(config);
        resolved["noise"] = resolve_noise(config, kind);
    }
    if (kind.rfind("ci-", 0) == 0 || kind == "gaussian-ci") resolved["p_grid"] = resolve_p_grid(config);

    if (kind == "ci-renyi") {
        resolved["order"] = config.value("order", 2.0);
        if (!(resolved["order"].get<double>() >= 1.0))
            throw ArgumentError("order must be >= 1");
    }
    if (kind == "ci-flagged-mc") {
        if (!config.contains("sampler")) throw ArgumentError("sampler is required for MC runs");
        json sampler = config["sampler"];
        require_keys(sampler, "sampler", {"samples", "seed"});
        if (!sampler.contains("seed") || !sampler["seed"].is_number_integer())
            throw ArgumentError("sampler.seed is mandatory for MC runs");
        if (!sampler.contains("samples")) sampler["samples"] = 20000;
        if (!sampler["samples"].is_number_integer() || sampler["samples"].get<long>() < 100)
            throw ArgumentError("sampler.samples must be an integer >= 100");
        resolved["sampler"] = sampler;
    }
    if (kind == "gaussian-ci") {
        if (!config.contains("modes")) throw ArgumentError("modes is required");
        resolved["modes"] = int_list(config["modes"], "modes");
    }
    if (kind == "predict-nu") {
        if (config.contains("content_file") && !config["content_file"].is_string())
            throw ArgumentError("content_file must be a string");
        if (config.contains("jump") && !config["jump"].is_string())
            throw ArgumentError("jump must be a string");
    }
    if (kind == "descendant-budget") {
        if (!config.contains("budget")) throw ArgumentError("budget is required");
        json budget = config["budget"];
        require_keys(budget, "budget", {"delta0", "h", "h0", "n_values", "m_values"});
        for (const char* key : {"delta0", "h", "h0"})
            if (!budget.contains(key) || !budget[key].is_number())
                throw ArgumentError(std::string("budget.") + key + " must be a number");
        budget["n_values"] = double_list(budget.at("n_values"), "budget.n_values");
        resolved["budget"] = budget;
    }
    if (kind == "collapse" || kind == "threshold") {
        if (!config.contains("dataset_file") || !config["dataset_file"].is_string())
            throw ArgumentError("dataset_file is required");
    }
    if (kind == "collapse") {
        if (!resolved.contains("nu_range")) resolved["nu_range"] = json::array({-2.0, 2.0});
        const auto range = double_list(resolved["nu_range"], "nu_range");
        if (range.size() != 2 || !(range[1] > range[0]))
            throw ArgumentError("nu_range must be [lo, hi] with hi > lo");
        if (!resolved.contains("nu_grid")) resolved["nu_grid"] = 161;
        if (!resolved["nu_grid"].is_number_integer() || resolved["nu_grid"].get<int>() < 3)
            throw ArgumentError("nu_grid must be an integer >= 3");
    }
    return resolved;
}

std::string config_hash(const json& resolved) {
    const std::string dump = resolved.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
    return buffer;
}

ResultRecord run_experiment(const json& resolved, const RunOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    ResultRecord record;
    record.kind = resolved.at("kind").get<std::string>();
    record.config_hash = config_hash(resolved);
    record.summary = json::object();

    const std::string& kind = record.kind;
    if (kind == "spectrum") run_spectrum(resolved, opts, record);
    else if (kind.rfind("ci-", 0) == 0) run_ci(resolved, opts, record);
    else if (kind == "b-coeff" || kind == "b2-coeff") run_b_coefficients(resolved, opts, record);
    else if (kind == "gaussian-ci") run_gaussian(resolved, record);
    else if (kind == "predict-nu") run_predict_nu(resolved, record);
    else if (kind == "descendant-budget") run_descendant_budget(resolved, record);
    else if (kind == "collapse") run_collapse(resolved, record);
    else if (kind == "threshold") run_threshold(resolved, record);
    else throw ArgumentError("unhandled kind " + kind);

    record.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

namespace {

std::string format_cell(const json& cell) {
    if (cell.is_null()) return "";
    if (cell.is_string()) return cell.get<std::string>();
    if (cell.is_boolean()) return cell.get<bool>() ? "1" : "0";
    if (cell.is_number_integer()) return std::to_string(cell.get<long long>());
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", cell.get<double>());
    return buffer;
}

void atomic_write(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ArgumentError("cannot open for writing: " + tmp);
        out << text;
        if (!out) throw ArgumentError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void write_result(const ResultRecord& record, const std::string& out_base) {
    const std::filesystem::path base(out_base);
    if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());

    json j;
    j["config_hash"] = record.config_hash;
    j["tool_version"] = kToolVersion;
    j["schema_version"] = kConfigSchemaVersion;
    j["kind"] = record.kind;
    j["columns"] = record.columns;
    j["rows"] = record.rows;
    if (!record.summary.empty()) j["summary"] = record.summary;
    j["wall_time_s"] = record.wall_time_s;
    atomic_write(out_base + ".json", j.dump(2) + "\n");

    std::string csv;
    for (std::size_t c = 0; c < record.columns.size(); ++c) {
        if (c) csv += ',';
        csv += record.columns[c];
    }
    csv += '\n';
    for (const auto& row : record.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) csv += ',';
            csv += format_cell(row[c]);
        }
        csv += '\n';
    }
    atomic_write(out_base + ".csv", csv);
}

CIDataset load_ci_dataset(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw ArgumentError("cannot open dataset: " + json_path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ArgumentError(std::string("dataset is not valid JSON: ") + e.what());
    }
    const std::vector<std::string> columns = j.at("columns").get<std::vector<std::string>>();
    auto column_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        throw ArgumentError("dataset lacks required column '" + name + "'");
    };
    const int col_n = column_index("n");
    const int col_p = column_index("p");
    const int col_ic = column_index("ic");
    const int col_err = column_index("stderr");
    const int col_method = column_index("method");

    CIDataset data;
    data.provenance = j.value("config_hash", "");
    for (const auto& row : j.at("rows")) {
        CIPoint point;
        point.n = row.at(col_n).get<int>();
        point.p = row.at(col_p).get<double>();
        point.ic = row.at(col_ic).get<double>();
        point.std_error = row.at(col_err).get<double>();
        point.method = row.at(col_method).get<std::string>();
        data.rows.push_back(point);
    }
    data.validate();
    return data;
}

nlohmann::json bundled_config(const std::string& name) {
    json config;
    config["schema_version"] = kConfigSchemaVersion;
    auto linspace = [](double lo, double hi, int count) {
        json grid = json::array();
        for (int i = 0; i < count; ++i) grid.push_back(lo + (hi - lo) * i / (count - 1));
        return grid;
    };
    if (name == "fig2x" || name == "fig2y" || name == "fig2z") {
        config["kind"] = "ci-exact";
        config["model"] = {{"n", json::array({6, 8, 10})}, {"g", 1.0}, {"k", 3}};
        config["code"] = {{"labels", json::array({"I", "epsilon"})}};
        config["noise"] = {{"kind", "dephasing"}, {"axis", std::string(1, name.back())}};
        config["p_grid"] = linspace(0.02, 0.2, 10);
    } else if (name == "fig3") {
        config["kind"] = "ci-flagged-mc";
        config["model"] = {{"n", json::array({8, 12, 16})}, {"g", 1.0}, {"k", 3}};
        config["code"] = {{"labels", json::array({"I", "epsilon"})}};
        config["noise"] = {{"kind", "flagged_dephasing"}, {"axis", "z"}};
        config["p_grid"] = linspace(0.2, 0.8, 7);
        config["sampler"] = {{"samples", 20000}, {"seed", 20240601}};
    } else if (name == "freefermion") {
        config["kind"] = "gaussian-ci";
        config["modes"] = json::array({8, 16, 32, 64});
        config["p_grid"] = linspace(0.1, 0.9, 9);
    } else if (name == "renyi") {
        config["kind"] = "ci-renyi";
        config["model"] = {{"n", json::array({6, 8, 10})}, {"g", 1.0}, {"k", 3}};
        config["code"] = {{"labels", json::array({"I", "sigma"})}};
        config["noise"] = {{"kind", "dephasing"}, {"axis", "z"}};
        config["p_grid"] = linspace(0.1, 0.9, 9);
        config["order"] = 2.0;
    } else {
        throw ArgumentError("unknown bundle '" + name + "'");
    }
    config["out"] = "results/" + name;
    return config;
}

ResultRecord run_bundle(const std::string& name, const RunOptions& opts) {
    const json resolved = resolve_config(bundled_config(name));
    ResultRecord record = run_experiment(resolved, opts);

    // headline summary per bundle
    CIDataset data;
    for (const auto& row : record.rows) {
        CIPoint point;
        point.n = row[0].get<int>();
        point.p = row[1].get<double>();
        point.ic = row[2].get<double>();
        point.std_error = row[3].get<double>();
        point.method = row[4].get<std::string>();
        data.rows.push_back(point);
    }
    if (name.rfind("fig2", 0) == 0) {
        const CollapseResult fit = collapse_fit(data);
        record.summary["nu_best"] = fit.nu_best;
        if (std::isfinite(fit.nu_sigma)) record.summary["nu_sigma"] = fit.nu_sigma;
    } else if (name == "fig3") {
        const CrossingReport report = threshold_crossing(data);
        record.summary["curves_coincide"] = report.curves_coincide;
        int significant = 0;
        for (const auto& crossing : report.crossings) significant += crossing.significant;
        record.summary["significant_crossings"] = significant;
    } else if (name == "freefermion" || name == "renyi") {
        // largest spread across sizes at fixed p
        std::map<double, std::pair<double, double>> extremes;
        for (const auto& row : data.rows) {
            auto it = extremes.find(row.p);
            if (it == extremes.end()) {
                extremes[row.p] = {row.ic, row.ic};
            } else {
                it->second.first = std::min(it->second.first, row.ic);
                it->second.second = std::max(it->second.second, row.ic);
            }
        }
        double max_spread = 0.0;
        for (const auto& [p, bounds] : extremes)
            max_spread = std::max(max_spread, bounds.second - bounds.first);
        record.summary["max_size_spread"] = max_spread;
    }
    return record;
}

}  // namespace cftlab
