// Experiment runner: validates a config, executes the requested pipeline,
// and writes the result as JSON plus a flat CSV table.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cftlab/errors.hpp"
#include "cftlab/experiment.hpp"
#include "cftlab/parallel.hpp"

namespace {

using nlohmann::json;

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cftlab::ArgumentError("cannot open config: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw cftlab::ArgumentError(std::string("config is not valid JSON: ") + e.what());
    }
}

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::vector<int> n;
    double g = -1.0;
    int k = -1;
    std::string axis;
    std::string noise_kind;
    std::vector<std::string> labels;
    std::vector<double> p_grid;
    double order = -1.0;
    long samples = -1;
    long long seed = -1;
    std::vector<int> modes;
    std::string content_file;
    std::string jump;
    std::string dataset_file;
    std::vector<double> nu_range;
    int nu_grid = -1;
    bool near_one = false;
    json budget = json::object();
};

// merge CLI flags over the config-file base; flags win
json build_config(const std::string& kind, const CommonFlags& f) {
    json config = f.config_path.empty() ? json::object() : load_config_file(f.config_path);
    if (!config.contains("schema_version")) config["schema_version"] = cftlab::kConfigSchemaVersion;
    config["kind"] = kind;
    if (!f.out.empty()) config["out"] = f.out;
    if (!f.n.empty()) config["model"]["n"] = f.n;
    if (f.g >= 0.0) config["model"]["g"] = f.g;
    if (f.k >= 0) config["model"]["k"] = f.k;
    if (!f.axis.empty()) config["noise"]["axis"] = f.axis;
    if (!f.noise_kind.empty()) config["noise"]["kind"] = f.noise_kind;
    if (!f.labels.empty()) config["code"]["labels"] = f.labels;
    if (!f.p_grid.empty()) config["p_grid"] = f.p_grid;
    if (f.order >= 0.0) config["order"] = f.order;
    if (f.samples >= 0) config["sampler"]["samples"] = f.samples;
    if (f.seed >= 0) config["sampler"]["seed"] = f.seed;
    if (!f.modes.empty()) config["modes"] = f.modes;
    if (!f.content_file.empty()) config["content_file"] = f.content_file;
    if (!f.jump.empty()) config["jump"] = f.jump;
    if (!f.dataset_file.empty()) config["dataset_file"] = f.dataset_file;
    if (!f.nu_range.empty()) config["nu_range"] = f.nu_range;
    if (f.nu_grid > 0) config["nu_grid"] = f.nu_grid;
    if (f.near_one) config["near_one"] = true;
    if (!f.budget.empty()) config["budget"] = f.budget;
    return config;
}

int execute(const json& config, unsigned threads) {
    const json resolved = cftlab::resolve_config(config);
    cftlab::RunOptions opts;
    opts.threads = threads;
    const char* cache_env = std::getenv("CFTLAB_CACHE_DIR");
    if (cache_env != nullptr && *cache_env != '\0') {
        opts.cache_dir = cache_env;
    } else {
        const std::filesystem::path out(resolved.at("out").get<std::string>());
        opts.cache_dir = ((out.has_parent_path() ? out.parent_path() : ".") / "cache").string();
    }

    const cftlab::ResultRecord record = cftlab::run_experiment(resolved, opts);
    const std::string out_base = resolved.at("out").get<std::string>();
    cftlab::write_result(record, out_base);

    std::cout << "kind:        " << record.kind << '\n'
              << "config hash: " << record.config_hash << '\n'
              << "rows:        " << record.rows.size() << '\n'
              << "output:      " << out_base << ".json, " << out_base << ".csv\n";
    if (!record.summary.empty()) std::cout << "summary:     " << record.summary.dump() << '\n';
    return 0;
}

int execute_bundle(const std::string& name, unsigned threads) {
    cftlab::RunOptions opts;
    opts.threads = threads;
    const json config = cftlab::bundled_config(name);
    const char* cache_env = std::getenv("CFTLAB_CACHE_DIR");
    if (cache_env != nullptr && *cache_env != '\0') opts.cache_dir = cache_env;
    else opts.cache_dir = "results/cache";

    const cftlab::ResultRecord record = cftlab::run_bundle(name, opts);
    const std::string out_base = config.at("out").get<std::string>();
    cftlab::write_result(record, out_base);
    std::cout << "bundle:      " << name << '\n'
              << "output:      " << out_base << ".json, " << out_base << ".csv\n"
              << "summary:     " << record.summary.dump() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent-information laboratory for critical-chain codes"};
    app.require_subcommand(1);

    unsigned threads = cftlab::default_thread_count();
    app.add_option("--threads", threads, "worker threads for sampling kinds")->capture_default_str();

    const std::vector<std::string> kinds = {"spectrum",        "ci-exact",   "ci-flagged-exact",
                                            "ci-flagged-mc",   "ci-renyi",   "b-coeff",
                                            "b2-coeff",        "gaussian-ci", "predict-nu",
                                            "descendant-budget", "collapse", "threshold"};

    std::map<std::string, CommonFlags> flags;
    for (const auto& kind : kinds) {
        CLI::App* sub = app.add_subcommand(kind, "run a " + kind + " experiment");
        CommonFlags& f = flags[kind];
        sub->add_option("--config", f.config_path, "JSON config file (flags override its fields)");
        sub->add_option("--out", f.out, "output path base (.json/.csv appended)");
        if (kind == "spectrum" || kind.rfind("ci-", 0) == 0 || kind[0] == 'b') {
            sub->add_option("-n,--sites", f.n, "chain sizes");
            sub->add_option("-g,--field", f.g, "transverse field");
            sub->add_option("-k,--states", f.k, "states to resolve");
        }
        if (kind.rfind("ci-", 0) == 0 || kind[0] == 'b') {
            sub->add_option("--axis", f.axis, "dephasing axis: x, y or z");
            sub->add_option("--noise-kind", f.noise_kind, "dephasing, flagged_dephasing or depolarizing");
            sub->add_option("--labels", f.labels, "codeword labels, e.g. I epsilon");
        }
        if (kind.rfind("ci-", 0) == 0 || kind == "gaussian-ci")
            sub->add_option("-p,--p-grid", f.p_grid, "channel strengths");
        if (kind == "ci-renyi") sub->add_option("--order", f.order, "Renyi order (default 2)");
        if (kind == "ci-flagged-mc") {
            sub->add_option("--samples", f.samples, "trajectory count");
            sub->add_option("--seed", f.seed, "RNG seed (mandatory)");
        }
        if (kind == "gaussian-ci") sub->add_option("-m,--modes", f.modes, "chain mode counts");
        if (kind == "predict-nu") {
            sub->add_option("--content", f.content_file, "operator content JSON (default: built-in Ising)");
            sub->add_option("--jump", f.jump, "jump name (default: all declared)");
        }
        if (kind == "descendant-budget") {
            f.budget = json::object();
            auto* opt = sub->add_option_function<std::vector<double>>(
                "--params",
                [&f](const std::vector<double>& v) {
                    f.budget["delta0"] = v[0];
                    f.budget["h"] = v[1];
                    f.budget["h0"] = v[2];
                },
                "delta0 h h0");
            opt->expected(3);
            sub->add_option_function<std::vector<double>>(
                "--n-values", [&f](const std::vector<double>& v) { f.budget["n_values"] = v; },
                "system sizes");
        }
        if (kind == "collapse" || kind == "threshold")
            sub->add_option("--dataset", f.dataset_file, "result JSON to analyze");
        if (kind == "collapse") {
            sub->add_option("--nu-range", f.nu_range, "exponent window lo hi")->expected(2);
            sub->add_option("--nu-grid", f.nu_grid, "grid point count");
            sub->add_flag("--near-one", f.near_one, "collapse against (1-p) n^nu");
        }
    }

    CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
    std::string run_config;
    std::string run_out;
    long long run_seed = -1;
    long run_samples = -1;
    run->add_option("--config", run_config, "JSON config file")->required();
    run->add_option("--out", run_out, "override the config's output path");
    run->add_option("--seed", run_seed, "override sampler.seed");
    run->add_option("--samples", run_samples, "override sampler.samples");

    CLI::App* reproduce = app.add_subcommand("reproduce", "run a bundled figure-scale experiment");
    std::string bundle_name;
    reproduce->add_option("name", bundle_name, "fig2x, fig2y, fig2z, fig3, freefermion or renyi")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (reproduce->parsed()) return execute_bundle(bundle_name, threads);
        if (run->parsed()) {
            json config = load_config_file(run_config);
            if (!run_out.empty()) config["out"] = run_out;
            if (run_seed >= 0) config["sampler"]["seed"] = run_seed;
            if (run_samples >= 0) config["sampler"]["samples"] = run_samples;
            return execute(config, threads);
        }
        for (const auto& kind : kinds)
            if (app.get_subcommand(kind)->parsed())
                return execute(build_config(kind, flags[kind]), threads);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const cftlab::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const cftlab::ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const cftlab::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
