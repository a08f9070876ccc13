#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "quec/catalog.hpp"
#include "quec/experiments.hpp"
#include "quec/registry.hpp"

using namespace quec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// Config file (optional), then mode, then --set overrides; every problem is reported.
ExperimentConfig load(const std::string& mode, const std::string& path, const std::vector<std::string>& sets) {
    ExperimentConfig cfg;
    std::vector<ConfigIssue> issues;
    if (!path.empty()) {
        auto r = parse_config_text(read_file(path));
        cfg = r.config;
        for (const auto& i : r.issues)
            if (i.line > 0) issues.push_back(i);
    }
    if (!cfg.mode.empty() && cfg.mode != mode) issues.push_back({"mode", 0, "config says '" + cfg.mode + "' but the command is " + mode});
    set_config_value(cfg, "mode", mode);
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            issues.push_back({"", 0, "--set expects key=value, got '" + s + "'"});
            continue;
        }
        for (auto i : set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1))) {
            i.message += " (from --set)";
            issues.push_back(i);
        }
    }
    for (const auto& i : validate_config(cfg)) issues.push_back(i);
    if (!issues.empty()) throw ConfigError(issues);
    return cfg;
}

int emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") std::cout << text;
    else write_file(out, text);
    return kExitOk;
}

int run_verify(const ExperimentConfig& cfg) {
    const VerifyReport r = verify_code(resolve_code(cfg, cfg.code), cfg.seed);
    std::cout << r.text();
    return r.ok() ? kExitOk : kExitCheckFailed;
}

int run_adapt(const ExperimentConfig& cfg) {
    const CodeSpec code = resolve_code(cfg, cfg.code);
    const AlphaChannel ch = channel_from(code.d, cfg.p, cfg.tau, cfg.p1, cfg.p2);
    const BraveOptions opts = brave_options(cfg, cfg.fs);
    const AdaptiveRun run = cfg.method == "brave" ? brave_run(code, ch, opts, cfg.seed) : static_run(code, ch, opts, cfg.seed);
    std::cerr << "mean fidelity " << format_double(run.mean_fidelity()) << ", fraction >= 0.99 "
              << format_double(run.fraction_at_least(0.99)) << ", retrains " << run.retrains << "\n";
    return emit(cfg.out, adapt_csv(cfg, code, run, cfg.method, cfg.seed));
}

int run_regret(const ExperimentConfig& cfg) {
    const RegretOptions o = regret_options(cfg);
    const RegretTrace tr = regret_simulate(o);
    emit(cfg.out, regret_csv(o, tr));
    if (tr.diverged) {
        std::cerr << "regret: g diverges at t = " << format_double(tr.diverged_at) << "; trace truncated\n";
        return kExitCheckFailed;
    }
    const double ref = regret_reference(o.eta, o.g0, tr.t.back(), o.pi_max);
    std::cerr << "G(T) = " << format_double(tr.G.back()) << ", nu = 0 reference " << format_double(ref) << "\n";
    if (o.nu == 0.0 || o.p == 0.0) return std::abs(tr.G.back() - ref) <= 0.05 * std::abs(ref) ? kExitOk : kExitCheckFailed;
    return kExitOk;
}

int run_sweep_cmd(const ExperimentConfig& cfg) {
    const auto rows = run_sweep(cfg);
    const std::string dir = cfg.out.empty() ? "." : cfg.out;
    write_file(dir + "/metrics.csv", metrics_csv(cfg, rows));
    write_file(dir + "/config.txt", serialize_config(cfg));
    std::cerr << rows.size() << " rows written to " << dir << "/metrics.csv\n";
    return kExitOk;
}

int run_discover_cmd(const ExperimentConfig& cfg) {
    const DiscoverOutput r = run_discover(cfg, cfg.seed);
    const std::string dir = cfg.out.empty() ? "." : cfg.out;
    for (const auto& [name, text] : r.files) write_file(dir + "/" + name, text);
    if (!r.codes.empty()) write_file(dir + "/catalog.txt", write_catalog(r.codes));
    if (!r.success) {
        std::cerr << "discover failed: " << r.failure << "\n";
        return kExitCheckFailed;
    }
    for (const auto& c : r.codes) {
        std::cout << "code " << c.name << "\n";
        for (const auto& s : c.stabilizers) std::cout << "  S " << render_compact(s) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qudit error-correction workbench: code verification, RL discovery, adaptive calibration"};
    app.require_subcommand(1);
    app.footer("\n" + config_help() + "\nRegistry codes:" + [] {
        std::string s;
        for (const auto& n : registry_names()) s += " " + n;
        return s;
    }());

    std::string config_path, out, code, catalog;
    std::vector<std::string> sets;
    std::uint64_t seed = 1;
    bool seed_given = false;

    auto common = [&](CLI::App* sub, bool with_config) {
        if (with_config) sub->add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
        sub->add_option("--set", sets, "override one config key, key=value (repeatable)");
        sub->add_option("--out", out, "output file or directory");
    };

    auto* verify = app.add_subcommand("verify-code", "check KL conditions, golden syndrome tables and correctability");
    verify->add_option("--code", code, "registry or catalog code name")->required();
    verify->add_option("--catalog", catalog, "catalog file searched before the registry");
    verify->add_option("--seed", seed, "seed for the random logical states");
    common(verify, true);

    std::string stage;
    auto* discover = app.add_subcommand("discover", "train encoder, syndrome and recovery agents");
    discover->add_option("--stage", stage, "encoder|syndrome|recovery|pipeline")
        ->check(CLI::IsMember({"encoder", "syndrome", "recovery", "pipeline"}));
    discover->add_option("--seed", seed, "master seed");
    common(discover, true);

    auto* adapt = app.add_subcommand("adapt", "one adaptive (or static) calibration run; CSV t,alpha,action,fidelity,theta_*");
    adapt->add_option("--seed", seed, "master seed");
    common(adapt, true);

    double eta = 0.1, nu = 0.0, p = 0.1, T = 100.0;
    int grid = 1000;
    bool floor = false;
    auto* regret = app.add_subcommand("regret", "integrate the instantaneous-regret model; CSV t,g,G,G_ref");
    regret->add_option("--eta", eta, "learning rate")->check(CLI::PositiveNumber);
    regret->add_option("--nu", nu, "forcing frequency");
    regret->add_option("--p", p, "error probability")->check(CLI::Range(0.0, 1.0));
    regret->add_option("--T", T, "horizon")->check(CLI::PositiveNumber);
    regret->add_option("--grid", grid, "output points")->check(CLI::PositiveNumber);
    regret->add_flag("--floor-at-zero", floor, "clamp g at 0 after every step");
    common(regret, true);

    auto* sweep = app.add_subcommand("sweep", "static and adaptive runs over the p x tau x fs grid; writes <out>/metrics.csv");
    sweep->add_option("--seed", seed, "first seed");
    common(sweep, true);

    CLI11_PARSE(app, argc, argv);
    if (const auto* opt = app.get_subcommands().front()->get_option_no_throw("--seed")) seed_given = opt->count() > 0;

    try {
        CLI::App* sub = app.get_subcommands().front();
        std::vector<std::string> all = sets;
        auto add = [&](const std::string& k, const std::string& v) { all.insert(all.begin(), k + "=" + v); };
        if (seed_given) add("seed", std::to_string(seed));
        if (!out.empty()) add("out", out);
        if (sub == verify) {
            add("code", code);
            if (!catalog.empty()) add("catalog", catalog);
            return run_verify(load("verify", config_path, all));
        }
        if (sub == discover) {
            if (!stage.empty()) add("stage", stage);
            return run_discover_cmd(load("discover", config_path, all));
        }
        if (sub == adapt) return run_adapt(load("adapt", config_path, all));
        if (sub == regret) {
            for (const auto* name : {"--eta", "--nu", "--p", "--T", "--grid"})
                if (regret->count(name) > 0) {
                    const std::string key = std::string(name).substr(2);
                    const double v = key == "eta" ? eta : key == "nu" ? nu : key == "p" ? p : key == "T" ? T : grid;
                    add(key, key == "grid" ? std::to_string(grid) : format_double(v));
                }
            if (floor) add("floor_at_zero", "1");
            return run_regret(load("regret", config_path, all));
        }
        return run_sweep_cmd(load("sweep", config_path, all));
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}
