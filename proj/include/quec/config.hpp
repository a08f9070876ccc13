#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace quec {

// Flat experiment configuration: one "key = value" per line, '#' starts a
// comment, lists are comma separated. Enumerations are kept as their text
// names and converted by the module that owns them.
struct ExperimentConfig {
    std::string mode;  // verify | discover | adapt | regret | sweep
    std::string code;
    std::string catalog;
    std::uint64_t seed = 1;
    int seeds = 1;
    int threads = 0;

    // channel
    int d = 2;
    double p = 0.1;
    std::optional<double> p1, p2;  // qutrit branches, default p / 2 each
    double tau = 0.3;
    int fs = 600;
    double horizon = 1.0;
    std::string channel_model = "single";

    // adaptive runs
    std::string method = "brave";
    double baseline = 0.99;
    double eta = 0.1;
    double pref_keep = 0.0;
    double pref_retrain = 0.0;
    int nm_budget = 200;
    double nm_step = 0.25;
    std::string fidelity = "exact";
    int shots = 100;
    std::string input = "plus";
    std::string mask;

    // discovery
    std::string stage = "pipeline";
    int n = 3;
    int k = 1;
    std::string errors;
    int t_steps = 10;
    std::string kl_mode = "strict";
    std::string reward = "kl";
    std::string syndrome_mode = "modular";
    int curriculum_tasks = 1;
    long max_env_steps = 200000;
    int eval_interval = 25;
    std::string learner = "reinforce";
    int hidden = 64;
    double lr = 3e-3;
    double entropy = 0.01;
    double baseline_decay = 0.9;
    double r_success = 10.0;
    double r_base = -0.01;
    double r_penalty = -0.05;
    double r_boost = 0.02;
    double r_failure = -1.0;

    // regret
    double nu = 0.0;
    double T = 100.0;
    double g0 = 1.0;
    double pi_max = 1.0;
    int grid = 1000;
    int steps_per_period = 40;
    bool floor_at_zero = false;

    // sweep
    std::vector<double> sweep_p{0.0025, 0.005, 0.0075, 0.01, 0.05, 0.1, 0.2, 0.3};
    std::vector<double> sweep_tau{0.01, 0.05, 0.1, 0.2, 0.3, 0.5};
    std::vector<int> sweep_fs{150, 300, 600};
    std::vector<int> sweep_qutrit_fs{150, 600};
    std::vector<std::string> sweep_systems{"qubit", "qutrit"};
    std::vector<std::string> sweep_methods{"static", "brave"};
    std::string qubit_code = "bitflip3";
    std::string qutrit_code = "qutrit_x";

    std::string out;

    // Keys given explicitly (serialization writes only these).
    std::set<std::string> explicit_keys;
};

struct ConfigIssue {
    std::string key;  // empty when the line has no key
    int line = 0;     // 0 when not tied to a line
    std::string message;
    std::string render() const;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

struct ConfigKey {
    std::string name;
    std::string doc;
};

const std::vector<ConfigKey>& config_keys();
// Multi-line key reference for --help.
std::string config_help();

// Every issue found: unknown keys, duplicates, malformed or out-of-range
// values, missing required keys and cross-key problems.
struct ConfigParse {
    ExperimentConfig config;
    std::vector<ConfigIssue> issues;
    bool ok() const { return issues.empty(); }
};

ConfigParse parse_config_text(const std::string& text);
// Throws ConfigError listing every issue; std::runtime_error if unreadable.
ExperimentConfig parse_config(const std::string& path);
// Applies one "key=value" override; returns the issues it caused.
std::vector<ConfigIssue> set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::vector<ConfigIssue> validate_config(const ExperimentConfig& cfg);

// Explicit keys in table order, "mode" first.
std::string serialize_config(const ExperimentConfig& cfg);

// Shortest text that reads back to the same double.
std::string format_double(double v);

struct SweepPoint {
    std::string system;  // qubit | qutrit
    std::string code;
    double p = 0.0;
    double tau = 0.0;
    int fs = 0;
};

// systems x p x tau x fs, with the qutrit rate list for qutrits.
std::vector<SweepPoint> expand_sweep(const ExperimentConfig& cfg);

}  // namespace quec
