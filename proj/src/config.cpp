#include "quec/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "quec/catalog.hpp"
#include "quec/registry.hpp"

namespace quec {

std::string ConfigIssue::render() const {
    std::string s;
    if (line > 0) s += "line " + std::to_string(line) + ": ";
    if (!key.empty()) s += "key '" + key + "': ";
    return s + message;
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::string s = "invalid configuration";
    for (const auto& i : issues) s += "\n  " + i.render();
    return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues) : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (!s.empty() && s.back() == ',') out.push_back("");
    return out;
}

// Empty string on success, else the message.
using Setter = std::function<std::string(ExperimentConfig&, const std::string&)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

struct KeyDef {
    ConfigKey info;
    Setter set;
    Getter get;
};

std::string read_double(const std::string& text, double& out) {
    const char* b = text.data();
    const auto r = std::from_chars(b, b + text.size(), out);
    if (r.ec != std::errc() || r.ptr != b + text.size() || !std::isfinite(out)) return "expected a number, got '" + text + "'";
    return "";
}

template <class I>
std::string read_int(const std::string& text, I& out) {
    const char* b = text.data();
    const auto r = std::from_chars(b, b + text.size(), out);
    if (r.ec != std::errc() || r.ptr != b + text.size()) return "expected an integer, got '" + text + "'";
    return "";
}

std::string range_message(const std::string& value, double lo, double hi) {
    auto show = [](double x) {
        if (x == std::numeric_limits<double>::infinity()) return std::string("inf");
        if (x == -std::numeric_limits<double>::infinity()) return std::string("-inf");
        return format_double(x);
    };
    return "value " + value + " outside [" + show(lo) + ", " + show(hi) + "]";
}

constexpr double kInf = std::numeric_limits<double>::infinity();

KeyDef real(std::string name, std::string doc, double ExperimentConfig::*m, double lo, double hi, bool lo_open = false) {
    return {{name, doc},
            [=](ExperimentConfig& c, const std::string& v) {
                double x = 0;
                if (auto e = read_double(v, x); !e.empty()) return e;
                if (x < lo || x > hi || (lo_open && x == lo))
                    return lo_open ? "value " + v + " must be > " + format_double(lo) : range_message(v, lo, hi);
                c.*m = x;
                return std::string();
            },
            [=](const ExperimentConfig& c) { return format_double(c.*m); }};
}

KeyDef optional_real(std::string name, std::string doc, std::optional<double> ExperimentConfig::*m, double lo, double hi) {
    return {{name, doc},
            [=](ExperimentConfig& c, const std::string& v) {
                double x = 0;
                if (auto e = read_double(v, x); !e.empty()) return e;
                if (x < lo || x > hi) return range_message(v, lo, hi);
                c.*m = x;
                return std::string();
            },
            [=](const ExperimentConfig& c) { return (c.*m) ? format_double(*(c.*m)) : std::string(); }};
}

template <class I>
KeyDef integer(std::string name, std::string doc, I ExperimentConfig::*m, I lo, I hi) {
    return {{name, doc},
            [=](ExperimentConfig& c, const std::string& v) {
                I x = 0;
                if (auto e = read_int(v, x); !e.empty()) return e;
                if (x < lo || x > hi) return range_message(v, static_cast<double>(lo), static_cast<double>(hi));
                c.*m = x;
                return std::string();
            },
            [=](const ExperimentConfig& c) { return std::to_string(c.*m); }};
}

KeyDef text(std::string name, std::string doc, std::string ExperimentConfig::*m) {
    return {{name, doc},
            [=](ExperimentConfig& c, const std::string& v) {
                c.*m = v;
                return std::string();
            },
            [=](const ExperimentConfig& c) { return c.*m; }};
}

std::string choices_text(const std::vector<std::string>& allowed) {
    std::string s;
    for (const auto& a : allowed) s += (s.empty() ? "" : "|") + a;
    return s;
}

KeyDef choice(std::string name, std::string doc, std::string ExperimentConfig::*m, std::vector<std::string> allowed) {
    doc += " (" + choices_text(allowed) + ")";
    return {{name, doc},
            [=](ExperimentConfig& c, const std::string& v) {
                if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
                    return "unknown value '" + v + "' (" + choices_text(allowed) + ")";
                c.*m = v;
                return std::string();
            },
            [=](const ExperimentConfig& c) { return c.*m; }};
}

KeyDef boolean(std::string name, std::string doc, bool ExperimentConfig::*m) {
    return {{name, doc + " (0|1)"},
            [=](ExperimentConfig& c, const std::string& v) {
                if (v == "1" || v == "true") c.*m = true;
                else if (v == "0" || v == "false") c.*m = false;
                else return "expected 0 or 1, got '" + v + "'";
                return std::string();
            },
            [=](const ExperimentConfig& c) { return std::string(c.*m ? "1" : "0"); }};
}

KeyDef real_list(std::string name, std::string doc, std::vector<double> ExperimentConfig::*m, double lo, double hi,
                 bool lo_open) {
    return {{name, doc},
            [=](ExperimentConfig& c, const std::string& v) {
                std::vector<double> xs;
                for (const auto& item : split_list(v)) {
                    double x = 0;
                    if (auto e = read_double(item, x); !e.empty()) return e;
                    if (x < lo || x > hi || (lo_open && x == lo))
                        return lo_open ? "value " + item + " must be > " + format_double(lo) : range_message(item, lo, hi);
                    xs.push_back(x);
                }
                if (xs.empty()) return std::string("empty list");
                c.*m = xs;
                return std::string();
            },
            [=](const ExperimentConfig& c) {
                std::string s;
                for (double x : c.*m) s += (s.empty() ? "" : ",") + format_double(x);
                return s;
            }};
}

KeyDef int_list(std::string name, std::string doc, std::vector<int> ExperimentConfig::*m, int lo, int hi) {
    return {{name, doc},
            [=](ExperimentConfig& c, const std::string& v) {
                std::vector<int> xs;
                for (const auto& item : split_list(v)) {
                    int x = 0;
                    if (auto e = read_int(item, x); !e.empty()) return e;
                    if (x < lo || x > hi) return range_message(item, lo, hi);
                    xs.push_back(x);
                }
                if (xs.empty()) return std::string("empty list");
                c.*m = xs;
                return std::string();
            },
            [=](const ExperimentConfig& c) {
                std::string s;
                for (int x : c.*m) s += (s.empty() ? "" : ",") + std::to_string(x);
                return s;
            }};
}

KeyDef choice_list(std::string name, std::string doc, std::vector<std::string> ExperimentConfig::*m,
                   std::vector<std::string> allowed) {
    doc += " (subset of " + choices_text(allowed) + ")";
    return {{name, doc},
            [=](ExperimentConfig& c, const std::string& v) {
                std::vector<std::string> xs;
                for (const auto& item : split_list(v)) {
                    if (std::find(allowed.begin(), allowed.end(), item) == allowed.end())
                        return "unknown value '" + item + "' (" + choices_text(allowed) + ")";
                    if (std::find(xs.begin(), xs.end(), item) != xs.end()) return "repeated value '" + item + "'";
                    xs.push_back(item);
                }
                if (xs.empty()) return std::string("empty list");
                c.*m = xs;
                return std::string();
            },
            [=](const ExperimentConfig& c) {
                std::string s;
                for (const auto& x : c.*m) s += (s.empty() ? "" : ",") + x;
                return s;
            }};
}

const std::vector<KeyDef>& key_table() {
    using C = ExperimentConfig;
    static const std::vector<KeyDef> table = {
        choice("mode", "experiment kind, required", &C::mode, {"verify", "discover", "adapt", "regret", "sweep"}),
        text("code", "registry or catalog code name; required for verify and adapt", &C::code),
        text("catalog", "catalog file searched before the registry", &C::catalog),
        integer<std::uint64_t>("seed", "master seed [1]", &C::seed, 0, std::numeric_limits<std::uint64_t>::max()),
        integer("seeds", "repetitions per sweep point, seeds seed..seed+seeds-1 [1]", &C::seeds, 1, 100000),
        integer("threads", "sweep worker threads, 0 = hardware concurrency [0]", &C::threads, 0, 1024),

        integer("d", "qudit dimension of the noise channel [2]", &C::d, 2, 3),
        real("p", "error probability of the channel and the regret forcing [0.1]", &C::p, 0.0, 1.0),
        optional_real("p1", "qutrit branch 1 probability [p/2]", &C::p1, 0.0, 1.0),
        optional_real("p2", "qutrit branch 2 probability [p/2]", &C::p2, 0.0, 1.0),
        real("tau", "noise period of alpha(t) = sin^2(pi t / tau) [0.3]", &C::tau, 0.0, kInf, true),
        integer("fs", "grid points per unit time [600]", &C::fs, 1, 10000000),
        real("horizon", "run length in units of t [1]", &C::horizon, 0.0, kInf, true),
        choice("channel_model", "at most one error per cycle, or independent errors on every qudit [single]",
               &C::channel_model, {"single", "tensor"}),

        choice("method", "adapt: adaptive bandit or frozen theta = 0 [brave]", &C::method, {"brave", "static"}),
        real("baseline", "bandit reward baseline F-bar [0.99]", &C::baseline, 0.0, 1.0),
        real("eta", "bandit and regret learning rate [0.1]", &C::eta, 0.0, kInf, true),
        real("pref_keep", "initial preference of keep [0]", &C::pref_keep, -1e6, 1e6),
        real("pref_retrain", "initial preference of retrain [0]", &C::pref_retrain, -1e6, 1e6),
        integer("nm_budget", "Nelder-Mead evaluations per retrain [200]", &C::nm_budget, 1, 1000000),
        real("nm_step", "initial simplex offset per angle [0.25]", &C::nm_step, 0.0, kInf, true),
        choice("fidelity", "cycle fidelity by exact branch sum or sampled shots [exact]", &C::fidelity, {"exact", "sampled"}),
        integer("shots", "trajectories per sampled fidelity [100]", &C::shots, 1, 100000000),
        choice("input", "logical input state [plus]", &C::input, {"plus", "zero"}),
        text("mask", "trainable SU(d) generators as a 0/1 string of length d^2-1, empty = all", &C::mask),

        choice("stage", "discover: stage to train [pipeline]", &C::stage, {"encoder", "syndrome", "recovery", "pipeline"}),
        integer("n", "discover: physical qudits [3]", &C::n, 1, 11),
        integer("k", "discover: logical qudits [1]", &C::k, 0, 11),
        text("errors",
             "discover: x | z | all | erasure:<q> | code:<name> | compact words separated by ';' (e.g. 'X I I; I X I')",
             &C::errors),
        integer("t_steps", "discover: encoder gate budget per episode [10]", &C::t_steps, 1, 1000),
        choice("kl_mode", "discover: Knill-Laflamme variant [strict]", &C::kl_mode, {"strict", "detection", "degenerate"}),
        choice("reward", "discover: encoder reward [kl]", &C::reward, {"kl", "shaped"}),
        choice("syndrome_mode", "discover: syndrome learner [modular]", &C::syndrome_mode, {"modular", "elementary"}),
        integer("curriculum_tasks", "discover: nested encoder tasks [1]", &C::curriculum_tasks, 1, 1000),
        integer<long>("max_env_steps", "discover: environment steps per stage [200000]", &C::max_env_steps, 1, 1000000000L),
        integer("eval_interval", "discover: episodes between greedy checks [25]", &C::eval_interval, 1, 1000000),
        choice("learner", "discover: policy-gradient learner; 'clipped' is reserved and not implemented [reinforce]",
               &C::learner, {"reinforce", "clipped"}),
        integer("hidden", "discover: hidden width of the policy [64]", &C::hidden, 1, 4096),
        real("lr", "discover: Adam step size [0.003]", &C::lr, 0.0, 1.0, true),
        real("entropy", "discover: entropy bonus weight [0.01]", &C::entropy, 0.0, 10.0),
        real("baseline_decay", "discover: moving-average baseline decay [0.9]", &C::baseline_decay, 0.0, 1.0),
        real("r_success", "discover: reward when a stage succeeds [10]", &C::r_success, -1e6, 1e6),
        real("r_base", "discover: shaped per-step reward [-0.01]", &C::r_base, -1e6, 1e6),
        real("r_penalty", "discover: shaped penalty for repeating an action [-0.05]", &C::r_penalty, -1e6, 1e6),
        real("r_boost", "discover: shaped bonus for CNOT [0.02]", &C::r_boost, -1e6, 1e6),
        real("r_failure", "discover: reward when the budget runs out [-1]", &C::r_failure, -1e6, 1e6),

        real("nu", "regret: forcing frequency [0]", &C::nu, -1e9, 1e9),
        real("T", "regret: horizon [100]", &C::T, 0.0, kInf, true),
        real("g0", "regret: initial instantaneous regret [1]", &C::g0, -1e9, 1e9),
        real("pi_max", "regret: largest action probability [1]", &C::pi_max, 0.0, 1.0, true),
        integer("grid", "regret: output points [1000]", &C::grid, 1, 100000000),
        integer("steps_per_period", "regret: minimum RK4 steps per forcing period [40]", &C::steps_per_period, 1, 100000),
        boolean("floor_at_zero", "regret: clamp g at 0 after each step [0]", &C::floor_at_zero),

        real_list("sweep_p", "sweep: error probabilities", &C::sweep_p, 0.0, 1.0, false),
        real_list("sweep_tau", "sweep: noise periods", &C::sweep_tau, 0.0, kInf, true),
        int_list("sweep_fs", "sweep: qubit sampling rates [150,300,600]", &C::sweep_fs, 1, 10000000),
        int_list("sweep_qutrit_fs", "sweep: qutrit sampling rates [150,600]", &C::sweep_qutrit_fs, 1, 10000000),
        choice_list("sweep_systems", "sweep: systems", &C::sweep_systems, {"qubit", "qutrit"}),
        choice_list("sweep_methods", "sweep: methods", &C::sweep_methods, {"static", "brave"}),
        text("qubit_code", "sweep: qubit base code [bitflip3]", &C::qubit_code),
        text("qutrit_code", "sweep: qutrit base code [qutrit_x]", &C::qutrit_code),

        text("out", "output file or directory", &C::out),
    };
    return table;
}

const KeyDef* find_key(const std::string& name) {
    for (const auto& k : key_table())
        if (k.info.name == name) return &k;
    return nullptr;
}

bool code_known(const ExperimentConfig& cfg, const std::string& name) {
    const auto& names = registry_names();
    if (std::find(names.begin(), names.end(), name) != names.end()) return true;
    if (cfg.catalog.empty()) return false;
    try {
        for (const auto& c : load_catalog(cfg.catalog))
            if (c.name == name) return true;
    } catch (const std::exception&) {
    }
    return false;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> out;
        for (const auto& k : key_table()) out.push_back(k.info);
        return out;
    }();
    return keys;
}

std::string config_help() {
    std::string s = "Config keys (key = value, one per line, '#' comments, lists comma separated):\n";
    for (const auto& k : config_keys()) {
        std::string name = "  " + k.name;
        if (name.size() < 20) name.resize(20, ' ');
        s += name + " " + k.doc + "\n";
    }
    return s;
}

std::vector<ConfigIssue> set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const KeyDef* k = find_key(key);
    if (k == nullptr) return {{key, 0, "unknown key"}};
    const std::string err = k->set(cfg, value);
    if (!err.empty()) return {{key, 0, err}};
    cfg.explicit_keys.insert(key);
    return {};
}

std::vector<ConfigIssue> validate_config(const ExperimentConfig& cfg) {
    std::vector<ConfigIssue> out;
    auto add = [&](const std::string& key, const std::string& msg) { out.push_back({key, 0, msg}); };
    if (cfg.mode.empty()) add("mode", "missing required key");
    if ((cfg.mode == "verify" || cfg.mode == "adapt") && cfg.code.empty()) add("code", "missing required key for mode " + cfg.mode);
    if (!cfg.code.empty() && !code_known(cfg, cfg.code)) add("code", "unknown code '" + cfg.code + "'");
    if (cfg.mode == "discover") {
        if (cfg.errors.empty() && cfg.code.empty()) add("errors", "missing required key for mode discover (or give code)");
        if (cfg.k > cfg.n) add("k", "must not exceed n");
        if (cfg.learner == "clipped") add("learner", "the clipped-surrogate learner is reserved and not implemented");
        if ((cfg.stage == "syndrome" || cfg.stage == "recovery") && cfg.code.empty())
            add("code", "stage " + cfg.stage + " needs a code to supply the frozen earlier stages");
    }
    if (!cfg.mask.empty()) {
        const std::size_t want = static_cast<std::size_t>(cfg.d * cfg.d - 1);
        if (cfg.mask.size() != want || cfg.mask.find_first_not_of("01") != std::string::npos)
            add("mask", "expected " + std::to_string(want) + " characters of 0/1");
    }
    if (cfg.d == 3) {
        const double p1 = cfg.p1.value_or(cfg.p / 2), p2 = cfg.p2.value_or(cfg.p / 2);
        if (p1 + p2 > 1.0) add("p1", "p1 + p2 must not exceed 1");
    } else if (cfg.p1 || cfg.p2) {
        add(cfg.p1 ? "p1" : "p2", "only used when d = 3");
    }
    if (cfg.mode == "sweep") {
        for (const auto& name : {std::make_pair(std::string("qubit_code"), cfg.qubit_code),
                                 std::make_pair(std::string("qutrit_code"), cfg.qutrit_code)})
            if (!code_known(cfg, name.second)) add(name.first, "unknown code '" + name.second + "'");
    }
    return out;
}

ConfigParse parse_config_text(const std::string& text) {
    ConfigParse res;
    std::map<std::string, int> seen;
    std::stringstream ss(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(ss, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            res.issues.push_back({"", lineno, "expected 'key = value'"});
            continue;
        }
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (auto it = seen.find(key); it != seen.end()) {
            res.issues.push_back({key, lineno, "duplicate key (first on line " + std::to_string(it->second) + ")"});
            continue;
        }
        seen[key] = lineno;
        for (auto issue : set_config_value(res.config, key, value)) {
            issue.line = lineno;
            res.issues.push_back(issue);
        }
    }
    for (const auto& issue : validate_config(res.config)) {
        // Skip cross-key complaints about keys that already failed to parse.
        const bool dup = std::any_of(res.issues.begin(), res.issues.end(),
                                     [&](const ConfigIssue& i) { return i.key == issue.key && i.line > 0; });
        if (!dup) res.issues.push_back(issue);
    }
    return res;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    auto r = parse_config_text(ss.str());
    if (!r.ok()) throw ConfigError(r.issues);
    return r.config;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string s;
    for (const auto& k : key_table()) {
        if (k.info.name != "mode" && !cfg.explicit_keys.count(k.info.name)) continue;
        if (k.info.name == "mode" && cfg.mode.empty()) continue;
        s += k.info.name + " = " + k.get(cfg) + "\n";
    }
    return s;
}

std::vector<SweepPoint> expand_sweep(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> out;
    for (const auto& sys : cfg.sweep_systems) {
        const bool qubit = sys == "qubit";
        const auto& rates = qubit ? cfg.sweep_fs : cfg.sweep_qutrit_fs;
        for (double p : cfg.sweep_p)
            for (double tau : cfg.sweep_tau)
                for (int fs : rates) out.push_back({sys, qubit ? cfg.qubit_code : cfg.qutrit_code, p, tau, fs});
    }
    return out;
}

}  // namespace quec
