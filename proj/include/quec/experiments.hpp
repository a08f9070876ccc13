#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quec/brave.hpp"
#include "quec/config.hpp"
#include "quec/discovery.hpp"
#include "quec/regret.hpp"

namespace quec {

// "# quec-<kind>/v<version> rng=<Rng::kName> k=v ..." header line of every CSV.
std::string csv_header(const std::string& kind, int version, const std::vector<std::pair<std::string, std::string>>& meta);

// Catalog file first (when configured), then the registry.
CodeSpec resolve_code(const ExperimentConfig& cfg, const std::string& name);

// x | z | all | erasure:<q> | code:<name> | compact words separated by ';'.
std::vector<PauliWord> parse_error_spec(const std::string& spec, int d, int n);

struct VerifyReport {
    std::string code;
    KLReport kl;
    std::vector<std::string> invalid;       // validate_code findings
    std::vector<std::string> golden_diffs;  // printed rows that disagree
    int golden_rows = 0;
    int correctability_failures = 0;
    int correctability_checks = 0;
    bool ok() const;
    std::string text() const;
};

// KL in the code's mode, structural validation, golden-table diff and a
// full-cycle check on `states` random logical states per correctable error.
VerifyReport verify_code(const CodeSpec& code, std::uint64_t seed, int states = 20);

// Qutrit branches default to p / 2 each.
AlphaChannel channel_from(int d, double p, double tau, std::optional<double> p1 = {}, std::optional<double> p2 = {});
BraveOptions brave_options(const ExperimentConfig& cfg, int fs);

// Columns: t,alpha,action,fidelity,theta_0..theta_{d^2-2}. action is
// "retrain" on steps that retrained (t = 0 included), else "keep".
std::string adapt_csv(const ExperimentConfig& cfg, const CodeSpec& code, const AdaptiveRun& run, const std::string& method,
                      std::uint64_t seed);

RegretOptions regret_options(const ExperimentConfig& cfg);
// Columns: t,g,G,G_ref (G_ref is the nu = 0 closed form at t).
std::string regret_csv(const RegretOptions& o, const RegretTrace& tr);

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for one value
};
Stat mean_std(const std::vector<double>& xs);

struct MetricsRow {
    SweepPoint point;
    std::string method;
    int seeds = 0;
    Stat error_rate;  // 1 - mean F over the run
    Stat fraction;    // steps with F >= 0.99
    Stat retrains;
};

// Runs every (point, method, seed) job on `cfg.threads` workers; rows come
// back in expansion order regardless of scheduling.
std::vector<MetricsRow> run_sweep(const ExperimentConfig& cfg);
std::string metrics_csv(const ExperimentConfig& cfg, const std::vector<MetricsRow>& rows);

struct DiscoverOutput {
    bool success = false;
    std::string failure;
    std::vector<CodeSpec> codes;                             // catalog entries
    std::vector<std::pair<std::string, std::string>> files;  // (file name, contents)
};

DiscoverOutput run_discover(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace quec
