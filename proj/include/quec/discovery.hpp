#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quec/codes.hpp"
#include "quec/policy.hpp"

namespace quec {

// ---------------------------------------------------------------- encoder

enum class EncoderReward {
    KL,      // R_t = gamma_t * (-violations / total) + r_success [all KL hold], gamma_t = t / t_steps
    Shaped,  // r_base per step, + r_boost for CNOT, + r_penalty for repeating the last action,
             // r_success when KL holds, r_failure when t_steps is reached
};

const char* encoder_reward_name(EncoderReward r);
EncoderReward parse_encoder_reward(const std::string& s);

struct RewardConfig {
    double r_success = 10.0;
    double r_base = -0.01;
    double r_penalty = -0.05;
    double r_boost = 0.02;
    double r_failure = -1.0;
};

struct EncoderEnvConfig {
    int d = 2;
    int n = 3;
    int k = 1;
    std::vector<int> inputs;  // default 0..k-1
    std::vector<PauliWord> errors;
    int t_steps = 10;
    KLMode kl_mode = KLMode::Strict;
    EncoderReward reward = EncoderReward::KL;
    RewardConfig rewards;
};

// Actions, in index order: H on each qudit; S_q for each qudit and each
// q in 2..d-1 coprime with d; CNOT for every ordered pair (control, target).
class EncoderEnv : public Env {
public:
    explicit EncoderEnv(EncoderEnvConfig cfg);

    int state_size() const override;
    int action_count() const override { return static_cast<int>(actions_.size()); }
    std::vector<double> reset() override;
    EnvStep step(int action) override;

    Gate action_gate(int action) const;
    std::string action_name(int action) const;
    const Circuit& circuit() const { return circuit_; }
    int t() const { return t_; }
    KLReport report() const;
    std::vector<double> state() const;
    void set_errors(std::vector<PauliWord> errors) { cfg_.errors = std::move(errors); }
    const EncoderEnvConfig& config() const { return cfg_; }

private:
    EncoderEnvConfig cfg_;
    std::vector<Gate> actions_;
    Circuit circuit_;
    int t_ = 0;
    int last_action_ = -1;
    bool done_ = false;
};

// ---------------------------------------------------------------- syndrome

struct CandidateCheck {
    bool c1 = false;  // fixes every logical basis state
    bool c2 = false;  // nonzero residue with at least one error
    bool c3 = false;  // not in the group generated by the prior generators
    bool c4 = false;  // commutes with every prior generator
    bool ok() const { return c1 && c2 && c3 && c4; }
};

CandidateCheck check_candidate(const std::vector<Vec>& basis, const PauliWord& candidate, const StabilizerSet& prior,
                               const std::vector<PauliWord>& errors);

// Single-qudit Pauli chosen by a syndrome action: index a * d + b -> X^a Z^b
// (Y for index 3 when d = 2). Index 0 is the identity.
PauliWord syndrome_action_pauli(int d, int index);

enum class SyndromeMode {
    Modular,     // one policy per generator, time-sliced (Mix&Match)
    Elementary,  // one policy chooses (Pauli, generator, qudit) at every step
};

const char* syndrome_mode_name(SyndromeMode m);
SyndromeMode parse_syndrome_mode(const std::string& s);

struct SyndromeEnvConfig {
    int d = 2;
    int n = 3;
    int generators = 2;  // n - k
    std::vector<Vec> basis;
    std::vector<PauliWord> errors;
    SyndromeMode mode = SyndromeMode::Modular;
    RewardConfig rewards;  // elementary mode uses r_success / r_failure
};

// State: one-hot (generator, qudit, Pauli) grid, plus a one-hot step index.
// Modular: an episode builds generator `active` one qudit per step, reward 1
// when the finished word passes C1-C4 against the fixed earlier generators.
// Elementary: n * generators steps, each placing a Pauli on any (generator,
// qudit) cell; r_success when the words form a valid generator set that gives
// every error a distinct nonzero syndrome, r_failure otherwise.
class SyndromeEnv : public Env {
public:
    explicit SyndromeEnv(SyndromeEnvConfig cfg);

    int state_size() const override;
    int action_count() const override;
    std::vector<double> reset() override;
    EnvStep step(int action) override;

    void set_active(int generator, const StabilizerSet& fixed);
    int active() const { return active_; }
    PauliWord word(int generator) const;
    std::vector<PauliWord> words() const;
    const SyndromeEnvConfig& config() const { return cfg_; }
    int episode_length() const;

private:
    SyndromeEnvConfig cfg_;
    int active_ = 0;
    StabilizerSet fixed_;
    std::vector<int> grid_;  // generators x n Pauli indices
    int t_ = 0;

    std::vector<double> state() const;
    bool elementary_success() const;
};

// ---------------------------------------------------------------- recovery

// Action 0 is the identity; action 1 + q * (d^2 - 1) + (p - 1) applies the
// single-qudit Pauli of syndrome index p on qudit q.
PauliWord recovery_action_word(int d, int n, int action);
int recovery_action_count(int d, int n);

struct RecoveryEnvConfig {
    CodeSpec code;                   // encoder, stabilizers
    std::vector<PauliWord> errors;   // identity is always added
};

class RecoveryEnv {
public:
    explicit RecoveryEnv(RecoveryEnvConfig cfg);

    const std::vector<Syndrome>& syndromes() const { return syndromes_; }
    const std::vector<PauliWord>& errors() const { return errors_; }  // identity first
    int syndrome_index(const Syndrome& s) const;  // throws std::out_of_range
    std::vector<double> state(const Syndrome& s) const;
    int state_size() const;
    int action_count() const { return recovery_action_count(cfg_.code.d, cfg_.code.n); }
    // Fidelity of the corrected state with the encoded input.
    double reward(const PauliWord& error, int action, const QuditState& logical) const;

private:
    RecoveryEnvConfig cfg_;
    std::vector<PauliWord> errors_;
    std::vector<Syndrome> syndromes_;
    std::vector<std::vector<int>> by_syndrome_;
};

// ---------------------------------------------------------------- training

struct CurriculumPlan {
    std::vector<std::vector<PauliWord>> tasks;  // nested, strictly growing
    int window = 100;
    double threshold = 0.9;

    void validate() const;
};

// Single-task plan, or `tasks` nested prefixes of `errors` (last = all).
CurriculumPlan make_curriculum(const std::vector<PauliWord>& errors, int tasks);

struct TrainConfig {
    long max_env_steps = 200000;  // per stage
    int eval_interval = 25;       // episodes between greedy checks
    double baseline_decay = 0.9;
    double entropy = 0.01;  // entropy bonus weight
    MlpConfig mlp;
};

struct EncoderStageResult {
    bool success = false;
    Circuit circuit;
    KLReport report;
    long env_steps = 0;
    int tasks_completed = 0;
    TrainLog log;
};

EncoderStageResult train_encoder(const EncoderEnvConfig& env_cfg, const CurriculumPlan& plan, const TrainConfig& cfg,
                                 std::uint64_t seed);

struct SyndromeStageResult {
    bool success = false;
    StabilizerSet stabilizers;
    long env_steps = 0;
    TrainLog log;
};

SyndromeStageResult train_syndrome(const SyndromeEnvConfig& env_cfg, const TrainConfig& cfg, std::uint64_t seed);

struct RecoveryStageResult {
    bool success = false;
    std::map<Syndrome, PauliWord> table;
    double min_reward = 0.0;  // greedy evaluation over every (error, test state)
    long env_steps = 0;
    TrainLog log;
};

RecoveryStageResult train_recovery(const RecoveryEnvConfig& env_cfg, const TrainConfig& cfg, std::uint64_t seed);

struct PipelineConfig {
    std::string name = "discovered";
    EncoderEnvConfig encoder;
    int curriculum_tasks = 1;
    SyndromeMode syndrome_mode = SyndromeMode::Modular;
    TrainConfig train;
};

struct PipelineResult {
    bool success = false;
    std::string failure;  // stage and reason when !success
    CodeSpec code;
    EncoderStageResult encoder;
    SyndromeStageResult syndrome;
    RecoveryStageResult recovery;
};

// Encoder -> frozen -> n-k syndrome policies -> frozen -> recovery sub-policies.
PipelineResult run_pipeline(const PipelineConfig& cfg, std::uint64_t seed);

}  // namespace quec
