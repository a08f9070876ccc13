#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quec/rng.hpp"

namespace quec {

struct MlpConfig {
    int hidden = 64;
    double lr = 3e-3;  // Adam step size
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Two-layer softmax policy: logits = W2 tanh(W1 x + b1) + b2.
class MlpPolicy {
public:
    MlpPolicy() = default;
    MlpPolicy(int inputs, int actions, const MlpConfig& cfg, Rng& rng);

    int inputs() const { return inputs_; }
    int actions() const { return actions_; }

    std::vector<double> logits(const std::vector<double>& x) const;
    std::vector<double> probabilities(const std::vector<double>& x) const;
    int sample(const std::vector<double>& x, Rng& rng) const;
    // Highest probability; lowest index on ties.
    int greedy(const std::vector<double>& x) const;

    // Adds weight * d log pi(action | x) / d params to the gradient buffer.
    void accumulate(const std::vector<double>& x, int action, double weight);
    // Adds weight * d H(pi(. | x)) / d params (softmax entropy).
    void accumulate_entropy(const std::vector<double>& x, double weight);
    // Adam ascent step on the buffered gradient, then clears it. Throws
    // std::runtime_error on a non-finite gradient.
    void apply_gradients();

    const std::vector<double>& parameters() const { return params_; }
    void set_parameters(const std::vector<double>& p);  // throws on a size mismatch
    const std::vector<double>& gradient() const { return grad_; }
    std::size_t parameter_count() const { return params_.size(); }

private:
    int inputs_ = 0;
    int actions_ = 0;
    MlpConfig cfg_;
    std::vector<double> params_;  // W1 (h x in), b1 (h), W2 (a x h), b2 (a)
    std::vector<double> grad_;
    std::vector<double> m_, v_;
    long steps_ = 0;

    std::size_t w1() const { return 0; }
    std::size_t b1() const { return static_cast<std::size_t>(cfg_.hidden) * inputs_; }
    std::size_t w2() const { return b1() + cfg_.hidden; }
    std::size_t b2() const { return w2() + static_cast<std::size_t>(actions_) * cfg_.hidden; }
    std::vector<double> hidden(const std::vector<double>& x) const;
    void backprop(const std::vector<double>& x, const std::vector<double>& h, const std::vector<double>& dz);
};

std::vector<double> softmax(const std::vector<double>& logits);

// Episodic environment with a discrete action space.
struct EnvStep {
    std::vector<double> state;
    double reward = 0.0;
    bool done = false;
    bool success = false;
};

class Env {
public:
    virtual ~Env() = default;
    virtual int state_size() const = 0;
    virtual int action_count() const = 0;
    virtual std::vector<double> reset() = 0;
    virtual EnvStep step(int action) = 0;
};

struct Transition {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
};

struct Episode {
    std::vector<Transition> steps;
    double total_reward = 0.0;
    bool success = false;
};

Episode run_episode(Env& env, const MlpPolicy& policy, Rng& rng, bool greedy);

// REINFORCE with a per-time-step moving-average baseline of the return-to-go:
//   grad = sum_t (G_t - b_t) grad log pi(a_t | s_t) + beta grad H(pi(. | s_t)),
//   b_t <- decay b_t + (1 - decay) G_t.
class Reinforce {
public:
    explicit Reinforce(double baseline_decay = 0.9, double entropy = 0.0) : decay_(baseline_decay), entropy_(entropy) {}
    void update(MlpPolicy& policy, const Episode& ep);
    const std::vector<double>& baselines() const { return baselines_; }

private:
    double decay_;
    double entropy_;
    std::vector<double> baselines_;
    std::vector<bool> seen_;
};

struct TrainLogRow {
    long episode = 0;
    int task = 0;
    double reward = 0.0;
    int length = 0;
    long env_steps = 0;
    bool success = false;
};

struct TrainLog {
    std::vector<TrainLogRow> rows;
    // FNV-1a over the printed rows; equal logs give equal checksums.
    std::uint64_t checksum() const;
    std::string csv(const std::string& header_comment = "") const;
};

// Plain REINFORCE loop for `episodes` episodes.
TrainLog train_policy(Env& env, MlpPolicy& policy, long episodes, Rng& rng, double baseline_decay = 0.9);

// Mix&Match: pi_mm(a | x) = sum_i w_i pi_i(a | x) with one-hot w. Throws
// std::invalid_argument unless exactly one weight is 1 and the rest 0, or the
// policies disagree on the action count.
std::vector<double> mixmatch_probabilities(const std::vector<const MlpPolicy*>& policies, const std::vector<int>& weights,
                                           const std::vector<double>& x);
// w_i = 1 for the policy whose slice [i * slice, (i + 1) * slice) holds step.
std::vector<int> time_slice_weights(int policies, int step, int slice);

}  // namespace quec
