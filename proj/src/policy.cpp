#include "quec/policy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace quec {

std::vector<double> softmax(const std::vector<double>& logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] = std::exp(logits[i] - m);
    for (auto& v : p) v /= s;
    return p;
}

MlpPolicy::MlpPolicy(int inputs, int actions, const MlpConfig& cfg, Rng& rng)
    : inputs_(inputs), actions_(actions), cfg_(cfg) {
    if (inputs < 1 || actions < 1 || cfg.hidden < 1) throw std::invalid_argument("MlpPolicy: sizes must be >= 1");
    params_.assign(b2() + actions_, 0.0);
    // Glorot-style scale on W1; W2 starts small so the initial policy is near uniform.
    const double s1 = std::sqrt(1.0 / inputs_);
    for (std::size_t i = w1(); i < b1(); ++i) params_[i] = s1 * rng.normal();
    const double s2 = 0.01 / std::sqrt(static_cast<double>(cfg_.hidden));
    for (std::size_t i = w2(); i < b2(); ++i) params_[i] = s2 * rng.normal();
    grad_.assign(params_.size(), 0.0);
    m_.assign(params_.size(), 0.0);
    v_.assign(params_.size(), 0.0);
}

std::vector<double> MlpPolicy::hidden(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != inputs_) throw std::invalid_argument("MlpPolicy: input size mismatch");
    std::vector<double> h(cfg_.hidden);
    for (int j = 0; j < cfg_.hidden; ++j) {
        double a = params_[b1() + j];
        const double* w = &params_[w1() + static_cast<std::size_t>(j) * inputs_];
        for (int i = 0; i < inputs_; ++i)
            if (x[i] != 0.0) a += w[i] * x[i];
        h[j] = std::tanh(a);
    }
    return h;
}

std::vector<double> MlpPolicy::logits(const std::vector<double>& x) const {
    const auto h = hidden(x);
    std::vector<double> z(actions_);
    for (int a = 0; a < actions_; ++a) {
        double s = params_[b2() + a];
        const double* w = &params_[w2() + static_cast<std::size_t>(a) * cfg_.hidden];
        for (int j = 0; j < cfg_.hidden; ++j) s += w[j] * h[j];
        z[a] = s;
    }
    return z;
}

std::vector<double> MlpPolicy::probabilities(const std::vector<double>& x) const { return softmax(logits(x)); }

int MlpPolicy::sample(const std::vector<double>& x, Rng& rng) const {
    return static_cast<int>(rng.categorical(probabilities(x)));
}

int MlpPolicy::greedy(const std::vector<double>& x) const {
    const auto z = logits(x);
    return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

void MlpPolicy::backprop(const std::vector<double>& x, const std::vector<double>& h, const std::vector<double>& dz) {
    std::vector<double> dh(cfg_.hidden, 0.0);
    for (int a = 0; a < actions_; ++a) {
        grad_[b2() + a] += dz[a];
        const std::size_t row = w2() + static_cast<std::size_t>(a) * cfg_.hidden;
        for (int j = 0; j < cfg_.hidden; ++j) {
            grad_[row + j] += dz[a] * h[j];
            dh[j] += dz[a] * params_[row + j];
        }
    }
    for (int j = 0; j < cfg_.hidden; ++j) {
        const double da = dh[j] * (1.0 - h[j] * h[j]);
        grad_[b1() + j] += da;
        const std::size_t row = w1() + static_cast<std::size_t>(j) * inputs_;
        for (int i = 0; i < inputs_; ++i)
            if (x[i] != 0.0) grad_[row + i] += da * x[i];
    }
}

void MlpPolicy::accumulate(const std::vector<double>& x, int action, double weight) {
    if (action < 0 || action >= actions_) throw std::out_of_range("MlpPolicy: action out of range");
    const auto p = probabilities(x);
    // d log pi(action) / d z_a = [a == action] - p_a
    std::vector<double> dz(actions_);
    for (int a = 0; a < actions_; ++a) dz[a] = weight * ((a == action ? 1.0 : 0.0) - p[a]);
    backprop(x, hidden(x), dz);
}

void MlpPolicy::accumulate_entropy(const std::vector<double>& x, double weight) {
    const auto p = probabilities(x);
    double H = 0.0;
    for (double v : p)
        if (v > 0.0) H -= v * std::log(v);
    // dH / dz_a = -p_a (log p_a + H)
    std::vector<double> dz(actions_);
    for (int a = 0; a < actions_; ++a) dz[a] = p[a] > 0.0 ? -weight * p[a] * (std::log(p[a]) + H) : 0.0;
    backprop(x, hidden(x), dz);
}

void MlpPolicy::set_parameters(const std::vector<double>& p) {
    if (p.size() != params_.size()) throw std::invalid_argument("MlpPolicy: parameter count mismatch");
    params_ = p;
}

void MlpPolicy::apply_gradients() {
    for (double g : grad_)
        if (!std::isfinite(g)) throw std::runtime_error("MlpPolicy: non-finite gradient");
    ++steps_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(steps_));
    for (std::size_t i = 0; i < params_.size(); ++i) {
        const double g = grad_[i];
        m_[i] = cfg_.beta1 * m_[i] + (1 - cfg_.beta1) * g;
        v_[i] = cfg_.beta2 * v_[i] + (1 - cfg_.beta2) * g * g;
        params_[i] += cfg_.lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg_.eps);
        grad_[i] = 0.0;
    }
}

Episode run_episode(Env& env, const MlpPolicy& policy, Rng& rng, bool greedy) {
    Episode ep;
    auto s = env.reset();
    while (true) {
        const int a = greedy ? policy.greedy(s) : policy.sample(s, rng);
        auto r = env.step(a);
        ep.steps.push_back({std::move(s), a, r.reward});
        ep.total_reward += r.reward;
        s = std::move(r.state);
        if (r.done) {
            ep.success = r.success;
            break;
        }
    }
    return ep;
}

void Reinforce::update(MlpPolicy& policy, const Episode& ep) {
    const std::size_t T = ep.steps.size();
    if (baselines_.size() < T) {
        baselines_.resize(T, 0.0);
        seen_.resize(T, false);
    }
    double ret = 0.0;
    std::vector<double> G(T);
    for (std::size_t t = T; t-- > 0;) G[t] = ret += ep.steps[t].reward;
    for (std::size_t t = 0; t < T; ++t) {
        const double adv = G[t] - baselines_[t];
        if (adv != 0.0) policy.accumulate(ep.steps[t].state, ep.steps[t].action, adv);
        if (entropy_ > 0.0) policy.accumulate_entropy(ep.steps[t].state, entropy_);
        baselines_[t] = seen_[t] ? decay_ * baselines_[t] + (1 - decay_) * G[t] : G[t];
        seen_[t] = true;
    }
    policy.apply_gradients();
}

std::uint64_t TrainLog::checksum() const {
    const std::string s = csv();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string TrainLog::csv(const std::string& header_comment) const {
    std::ostringstream os;
    if (!header_comment.empty()) os << "# " << header_comment << "\n";
    os << "episode,task,reward,length,env_steps,success\n";
    os << std::setprecision(10);
    for (const auto& r : rows)
        os << r.episode << ',' << r.task << ',' << r.reward << ',' << r.length << ',' << r.env_steps << ',' << (r.success ? 1 : 0)
           << "\n";
    return os.str();
}

TrainLog train_policy(Env& env, MlpPolicy& policy, long episodes, Rng& rng, double baseline_decay) {
    if (episodes < 1) throw std::invalid_argument("train_policy: budget must be >= 1");
    Reinforce learner(baseline_decay);
    TrainLog log;
    long steps = 0;
    for (long e = 0; e < episodes; ++e) {
        const Episode ep = run_episode(env, policy, rng, false);
        learner.update(policy, ep);
        steps += static_cast<long>(ep.steps.size());
        log.rows.push_back({e, 0, ep.total_reward, static_cast<int>(ep.steps.size()), steps, ep.success});
    }
    return log;
}

std::vector<double> mixmatch_probabilities(const std::vector<const MlpPolicy*>& policies, const std::vector<int>& weights,
                                           const std::vector<double>& x) {
    if (policies.empty() || policies.size() != weights.size())
        throw std::invalid_argument("mixmatch: one weight per policy required");
    int active = -1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] != 0 && weights[i] != 1) throw std::invalid_argument("mixmatch: weights must be 0 or 1");
        if (weights[i] == 1) {
            if (active >= 0) throw std::invalid_argument("mixmatch: overlapping activations");
            active = static_cast<int>(i);
        }
        if (policies[i]->actions() != policies[0]->actions())
            throw std::invalid_argument("mixmatch: policies differ in action count");
    }
    if (active < 0) throw std::invalid_argument("mixmatch: no active policy");
    std::vector<double> p(policies[0]->actions(), 0.0);
    for (std::size_t i = 0; i < policies.size(); ++i) {
        if (weights[i] == 0) continue;
        const auto pi = policies[i]->probabilities(x);
        for (std::size_t a = 0; a < p.size(); ++a) p[a] += weights[i] * pi[a];
    }
    return p;
}

std::vector<int> time_slice_weights(int policies, int step, int slice) {
    if (policies < 1 || slice < 1) throw std::invalid_argument("time_slice_weights: sizes must be >= 1");
    if (step < 0 || step >= policies * slice) throw std::out_of_range("time_slice_weights: step outside every slice");
    std::vector<int> w(policies, 0);
    w[step / slice] = 1;
    return w;
}

}  // namespace quec
