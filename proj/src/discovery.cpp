#include "quec/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

#include "quec/gates.hpp"

namespace quec {

namespace {

int gcd_int(int a, int b) { return b == 0 ? a : gcd_int(b, a % b); }

std::vector<Vec> basis_vectors(const CodeSpec& c) {
    std::vector<Vec> out;
    for (const auto& s : logical_basis(c)) out.push_back(s.amps);
    return out;
}

CodeSpec shell_code(const EncoderEnvConfig& cfg, const Circuit& circuit) {
    CodeSpec c;
    c.d = cfg.d;
    c.n = cfg.n;
    c.k = cfg.k;
    c.encoder = circuit;
    c.logical_inputs = cfg.inputs;
    c.correctable = cfg.errors;
    c.kl_mode = cfg.kl_mode;
    return c;
}

// Fraction of successes over the last `window` episodes, once the window is full.
struct SuccessWindow {
    std::deque<bool> hits;
    std::size_t size;
    int count = 0;
    explicit SuccessWindow(int w) : size(static_cast<std::size_t>(std::max(1, w))) {}
    void push(bool s) {
        hits.push_back(s);
        count += s;
        if (hits.size() > size) {
            count -= hits.front();
            hits.pop_front();
        }
    }
    bool full() const { return hits.size() == size; }
    double rate() const { return hits.empty() ? 0.0 : static_cast<double>(count) / static_cast<double>(hits.size()); }
    void clear() {
        hits.clear();
        count = 0;
    }
};

}  // namespace

// ---------------------------------------------------------------- encoder

const char* encoder_reward_name(EncoderReward r) { return r == EncoderReward::KL ? "kl" : "shaped"; }

EncoderReward parse_encoder_reward(const std::string& s) {
    if (s == "kl") return EncoderReward::KL;
    if (s == "shaped") return EncoderReward::Shaped;
    throw std::invalid_argument("unknown encoder reward '" + s + "' (kl|shaped)");
}

EncoderEnv::EncoderEnv(EncoderEnvConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.d < 2 || cfg_.n < 1) throw std::invalid_argument("EncoderEnv: need d >= 2 and n >= 1");
    if (cfg_.k < 0 || cfg_.k > cfg_.n) throw std::invalid_argument("EncoderEnv: need 0 <= k <= n");
    if (cfg_.t_steps < 1) throw std::invalid_argument("EncoderEnv: t_steps must be >= 1");
    if (cfg_.inputs.empty())
        for (int q = 0; q < cfg_.k; ++q) cfg_.inputs.push_back(q);
    for (const auto& e : cfg_.errors)
        if (e.d != cfg_.d || e.n() != cfg_.n) throw std::invalid_argument("EncoderEnv: error outside the register");
    for (int q = 0; q < cfg_.n; ++q) {
        Gate g;
        g.type = GateType::H;
        g.qudits = {q};
        actions_.push_back(g);
    }
    for (int q = 0; q < cfg_.n; ++q)
        for (int e = 2; e < cfg_.d; ++e)
            if (gcd_int(e, cfg_.d) == 1) {
                Gate g;
                g.type = GateType::S;
                g.qudits = {q};
                g.q = e;
                actions_.push_back(g);
            }
    for (int c = 0; c < cfg_.n; ++c)
        for (int t = 0; t < cfg_.n; ++t)
            if (c != t) {
                Gate g;
                g.type = GateType::CNOT;
                g.qudits = {c, t};
                actions_.push_back(g);
            }
    reset();
}

int EncoderEnv::state_size() const { return (cfg_.d + 2) * cfg_.n * cfg_.t_steps; }

Gate EncoderEnv::action_gate(int action) const {
    if (action < 0 || action >= action_count()) throw std::out_of_range("EncoderEnv: action index out of range");
    return actions_[action];
}

std::string EncoderEnv::action_name(int action) const {
    const Gate g = action_gate(action);
    switch (g.type) {
        case GateType::H: return "H " + std::to_string(g.qudits[0]);
        case GateType::S: return "S" + std::to_string(g.q) + " " + std::to_string(g.qudits[0]);
        case GateType::CNOT: return "CNOT " + std::to_string(g.qudits[0]) + " " + std::to_string(g.qudits[1]);
        case GateType::Custom: break;
    }
    return "?";
}

std::vector<double> EncoderEnv::state() const {
    const auto t = encode_tensor(circuit_, cfg_.t_steps);
    return std::vector<double>(t.data.begin(), t.data.end());
}

std::vector<double> EncoderEnv::reset() {
    circuit_ = Circuit(cfg_.d, cfg_.n);
    t_ = 0;
    last_action_ = -1;
    done_ = false;
    return state();
}

KLReport EncoderEnv::report() const {
    const CodeSpec c = shell_code(cfg_, circuit_);
    return check_kl(basis_vectors(c), cfg_.d, cfg_.n, cfg_.errors, cfg_.kl_mode);
}

EnvStep EncoderEnv::step(int action) {
    if (done_) throw std::logic_error("EncoderEnv: episode finished; call reset()");
    Gate g = action_gate(action);
    g.pos = t_;
    circuit_.add(g);
    ++t_;
    const KLReport r = report();
    const bool ok = r.satisfied();
    EnvStep out;
    if (cfg_.reward == EncoderReward::KL) {
        const double gamma = static_cast<double>(t_) / cfg_.t_steps;
        out.reward = r.total() > 0 ? -gamma * static_cast<double>(r.violations()) / r.total() : 0.0;
        if (ok) out.reward += cfg_.rewards.r_success;
    } else if (ok) {
        out.reward = cfg_.rewards.r_success;
    } else if (t_ == cfg_.t_steps) {
        out.reward = cfg_.rewards.r_failure;
    } else {
        out.reward = cfg_.rewards.r_base;
        if (g.type == GateType::CNOT) out.reward += cfg_.rewards.r_boost;
        if (action == last_action_) out.reward += cfg_.rewards.r_penalty;
    }
    last_action_ = action;
    out.success = ok;
    out.done = done_ = ok || t_ == cfg_.t_steps;
    out.state = state();
    return out;
}

// ---------------------------------------------------------------- syndrome

CandidateCheck check_candidate(const std::vector<Vec>& basis, const PauliWord& candidate, const StabilizerSet& prior,
                               const std::vector<PauliWord>& errors) {
    CandidateCheck c;
    c.c1 = true;
    for (const auto& v : basis)
        if ((apply_pauli(candidate, v) - v).norm() > 1e-9) {
            c.c1 = false;
            break;
        }
    for (const auto& e : errors)
        if (commutation_residue(candidate, e) != 0) {
            c.c2 = true;
            break;
        }
    c.c3 = !candidate.is_identity() && !in_group(candidate, prior);
    c.c4 = true;
    for (const auto& s : prior) c.c4 = c.c4 && commutes(candidate, s);
    return c;
}

PauliWord syndrome_action_pauli(int d, int index) {
    if (index < 0 || index >= d * d) throw std::out_of_range("syndrome action index out of range");
    const int a = index / d, b = index % d;
    if (d == 2 && a == 1 && b == 1) return pauli_y(2, 1, 0);
    return PauliWord::single(d, 1, 0, a, b);
}

const char* syndrome_mode_name(SyndromeMode m) { return m == SyndromeMode::Modular ? "modular" : "elementary"; }

SyndromeMode parse_syndrome_mode(const std::string& s) {
    if (s == "modular") return SyndromeMode::Modular;
    if (s == "elementary") return SyndromeMode::Elementary;
    throw std::invalid_argument("unknown syndrome mode '" + s + "' (modular|elementary)");
}

SyndromeEnv::SyndromeEnv(SyndromeEnvConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.generators < 1) throw std::invalid_argument("SyndromeEnv: need at least one generator");
    if (cfg_.basis.empty()) throw std::invalid_argument("SyndromeEnv: empty logical basis");
    grid_.assign(static_cast<std::size_t>(cfg_.generators) * cfg_.n, 0);
}

int SyndromeEnv::episode_length() const {
    return cfg_.mode == SyndromeMode::Modular ? cfg_.n : cfg_.n * cfg_.generators;
}

int SyndromeEnv::state_size() const { return cfg_.generators * cfg_.n * cfg_.d * cfg_.d + episode_length(); }

int SyndromeEnv::action_count() const {
    const int p = cfg_.d * cfg_.d;
    return cfg_.mode == SyndromeMode::Modular ? p : p * cfg_.generators * cfg_.n;
}

void SyndromeEnv::set_active(int generator, const StabilizerSet& fixed) {
    if (generator < 0 || generator >= cfg_.generators) throw std::out_of_range("SyndromeEnv: generator out of range");
    if (static_cast<int>(fixed.size()) != generator)
        throw std::invalid_argument("SyndromeEnv: fixed generators must precede the active one");
    active_ = generator;
    fixed_ = fixed;
}

PauliWord SyndromeEnv::word(int generator) const {
    PauliWord w = PauliWord::identity(cfg_.d, cfg_.n);
    for (int q = 0; q < cfg_.n; ++q) {
        const PauliWord p = syndrome_action_pauli(cfg_.d, grid_[static_cast<std::size_t>(generator) * cfg_.n + q]);
        w.x[q] = p.x[0];
        w.z[q] = p.z[0];
        w.phase = (w.phase + p.phase) % w.phase_modulus();
    }
    return w;
}

std::vector<PauliWord> SyndromeEnv::words() const {
    std::vector<PauliWord> out;
    for (int g = 0; g < cfg_.generators; ++g) out.push_back(word(g));
    return out;
}

std::vector<double> SyndromeEnv::state() const {
    const int p = cfg_.d * cfg_.d;
    std::vector<double> s(state_size(), 0.0);
    for (std::size_t cell = 0; cell < grid_.size(); ++cell) s[cell * p + grid_[cell]] = 1.0;
    if (t_ < episode_length()) s[grid_.size() * p + t_] = 1.0;
    return s;
}

std::vector<double> SyndromeEnv::reset() {
    std::fill(grid_.begin(), grid_.end(), 0);
    if (cfg_.mode == SyndromeMode::Modular) {
        // Earlier generators are shown in their rows.
        for (std::size_t g = 0; g < fixed_.size(); ++g)
            for (int q = 0; q < cfg_.n; ++q) grid_[g * cfg_.n + q] = fixed_[g].x[q] * cfg_.d + fixed_[g].z[q];
    }
    t_ = 0;
    return state();
}

bool SyndromeEnv::elementary_success() const {
    StabilizerSet acc;
    for (int g = 0; g < cfg_.generators; ++g) {
        const PauliWord w = word(g);
        if (!check_candidate(cfg_.basis, w, acc, cfg_.errors).ok()) return false;
        acc.push_back(w);
    }
    std::set<Syndrome> seen;
    for (const auto& e : cfg_.errors) {
        const Syndrome s = syndrome_of(e, acc);
        if (std::all_of(s.begin(), s.end(), [](int r) { return r == 0; })) return false;
        if (!seen.insert(s).second) return false;
    }
    return true;
}

EnvStep SyndromeEnv::step(int action) {
    if (t_ >= episode_length()) throw std::logic_error("SyndromeEnv: episode finished; call reset()");
    if (action < 0 || action >= action_count()) throw std::out_of_range("SyndromeEnv: action index out of range");
    const int p = cfg_.d * cfg_.d;
    if (cfg_.mode == SyndromeMode::Modular) {
        grid_[static_cast<std::size_t>(active_) * cfg_.n + t_] = action;
    } else {
        const int cell = action / p;
        grid_[cell] = action % p;
    }
    ++t_;
    EnvStep out;
    out.done = t_ == episode_length();
    if (out.done) {
        if (cfg_.mode == SyndromeMode::Modular) {
            out.success = check_candidate(cfg_.basis, word(active_), fixed_, cfg_.errors).ok();
            out.reward = out.success ? 1.0 : 0.0;
        } else {
            out.success = elementary_success();
            out.reward = out.success ? cfg_.rewards.r_success : cfg_.rewards.r_failure;
        }
    }
    out.state = state();
    return out;
}

// ---------------------------------------------------------------- recovery

int recovery_action_count(int d, int n) { return 1 + n * (d * d - 1); }

PauliWord recovery_action_word(int d, int n, int action) {
    if (action < 0 || action >= recovery_action_count(d, n)) throw std::out_of_range("recovery action out of range");
    if (action == 0) return PauliWord::identity(d, n);
    const int q = (action - 1) / (d * d - 1);
    const int p = (action - 1) % (d * d - 1) + 1;
    const PauliWord s = syndrome_action_pauli(d, p);
    PauliWord w = PauliWord::identity(d, n);
    w.x[q] = s.x[0];
    w.z[q] = s.z[0];
    w.phase = s.phase;
    return w;
}

RecoveryEnv::RecoveryEnv(RecoveryEnvConfig cfg) : cfg_(std::move(cfg)) {
    const auto& c = cfg_.code;
    errors_.push_back(PauliWord::identity(c.d, c.n));
    for (const auto& e : cfg_.errors)
        if (!e.is_identity()) errors_.push_back(e);
    for (std::size_t i = 0; i < errors_.size(); ++i) {
        const Syndrome s = syndrome_of(errors_[i], c.stabilizers);
        auto it = std::find(syndromes_.begin(), syndromes_.end(), s);
        if (it == syndromes_.end()) {
            syndromes_.push_back(s);
            by_syndrome_.push_back({});
            it = syndromes_.end() - 1;
        }
        by_syndrome_[it - syndromes_.begin()].push_back(static_cast<int>(i));
    }
}

int RecoveryEnv::syndrome_index(const Syndrome& s) const {
    const auto it = std::find(syndromes_.begin(), syndromes_.end(), s);
    if (it == syndromes_.end()) throw std::out_of_range("RecoveryEnv: no sub-policy for syndrome " + render_syndrome(s));
    return static_cast<int>(it - syndromes_.begin());
}

int RecoveryEnv::state_size() const {
    return std::max<int>(1, static_cast<int>(cfg_.code.stabilizers.size()) * cfg_.code.d);
}

std::vector<double> RecoveryEnv::state(const Syndrome& s) const {
    std::vector<double> x(state_size(), 0.0);
    if (s.empty()) x[0] = 1.0;
    for (std::size_t j = 0; j < s.size(); ++j) x[j * cfg_.code.d + s[j]] = 1.0;
    return x;
}

double RecoveryEnv::reward(const PauliWord& error, int action, const QuditState& logical) const {
    const auto& c = cfg_.code;
    const QuditState enc = encode(c, logical);
    const Vec v = apply_pauli(recovery_action_word(c.d, c.n, action), apply_pauli(error, enc.amps));
    return std::min(1.0, std::norm(enc.amps.dot(v)));
}

// ---------------------------------------------------------------- training

void CurriculumPlan::validate() const {
    if (tasks.empty()) throw std::invalid_argument("curriculum: no tasks");
    if (window < 1) throw std::invalid_argument("curriculum: window must be >= 1");
    for (std::size_t i = 1; i < tasks.size(); ++i) {
        if (tasks[i].size() <= tasks[i - 1].size()) throw std::invalid_argument("curriculum: tasks must strictly grow");
        for (const auto& e : tasks[i - 1])
            if (std::find(tasks[i].begin(), tasks[i].end(), e) == tasks[i].end())
                throw std::invalid_argument("curriculum: tasks must be nested");
    }
}

CurriculumPlan make_curriculum(const std::vector<PauliWord>& errors, int tasks) {
    CurriculumPlan plan;
    const int m = static_cast<int>(errors.size());
    tasks = std::max(1, std::min(tasks, std::max(1, m)));
    for (int i = 1; i <= tasks; ++i) {
        const int take = (i == tasks) ? m : std::max(1, m * i / tasks);
        std::vector<PauliWord> sub(errors.begin(), errors.begin() + take);
        if (!plan.tasks.empty() && sub.size() <= plan.tasks.back().size()) continue;
        plan.tasks.push_back(std::move(sub));
    }
    if (plan.tasks.empty()) plan.tasks.push_back({});
    return plan;
}

EncoderStageResult train_encoder(const EncoderEnvConfig& env_cfg, const CurriculumPlan& plan, const TrainConfig& cfg,
                                 std::uint64_t seed) {
    plan.validate();
    EncoderEnvConfig ec = env_cfg;
    ec.errors = plan.tasks.front();
    EncoderEnv env(ec);
    Rng rng(seed);
    Rng init = rng.split(1);
    MlpPolicy policy(env.state_size(), env.action_count(), cfg.mlp, init);
    Reinforce learner(cfg.baseline_decay, cfg.entropy);
    SuccessWindow window(plan.window);
    EncoderStageResult res;
    std::size_t task = 0;
    long episode = 0;
    auto greedy_check = [&]() {
        Rng unused(0);
        const Episode ep = run_episode(env, policy, unused, true);
        res.env_steps += static_cast<long>(ep.steps.size());
        return ep.success;
    };
    while (res.env_steps < cfg.max_env_steps) {
        const Episode ep = run_episode(env, policy, rng, false);
        learner.update(policy, ep);
        res.env_steps += static_cast<long>(ep.steps.size());
        res.log.rows.push_back({episode, static_cast<int>(task), ep.total_reward, static_cast<int>(ep.steps.size()),
                                res.env_steps, ep.success});
        ++episode;
        window.push(ep.success);
        if (task + 1 < plan.tasks.size()) {
            if (window.full() && window.rate() >= plan.threshold) {
                ++task;
                ++res.tasks_completed;
                env.set_errors(plan.tasks[task]);
                window.clear();
            }
            continue;
        }
        if (episode % cfg.eval_interval == 0 && greedy_check()) {
            res.success = true;
            ++res.tasks_completed;
            break;
        }
    }
    if (!res.success) greedy_check();
    res.circuit = env.circuit();
    res.report = env.report();
    return res;
}

SyndromeStageResult train_syndrome(const SyndromeEnvConfig& env_cfg, const TrainConfig& cfg, std::uint64_t seed) {
    SyndromeStageResult res;
    if (env_cfg.generators == 0) {
        res.success = true;
        return res;
    }
    SyndromeEnv env(env_cfg);
    Rng rng(seed);
    long episode = 0;
    Rng unused(0);

    if (env_cfg.mode == SyndromeMode::Elementary) {
        Rng init = rng.split(1);
        MlpPolicy policy(env.state_size(), env.action_count(), cfg.mlp, init);
        Reinforce learner(cfg.baseline_decay, cfg.entropy);
        while (res.env_steps < cfg.max_env_steps) {
            const Episode ep = run_episode(env, policy, rng, false);
            learner.update(policy, ep);
            res.env_steps += static_cast<long>(ep.steps.size());
            res.log.rows.push_back({episode, 0, ep.total_reward, static_cast<int>(ep.steps.size()), res.env_steps, ep.success});
            ++episode;
            if (episode % cfg.eval_interval == 0) {
                const Episode g = run_episode(env, policy, unused, true);
                res.env_steps += static_cast<long>(g.steps.size());
                if (g.success) {
                    res.success = true;
                    res.stabilizers = env.words();
                    return res;
                }
            }
        }
        return res;
    }

    // Modular: train one policy per generator, each frozen before the next.
    std::vector<MlpPolicy> policies;
    StabilizerSet fixed;
    for (int g = 0; g < env_cfg.generators; ++g) {
        env.set_active(g, fixed);
        Rng init = rng.split(100 + g);
        policies.emplace_back(env.state_size(), env.action_count(), cfg.mlp, init);
        Reinforce learner(cfg.baseline_decay, cfg.entropy);
        bool done = false;
        while (!done && res.env_steps < cfg.max_env_steps) {
            const Episode ep = run_episode(env, policies.back(), rng, false);
            learner.update(policies.back(), ep);
            res.env_steps += static_cast<long>(ep.steps.size());
            res.log.rows.push_back({episode, g, ep.total_reward, static_cast<int>(ep.steps.size()), res.env_steps, ep.success});
            ++episode;
            if (episode % cfg.eval_interval == 0) {
                const Episode e = run_episode(env, policies.back(), unused, true);
                res.env_steps += static_cast<long>(e.steps.size());
                done = e.success;
            }
        }
        if (!done) return res;
        fixed.push_back(env.word(g));
    }

    // Composite rollout: the time-sliced Mix&Match policy replays every generator.
    std::vector<const MlpPolicy*> parts;
    for (const auto& p : policies) parts.push_back(&p);
    StabilizerSet composite;
    for (int g = 0; g < env_cfg.generators; ++g) {
        env.set_active(g, composite);
        std::vector<double> x = env.reset();
        EnvStep r;
        for (int q = 0; q < env_cfg.n; ++q) {
            const auto probs = mixmatch_probabilities(parts, time_slice_weights(env_cfg.generators, g * env_cfg.n + q, env_cfg.n), x);
            r = env.step(static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin()));
            x = r.state;
        }
        if (!r.success) return res;
        composite.push_back(env.word(g));
    }
    res.stabilizers = composite;
    res.success = same_group(composite, fixed);
    return res;
}

RecoveryStageResult train_recovery(const RecoveryEnvConfig& env_cfg, const TrainConfig& cfg, std::uint64_t seed) {
    RecoveryEnv env(env_cfg);
    const auto& code = env_cfg.code;
    Rng rng(seed);
    std::vector<MlpPolicy> subs;
    std::vector<Reinforce> learners;
    for (std::size_t i = 0; i < env.syndromes().size(); ++i) {
        Rng init = rng.split(200 + i);
        subs.emplace_back(env.state_size(), env.action_count(), cfg.mlp, init);
        learners.emplace_back(cfg.baseline_decay, cfg.entropy);
    }
    std::vector<const MlpPolicy*> parts;
    for (const auto& p : subs) parts.push_back(&p);
    auto weights_for = [&](int idx) {
        std::vector<int> w(parts.size(), 0);
        w[idx] = 1;
        return w;
    };

    // Fixed evaluation states: the logical basis plus random superpositions.
    Rng eval_rng = rng.split(999);
    std::vector<QuditState> tests;
    const std::size_t K = code.logical_dim();
    for (std::size_t j = 0; j < K; ++j) tests.push_back(QuditState::basis(code.d, code.k, j));
    for (int j = 0; j < 3; ++j) tests.push_back(random_state(code.d, code.k, eval_rng));

    RecoveryStageResult res;
    auto evaluate = [&]() {
        double worst = 1.0;
        std::map<Syndrome, PauliWord> table;
        for (const auto& e : env.errors()) {
            const Syndrome s = syndrome_of(e, code.stabilizers);
            const int idx = env.syndrome_index(s);
            const auto probs = mixmatch_probabilities(parts, weights_for(idx), env.state(s));
            const int a = static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
            table[s] = recovery_action_word(code.d, code.n, a);
            for (const auto& t : tests) worst = std::min(worst, env.reward(e, a, t));
            res.env_steps += static_cast<long>(tests.size());
        }
        res.min_reward = worst;
        res.table = table;
        return worst >= 1.0 - 1e-9;
    };

    long episode = 0;
    while (res.env_steps < cfg.max_env_steps) {
        const PauliWord& e = env.errors()[rng.below(env.errors().size())];
        const Syndrome s = syndrome_of(e, code.stabilizers);
        const int idx = env.syndrome_index(s);
        const auto x = env.state(s);
        const auto probs = mixmatch_probabilities(parts, weights_for(idx), x);
        const int a = static_cast<int>(rng.categorical(probs));
        const double r = env.reward(e, a, random_state(code.d, code.k, rng));
        Episode ep;
        ep.steps.push_back({x, a, r});
        ep.total_reward = r;
        ep.success = r >= 1.0 - 1e-9;
        learners[idx].update(subs[idx], ep);
        ++res.env_steps;
        res.log.rows.push_back({episode, idx, r, 1, res.env_steps, ep.success});
        ++episode;
        if (episode % cfg.eval_interval == 0 && evaluate()) {
            res.success = true;
            return res;
        }
    }
    evaluate();
    return res;
}

PipelineResult run_pipeline(const PipelineConfig& cfg, std::uint64_t seed) {
    PipelineResult out;
    const auto& ec = cfg.encoder;
    out.encoder = train_encoder(ec, make_curriculum(ec.errors, cfg.curriculum_tasks), cfg.train, splitmix64(seed ^ 0x1));
    if (!out.encoder.success) {
        out.failure = "encoder: budget of " + std::to_string(cfg.train.max_env_steps) + " steps exhausted without satisfying KL";
        return out;
    }
    EncoderEnvConfig full = ec;
    if (full.inputs.empty())
        for (int q = 0; q < full.k; ++q) full.inputs.push_back(q);
    CodeSpec code = shell_code(full, out.encoder.circuit);
    code.name = cfg.name;

    SyndromeEnvConfig sc;
    sc.d = ec.d;
    sc.n = ec.n;
    sc.generators = ec.errors.empty() ? 0 : ec.n - ec.k;
    sc.basis = basis_vectors(code);
    sc.errors = ec.errors;
    sc.mode = cfg.syndrome_mode;
    sc.rewards = ec.rewards;
    out.syndrome = train_syndrome(sc, cfg.train, splitmix64(seed ^ 0x2));
    if (!out.syndrome.success) {
        out.failure = "syndrome: no valid generator set within " + std::to_string(cfg.train.max_env_steps) + " steps";
        return out;
    }
    code.stabilizers = out.syndrome.stabilizers;

    out.recovery = train_recovery({code, ec.errors}, cfg.train, splitmix64(seed ^ 0x3));
    if (!out.recovery.success) {
        out.failure = "recovery: greedy corrections reach fidelity " + std::to_string(out.recovery.min_reward);
        return out;
    }
    code.recovery = out.recovery.table;
    const KLReport kl = check_kl(code, ec.errors, ec.kl_mode);
    if (!kl.satisfied()) {
        out.failure = "validation: KL conditions fail on the assembled code";
        return out;
    }
    out.code = code;
    out.success = true;
    return out;
}

}  // namespace quec
