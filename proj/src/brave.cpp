#include "quec/brave.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quec/gates.hpp"

namespace quec {

const char* fidelity_mode_name(FidelityMode m) { return m == FidelityMode::Exact ? "exact" : "sampled"; }

FidelityMode parse_fidelity_mode(const std::string& s) {
    if (s == "exact") return FidelityMode::Exact;
    if (s == "sampled") return FidelityMode::Sampled;
    throw std::invalid_argument("unknown fidelity mode '" + s + "' (exact|sampled)");
}

const char* channel_model_name(ChannelModel m) { return m == ChannelModel::SingleError ? "single" : "tensor"; }

ChannelModel parse_channel_model(const std::string& s) {
    if (s == "single") return ChannelModel::SingleError;
    if (s == "tensor") return ChannelModel::Tensor;
    throw std::invalid_argument("unknown channel model '" + s + "' (single|tensor)");
}

const char* input_state_name(InputState s) { return s == InputState::Plus ? "plus" : "zero"; }

InputState parse_input_state(const std::string& s) {
    if (s == "plus") return InputState::Plus;
    if (s == "zero") return InputState::Zero;
    throw std::invalid_argument("unknown input state '" + s + "' (plus|zero)");
}

VariationalCode::VariationalCode(CodeSpec c) : base(std::move(c)) { theta.assign(parameter_count(), 0.0); }

Mat VariationalCode::local_unitary() const { return su_d_unitary(theta, base.d).mat; }

Mat VariationalCode::global_unitary() const {
    checked_dim(base.d, base.n);
    if (ipow(base.d, base.n) > 4096) throw std::length_error("global_unitary: register too large for a dense operator");
    return kron_all(std::vector<Mat>(base.n, local_unitary()));
}

std::vector<Mat> VariationalCode::derived_stabilizers() const {
    const Mat w = global_unitary();
    std::vector<Mat> out;
    for (const auto& s : base.stabilizers) out.push_back(w * dense(s).mat * w.adjoint());
    return out;
}

std::map<Syndrome, Mat> VariationalCode::derived_recoveries() const {
    const Mat w = global_unitary();
    std::map<Syndrome, Mat> out;
    for (const auto& [syn, r] : base.recovery) out[syn] = w * dense(r).mat * w.adjoint();
    return out;
}

double VariationalCode::max_commutator() const {
    const auto s = derived_stabilizers();
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) m = std::max(m, (s[i] * s[j] - s[j] * s[i]).cwiseAbs().maxCoeff());
    return m;
}

LocalChannel noise_channel(const AlphaChannel& ch, int n, double t, ChannelModel model) {
    const KrausChannel single = kraus_at(ch, t);
    if (model == ChannelModel::SingleError) return single_error_channel(single, n);
    const KrausChannel full = tensor_channel(single, n);
    LocalChannel out;
    out.d = ch.d;
    out.n = n;
    std::vector<int> all(n);
    for (int q = 0; q < n; ++q) all[q] = q;
    for (const auto& op : full.ops) out.terms.push_back({op, all});
    return out;
}

LocalChannel rotate_channel(const LocalChannel& ch, const Mat& u) {
    LocalChannel out = ch;
    for (auto& term : out.terms) {
        const Mat w = kron_all(std::vector<Mat>(term.targets.size(), u));
        term.op = w.adjoint() * term.op * w;
    }
    return out;
}

QuditState input_state(InputState s, int d, int k) {
    if (s == InputState::Zero) return QuditState::zero(d, k);
    const std::size_t dim = ipow(d, k);
    return QuditState(d, k, Vec::Constant(dim, cplx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0)));
}

// Running the base code against W^dag K W is the same cycle as running the
// rotated code against K, and avoids dense d^n operators.
double cycle_fidelity_exact(const VariationalCode& vc, const LocalChannel& ch, const QuditState& logical_in) {
    return exact_cycle_fidelity(vc.base, rotate_channel(ch, vc.local_unitary()), logical_in);
}

double cycle_fidelity(const VariationalCode& vc, const LocalChannel& ch, const QuditState& logical_in, FidelityMode mode,
                      int shots, Rng& rng) {
    if (mode == FidelityMode::Exact) return cycle_fidelity_exact(vc, ch, logical_in);
    if (shots < 1) throw std::invalid_argument("cycle_fidelity: shots must be >= 1");
    const LocalChannel rot = rotate_channel(ch, vc.local_unitary());
    double acc = 0.0;
    for (int s = 0; s < shots; ++s) acc += run_cycle(vc.base, rot, logical_in, rng).fidelity;
    return acc / shots;
}

std::array<double, 2> BanditState::probabilities() const {
    const double m = std::max(prefs[0], prefs[1]);
    const double e0 = std::exp(prefs[0] - m), e1 = std::exp(prefs[1] - m);
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

BanditAction sample_action(const BanditState& b, Rng& rng) {
    return rng.uniform() < b.probabilities()[0] ? BanditAction::Keep : BanditAction::Retrain;
}

void update_preferences(BanditState& b, double fidelity) {
    const auto pi = b.probabilities();
    const double adv = b.eta * (fidelity - b.baseline);
    b.prefs[0] += adv * (1.0 - pi[0]);
    b.prefs[1] -= adv * pi[1];
}

std::pair<BanditAction, BanditState> bandit_step(BanditState b, double fidelity, Rng& rng) {
    const BanditAction a = sample_action(b, rng);
    update_preferences(b, fidelity);
    return {a, b};
}

RetrainResult retrain(const VariationalCode& vc, const LocalChannel& ch, const QuditState& logical_in,
                      const NelderMeadOptions& nm, const std::vector<bool>& mask, FidelityMode mode, int shots, Rng* rng) {
    const int m = vc.parameter_count();
    if (!mask.empty() && static_cast<int>(mask.size()) != m)
        throw std::invalid_argument("retrain: mask length must equal d^2 - 1");
    if (mode == FidelityMode::Sampled && rng == nullptr) throw std::invalid_argument("retrain: sampled mode needs an rng");
    std::vector<int> free;
    for (int k = 0; k < m; ++k)
        if (mask.empty() || mask[k]) free.push_back(k);

    VariationalCode work = vc;
    auto fid = [&](const std::vector<double>& th) {
        work.theta = th;
        return cycle_fidelity(work, ch, logical_in, mode, shots, *rng);
    };
    auto fid_exact = [&](const std::vector<double>& th) {
        work.theta = th;
        return cycle_fidelity_exact(work, ch, logical_in);
    };

    RetrainResult res;
    res.theta = vc.theta;
    res.fidelity_before = mode == FidelityMode::Exact ? fid_exact(vc.theta) : fid(vc.theta);
    res.fidelity_after = res.fidelity_before;
    if (free.empty()) return res;

    std::vector<double> x0;
    for (int k : free) x0.push_back(vc.theta[k]);
    auto expand = [&](const std::vector<double>& x) {
        std::vector<double> th = vc.theta;
        for (std::size_t i = 0; i < free.size(); ++i) th[free[i]] = x[i];
        return th;
    };
    const auto r = nelder_mead(
        [&](const std::vector<double>& x) {
            const auto th = expand(x);
            return 1.0 - (mode == FidelityMode::Exact ? fid_exact(th) : fid(th));
        },
        x0, nm);
    res.evaluations = r.evaluations;
    res.budget_exhausted = r.budget_exhausted;
    // Fidelities equal up to rounding count as no improvement.
    if (1.0 - r.f <= res.fidelity_before + kRetrainImprovement) return res;
    res.theta = expand(r.x);
    res.fidelity_after = 1.0 - r.f;
    return res;
}

double AdaptiveRun::mean_fidelity() const {
    if (steps.empty()) return 0.0;
    double s = 0.0;
    for (const auto& st : steps) s += st.fidelity;
    return s / static_cast<double>(steps.size());
}

double AdaptiveRun::fraction_at_least(double threshold) const {
    if (steps.empty()) return 0.0;
    std::size_t c = 0;
    for (const auto& st : steps) c += st.fidelity >= threshold;
    return static_cast<double>(c) / static_cast<double>(steps.size());
}

namespace {

void check_options(const CodeSpec& code, const AlphaChannel& channel, const BraveOptions& opts) {
    channel.validate();
    if (channel.d != code.d) throw std::invalid_argument("brave: channel and code dimensions differ");
    if (code.detect_only) throw std::invalid_argument("brave: code " + code.name + " has no recovery table");
    if (opts.fs < 1) throw std::invalid_argument("brave: fs must be >= 1");
    if (!(opts.horizon > 0.0)) throw std::invalid_argument("brave: horizon must be > 0");
    if (opts.mode == FidelityMode::Sampled && opts.shots < 1) throw std::invalid_argument("brave: shots must be >= 1");
}

AdaptiveRun run(const CodeSpec& code, const AlphaChannel& channel, const BraveOptions& opts, std::uint64_t seed,
                bool adaptive) {
    check_options(code, channel, opts);
    Rng rng(seed);
    Rng action_rng = rng.split(1);
    Rng shot_rng = rng.split(2);
    VariationalCode vc(code);
    const QuditState in = input_state(opts.input, code.d, code.k);
    BanditState bandit;
    bandit.initial = opts.initial_prefs;
    bandit.prefs = opts.initial_prefs;
    bandit.baseline = opts.baseline;
    bandit.eta = opts.eta;

    AdaptiveRun out;
    out.steps.reserve(opts.fs);
    for (int i = 0; i < opts.fs; ++i) {
        StepRecord rec;
        rec.t = i * opts.horizon / opts.fs;
        rec.alpha = alpha_of(rec.t, channel.tau);
        const LocalChannel ch = noise_channel(channel, code.n, rec.t, opts.model);
        if (adaptive) {
            rec.p_keep = bandit.probabilities()[0];
            rec.action = sample_action(bandit, action_rng);
            if (i == 0 || rec.action == BanditAction::Retrain) {
                bandit.reset();
                const auto r = retrain(vc, ch, in, opts.nm, opts.mask, opts.mode, opts.shots, &shot_rng);
                if (r.theta != vc.theta) ++out.theta_changes;
                vc.theta = r.theta;
                rec.retrained = true;
                ++out.retrains;
            }
        } else {
            rec.p_keep = 1.0;
        }
        rec.fidelity = cycle_fidelity(vc, ch, in, opts.mode, opts.shots, shot_rng);
        if (adaptive) update_preferences(bandit, rec.fidelity);
        rec.theta = vc.theta;
        out.steps.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

AdaptiveRun brave_run(const CodeSpec& code, const AlphaChannel& channel, const BraveOptions& opts, std::uint64_t seed) {
    return run(code, channel, opts, seed, true);
}

AdaptiveRun static_run(const CodeSpec& code, const AlphaChannel& channel, const BraveOptions& opts, std::uint64_t seed) {
    return run(code, channel, opts, seed, false);
}

}  // namespace quec
