#include <gtest/gtest.h>

#include <cmath>

#include "quec/brave.hpp"
#include "quec/gates.hpp"
#include "quec/registry.hpp"

using namespace quec;

namespace {

// Dense embedding of a local operator.
Mat embed(const Mat& op, const std::vector<int>& targets, int d, int n) {
    const auto dim = static_cast<Eigen::Index>(ipow(d, n));
    Mat m(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) m.col(c) = apply_local(Vec::Unit(dim, c), d, n, op, targets);
    return m;
}

Mat eigen_projector(const Mat& s, int d, int r) {
    const double two_pi = 2.0 * std::acos(-1.0);
    Mat acc = Mat::Zero(s.rows(), s.cols());
    Mat pw = Mat::Identity(s.rows(), s.cols());
    for (int m = 0; m < d; ++m) {
        acc += std::polar(1.0, -two_pi * m * r / d) * pw;
        pw = pw * s;
    }
    return acc / static_cast<double>(d);
}

std::vector<Syndrome> all_syndromes(int d, std::size_t len) {
    std::vector<Syndrome> out{Syndrome{}};
    for (std::size_t j = 0; j < len; ++j) {
        std::vector<Syndrome> next;
        for (const auto& s : out)
            for (int r = 0; r < d; ++r) {
                auto t = s;
                t.push_back(r);
                next.push_back(t);
            }
        out = next;
    }
    return out;
}

// Fully dense cycle: W E psi, Kraus branches, projectors of the derived
// stabilizers, derived recoveries.
double dense_cycle_fidelity(const VariationalCode& vc, const LocalChannel& ch, const QuditState& in) {
    const auto& c = vc.base;
    const Mat w = vc.global_unitary();
    const Vec psi = w * encode(c, in).amps;
    const auto stabs = vc.derived_stabilizers();
    const auto recs = vc.derived_recoveries();
    double f = 0.0;
    for (const auto& term : ch.terms) {
        const Vec v = embed(term.op, term.targets, c.d, c.n) * psi;
        for (const auto& syn : all_syndromes(c.d, stabs.size())) {
            Vec u = v;
            for (std::size_t j = 0; j < stabs.size(); ++j) u = eigen_projector(stabs[j], c.d, syn[j]) * u;
            const auto it = recs.find(syn);
            if (it != recs.end()) u = it->second * u;
            f += std::norm(psi.dot(u));
        }
    }
    return f;
}

AlphaChannel channel_for(const CodeSpec& c, double p, double tau) {
    return c.d == 2 ? AlphaChannel::qubit(p, tau) : AlphaChannel::qutrit(p / 2, p / 2, tau);
}

}  // namespace

TEST(NelderMead, MinimizesQuadratic) {
    auto f = [](const std::vector<double>& x) { return (x[0] - 1.0) * (x[0] - 1.0) + 3.0 * (x[1] + 2.0) * (x[1] + 2.0); };
    NelderMeadOptions o;
    o.budget = 2000;
    const auto r = nelder_mead(f, {0.0, 0.0}, o);
    EXPECT_NEAR(r.x[0], 1.0, 1e-4);
    EXPECT_NEAR(r.x[1], -2.0, 1e-4);
    EXPECT_FALSE(r.budget_exhausted);
}

TEST(NelderMead, Rosenbrock) {
    auto f = [](const std::vector<double>& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    NelderMeadOptions o;
    o.budget = 5000;
    o.initial_step = 0.5;
    const auto r = nelder_mead(f, {-1.2, 1.0}, o);
    EXPECT_NEAR(r.x[0], 1.0, 1e-3);
    EXPECT_NEAR(r.x[1], 1.0, 1e-3);
}

TEST(NelderMead, BudgetIsRespected) {
    auto f = [](const std::vector<double>& x) { return std::cos(x[0]) + x[1] * x[1]; };
    NelderMeadOptions o;
    o.budget = 7;
    const auto r = nelder_mead(f, {0.3, 0.4}, o);
    EXPECT_LE(r.evaluations, 7);
    EXPECT_TRUE(r.budget_exhausted);
    EXPECT_LE(r.f, f({0.3, 0.4}));
}

TEST(NelderMead, FlatFunctionKeepsStart) {
    const auto r = nelder_mead([](const std::vector<double>&) { return 0.0; }, {0.7, -0.1, 2.0});
    EXPECT_EQ(r.x, (std::vector<double>{0.7, -0.1, 2.0}));
}

TEST(NelderMead, RejectsBadInput) {
    NelderMeadOptions o;
    o.budget = 0;
    EXPECT_THROW(nelder_mead([](const std::vector<double>&) { return 0.0; }, {0.0}, o), std::invalid_argument);
    EXPECT_THROW(nelder_mead([](const std::vector<double>&) { return 0.0; }, {}), std::invalid_argument);
}

TEST(VariationalCode, ZeroThetaMatchesBase) {
    Rng rng(11);
    for (const auto& name : {"bitflip3", "phaseflip3", "qutrit_x", "five_qubit"}) {
        const auto c = registry_code(name);
        VariationalCode vc(c);
        EXPECT_LT((vc.local_unitary() - Mat::Identity(c.d, c.d)).norm(), 1e-15);
        const auto errs = all_single_qudit_errors(c.d, c.n);
        for (int i = 0; i < 100; ++i) {
            const auto in = random_state(c.d, c.k, rng);
            const auto& e = errs[rng.below(errs.size())];
            LocalChannel ch;
            ch.d = c.d;
            ch.n = c.n;
            std::vector<int> all(c.n);
            for (int q = 0; q < c.n; ++q) all[q] = q;
            ch.terms.push_back({dense(e).mat, all});
            EXPECT_NEAR(cycle_fidelity_exact(vc, ch, in), exact_cycle_fidelity(c, ch, in), 1e-10) << name;
        }
    }
}

TEST(VariationalCode, DerivedStabilizersCommute) {
    Rng rng(5);
    for (const auto& name : {"bitflip3", "qutrit_x", "qutrit_z"}) {
        VariationalCode vc(registry_code(name));
        for (int i = 0; i < 5; ++i) {
            for (auto& t : vc.theta) t = 2.0 * rng.uniform() - 1.0;
            EXPECT_LT(vc.max_commutator(), 1e-9) << name;
        }
    }
}

TEST(VariationalCode, ConjugationCovariance) {
    Rng rng(9);
    for (const auto& name : {"bitflip3", "phaseflip3", "qutrit_x", "qutrit_z"}) {
        const auto c = registry_code(name);
        VariationalCode vc(c);
        for (auto& t : vc.theta) t = 2.0 * rng.uniform() - 1.0;
        const Mat w = vc.global_unitary();
        const auto stabs = vc.derived_stabilizers();
        const Vec psi = w * encode(c, random_state(c.d, c.k, rng)).amps;
        for (const auto& [syn, rec] : c.recovery) {
            (void)rec;
            for (const auto& e : c.correctable) {
                if (syndrome_of(e, c.stabilizers) != syn) continue;
                const Vec v = w * dense(e).mat * w.adjoint() * psi;
                for (std::size_t j = 0; j < stabs.size(); ++j)
                    EXPECT_NEAR((eigen_projector(stabs[j], c.d, syn[j]) * v).norm(), 1.0, 1e-9) << name;
            }
        }
    }
}

TEST(VariationalCode, RotatedFrameMatchesDenseOracle) {
    Rng rng(21);
    for (const auto& name : {"bitflip3", "qutrit_x"}) {
        const auto c = registry_code(name);
        VariationalCode vc(c);
        for (int i = 0; i < 4; ++i) {
            for (auto& t : vc.theta) t = 2.0 * rng.uniform() - 1.0;
            const double t = rng.uniform();
            const auto in = random_state(c.d, c.k, rng);
            for (auto model : {ChannelModel::SingleError, ChannelModel::Tensor}) {
                const auto ch = noise_channel(channel_for(c, 0.1, 0.3), c.n, t, model);
                EXPECT_NEAR(cycle_fidelity_exact(vc, ch, in), dense_cycle_fidelity(vc, ch, in), 1e-10) << name;
            }
        }
    }
}

TEST(CycleFidelity, IdentityChannelIsOne) {
    const auto c = registry_code("bitflip3");
    VariationalCode vc(c);
    Rng rng(1);
    const auto ch = noise_channel(AlphaChannel::qubit(0.0, 0.3), 3, 0.1, ChannelModel::SingleError);
    EXPECT_NEAR(cycle_fidelity(vc, ch, input_state(InputState::Plus, 2, 1), FidelityMode::Exact, 0, rng), 1.0, 1e-12);
    EXPECT_NEAR(cycle_fidelity(vc, ch, input_state(InputState::Plus, 2, 1), FidelityMode::Sampled, 20, rng), 1.0, 1e-12);
}

TEST(CycleFidelity, BitFlipSingleAndTensorModels) {
    const auto c = registry_code("bitflip3");
    VariationalCode vc(c);
    const auto zero = input_state(InputState::Zero, 2, 1);
    for (double p : {0.01, 0.05, 0.1, 0.3}) {
        const auto ch = AlphaChannel::qubit(p, 0.3);
        EXPECT_NEAR(cycle_fidelity_exact(vc, noise_channel(ch, 3, 0.0, ChannelModel::SingleError), zero), 1.0, 1e-12);
        // Majority vote fails on two or three flips.
        const double oracle = std::pow(1 - p, 3) + 3 * p * std::pow(1 - p, 2);
        EXPECT_NEAR(cycle_fidelity_exact(vc, noise_channel(ch, 3, 0.0, ChannelModel::Tensor), zero), oracle, 1e-12);
    }
}

TEST(CycleFidelity, SampledConvergesToExact) {
    const auto c = registry_code("bitflip3");
    VariationalCode vc(c);
    vc.theta = {0.2, -0.1, 0.3};
    const auto ch = noise_channel(AlphaChannel::qubit(0.1, 0.3), 3, 0.07, ChannelModel::SingleError);
    const auto in = input_state(InputState::Plus, 2, 1);
    Rng rng(3);
    const double exact = cycle_fidelity_exact(vc, ch, in);
    const double sampled = cycle_fidelity(vc, ch, in, FidelityMode::Sampled, 4000, rng);
    EXPECT_NEAR(sampled, exact, 0.01);
}

TEST(CycleFidelity, HadamardLimit) {
    const auto c = registry_code("bitflip3");
    for (double p : {0.05, 0.1}) {
        const auto ch = AlphaChannel::qubit(p, 0.3);
        const auto in = input_state(InputState::Plus, 2, 1);
        VariationalCode vc(c);
        const double base = cycle_fidelity_exact(vc, single_error_channel(kraus_at_alpha(ch, 0.0), 3), in);
        // U = exp(i pi/2 (X + Z)/sqrt 2) = i H
        const double a = std::acos(-1.0) / 2 / std::sqrt(2.0);
        vc.theta = {a, 0.0, a};
        const auto at1 = single_error_channel(kraus_at_alpha(ch, 1.0), 3);
        EXPECT_NEAR(cycle_fidelity_exact(vc, at1, in), base, 1e-9);
    }
}

TEST(CycleFidelity, ParsersRoundTrip) {
    for (auto m : {FidelityMode::Exact, FidelityMode::Sampled}) EXPECT_EQ(parse_fidelity_mode(fidelity_mode_name(m)), m);
    for (auto m : {ChannelModel::SingleError, ChannelModel::Tensor}) EXPECT_EQ(parse_channel_model(channel_model_name(m)), m);
    for (auto s : {InputState::Plus, InputState::Zero}) EXPECT_EQ(parse_input_state(input_state_name(s)), s);
    EXPECT_THROW(parse_fidelity_mode("fast"), std::invalid_argument);
}

TEST(Bandit, ProbabilitiesSumToOne) {
    BanditState b;
    for (auto h : {std::array<double, 2>{0, 0}, {3, -1}, {-700, 700}, {1e3, 1e3}}) {
        b.prefs = h;
        const auto pi = b.probabilities();
        EXPECT_NEAR(pi[0] + pi[1], 1.0, 1e-15);
        EXPECT_TRUE(std::isfinite(pi[0]));
    }
}

TEST(Bandit, ZeroAdvantageLeavesPrefs) {
    BanditState b;
    b.prefs = {0.3, -0.2};
    update_preferences(b, b.baseline);
    EXPECT_EQ(b.prefs, (std::array<double, 2>{0.3, -0.2}));
}

TEST(Bandit, SingleStepClosedForm) {
    BanditState b;
    b.prefs = {0.4, -0.1};
    b.eta = 0.5;
    b.baseline = 0.9;
    const double pi0 = 1.0 / (1.0 + std::exp(-0.5));
    const double pi1 = 1.0 - pi0;
    update_preferences(b, 0.7);
    EXPECT_NEAR(b.prefs[0], 0.4 + 0.5 * (0.7 - 0.9) * (1 - pi0), 1e-15);
    EXPECT_NEAR(b.prefs[1], -0.1 - 0.5 * (0.7 - 0.9) * pi1, 1e-15);
}

TEST(Bandit, HighRewardFavoursKeep) {
    BanditState b;
    double last = b.probabilities()[0];
    for (int i = 0; i < 200; ++i) {
        update_preferences(b, 1.0);
        const double now = b.probabilities()[0];
        EXPECT_GT(now, last);
        last = now;
    }
    BanditState c;
    for (int i = 0; i < 200; ++i) update_preferences(c, 0.5);
    EXPECT_GT(c.probabilities()[1], 0.5);
}

TEST(Bandit, StepSamplesThenUpdates) {
    BanditState b;
    b.prefs = {1.0, 0.0};
    BanditState expect = b;
    update_preferences(expect, 0.5);
    Rng rng(2);
    int keeps = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        const auto [a, nb] = bandit_step(b, 0.5, rng);
        keeps += a == BanditAction::Keep;
        ASSERT_EQ(nb.prefs, expect.prefs);
    }
    EXPECT_NEAR(static_cast<double>(keeps) / trials, b.probabilities()[0], 0.01);
    b.reset();
    EXPECT_EQ(b.prefs, b.initial);
}

TEST(Retrain, IdentityChannelKeepsTheta) {
    VariationalCode vc(registry_code("bitflip3"));
    vc.theta = {0.1, 0.2, -0.3};
    const auto ch = noise_channel(AlphaChannel::qubit(0.0, 0.3), 3, 0.0, ChannelModel::SingleError);
    const auto r = retrain(vc, ch, input_state(InputState::Plus, 2, 1), {});
    EXPECT_EQ(r.theta, vc.theta);
    EXPECT_NEAR(r.fidelity_after, 1.0, 1e-12);
}

TEST(Retrain, RecoversFromPhaseNoiseAndDriftsBack) {
    const auto c = registry_code("bitflip3");
    const auto in = input_state(InputState::Plus, 2, 1);
    for (double p : {0.01, 0.05, 0.1}) {
        const auto ch = AlphaChannel::qubit(p, 0.3);
        VariationalCode vc(c);
        const auto r1 = retrain(vc, single_error_channel(kraus_at_alpha(ch, 1.0), 3), in, {});
        EXPECT_GE(r1.fidelity_after, 0.99);
        EXPECT_GE(r1.fidelity_after, r1.fidelity_before);
        vc.theta = r1.theta;
        const auto r0 = retrain(vc, single_error_channel(kraus_at_alpha(ch, 0.0), 3), in, {});
        EXPECT_GE(r0.fidelity_after, 0.99);
    }
}

TEST(Retrain, GridSearchOracleAgrees) {
    // Coarse scan over (theta_x, theta_z) finds the same optimum level.
    const auto c = registry_code("bitflip3");
    const auto in = input_state(InputState::Plus, 2, 1);
    const auto ch = single_error_channel(kraus_at_alpha(AlphaChannel::qubit(0.1, 0.3), 1.0), 3);
    VariationalCode vc(c);
    double best = 0.0;
    const double pi = std::acos(-1.0);
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
            vc.theta = {pi * i / 40.0, 0.0, pi * j / 40.0};
            best = std::max(best, cycle_fidelity_exact(vc, ch, in));
        }
    vc.theta.assign(3, 0.0);
    const auto r = retrain(vc, ch, in, {});
    EXPECT_GE(best, 0.99);
    EXPECT_GE(r.fidelity_after, best - 1e-6);
}

TEST(Retrain, MaskFreezesGenerators) {
    VariationalCode vc(registry_code("qutrit_x"));
    const auto ch = single_error_channel(kraus_at_alpha(AlphaChannel::qutrit(0.05, 0.05, 0.3), 1.0), 3);
    std::vector<bool> mask(8, false);
    mask[0] = mask[3] = true;
    NelderMeadOptions nm;
    nm.budget = 40;
    const auto r = retrain(vc, ch, input_state(InputState::Plus, 3, 1), nm, mask);
    for (int k = 0; k < 8; ++k)
        if (!mask[k]) EXPECT_EQ(r.theta[k], 0.0);
    EXPECT_THROW(retrain(vc, ch, input_state(InputState::Plus, 3, 1), nm, std::vector<bool>(3, true)),
                 std::invalid_argument);
}

TEST(BraveRun, NoiselessRun) {
    BraveOptions o;
    o.fs = 60;
    const auto run = brave_run(registry_code("bitflip3"), AlphaChannel::qubit(0.0, 0.3), o, 4);
    ASSERT_EQ(run.steps.size(), 60u);
    for (const auto& s : run.steps) EXPECT_NEAR(s.fidelity, 1.0, 1e-12);
    EXPECT_EQ(run.theta_changes, 0);
    EXPECT_TRUE(run.steps[0].retrained);
    const auto st = static_run(registry_code("bitflip3"), AlphaChannel::qubit(0.0, 0.3), o, 4);
    for (const auto& s : st.steps) EXPECT_NEAR(s.fidelity, 1.0, 1e-12);
}

TEST(BraveRun, ThetaChangesOnlyAtRetrainSteps) {
    BraveOptions o;
    o.fs = 120;
    const auto run = brave_run(registry_code("bitflip3"), AlphaChannel::qubit(0.1, 0.3), o, 8);
    int retrains = 0;
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
        const auto& s = run.steps[i];
        retrains += s.retrained;
        EXPECT_NEAR(s.t, i / 120.0, 1e-15);
        EXPECT_NEAR(s.alpha, alpha_of(s.t, 0.3), 1e-15);
        if (i > 0 && !s.retrained) EXPECT_EQ(s.theta, run.steps[i - 1].theta);
    }
    EXPECT_EQ(retrains, run.retrains);
    EXPECT_GT(run.retrains, 1);
}

TEST(BraveRun, AdaptiveBeatsStatic) {
    BraveOptions o;
    const auto code = registry_code("bitflip3");
    const auto ch = AlphaChannel::qubit(0.2, 0.5);
    const auto a = brave_run(code, ch, o, 1);
    const auto s = static_run(code, ch, o, 1);
    EXPECT_GT(a.mean_fidelity(), s.mean_fidelity());
    // Static degrades on the alpha ~ 1 segment.
    double a_seg = 0, s_seg = 0;
    int n = 0;
    for (std::size_t i = 0; i < a.steps.size(); ++i)
        if (a.steps[i].alpha > 0.9) {
            a_seg += a.steps[i].fidelity;
            s_seg += s.steps[i].fidelity;
            ++n;
        }
    ASSERT_GT(n, 0);
    EXPECT_GT(a_seg / n, s_seg / n);
}

TEST(BraveRun, ThetaMovesOutwardWithAlpha) {
    BraveOptions o;
    o.fs = 300;
    const auto run = brave_run(registry_code("bitflip3"), AlphaChannel::qubit(0.1, 1.0), o, 3);
    auto norm = [](const std::vector<double>& th) {
        double s = 0;
        for (double x : th) s += x * x;
        return std::sqrt(s);
    };
    double low = 0, high = 0;
    int nl = 0, nh = 0;
    for (const auto& s : run.steps) {
        if (s.t > 0.5) break;  // rising half of the period
        if (s.alpha < 0.1) low += norm(s.theta), ++nl;
        if (s.alpha > 0.9) high += norm(s.theta), ++nh;
    }
    ASSERT_GT(nl, 0);
    ASSERT_GT(nh, 0);
    EXPECT_GT(high / nh, low / nl);
}

TEST(BraveRun, Deterministic) {
    BraveOptions o;
    o.fs = 50;
    o.mode = FidelityMode::Sampled;
    o.shots = 10;
    const auto code = registry_code("bitflip3");
    const auto a = brave_run(code, AlphaChannel::qubit(0.1, 0.3), o, 77);
    const auto b = brave_run(code, AlphaChannel::qubit(0.1, 0.3), o, 77);
    ASSERT_EQ(a.steps.size(), b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        EXPECT_EQ(a.steps[i].fidelity, b.steps[i].fidelity);
        EXPECT_EQ(a.steps[i].theta, b.steps[i].theta);
    }
}

TEST(BraveRun, RejectsBadOptions) {
    BraveOptions o;
    o.fs = 0;
    EXPECT_THROW(brave_run(registry_code("bitflip3"), AlphaChannel::qubit(0.1, 0.3), o, 1), std::invalid_argument);
    o.fs = 10;
    EXPECT_THROW(brave_run(registry_code("detect4"), AlphaChannel::qubit(0.1, 0.3), o, 1), std::invalid_argument);
    EXPECT_THROW(brave_run(registry_code("qutrit_x"), AlphaChannel::qubit(0.1, 0.3), o, 1), std::invalid_argument);
}
