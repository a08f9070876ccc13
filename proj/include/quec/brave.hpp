#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quec/codes.hpp"
#include "quec/nelder_mead.hpp"
#include "quec/noise.hpp"

namespace quec {

enum class FidelityMode { Exact, Sampled };
enum class ChannelModel {
    SingleError,  // at most one qudit hit per cycle (single_error_channel)
    Tensor,       // independent channel on every qudit (tensor_channel)
};
enum class InputState { Plus, Zero };

const char* fidelity_mode_name(FidelityMode m);
FidelityMode parse_fidelity_mode(const std::string& s);
const char* channel_model_name(ChannelModel m);
ChannelModel parse_channel_model(const std::string& s);
const char* input_state_name(InputState s);
InputState parse_input_state(const std::string& s);

// Base code with a uniform single-qudit layer W = U(theta)^{(x) n} applied
// after the encoder; stabilizers and recoveries are conjugated by W.
struct VariationalCode {
    CodeSpec base;
    std::vector<double> theta;  // d^2 - 1 angles, U = exp(i sum theta_k lambda_k)

    VariationalCode() = default;
    explicit VariationalCode(CodeSpec c);

    int parameter_count() const { return base.d * base.d - 1; }
    Mat local_unitary() const;
    Mat global_unitary() const;  // dense, d^n <= 4096
    std::vector<Mat> derived_stabilizers() const;
    std::map<Syndrome, Mat> derived_recoveries() const;
    // max_ij ||[S_i', S_j']||_max
    double max_commutator() const;
};

// Channel of the run at time t.
LocalChannel noise_channel(const AlphaChannel& ch, int n, double t, ChannelModel model);
// Every term op on targets T becomes (U^dag)^{(x)|T|} op U^{(x)|T|}.
LocalChannel rotate_channel(const LocalChannel& ch, const Mat& u);

QuditState input_state(InputState s, int d, int k);

// Encode with W o E, apply the channel, project with the derived stabilizers,
// recover with the derived recoveries and compare with the noiseless encoded
// state. Exact mode sums over every Kraus branch and syndrome outcome; sampled
// mode averages `shots` trajectories drawn from rng.
double cycle_fidelity(const VariationalCode& vc, const LocalChannel& ch, const QuditState& logical_in, FidelityMode mode,
                      int shots, Rng& rng);
double cycle_fidelity_exact(const VariationalCode& vc, const LocalChannel& ch, const QuditState& logical_in);

enum class BanditAction { Keep = 0, Retrain = 1 };

struct BanditState {
    std::array<double, 2> prefs{0.0, 0.0};
    std::array<double, 2> initial{0.0, 0.0};
    double baseline = 0.99;
    double eta = 0.1;

    std::array<double, 2> probabilities() const;  // softmax(prefs)
    void reset() { prefs = initial; }
};

BanditAction sample_action(const BanditState& b, Rng& rng);
// H0 += eta (F - Fbar)(1 - pi0),  H1 -= eta (F - Fbar) pi1,  pi = softmax(H) before the update.
void update_preferences(BanditState& b, double fidelity);
// Samples an action from the current policy, then applies the update with F.
std::pair<BanditAction, BanditState> bandit_step(BanditState b, double fidelity, Rng& rng);

struct RetrainResult {
    std::vector<double> theta;
    double fidelity_before = 0.0;
    double fidelity_after = 0.0;
    int evaluations = 0;
    bool budget_exhausted = false;
};

inline constexpr double kRetrainImprovement = 1e-12;

// Nelder-Mead on 1 - F at a frozen channel, warm-started at vc.theta. Only
// generators with mask[k] = true move (empty mask: all). theta is kept unless
// the fidelity improves by more than kRetrainImprovement.
RetrainResult retrain(const VariationalCode& vc, const LocalChannel& ch, const QuditState& logical_in,
                      const NelderMeadOptions& nm, const std::vector<bool>& mask = {}, FidelityMode mode = FidelityMode::Exact,
                      int shots = 100, Rng* rng = nullptr);

struct BraveOptions {
    double horizon = 1.0;
    int fs = 600;  // grid points t_i = i * horizon / fs, i = 0 .. fs-1
    double baseline = 0.99;
    double eta = 0.1;
    std::array<double, 2> initial_prefs{0.0, 0.0};
    NelderMeadOptions nm;
    FidelityMode mode = FidelityMode::Exact;
    int shots = 100;
    ChannelModel model = ChannelModel::SingleError;
    InputState input = InputState::Plus;
    std::vector<bool> mask;
};

struct StepRecord {
    double t = 0.0;
    double alpha = 0.0;
    BanditAction action = BanditAction::Keep;
    bool retrained = false;
    double fidelity = 0.0;
    double p_keep = 0.0;
    std::vector<double> theta;
};

struct AdaptiveRun {
    std::vector<StepRecord> steps;
    int retrains = 0;       // retrain steps, including the forced one at t = 0
    int theta_changes = 0;  // retrains that moved theta

    double mean_fidelity() const;
    double fraction_at_least(double threshold) const;
};

AdaptiveRun brave_run(const CodeSpec& code, const AlphaChannel& channel, const BraveOptions& opts, std::uint64_t seed);
// theta fixed at 0, never retrains.
AdaptiveRun static_run(const CodeSpec& code, const AlphaChannel& channel, const BraveOptions& opts, std::uint64_t seed);

}  // namespace quec
