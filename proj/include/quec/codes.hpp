#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quec/core.hpp"
#include "quec/gates.hpp"
#include "quec/noise.hpp"
#include "quec/pauli.hpp"

namespace quec {

enum class KLMode {
    Strict,      // KL1, KL2 and KL3 all zero
    Detection,   // KL1 and KL2 only
    Degenerate,  // <i|Ea^dag Eb|j> = C_ab delta_ij with C_ab independent of i
};

const char* kl_mode_name(KLMode m);
KLMode parse_kl_mode(const std::string& s);

struct CodeSpec {
    std::string name;
    int d = 2;
    int n = 0;
    int k = 0;
    Circuit encoder;
    // Encoder input positions that carry the logical digits (default 0..k-1).
    std::vector<int> logical_inputs;
    StabilizerSet stabilizers;
    // Syndrome -> operator applied to undo the error.
    std::map<Syndrome, PauliWord> recovery;
    std::vector<PauliWord> correctable;
    bool detect_only = false;
    KLMode kl_mode = KLMode::Strict;

    std::vector<int> inputs() const;
    std::size_t logical_dim() const;
};

// |j>_L = U (|j> on the logical inputs, |0> elsewhere), j = 0..d^k-1, with
// the first logical input the most significant digit of j.
std::vector<QuditState> logical_basis(const CodeSpec& code);
// Encodes a k-qudit logical state.
QuditState encode(const CodeSpec& code, const QuditState& logical);

struct KLReport {
    int kl1_pass = 0, kl1_fail = 0;
    int kl2_pass = 0, kl2_fail = 0;
    int kl3_pass = 0, kl3_fail = 0;
    double max_violation = 0.0;
    KLMode mode = KLMode::Strict;

    int total() const { return kl1_pass + kl1_fail + kl2_pass + kl2_fail + kl3_pass + kl3_fail; }
    int violations() const { return kl1_fail + kl2_fail + kl3_fail; }
    bool satisfied() const { return violations() == 0; }
};

inline constexpr double kKLTolerance = 1e-8;

// Instance counts (K = basis size, m = error count):
//   strict:     KL1 = K(K-1)/2, KL2 = m K^2, KL3 = m(m-1)/2 K^2
//   detection:  KL1, KL2 as above
//   degenerate: KL1 as above; KL2 counts the m+1 diagonal pairs (a = b, identity
//               included), KL3 the off-diagonal pairs a < b, each over K^2 entries
KLReport check_kl(const std::vector<Vec>& basis, int d, int n, const std::vector<PauliWord>& errors, KLMode mode,
                  double tol = kKLTolerance);
KLReport check_kl(const CodeSpec& code, const std::vector<PauliWord>& errors, KLMode mode, double tol = kKLTolerance);
std::string render_kl(const KLReport& r);

// Splits v into its components P_r v for every syndrome r with nonzero weight.
// P_r = prod_j (1/d) sum_m w^{-r_j m} S_j^m. Stabilizers must satisfy S^d = I.
std::vector<std::pair<Syndrome, Vec>> syndrome_components(const Vec& v, const StabilizerSet& stabs, double min_norm2 = 1e-24);
Vec project_syndrome(const Vec& v, const StabilizerSet& stabs, const Syndrome& s);

// Projective measurement of every generator; returns the residues and the
// renormalized post-measurement state.
std::pair<Syndrome, QuditState> measure_syndrome(const QuditState& state, const CodeSpec& code, Rng& rng);

// Greedy recovery construction: the first error with a given syndrome defines
// the entry; later errors with the same syndrome must be equivalent modulo the
// stabilizer group, otherwise std::invalid_argument (errors not correctable).
std::map<Syndrome, PauliWord> build_recovery_table(const StabilizerSet& stabs, const std::vector<PauliWord>& errors);

struct CycleResult {
    double fidelity = 0.0;
    Syndrome syndrome;
    std::size_t branch = 0;
};

// Encode -> error -> measure -> recover; fidelity is the overlap with the
// noiseless encoded state. A nonzero syndrome on a detect-only code throws
// std::out_of_range; an untabulated syndrome otherwise leaves the state as is.
CycleResult run_cycle(const CodeSpec& code, const PauliWord& error, const QuditState& logical_in, Rng& rng);
CycleResult run_cycle(const CodeSpec& code, const LocalChannel& channel, const QuditState& logical_in, Rng& rng);
// Same pipeline averaged over every channel branch and syndrome outcome.
double exact_cycle_fidelity(const CodeSpec& code, const LocalChannel& channel, const QuditState& logical_in);

std::vector<std::pair<PauliWord, double>> single_error_ensemble(const CodeSpec& code, double p);

// All single-qudit non-identity Paulis X^a Z^b (d^2 - 1 per qudit), qudit-major.
std::vector<PauliWord> all_single_qudit_errors(int d, int n);
// X^a on every qudit for a = 1..d-1 (or Z^b when z = true).
std::vector<PauliWord> single_shift_errors(int d, int n, bool z);

// Logical operators found by enumeration over Pauli words: xbar|j_L> = |j+1_L>,
// zbar|j_L> = w^j |j_L> (phases fixed so these hold exactly). Requires k = 1.
struct LogicalOps {
    PauliWord xbar;
    PauliWord zbar;
};
LogicalOps find_logical_ops(const CodeSpec& code);

// Encoder realised as one dense unitary whose first d columns (logical input at
// position 0) span the joint +1 eigenspace of stabs, with |j_L> = xbar^j |0_L>.
// Requires k = 1 and d^n <= 4096.
CodeSpec code_from_stabilizers(const std::string& name, int d, int n, const StabilizerSet& stabs,
                               const std::vector<PauliWord>& correctable);

// outer o inner: every outer physical qudit re-encoded by the inner code.
// The declared error set defaults to every single-qudit Pauli; the recovery
// table is built from it (std::invalid_argument if it is not correctable).
CodeSpec concatenate(const CodeSpec& outer, const CodeSpec& inner,
                     std::optional<std::vector<PauliWord>> correctable = std::nullopt);

// Structural checks: pairwise commuting generators, S^d = I, every generator
// fixes every logical basis state, orthonormal basis, recovery consistency.
// Returns an empty list when the code is valid.
std::vector<std::string> validate_code(const CodeSpec& code);

// Random normalized state on `n` qudits (complex Gaussian amplitudes).
QuditState random_state(int d, int n, Rng& rng);

}  // namespace quec
