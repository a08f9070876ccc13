#pragma once

#include <utility>
#include <vector>

#include "quec/core.hpp"
#include "quec/pauli.hpp"

namespace quec {

// sin^2(pi t / tau)
double alpha_of(double t, double tau);

// Time-dependent single-qudit channel:
//   d = 2: E1 = sqrt(1-p) I,        E2 = sqrt(p)  (Z X^dag)^alpha X
//   d = 3: E1 = sqrt(1-p1-p2) I,    E2 = sqrt(p1) (Z X^dag)^alpha X,
//                                   E3 = sqrt(p2) (Z^2 X)^alpha X^2
// Fractional powers use the principal branch.
struct AlphaChannel {
    int d = 2;
    double p1 = 0.0;  // p for d = 2
    double p2 = 0.0;  // unused for d = 2
    double tau = 0.3;

    static AlphaChannel qubit(double p, double tau);
    static AlphaChannel qutrit(double p1, double p2, double tau);

    void validate() const;
    // Branch probabilities, excluding the identity branch.
    std::vector<double> branch_probabilities() const;
};

// Unitary part of error branch b (0-based over the non-identity branches).
Mat branch_unitary(const AlphaChannel& ch, int branch, double alpha);
KrausChannel kraus_at(const AlphaChannel& ch, double t);
KrausChannel kraus_at_alpha(const AlphaChannel& ch, double alpha);

// Static single-qudit Pauli channel: rho -> (1 - sum p) rho + sum p_O O rho O^dag.
struct PauliChannelSpec {
    int d = 2;
    std::vector<std::pair<PauliWord, double>> errors;  // single-qudit words (n = 1)

    void validate() const;
    KrausChannel channel() const;
};

// Product channel over n qudits; throws std::length_error when the operator
// count exceeds 2 * 4^n or the dense dimension exceeds the operator budget.
KrausChannel tensor_channel(const KrausChannel& single, int n);

// Channel made of operators that act on a few qudits of a larger register.
struct LocalKrausTerm {
    Mat op;
    std::vector<int> targets;
};

struct LocalChannel {
    int d = 2;
    int n = 0;
    std::vector<LocalKrausTerm> terms;

    double completeness_error() const;
};

// At most one error per cycle:  K0 = sqrt(1 - n * sum_b p_b) I,
// K_{q,b} = E_b on qudit q for every non-identity branch of the single-qudit
// channel. Requires n * sum_b p_b <= 1.
LocalChannel single_error_channel(const KrausChannel& single, int n);

Vec apply_term(const LocalChannel& ch, std::size_t k, const Vec& v);
DensityOp apply_channel(const DensityOp& rho, const LocalChannel& ch);
std::pair<QuditState, std::size_t> sample_trajectory(const QuditState& state, const LocalChannel& ch, Rng& rng);

// Declared-error ensemble: identity plus each correctable error with weight p;
// identity gets the remainder 1 - p * |errors|.
std::vector<std::pair<PauliWord, double>> single_error_ensemble(const std::vector<PauliWord>& correctable, int d, int n,
                                                                double p);

// Reporting aid only: T = -1 / log(1 - p).
double coherence_time(double p);

}  // namespace quec
