#pragma once

#include <string>
#include <vector>

#include "quec/core.hpp"

namespace quec {

// Generalized Pauli operators on C^d:
//   X|k> = |k+1 mod d>,  Z|k> = w^k |k>,  w = exp(2 pi i / d),
// so that Z X = w X Z.
//
// A PauliWord denotes  phase * (x) X^{x_m} Z^{z_m}  (X left of Z on every qudit).
// The phase unit is i for d = 2 (exponent mod 4) and w for odd d (exponent mod d).
struct PauliWord {
    int d = 2;
    std::vector<int> x;
    std::vector<int> z;
    int phase = 0;

    PauliWord() = default;
    PauliWord(int d_, std::vector<int> x_, std::vector<int> z_, int phase_ = 0);

    static PauliWord identity(int d, int n);
    // X^a Z^b on qudit q of an n-qudit register.
    static PauliWord single(int d, int n, int q, int a, int b);

    int n() const { return static_cast<int>(x.size()); }
    int phase_modulus() const { return d == 2 ? 4 : d; }
    bool is_identity() const;  // ignores phase
    int weight() const;
    bool same_operator(const PauliWord& o) const { return d == o.d && x == o.x && z == o.z; }

    bool operator==(const PauliWord& o) const { return d == o.d && x == o.x && z == o.z && phase == o.phase; }
    bool operator<(const PauliWord& o) const;
};

// Y = i X Z for d = 2 (the standard Pauli Y). For odd d, Y = X Z (phase constant 0).
PauliWord pauli_y(int d, int n, int q);

// Phase factor of `phase` units.
cplx phase_value(int d, int phase);

using StabilizerSet = std::vector<PauliWord>;

PauliWord mul(const PauliWord& a, const PauliWord& b);
PauliWord power(const PauliWord& a, int k);
// Inverse (equal to the adjoint since words are unitary).
PauliWord inverse(const PauliWord& a);
bool commutes(const PauliWord& a, const PauliWord& b);
// Residue r with a b = w^r b a.
int commutation_residue(const PauliWord& a, const PauliWord& b);

UnitaryOp dense(const PauliWord& a);
Mat dense_single(int d, int a, int b);  // X^a Z^b

// Direct action on a state vector (no dense matrix).
Vec apply_pauli(const PauliWord& w, const Vec& v);
QuditState apply_pauli(const PauliWord& w, const QuditState& s);

using Syndrome = std::vector<int>;
// Component j is r with S_j E = w^r E S_j.
Syndrome syndrome_of(const PauliWord& error, const StabilizerSet& stabs);

inline constexpr int kMaxEnumeratedGenerators = 8;
// True iff word equals (up to phase) a product of generator powers.
// Brute enumeration; throws std::length_error above kMaxEnumeratedGenerators.
bool in_group(const PauliWord& word, const StabilizerSet& stabs);
// Same enumeration, returning the phase-exact group element with the same
// operator part if one exists.
bool group_element(const PauliWord& word, const StabilizerSet& stabs, PauliWord* found);

bool pairwise_commuting(const StabilizerSet& stabs);
bool independent(const StabilizerSet& stabs);
// Group equality (ignoring phases) of two generating sets.
bool same_group(const StabilizerSet& a, const StabilizerSet& b);

// Text form:  "w^k X^a1Z^b1 (x) X^a2Z^b2 ..." rendered with the symbols
// "ω" (odd d) or "i" (d = 2) and "⊗". The parser also accepts "w" and "*".
std::string render(const PauliWord& w);
PauliWord parse_word(int d, const std::string& text);

// Compact notation used in fixtures and tests: whitespace separated per-qudit
// tokens built from I, X, Z, Y with optional exponents, e.g. "I Z2 X Y XZ2".
PauliWord parse_compact(int d, const std::string& text);
std::string render_compact(const PauliWord& w);

std::string render_syndrome(const Syndrome& s);

}  // namespace quec
