#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "quec/core.hpp"

namespace quec {

enum class GateType { H, S, CNOT, Custom };

// H_d = d^{-1/2} sum_{jk} w^{jk} |j><k|
// S_q = sum_j |j><jq mod d|            (q coprime with d)
// CNOT_d |j, m> = |j, m - j>           (matrix form sum_{jk} |j><j| (x) |k><k+j|)
struct Gate {
    GateType type = GateType::H;
    std::vector<int> qudits;  // H, S: {q}; CNOT: {control, target}; Custom: targets
    int q = 1;                // S exponent
    int pos = 0;
    std::shared_ptr<const Mat> custom;
    std::string label;        // optional name for custom gates
};

struct Circuit {
    int d = 2;
    int n = 0;
    std::vector<Gate> gates;

    Circuit() = default;
    Circuit(int d_, int n_);

    // Appends at the next free position.
    Circuit& h(int qudit);
    Circuit& s(int qudit, int q);
    Circuit& cnot(int control, int target);
    Circuit& custom(const Mat& u, std::vector<int> targets, std::string label = "U");
    // Appends with an explicit position; positions must strictly increase.
    void add(Gate g);

    int next_pos() const { return gates.empty() ? 0 : gates.back().pos + 1; }
    // Number of occupied time positions (last position + 1).
    int depth() const { return next_pos(); }
};

UnitaryOp gate_matrix(const Gate& g, int d);
// Dense unitary of the whole circuit; throws std::length_error above d^n = 4096.
UnitaryOp circuit_unitary(const Circuit& c);
QuditState apply_gate(const QuditState& s, const Gate& g);
QuditState apply_circuit(const QuditState& s, const Circuit& c);

// One-hot (plane, qudit, position) tensor. Planes: 0 = H, 1..d-1 = S_q with
// q = plane, d = CNOT control, d+1 = CNOT target.
struct CircuitTensor {
    int d = 2;
    int n = 0;
    int depth = 0;
    std::vector<std::uint8_t> data;

    int planes() const { return d + 2; }
    std::size_t index(int plane, int qudit, int pos) const;
    std::uint8_t at(int plane, int qudit, int pos) const { return data[index(plane, qudit, pos)]; }
    std::size_t size() const { return data.size(); }
};

CircuitTensor encode_tensor(const Circuit& c, int max_depth);
Circuit decode_tensor(const CircuitTensor& t);

// Line-oriented text, one gate per line "pos kind args":
//   pos H q | pos S q exponent | pos CNOT control target
//   pos U k t_1..t_k re im re im ...   (row-major dense matrix)
std::string serialize_circuit(const Circuit& c);
Circuit parse_circuit(int d, int n, const std::string& text);

// Generators of su(d): Pauli X, Y, Z for d = 2; Gell-Mann lambda_1..lambda_8
// (standard ordering) for d = 3.
std::vector<Mat> su_generators(int d);
// exp(i sum_k theta_k lambda_k)
UnitaryOp su_d_unitary(const std::vector<double>& theta, int d);
// Reduces each angle into [0, 2 pi).
std::vector<double> reduce_angles(std::vector<double> theta);

// u^alpha on the principal branch: eigenphases phi in (-pi, pi] map to alpha*phi.
UnitaryOp unitary_fractional_power(const UnitaryOp& u, double alpha);

// Clifford check helper: reconstructs a Pauli word (with phase) from a dense
// matrix, or returns false if the matrix is not a phased Pauli word.
struct PauliWord;
bool dense_to_pauli(const Mat& m, int d, int n, PauliWord* out, double tol);

}  // namespace quec
