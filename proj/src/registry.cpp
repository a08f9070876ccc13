#include "quec/registry.hpp"

#include <stdexcept>

namespace quec {

namespace {

StabilizerSet words(int d, const std::vector<std::string>& text) {
    StabilizerSet out;
    for (const auto& t : text) out.push_back(parse_compact(d, t));
    return out;
}

CodeSpec base(const std::string& name, int d, int n, int k) {
    CodeSpec c;
    c.name = name;
    c.d = d;
    c.n = n;
    c.k = k;
    c.encoder = Circuit(d, n);
    return c;
}

void finish(CodeSpec& c) {
    if (!c.detect_only) c.recovery = build_recovery_table(c.stabilizers, c.correctable);
}

CodeSpec bitflip3() {
    auto c = base("bitflip3", 2, 3, 1);
    c.encoder.cnot(0, 1).cnot(0, 2);
    c.stabilizers = words(2, {"I Z Z", "Z I Z"});
    c.correctable = single_shift_errors(2, 3, false);
    finish(c);
    return c;
}

CodeSpec phaseflip3() {
    auto c = base("phaseflip3", 2, 3, 1);
    c.encoder.cnot(0, 1).cnot(0, 2).h(0).h(1).h(2);
    c.stabilizers = words(2, {"I X X", "X I X"});
    c.correctable = single_shift_errors(2, 3, true);
    finish(c);
    return c;
}

CodeSpec detect4() {
    auto c = base("detect4", 2, 4, 2);
    c.encoder.h(3).cnot(0, 2).cnot(1, 2).cnot(3, 0).cnot(3, 1).cnot(3, 2);
    c.logical_inputs = {0, 1};
    c.stabilizers = words(2, {"Z Z Z Z", "X X X X"});
    c.correctable = all_single_qudit_errors(2, 4);
    c.detect_only = true;
    c.kl_mode = KLMode::Detection;
    return c;
}

CodeSpec five_qubit() {
    return code_from_stabilizers("five_qubit", 2, 5, words(2, {"X I Z Z Y", "Z X Y I Y", "I Y Y Z X", "Z I X X X"}),
                                 all_single_qudit_errors(2, 5));
}

CodeSpec qutrit_x() {
    auto c = base("qutrit_x", 3, 3, 1);
    c.encoder.cnot(0, 1).cnot(0, 2).cnot(0, 2);
    c.stabilizers = words(3, {"Z2 Z2 I", "Z2 Z Z2"});
    c.correctable = single_shift_errors(3, 3, false);
    finish(c);
    return c;
}

CodeSpec qutrit_z() {
    auto c = base("qutrit_z", 3, 3, 1);
    c.encoder.h(1).h(2).cnot(1, 0).cnot(2, 0);
    c.stabilizers = words(3, {"X X X", "X2 X I"});
    c.correctable = single_shift_errors(3, 3, true);
    finish(c);
    return c;
}

CodeSpec qutrit_erasure() {
    auto c = base("qutrit_erasure", 3, 3, 1);
    c.encoder.h(2).cnot(0, 1).cnot(2, 0);
    c.stabilizers = words(3, {"X2 I X", "Z Z Z"});
    c.correctable = words(3, {"I I X", "I I X2", "I I Z", "I I Z2"});
    finish(c);
    return c;
}

CodeSpec shor9() {
    auto c = base("shor9", 2, 9, 1);
    c.encoder.cnot(0, 3).cnot(0, 6).h(0).h(3).h(6);
    for (int b : {0, 3, 6}) c.encoder.cnot(b, b + 1).cnot(b, b + 2);
    c.stabilizers = words(2, {"I I I I Z Z I Z Z", "I Z Z I I I I I I", "I Z Z Z I Z Z I Z", "I I I I Z Z I I I",
                              "I Z Z I I I Z Z I", "Z I Z I I I Z Z I", "X X X X X X I I I", "X X X I I I X X X"});
    c.correctable = all_single_qudit_errors(2, 9);
    c.kl_mode = KLMode::Degenerate;
    finish(c);
    return c;
}

CodeSpec qutrit9() {
    auto c = base("qutrit9", 3, 9, 1);
    // Outer phase code on qutrits 0, 3, 6, then the shift code inside each block.
    c.encoder.h(3).h(6).cnot(3, 0).cnot(6, 0);
    for (int b : {0, 3, 6}) c.encoder.cnot(b, b + 1).cnot(b, b + 2).cnot(b, b + 2);
    c.stabilizers = words(3, {"Z2 Z2 I I I I I I I", "Z2 Z Z2 I I I I I I", "I I I Z2 Z2 I I I I",
                              "I I I Z2 Z Z2 I I I", "I I I I I I Z2 Z2 I", "I I I I I I Z2 Z Z2",
                              "X X2 X X X2 X X X2 X", "X2 X X2 X X2 X I I I"});
    c.correctable = all_single_qudit_errors(3, 9);
    c.kl_mode = KLMode::Degenerate;
    finish(c);
    return c;
}

PauliWord single(int d, int n, int pos, int a, int b) { return PauliWord::single(d, n, pos, a, b); }

// Rows of a table whose labels are 1-based subscripts (position = s - 1).
GoldenRow row1(int d, int n, const std::string& label, int s, int a, int b, Syndrome e) {
    return {label, single(d, n, s - 1, a, b), std::move(e)};
}

// Rows of a table whose labels are 0-based and count from the right (position = n - 1 - j).
GoldenRow row0(int d, int n, const std::string& label, int j, int a, int b, Syndrome e) {
    return {label, single(d, n, n - 1 - j, a, b), std::move(e)};
}

GoldenRow id_row(int d, int n, std::size_t gens) { return {"I", PauliWord::identity(d, n), Syndrome(gens, 0)}; }

}  // namespace

const std::vector<std::string>& registry_names() {
    static const std::vector<std::string> names = {"bitflip3", "phaseflip3", "detect4", "five_qubit", "qutrit_x",
                                                   "qutrit_z", "qutrit_erasure", "shor9", "qutrit9"};
    return names;
}

CodeSpec registry_code(const std::string& name) {
    if (name == "bitflip3") return bitflip3();
    if (name == "phaseflip3") return phaseflip3();
    if (name == "detect4") return detect4();
    if (name == "five_qubit") return five_qubit();
    if (name == "qutrit_x") return qutrit_x();
    if (name == "qutrit_z") return qutrit_z();
    if (name == "qutrit_erasure") return qutrit_erasure();
    if (name == "shor9") return shor9();
    if (name == "qutrit9") return qutrit9();
    throw std::out_of_range("unknown code '" + name + "'");
}

std::vector<GoldenTable> golden_tables() {
    std::vector<GoldenTable> t;
    t.push_back({"S2-X", "bitflip3",
                 {id_row(2, 3, 2), row1(2, 3, "X1", 1, 1, 0, {0, 1}), row1(2, 3, "X2", 2, 1, 0, {1, 0}),
                  row1(2, 3, "X3", 3, 1, 0, {1, 1})}});
    t.push_back({"S2-Z", "phaseflip3",
                 {id_row(2, 3, 2), row1(2, 3, "Z1", 1, 0, 1, {0, 1}), row1(2, 3, "Z2", 2, 0, 1, {1, 0}),
                  row1(2, 3, "Z3", 3, 0, 1, {1, 1})}});
    {
        GoldenTable g{"S3", "detect4", {id_row(2, 4, 2)}};
        for (int j = 0; j < 4; ++j) g.rows.push_back(row0(2, 4, "X" + std::to_string(j), j, 1, 0, {1, 0}));
        for (int j = 0; j < 4; ++j) g.rows.push_back(row0(2, 4, "Z" + std::to_string(j), j, 0, 1, {0, 1}));
        t.push_back(g);
    }
    t.push_back({"S4-X", "five_qubit",
                 {id_row(2, 5, 4), row0(2, 5, "X0", 0, 1, 0, {1, 1, 0, 1}), row0(2, 5, "X1", 1, 1, 0, {1, 0, 1, 0}),
                  row0(2, 5, "X2", 2, 1, 0, {1, 1, 1, 0}), row0(2, 5, "X3", 3, 1, 0, {0, 0, 1, 0}),
                  row0(2, 5, "X4", 4, 1, 0, {0, 1, 0, 1})}});
    t.push_back({"S4-Z", "five_qubit",
                 {row0(2, 5, "Z0", 0, 0, 1, {1, 1, 1, 1}), row0(2, 5, "Z1", 1, 0, 1, {0, 0, 0, 1}),
                  row0(2, 5, "Z2", 2, 0, 1, {1, 0, 1, 1}), row0(2, 5, "Z3", 3, 0, 1, {0, 1, 1, 0}),
                  row0(2, 5, "Z4", 4, 0, 1, {1, 0, 0, 0})}});
    t.push_back({"S5-X", "qutrit_x",
                 {id_row(3, 3, 2), row0(3, 3, "X0", 0, 1, 0, {0, 2}), row0(3, 3, "X0^2", 0, 2, 0, {0, 1}),
                  row0(3, 3, "X1", 1, 1, 0, {2, 1}), row0(3, 3, "X1^2", 1, 2, 0, {1, 2}),
                  row0(3, 3, "X2", 2, 1, 0, {2, 2}), row0(3, 3, "X2^2", 2, 2, 0, {1, 1})}});
    t.push_back({"S5-Z", "qutrit_z",
                 {id_row(3, 3, 2), row0(3, 3, "Z0", 0, 0, 1, {2, 0}), row0(3, 3, "Z0^2", 0, 0, 2, {1, 0}),
                  row0(3, 3, "Z1", 1, 0, 1, {2, 2}), row0(3, 3, "Z1^2", 1, 0, 2, {1, 1}),
                  row0(3, 3, "Z2", 2, 0, 1, {2, 1}), row0(3, 3, "Z2^2", 2, 0, 2, {1, 2})}});
    t.push_back({"S6", "qutrit_erasure",
                 {id_row(3, 3, 2), {"X", single(3, 3, 2, 1, 0), {0, 1}}, {"X^2", single(3, 3, 2, 2, 0), {0, 2}},
                  {"Z", single(3, 3, 2, 0, 1), {2, 0}}, {"Z^2", single(3, 3, 2, 0, 2), {1, 0}}}});
    return t;
}

std::vector<GoldenTable> golden_tables_for(const std::string& code) {
    std::vector<GoldenTable> out;
    for (auto& g : golden_tables())
        if (g.code == code) out.push_back(std::move(g));
    return out;
}

std::vector<PrintedGenerators> printed_generator_variants() {
    return {
        {"detect4", {"X X X I", "Z Z Z I"}},
        {"qutrit_x", {"Z2 Z2 I", "Z2 I Z2"}},
        {"qutrit_z", {"X2 I X", "I X2 X"}},
        {"qutrit9",
         {"I I I Z2 Z I Z2 Z2 Z", "I I I Z2 I Z2 Z2 Z2 Z", "I I I Z I Z Z2 Z2 Z", "I I I Z2 I Z2 I Z Z",
          "I Z2 Z Z2 I Z2 Z2 Z2 Z", "Z Z I Z2 I Z2 Z2 Z2 Z", "X2 X X I I I X2 X2 X", "I I I X X2 X2 X2 X2 X"}},
    };
}

}  // namespace quec
