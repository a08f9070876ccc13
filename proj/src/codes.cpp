#include "quec/codes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace quec {

namespace {

bool all_zero(const Syndrome& s) {
    return std::all_of(s.begin(), s.end(), [](int r) { return r == 0; });
}

cplx omega_pow(int d, long long e) {
    const long long m = ((e % d) + d) % d;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / d);
}

// Adjusts the phase of w so that w^d = I exactly; throws if impossible.
PauliWord normalize_order(PauliWord w) {
    const int mod = w.phase_modulus();
    const int t = power(w, w.d).phase;
    for (int c = 0; c < mod; ++c)
        if ((w.d * c + t) % mod == 0) {
            w.phase = (w.phase + c) % mod;
            return w;
        }
    throw std::invalid_argument("no phase makes the word of order d");
}

// Finds t with phase_value(d, t) == c, or -1.
int phase_units_of(int d, cplx c) {
    const int mod = d == 2 ? 4 : d;
    for (int t = 0; t < mod; ++t)
        if (std::abs(phase_value(d, t) - c) < 1e-9) return t;
    return -1;
}

void check_same_space(const PauliWord& w, int d, int n, const char* what) {
    if (w.d != d || w.n() != n) throw std::invalid_argument(std::string(what) + ": word does not match code dimensions");
}

// Every phase-0 word on n qudits, in odometer order over (x, z).
template <typename F>
void for_each_word(int d, int n, F&& f) {
    const std::size_t total = ipow(static_cast<std::size_t>(d), 2 * static_cast<std::size_t>(n));
    if (total > (1u << 20)) throw std::length_error("word enumeration exceeds budget");
    PauliWord w = PauliWord::identity(d, n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        for (int q = n - 1; q >= 0; --q) {
            w.z[q] = static_cast<int>(r % d);
            r /= d;
            w.x[q] = static_cast<int>(r % d);
            r /= d;
        }
        if (!f(w)) return;
    }
}

PauliWord embed_block(const PauliWord& w, int n_total, int offset) {
    PauliWord out = PauliWord::identity(w.d, n_total);
    for (int q = 0; q < w.n(); ++q) {
        out.x[offset + q] = w.x[q];
        out.z[offset + q] = w.z[q];
    }
    out.phase = w.phase;
    return out;
}

Gate remap(Gate g, const std::vector<int>& map, int pos) {
    for (auto& q : g.qudits) q = map.at(q);
    g.pos = pos;
    return g;
}

}  // namespace

const char* kl_mode_name(KLMode m) {
    switch (m) {
        case KLMode::Strict: return "strict";
        case KLMode::Detection: return "detection";
        case KLMode::Degenerate: return "degenerate";
    }
    return "?";
}

KLMode parse_kl_mode(const std::string& s) {
    if (s == "strict") return KLMode::Strict;
    if (s == "detection") return KLMode::Detection;
    if (s == "degenerate") return KLMode::Degenerate;
    throw std::invalid_argument("unknown KL mode '" + s + "'");
}

std::vector<int> CodeSpec::inputs() const {
    if (!logical_inputs.empty()) return logical_inputs;
    std::vector<int> v(k);
    for (int i = 0; i < k; ++i) v[i] = i;
    return v;
}

std::size_t CodeSpec::logical_dim() const { return ipow(static_cast<std::size_t>(d), static_cast<std::size_t>(k)); }

std::vector<QuditState> logical_basis(const CodeSpec& code) {
    const auto in = code.inputs();
    if (static_cast<int>(in.size()) != code.k) throw std::invalid_argument("logical_basis: input count differs from k");
    std::vector<QuditState> out;
    const std::size_t K = code.logical_dim();
    for (std::size_t j = 0; j < K; ++j) {
        std::size_t idx = 0, r = j;
        for (int t = code.k - 1; t >= 0; --t) {
            idx += (r % code.d) * ipow(code.d, code.n - 1 - in[t]);
            r /= code.d;
        }
        out.push_back(apply_circuit(QuditState::basis(code.d, code.n, idx), code.encoder));
    }
    return out;
}

QuditState encode(const CodeSpec& code, const QuditState& logical) {
    if (logical.d != code.d || logical.n != code.k) throw std::invalid_argument("encode: logical state has wrong shape");
    const auto in = code.inputs();
    // Place the logical amplitudes on the input qudits and run the encoder once.
    Vec v = Vec::Zero(static_cast<Eigen::Index>(checked_dim(code.d, code.n)));
    for (std::size_t j = 0; j < code.logical_dim(); ++j) {
        std::size_t idx = 0, r = j;
        for (int t = code.k - 1; t >= 0; --t) {
            idx += (r % code.d) * ipow(code.d, code.n - 1 - in[t]);
            r /= code.d;
        }
        v(static_cast<Eigen::Index>(idx)) = logical.amps(static_cast<Eigen::Index>(j));
    }
    return apply_circuit(QuditState(code.d, code.n, v), code.encoder);
}

KLReport check_kl(const std::vector<Vec>& basis, int d, int n, const std::vector<PauliWord>& errors, KLMode mode,
                  double tol) {
    for (const auto& e : errors) check_same_space(e, d, n, "check_kl");
    KLReport rep;
    rep.mode = mode;
    const std::size_t K = basis.size();
    auto tally = [&](double v, int& pass, int& fail) {
        rep.max_violation = std::max(rep.max_violation, v);
        (v <= tol ? pass : fail)++;
    };
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j) tally(std::abs(basis[i].dot(basis[j])), rep.kl1_pass, rep.kl1_fail);

    std::vector<PauliWord> ops;
    if (mode == KLMode::Degenerate) ops.push_back(PauliWord::identity(d, n));
    ops.insert(ops.end(), errors.begin(), errors.end());
    // images[a][j] = E_a |psi_j>
    std::vector<std::vector<Vec>> images(ops.size());
    for (std::size_t a = 0; a < ops.size(); ++a)
        for (const auto& b : basis) images[a].push_back(apply_pauli(ops[a], b));

    if (mode != KLMode::Degenerate) {
        for (std::size_t a = 0; a < ops.size(); ++a)
            for (std::size_t i = 0; i < K; ++i)
                for (std::size_t j = 0; j < K; ++j)
                    tally(std::abs(basis[i].dot(images[a][j])), rep.kl2_pass, rep.kl2_fail);
        if (mode == KLMode::Strict)
            for (std::size_t a = 0; a < ops.size(); ++a)
                for (std::size_t b = a + 1; b < ops.size(); ++b)
                    for (std::size_t i = 0; i < K; ++i)
                        for (std::size_t j = 0; j < K; ++j)
                            tally(std::abs(images[a][i].dot(images[b][j])), rep.kl3_pass, rep.kl3_fail);
        return rep;
    }
    for (std::size_t a = 0; a < ops.size(); ++a)
        for (std::size_t b = a; b < ops.size(); ++b) {
            int& pass = a == b ? rep.kl2_pass : rep.kl3_pass;
            int& fail = a == b ? rep.kl2_fail : rep.kl3_fail;
            const cplx c00 = K ? images[a][0].dot(images[b][0]) : cplx(0);
            for (std::size_t i = 0; i < K; ++i)
                for (std::size_t j = 0; j < K; ++j) {
                    const cplx m = images[a][i].dot(images[b][j]);
                    tally(i == j ? std::abs(m - c00) : std::abs(m), pass, fail);
                }
        }
    return rep;
}

KLReport check_kl(const CodeSpec& code, const std::vector<PauliWord>& errors, KLMode mode, double tol) {
    std::vector<Vec> basis;
    for (auto& s : logical_basis(code)) basis.push_back(std::move(s.amps));
    return check_kl(basis, code.d, code.n, errors, mode, tol);
}

std::string render_kl(const KLReport& r) {
    std::ostringstream os;
    os << "mode=" << kl_mode_name(r.mode) << " KL1 " << r.kl1_pass << "/" << (r.kl1_pass + r.kl1_fail) << " KL2 "
       << r.kl2_pass << "/" << (r.kl2_pass + r.kl2_fail) << " KL3 " << r.kl3_pass << "/" << (r.kl3_pass + r.kl3_fail)
       << " max_violation=" << r.max_violation << (r.satisfied() ? " OK" : " VIOLATED");
    return os.str();
}

std::vector<std::pair<Syndrome, Vec>> syndrome_components(const Vec& v, const StabilizerSet& stabs, double min_norm2) {
    std::vector<std::pair<Syndrome, Vec>> cur{{Syndrome{}, v}};
    for (const auto& s : stabs) {
        const PauliWord sd = power(s, s.d);
        if (!sd.is_identity() || sd.phase != 0)
            throw std::invalid_argument("syndrome projector: generator " + render_compact(s) + " does not satisfy S^d = I");
        const int d = s.d;
        std::vector<std::pair<Syndrome, Vec>> next;
        for (auto& [syn, vec] : cur) {
            std::vector<Vec> pw{vec};
            for (int m = 1; m < d; ++m) pw.push_back(apply_pauli(s, pw.back()));
            for (int r = 0; r < d; ++r) {
                std::vector<cplx> coef(static_cast<std::size_t>(d));
                for (int m = 0; m < d; ++m) coef[m] = omega_pow(d, -static_cast<long long>(r) * m) / static_cast<double>(d);
                Vec c(vec.size());
                for (Eigen::Index i = 0; i < vec.size(); ++i) {
                    cplx acc = 0.0;
                    for (int m = 0; m < d; ++m) acc += coef[m] * pw[m](i);
                    c(i) = acc;
                }
                if (c.squaredNorm() <= min_norm2) continue;
                Syndrome s2 = syn;
                s2.push_back(r);
                next.emplace_back(std::move(s2), std::move(c));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

Vec project_syndrome(const Vec& v, const StabilizerSet& stabs, const Syndrome& s) {
    if (s.size() != stabs.size()) throw std::invalid_argument("project_syndrome: syndrome length mismatch");
    for (const auto& [syn, c] : syndrome_components(v, stabs, 0.0))
        if (syn == s) return c;
    return Vec::Zero(v.size());
}

std::pair<Syndrome, QuditState> measure_syndrome(const QuditState& state, const CodeSpec& code, Rng& rng) {
    if (state.d != code.d || state.n != code.n) throw std::invalid_argument("measure_syndrome: state outside code space");
    Vec v = state.amps;
    Syndrome out;
    for (const auto& s : code.stabilizers) {
        auto comps = syndrome_components(v, {s}, -1.0);
        std::vector<double> probs;
        for (const auto& [syn, c] : comps) probs.push_back(c.squaredNorm());
        const std::size_t pick = rng.categorical(probs);
        if (!(probs[pick] > 0.0)) throw std::logic_error("measure_syndrome: sampled a zero-probability outcome");
        out.push_back(comps[pick].first.front());
        v = comps[pick].second / std::sqrt(probs[pick]);
    }
    return {out, QuditState(code.d, code.n, v)};
}

std::map<Syndrome, PauliWord> build_recovery_table(const StabilizerSet& stabs, const std::vector<PauliWord>& errors) {
    std::map<Syndrome, PauliWord> table;
    for (const auto& e : errors) {
        const Syndrome s = syndrome_of(e, stabs);
        if (all_zero(s)) {
            if (!in_group(e, stabs))
                throw std::invalid_argument("error " + render_compact(e) + " is undetectable and acts on the logical space");
            continue;
        }
        auto it = table.find(s);
        if (it == table.end()) {
            table.emplace(s, inverse(e));
            continue;
        }
        if (!in_group(mul(it->second, e), stabs))
            throw std::invalid_argument("errors " + render_compact(inverse(it->second)) + " and " + render_compact(e) +
                                        " share syndrome " + render_syndrome(s) + " but are not equivalent");
    }
    return table;
}

namespace {

Vec recover(const CodeSpec& code, const Syndrome& s, const Vec& v) {
    if (all_zero(s)) return v;
    if (code.detect_only)
        throw std::out_of_range("code " + code.name + " is detect-only; syndrome " + render_syndrome(s) +
                                " has no recovery");
    auto it = code.recovery.find(s);
    if (it == code.recovery.end()) return v;
    return apply_pauli(it->second, v);
}

CycleResult finish_cycle(const CodeSpec& code, const QuditState& encoded, const QuditState& noisy, Rng& rng) {
    auto [syn, post] = measure_syndrome(noisy, code, rng);
    const Vec fixed = recover(code, syn, post.amps);
    CycleResult r;
    r.syndrome = syn;
    r.fidelity = std::min(1.0, std::norm(encoded.amps.dot(fixed)));
    return r;
}

}  // namespace

CycleResult run_cycle(const CodeSpec& code, const PauliWord& error, const QuditState& logical_in, Rng& rng) {
    check_same_space(error, code.d, code.n, "run_cycle");
    const QuditState enc = encode(code, logical_in);
    return finish_cycle(code, enc, apply_pauli(error, enc), rng);
}

CycleResult run_cycle(const CodeSpec& code, const LocalChannel& channel, const QuditState& logical_in, Rng& rng) {
    if (channel.d != code.d || channel.n != code.n) throw std::invalid_argument("run_cycle: channel outside code space");
    const QuditState enc = encode(code, logical_in);
    auto [noisy, branch] = sample_trajectory(enc, channel, rng);
    CycleResult r = finish_cycle(code, enc, noisy, rng);
    r.branch = branch;
    return r;
}

double exact_cycle_fidelity(const CodeSpec& code, const LocalChannel& channel, const QuditState& logical_in) {
    if (channel.d != code.d || channel.n != code.n)
        throw std::invalid_argument("exact_cycle_fidelity: channel outside code space");
    const QuditState enc = encode(code, logical_in);
    double f = 0.0;
    for (std::size_t k = 0; k < channel.terms.size(); ++k) {
        const Vec v = apply_term(channel, k, enc.amps);
        for (const auto& [syn, c] : syndrome_components(v, code.stabilizers)) f += std::norm(enc.amps.dot(recover(code, syn, c)));
    }
    return std::min(1.0, f);
}

std::vector<std::pair<PauliWord, double>> single_error_ensemble(const CodeSpec& code, double p) {
    return single_error_ensemble(code.correctable, code.d, code.n, p);
}

std::vector<PauliWord> all_single_qudit_errors(int d, int n) {
    std::vector<PauliWord> out;
    for (int q = 0; q < n; ++q)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                if (a == 0 && b == 0) continue;
                out.push_back(d == 2 && a == 1 && b == 1 ? pauli_y(d, n, q) : PauliWord::single(d, n, q, a, b));
            }
    return out;
}

std::vector<PauliWord> single_shift_errors(int d, int n, bool z) {
    std::vector<PauliWord> out;
    for (int q = 0; q < n; ++q)
        for (int a = 1; a < d; ++a) out.push_back(z ? PauliWord::single(d, n, q, 0, a) : PauliWord::single(d, n, q, a, 0));
    return out;
}

LogicalOps find_logical_ops(const CodeSpec& code) {
    if (code.k != 1) throw std::invalid_argument("find_logical_ops: requires k = 1");
    const int d = code.d;
    const auto basis = logical_basis(code);
    bool have_x = false, have_z = false;
    LogicalOps ops;
    for_each_word(d, code.n, [&](const PauliWord& w) {
        for (const auto& s : code.stabilizers)
            if (!commutes(w, s)) return true;
        if (!have_x || w.weight() < ops.xbar.weight()) {
            // w|j_L> = c |j+1_L> with one c for every j.
            const cplx c = basis[1 % d].amps.dot(apply_pauli(w, basis[0].amps));
            const int t = phase_units_of(d, c);
            bool ok = t >= 0;
            for (int j = 0; ok && j < d; ++j)
                ok = (apply_pauli(w, basis[j].amps) - c * basis[(j + 1) % d].amps).norm() < 1e-9;
            if (ok) {
                ops.xbar = w;
                ops.xbar.phase = (w.phase_modulus() - t) % w.phase_modulus();
                have_x = true;
            }
        }
        if (!w.is_identity() && (!have_z || w.weight() < ops.zbar.weight())) {
            const cplx c = basis[0].amps.dot(apply_pauli(w, basis[0].amps));
            const int t = phase_units_of(d, c);
            bool ok = t >= 0;
            for (int j = 0; ok && j < d; ++j)
                ok = (apply_pauli(w, basis[j].amps) - c * omega_pow(d, j) * basis[j].amps).norm() < 1e-9;
            if (ok) {
                ops.zbar = w;
                ops.zbar.phase = (w.phase_modulus() - t) % w.phase_modulus();
                have_z = true;
            }
        }
        return true;
    });
    if (!have_x || !have_z) throw std::runtime_error("find_logical_ops: no Pauli logical operators for " + code.name);
    return ops;
}

CodeSpec code_from_stabilizers(const std::string& name, int d, int n, const StabilizerSet& stabs,
                               const std::vector<PauliWord>& correctable) {
    const std::size_t D = checked_dim(d, n);
    if (D > 4096) throw std::length_error("code_from_stabilizers: dense encoder exceeds 4096");
    if (static_cast<int>(stabs.size()) != n - 1) throw std::invalid_argument("code_from_stabilizers: need n - 1 generators");
    if (!pairwise_commuting(stabs)) throw std::invalid_argument("code_from_stabilizers: generators do not commute");

    // Logical pair: lowest-weight commuting non-stabilizer zbar, then xbar with zbar xbar = w xbar zbar.
    PauliWord zbar, xbar;
    bool have_z = false, have_x = false;
    for_each_word(d, n, [&](const PauliWord& w) {
        if (w.is_identity()) return true;
        for (const auto& s : stabs)
            if (!commutes(w, s)) return true;
        if (in_group(w, stabs)) return true;
        if (!have_z || w.weight() < zbar.weight()) {
            zbar = w;
            have_z = true;
        }
        return true;
    });
    if (!have_z) throw std::runtime_error("code_from_stabilizers: no logical operator");
    for_each_word(d, n, [&](const PauliWord& w) {
        for (const auto& s : stabs)
            if (!commutes(w, s)) return true;
        if (commutation_residue(zbar, w) != 1) return true;
        if (!have_x || w.weight() < xbar.weight()) {
            xbar = w;
            have_x = true;
        }
        return true;
    });
    if (!have_x) throw std::runtime_error("code_from_stabilizers: no conjugate logical operator");
    zbar = normalize_order(zbar);
    xbar = normalize_order(xbar);

    StabilizerSet with_z = stabs;
    with_z.push_back(zbar);
    Vec zero_l;
    for (std::size_t b = 0; b < D; ++b) {
        Vec e = Vec::Zero(static_cast<Eigen::Index>(D));
        e(static_cast<Eigen::Index>(b)) = 1.0;
        Vec c = project_syndrome(e, with_z, Syndrome(with_z.size(), 0));
        if (c.norm() > 1e-6) {
            zero_l = c.normalized();
            break;
        }
    }
    if (zero_l.size() == 0) throw std::runtime_error("code_from_stabilizers: empty code space");

    // Columns j * d^{n-1} hold |j_L>; Gram-Schmidt completes the rest.
    Mat u = Mat::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    const std::size_t stride = ipow(d, n - 1);
    std::vector<Vec> cols;
    Vec cur = zero_l;
    for (int j = 0; j < d; ++j) {
        u.col(static_cast<Eigen::Index>(j * stride)) = cur;
        cols.push_back(cur);
        cur = apply_pauli(xbar, cur);
    }
    std::size_t b = 0;
    for (std::size_t col = 0; col < D; ++col) {
        if (col % stride == 0) continue;
        while (true) {
            Vec e = Vec::Zero(static_cast<Eigen::Index>(D));
            e(static_cast<Eigen::Index>(b++)) = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& c : cols) e -= c.dot(e) * c;
            if (e.norm() > 1e-6) {
                e.normalize();
                u.col(static_cast<Eigen::Index>(col)) = e;
                cols.push_back(e);
                break;
            }
        }
    }
    CodeSpec code;
    code.name = name;
    code.d = d;
    code.n = n;
    code.k = 1;
    code.encoder = Circuit(d, n);
    std::vector<int> all(n);
    for (int q = 0; q < n; ++q) all[q] = q;
    code.encoder.custom(u, all, "U_" + name);
    code.logical_inputs = {0};
    code.stabilizers = stabs;
    code.correctable = correctable;
    code.recovery = build_recovery_table(stabs, correctable);
    return code;
}

CodeSpec concatenate(const CodeSpec& outer, const CodeSpec& inner, std::optional<std::vector<PauliWord>> correctable) {
    if (outer.d != inner.d) throw std::invalid_argument("concatenate: dimension mismatch");
    if (inner.k != 1) throw std::invalid_argument("concatenate: inner code must encode one qudit");
    const int d = outer.d, ni = inner.n, n = outer.n * inner.n;
    checked_dim(d, n);
    const int in0 = inner.inputs().front();
    const LogicalOps lops = find_logical_ops(inner);

    CodeSpec c;
    c.name = outer.name + "*" + inner.name;
    c.d = d;
    c.n = n;
    c.k = outer.k;
    c.encoder = Circuit(d, n);
    std::vector<int> outer_map(outer.n);
    for (int q = 0; q < outer.n; ++q) outer_map[q] = q * ni + in0;
    int pos = 0;
    for (const auto& g : outer.encoder.gates) c.encoder.add(remap(g, outer_map, pos++));
    for (int b = 0; b < outer.n; ++b) {
        std::vector<int> block(ni);
        for (int q = 0; q < ni; ++q) block[q] = b * ni + q;
        for (const auto& g : inner.encoder.gates) c.encoder.add(remap(g, block, pos++));
    }
    for (int t : outer.inputs()) c.logical_inputs.push_back(t * ni + in0);

    for (int b = 0; b < outer.n; ++b)
        for (const auto& s : inner.stabilizers) c.stabilizers.push_back(embed_block(s, n, b * ni));
    for (const auto& s : outer.stabilizers) {
        PauliWord lifted = PauliWord::identity(d, n);
        lifted.phase = s.phase;
        for (int q = 0; q < outer.n; ++q) {
            const PauliWord local = mul(power(lops.xbar, s.x[q]), power(lops.zbar, s.z[q]));
            lifted = mul(lifted, embed_block(local, n, q * ni));
        }
        c.stabilizers.push_back(lifted);
    }
    // The lifted words act on the codewords as the outer generators do, so each
    // fixes |0_L>; correct any residual phase from the representation.
    const auto basis = logical_basis(c);
    for (auto& s : c.stabilizers) {
        const cplx ev = basis[0].amps.dot(apply_pauli(s, basis[0].amps));
        const int t = phase_units_of(d, ev);
        if (t < 0) throw std::runtime_error("concatenate: lifted generator does not fix the code space");
        s.phase = (s.phase + s.phase_modulus() - t) % s.phase_modulus();
    }
    c.correctable = correctable ? *correctable : all_single_qudit_errors(d, n);
    c.kl_mode = KLMode::Degenerate;
    c.recovery = build_recovery_table(c.stabilizers, c.correctable);
    return c;
}

std::vector<std::string> validate_code(const CodeSpec& code) {
    std::vector<std::string> issues;
    if (code.encoder.d != code.d || code.encoder.n != code.n) issues.push_back("encoder shape differs from code");
    for (const auto& s : code.stabilizers)
        if (s.d != code.d || s.n() != code.n) issues.push_back("generator " + render_compact(s) + " has wrong shape");
    if (!issues.empty()) return issues;
    if (!pairwise_commuting(code.stabilizers)) issues.push_back("generators do not pairwise commute");
    for (const auto& s : code.stabilizers) {
        const PauliWord sd = power(s, code.d);
        if (!sd.is_identity() || sd.phase != 0) issues.push_back("generator " + render_compact(s) + " has S^d != I");
    }
    const auto basis = logical_basis(code);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const cplx g = basis[i].amps.dot(basis[j].amps);
            if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-10) {
                issues.push_back("logical basis is not orthonormal");
                i = basis.size();
                break;
            }
        }
    }
    for (const auto& s : code.stabilizers)
        for (std::size_t j = 0; j < basis.size(); ++j)
            if ((apply_pauli(s, basis[j].amps) - basis[j].amps).norm() > 1e-9) {
                issues.push_back("generator " + render_compact(s) + " does not fix logical state " + std::to_string(j));
                break;
            }
    for (const auto& e : code.correctable) {
        const Syndrome s = syndrome_of(e, code.stabilizers);
        if (code.detect_only) {
            if (all_zero(s)) issues.push_back("declared error " + render_compact(e) + " is not detected");
            continue;
        }
        if (all_zero(s)) {
            if (!in_group(e, code.stabilizers)) issues.push_back("declared error " + render_compact(e) + " is undetectable");
            continue;
        }
        auto it = code.recovery.find(s);
        if (it == code.recovery.end()) {
            issues.push_back("no recovery for syndrome " + render_syndrome(s));
            continue;
        }
        if (!in_group(mul(it->second, e), code.stabilizers))
            issues.push_back("recovery for " + render_syndrome(s) + " does not undo " + render_compact(e));
    }
    return issues;
}

QuditState random_state(int d, int n, Rng& rng) {
    const auto D = static_cast<Eigen::Index>(checked_dim(d, n));
    Vec v(D);
    for (Eigen::Index i = 0; i < D; ++i) v(i) = cplx(rng.normal(), rng.normal());
    return QuditState(d, n, v).normalize();
}

}  // namespace quec
