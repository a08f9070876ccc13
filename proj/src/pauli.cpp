#include "quec/pauli.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace quec {

namespace {

int mod(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}

void check_pair(const PauliWord& a, const PauliWord& b) {
    if (a.d != b.d) throw std::invalid_argument("Pauli words of different d");
    if (a.n() != b.n()) throw std::invalid_argument("Pauli words of different length");
}

// Phase units contributed by one factor w^1 (d = 2 uses i units, w = i^2).
int omega_units(int d) { return d == 2 ? 2 : 1; }

}  // namespace

PauliWord::PauliWord(int d_, std::vector<int> x_, std::vector<int> z_, int phase_)
    : d(d_), x(std::move(x_)), z(std::move(z_)), phase(phase_) {
    if (d < 2) throw std::invalid_argument("PauliWord: d must be >= 2");
    if (x.size() != z.size()) throw std::invalid_argument("PauliWord: x/z length mismatch");
    for (auto& v : x) v = mod(v, d);
    for (auto& v : z) v = mod(v, d);
    phase = mod(phase, phase_modulus());
}

PauliWord PauliWord::identity(int d, int n) {
    return PauliWord(d, std::vector<int>(static_cast<std::size_t>(n), 0), std::vector<int>(static_cast<std::size_t>(n), 0));
}

PauliWord PauliWord::single(int d, int n, int q, int a, int b) {
    if (q < 0 || q >= n) throw std::out_of_range("PauliWord::single: qudit out of range");
    PauliWord w = identity(d, n);
    w.x[static_cast<std::size_t>(q)] = mod(a, d);
    w.z[static_cast<std::size_t>(q)] = mod(b, d);
    return w;
}

bool PauliWord::is_identity() const {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0 || z[i] != 0) return false;
    return true;
}

int PauliWord::weight() const {
    int w = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0 || z[i] != 0) ++w;
    return w;
}

bool PauliWord::operator<(const PauliWord& o) const {
    if (d != o.d) return d < o.d;
    if (x != o.x) return x < o.x;
    if (z != o.z) return z < o.z;
    return phase < o.phase;
}

PauliWord pauli_y(int d, int n, int q) {
    PauliWord w = PauliWord::single(d, n, q, 1, 1);
    w.phase = (d == 2) ? 1 : 0;
    return w;
}

cplx phase_value(int d, int phase) {
    if (d == 2) {
        static const cplx units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return units[mod(phase, 4)];
    }
    double ang = 2.0 * std::numbers::pi * mod(phase, d) / d;
    return {std::cos(ang), std::sin(ang)};
}

PauliWord mul(const PauliWord& a, const PauliWord& b) {
    check_pair(a, b);
    const std::size_t n = a.x.size();
    std::vector<int> x(n), z(n);
    long long extra = 0;
    for (std::size_t m = 0; m < n; ++m) {
        // (X^i Z^j)(X^k Z^l) = w^{jk} X^{i+k} Z^{j+l}
        extra += static_cast<long long>(a.z[m]) * b.x[m];
        x[m] = a.x[m] + b.x[m];
        z[m] = a.z[m] + b.z[m];
    }
    const int pm = a.phase_modulus();
    int ph = mod(static_cast<int>((a.phase + b.phase + omega_units(a.d) * (extra % a.d)) % pm), pm);
    return PauliWord(a.d, std::move(x), std::move(z), ph);
}

PauliWord power(const PauliWord& a, int k) {
    int order = a.d == 2 ? 4 : a.d;
    k = mod(k, order);
    PauliWord r = PauliWord::identity(a.d, a.n());
    for (int i = 0; i < k; ++i) r = mul(r, a);
    return r;
}

PauliWord inverse(const PauliWord& a) {
    // a^{order-1}; order divides 4 (d = 2) or d (odd d, since (phase X^x Z^z)^d = I).
    return power(a, (a.d == 2 ? 4 : a.d) - 1);
}

int commutation_residue(const PauliWord& a, const PauliWord& b) {
    check_pair(a, b);
    long long s = 0;
    for (std::size_t m = 0; m < a.x.size(); ++m) s += static_cast<long long>(a.z[m]) * b.x[m] - static_cast<long long>(a.x[m]) * b.z[m];
    return mod(static_cast<int>(s % a.d), a.d);
}

bool commutes(const PauliWord& a, const PauliWord& b) { return commutation_residue(a, b) == 0; }

Mat dense_single(int d, int a, int b) {
    Mat m = Mat::Zero(d, d);
    // X^a Z^b |k> = w^{bk} |k+a>
    for (int k = 0; k < d; ++k) m(mod(k + a, d), k) = phase_value(d, omega_units(d) * mod(b * k, d));
    return m;
}

UnitaryOp dense(const PauliWord& a) {
    std::vector<Mat> f;
    f.reserve(a.x.size());
    for (std::size_t m = 0; m < a.x.size(); ++m) f.push_back(dense_single(a.d, a.x[m], a.z[m]));
    Mat r = kron_all(f) * phase_value(a.d, a.phase);
    return UnitaryOp(std::move(r));
}

Vec apply_pauli(const PauliWord& w, const Vec& v) {
    const int d = w.d;
    const int n = w.n();
    const std::size_t dim = ipow(static_cast<std::size_t>(d), static_cast<std::size_t>(n));
    if (static_cast<std::size_t>(v.size()) != dim) throw std::invalid_argument("apply_pauli: dimension mismatch");
    std::vector<cplx> roots(static_cast<std::size_t>(d));
    const cplx global = phase_value(d, w.phase);
    for (int k = 0; k < d; ++k) roots[static_cast<std::size_t>(k)] = global * phase_value(d, omega_units(d) * k);
    // Per-qudit contributions to the target index and the phase exponent,
    // updated incrementally while an odometer walks the source index.
    std::vector<std::size_t> contrib(static_cast<std::size_t>(n * d));
    std::vector<int> zk(static_cast<std::size_t>(n * d));
    std::size_t stride = 1;
    for (int q = n - 1; q >= 0; --q) {
        const auto uq = static_cast<std::size_t>(q);
        for (int k = 0; k < d; ++k) {
            const auto slot = uq * static_cast<std::size_t>(d) + static_cast<std::size_t>(k);
            contrib[slot] = static_cast<std::size_t>((k + w.x[uq]) % d) * stride;
            zk[slot] = (w.z[uq] * k) % d;
        }
        stride *= static_cast<std::size_t>(d);
    }
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    std::size_t target = 0;
    int ph = 0;
    for (int q = 0; q < n; ++q) target += contrib[static_cast<std::size_t>(q * d)];
    Vec out(v.size());
    for (std::size_t idx = 0; idx < dim; ++idx) {
        out(static_cast<Eigen::Index>(target)) = roots[static_cast<std::size_t>(ph % d)] * v(static_cast<Eigen::Index>(idx));
        for (int q = n - 1; q >= 0; --q) {
            const auto uq = static_cast<std::size_t>(q);
            const std::size_t base = uq * static_cast<std::size_t>(d);
            const int old = digits[uq];
            const int nxt = old + 1 == d ? 0 : old + 1;
            digits[uq] = nxt;
            target = target - contrib[base + static_cast<std::size_t>(old)] + contrib[base + static_cast<std::size_t>(nxt)];
            ph += zk[base + static_cast<std::size_t>(nxt)] - zk[base + static_cast<std::size_t>(old)] + d;
            if (nxt != 0) break;
        }
    }
    return out;
}

QuditState apply_pauli(const PauliWord& w, const QuditState& s) {
    if (w.d != s.d || w.n() != s.n) throw std::invalid_argument("apply_pauli: register mismatch");
    return QuditState(s.d, s.n, apply_pauli(w, s.amps));
}

Syndrome syndrome_of(const PauliWord& error, const StabilizerSet& stabs) {
    Syndrome s;
    s.reserve(stabs.size());
    for (const auto& g : stabs) s.push_back(commutation_residue(g, error));
    return s;
}

bool group_element(const PauliWord& word, const StabilizerSet& stabs, PauliWord* found) {
    if (stabs.size() > static_cast<std::size_t>(kMaxEnumeratedGenerators))
        throw std::length_error("in_group: more than 8 generators exceeds the enumeration budget");
    if (stabs.empty()) {
        if (word.is_identity()) {
            if (found) *found = PauliWord::identity(word.d, word.n());
            return true;
        }
        return false;
    }
    const int d = word.d;
    // Odometer over exponent vectors; maintain the running product incrementally.
    const std::size_t g = stabs.size();
    std::vector<int> alpha(g, 0);
    std::vector<PauliWord> prefix(g + 1, PauliWord::identity(d, word.n()));
    // prefix[i+1] = prefix[i] * stabs[i]^alpha[i]
    auto rebuild = [&](std::size_t from) {
        for (std::size_t i = from; i < g; ++i) prefix[i + 1] = mul(prefix[i], power(stabs[i], alpha[i]));
    };
    rebuild(0);
    while (true) {
        const PauliWord& p = prefix[g];
        if (p.same_operator(word)) {
            if (found) *found = p;
            return true;
        }
        std::size_t i = g;
        while (i-- > 0) {
            if (++alpha[i] < d) break;
            alpha[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) return false;
        rebuild(i);
    }
}

bool in_group(const PauliWord& word, const StabilizerSet& stabs) {
    for (const auto& s : stabs) check_pair(word, s);
    return group_element(word, stabs, nullptr);
}

bool pairwise_commuting(const StabilizerSet& stabs) {
    for (std::size_t i = 0; i < stabs.size(); ++i)
        for (std::size_t j = i + 1; j < stabs.size(); ++j)
            if (!commutes(stabs[i], stabs[j])) return false;
    return true;
}

bool independent(const StabilizerSet& stabs) {
    for (std::size_t i = 0; i < stabs.size(); ++i) {
        StabilizerSet rest;
        for (std::size_t j = 0; j < stabs.size(); ++j)
            if (j != i) rest.push_back(stabs[j]);
        if (in_group(stabs[i], rest)) return false;
    }
    return true;
}

bool same_group(const StabilizerSet& a, const StabilizerSet& b) {
    for (const auto& w : a)
        if (!in_group(w, b)) return false;
    for (const auto& w : b)
        if (!in_group(w, a)) return false;
    return true;
}

std::string render(const PauliWord& w) {
    std::ostringstream os;
    os << (w.d == 2 ? "i^" : "ω^") << w.phase;
    for (std::size_t m = 0; m < w.x.size(); ++m) {
        os << (m == 0 ? " " : " ⊗ ") << "X^" << w.x[m] << "Z^" << w.z[m];
    }
    return os.str();
}

PauliWord parse_word(int d, const std::string& text) {
    std::string s;
    // normalize multi-byte symbols to ASCII
    for (std::size_t i = 0; i < text.size();) {
        if (text.compare(i, 2, "ω") == 0) {
            s += 'w';
            i += 2;
        } else if (text.compare(i, 3, "⊗") == 0) {
            s += '*';
            i += 3;
        } else {
            s += text[i];
            ++i;
        }
    }
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    };
    auto read_int = [&]() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw std::invalid_argument("parse_word: expected integer in \"" + text + "\"");
        return std::stoi(s.substr(start, pos - start));
    };
    auto expect = [&](char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c)
            throw std::invalid_argument(std::string("parse_word: expected '") + c + "' in \"" + text + "\"");
        ++pos;
    };
    skip_ws();
    int phase = 0;
    if (pos < s.size() && (s[pos] == 'w' || s[pos] == 'i')) {
        char sym = s[pos];
        if ((sym == 'i') != (d == 2)) throw std::invalid_argument("parse_word: phase symbol does not match d");
        ++pos;
        expect('^');
        phase = read_int();
    }
    std::vector<int> x, z;
    while (true) {
        expect('X');
        expect('^');
        x.push_back(read_int());
        expect('Z');
        expect('^');
        z.push_back(read_int());
        skip_ws();
        if (pos >= s.size()) break;
        expect('*');
    }
    return PauliWord(d, x, z, phase);
}

PauliWord parse_compact(int d, const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    std::vector<int> x, z;
    int phase = 0;
    while (is >> tok) {
        int a = 0, b = 0;
        std::size_t i = 0;
        bool any = false;
        while (i < tok.size()) {
            char c = tok[i++];
            int e = 1;
            if (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) {
                std::size_t j = i;
                while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j]))) ++j;
                e = std::stoi(tok.substr(i, j - i));
                i = j;
            }
            any = true;
            switch (c) {
                case 'I': break;
                case 'X':
                    if (b != 0) throw std::invalid_argument("parse_compact: X must precede Z in \"" + tok + "\"");
                    a += e;
                    break;
                case 'Z': b += e; break;
                case 'Y':
                    if (a != 0 || b != 0) throw std::invalid_argument("parse_compact: Y cannot be combined");
                    a += e;
                    b += e;
                    // Y^e = (i XZ)^e; for e = 1 the i factor (d = 2) is the only phase.
                    if (e != 1) throw std::invalid_argument("parse_compact: Y exponents other than 1 unsupported");
                    if (d == 2) phase += 1;
                    break;
                default: throw std::invalid_argument("parse_compact: bad token \"" + tok + "\"");
            }
        }
        if (!any) throw std::invalid_argument("parse_compact: empty token");
        x.push_back(a);
        z.push_back(b);
    }
    return PauliWord(d, x, z, phase);
}

std::string render_compact(const PauliWord& w) {
    std::ostringstream os;
    for (std::size_t m = 0; m < w.x.size(); ++m) {
        if (m) os << ' ';
        int a = w.x[m], b = w.z[m];
        if (a == 0 && b == 0) {
            os << 'I';
            continue;
        }
        if (a) os << 'X' << (a > 1 ? std::to_string(a) : "");
        if (b) os << 'Z' << (b > 1 ? std::to_string(b) : "");
    }
    return os.str();
}

std::string render_syndrome(const Syndrome& s) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ')';
    return os.str();
}

}  // namespace quec
