#include "quec/gates.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "quec/pauli.hpp"

namespace quec {

namespace {

cplx omega_pow(int d, long long k) {
    double ang = 2.0 * std::numbers::pi * static_cast<double>(((k % d) + d) % d) / d;
    return {std::cos(ang), std::sin(ang)};
}

void check_qudit(const Circuit& c, int q) {
    if (q < 0 || q >= c.n) throw std::out_of_range("gate qudit out of range");
}

}  // namespace

Circuit::Circuit(int d_, int n_) : d(d_), n(n_) {
    if (d < 2 || n < 0) throw std::invalid_argument("Circuit: invalid register");
}

void Circuit::add(Gate g) {
    if (!gates.empty() && g.pos <= gates.back().pos) throw std::invalid_argument("Circuit: positions must strictly increase");
    if (g.pos < 0) throw std::invalid_argument("Circuit: negative position");
    for (int q : g.qudits) check_qudit(*this, q);
    switch (g.type) {
        case GateType::H:
            if (g.qudits.size() != 1) throw std::invalid_argument("H takes one qudit");
            break;
        case GateType::S:
            if (g.qudits.size() != 1) throw std::invalid_argument("S takes one qudit");
            if (g.q < 1 || g.q >= d || std::gcd(g.q, d) != 1) throw std::invalid_argument("S_q: q must be coprime with d");
            break;
        case GateType::CNOT:
            if (g.qudits.size() != 2 || g.qudits[0] == g.qudits[1]) throw std::invalid_argument("CNOT: control == target");
            break;
        case GateType::Custom: {
            if (!g.custom) throw std::invalid_argument("custom gate without matrix");
            for (std::size_t i = 0; i < g.qudits.size(); ++i)
                for (std::size_t j = 0; j < i; ++j)
                    if (g.qudits[i] == g.qudits[j]) throw std::invalid_argument("custom gate: duplicate target");
            std::size_t dim = ipow(static_cast<std::size_t>(d), g.qudits.size());
            if (static_cast<std::size_t>(g.custom->rows()) != dim) throw std::invalid_argument("custom gate: dimension mismatch");
            if (!is_unitary(*g.custom, tolerances().validation)) throw std::invalid_argument("custom gate: not unitary");
            break;
        }
    }
    gates.push_back(std::move(g));
}

Circuit& Circuit::h(int qudit) {
    Gate g;
    g.type = GateType::H;
    g.qudits = {qudit};
    g.pos = next_pos();
    add(std::move(g));
    return *this;
}

Circuit& Circuit::s(int qudit, int q) {
    Gate g;
    g.type = GateType::S;
    g.qudits = {qudit};
    g.q = q;
    g.pos = next_pos();
    add(std::move(g));
    return *this;
}

Circuit& Circuit::cnot(int control, int target) {
    Gate g;
    g.type = GateType::CNOT;
    g.qudits = {control, target};
    g.pos = next_pos();
    add(std::move(g));
    return *this;
}

Circuit& Circuit::custom(const Mat& u, std::vector<int> targets, std::string label) {
    Gate g;
    g.type = GateType::Custom;
    g.qudits = std::move(targets);
    g.custom = std::make_shared<const Mat>(u);
    g.label = std::move(label);
    g.pos = next_pos();
    add(std::move(g));
    return *this;
}

UnitaryOp gate_matrix(const Gate& g, int d) {
    switch (g.type) {
        case GateType::H: {
            Mat m(d, d);
            const double s = 1.0 / std::sqrt(static_cast<double>(d));
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) m(j, k) = s * omega_pow(d, static_cast<long long>(j) * k);
            return UnitaryOp(std::move(m));
        }
        case GateType::S: {
            if (g.q < 1 || g.q >= d || std::gcd(g.q, d) != 1)
                throw std::invalid_argument("S_q: q not coprime with d is not a permutation");
            Mat m = Mat::Zero(d, d);
            for (int j = 0; j < d; ++j) m(j, (j * g.q) % d) = 1.0;
            return UnitaryOp(std::move(m));
        }
        case GateType::CNOT: {
            Mat m = Mat::Zero(d * d, d * d);
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) m(j * d + k, j * d + (k + j) % d) = 1.0;
            return UnitaryOp(std::move(m));
        }
        case GateType::Custom:
            if (!g.custom) throw std::invalid_argument("custom gate without matrix");
            return UnitaryOp(*g.custom);
    }
    throw std::logic_error("unknown gate type");
}

UnitaryOp circuit_unitary(const Circuit& c) {
    std::size_t dim = checked_dim(c.d, c.n);
    if (dim > 4096) throw std::length_error("circuit_unitary: dense operator beyond 4096 x 4096");
    Mat u = Mat::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& g : c.gates) {
        Mat local = gate_matrix(g, c.d).mat;
        for (Eigen::Index col = 0; col < u.cols(); ++col) u.col(col) = apply_local(u.col(col), c.d, c.n, local, g.qudits);
    }
    return UnitaryOp(std::move(u));
}

QuditState apply_gate(const QuditState& s, const Gate& g) {
    return apply_unitary(s, gate_matrix(g, s.d), g.qudits);
}

QuditState apply_circuit(const QuditState& s, const Circuit& c) {
    if (s.d != c.d || s.n != c.n) throw std::invalid_argument("apply_circuit: register mismatch");
    QuditState out = s;
    for (const auto& g : c.gates) out = apply_gate(out, g);
    return out;
}

std::size_t CircuitTensor::index(int plane, int qudit, int pos) const {
    if (plane < 0 || plane >= planes() || qudit < 0 || qudit >= n || pos < 0 || pos >= depth)
        throw std::out_of_range("CircuitTensor index");
    return (static_cast<std::size_t>(plane) * static_cast<std::size_t>(n) + static_cast<std::size_t>(qudit)) * static_cast<std::size_t>(depth) +
           static_cast<std::size_t>(pos);
}

CircuitTensor encode_tensor(const Circuit& c, int max_depth) {
    if (c.depth() > max_depth) throw std::length_error("encode_tensor: circuit deeper than max_depth");
    CircuitTensor t;
    t.d = c.d;
    t.n = c.n;
    t.depth = max_depth;
    t.data.assign(static_cast<std::size_t>(t.planes()) * static_cast<std::size_t>(c.n) * static_cast<std::size_t>(max_depth), 0);
    for (const auto& g : c.gates) {
        switch (g.type) {
            case GateType::H: t.data[t.index(0, g.qudits[0], g.pos)] = 1; break;
            case GateType::S: t.data[t.index(g.q, g.qudits[0], g.pos)] = 1; break;
            case GateType::CNOT:
                t.data[t.index(c.d, g.qudits[0], g.pos)] = 1;
                t.data[t.index(c.d + 1, g.qudits[1], g.pos)] = 1;
                break;
            case GateType::Custom: throw std::invalid_argument("encode_tensor: custom gates have no tensor plane");
        }
    }
    return t;
}

Circuit decode_tensor(const CircuitTensor& t) {
    Circuit c(t.d, t.n);
    for (int k = 0; k < t.depth; ++k) {
        int ctrl = -1, tgt = -1;
        for (int j = 0; j < t.n; ++j) {
            if (t.at(t.d, j, k)) ctrl = j;
            if (t.at(t.d + 1, j, k)) tgt = j;
            for (int p = 0; p < t.d; ++p) {
                if (!t.at(p, j, k)) continue;
                Gate g;
                g.pos = k;
                g.qudits = {j};
                if (p == 0) {
                    g.type = GateType::H;
                } else {
                    g.type = GateType::S;
                    g.q = p;
                }
                c.add(std::move(g));
            }
        }
        if (ctrl >= 0 || tgt >= 0) {
            if (ctrl < 0 || tgt < 0) throw std::invalid_argument("decode_tensor: unpaired CNOT plane entry");
            Gate g;
            g.type = GateType::CNOT;
            g.qudits = {ctrl, tgt};
            g.pos = k;
            c.add(std::move(g));
        }
    }
    return c;
}

std::string serialize_circuit(const Circuit& c) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (const auto& g : c.gates) {
        os << g.pos << ' ';
        switch (g.type) {
            case GateType::H: os << "H " << g.qudits[0]; break;
            case GateType::S: os << "S " << g.qudits[0] << ' ' << g.q; break;
            case GateType::CNOT: os << "CNOT " << g.qudits[0] << ' ' << g.qudits[1]; break;
            case GateType::Custom: {
                os << "U " << g.qudits.size();
                for (int q : g.qudits) os << ' ' << q;
                const Mat& m = *g.custom;
                for (Eigen::Index i = 0; i < m.rows(); ++i)
                    for (Eigen::Index j = 0; j < m.cols(); ++j) os << ' ' << m(i, j).real() << ' ' << m(i, j).imag();
                break;
            }
        }
        os << '\n';
    }
    return os.str();
}

Circuit parse_circuit(int d, int n, const std::string& text) {
    Circuit c(d, n);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        Gate g;
        std::string kind;
        if (!(ls >> g.pos)) continue;
        if (!(ls >> kind)) throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": missing gate kind");
        auto need = [&](int& v) {
            if (!(ls >> v)) throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": missing argument");
        };
        if (kind == "H") {
            g.type = GateType::H;
            int q;
            need(q);
            g.qudits = {q};
        } else if (kind == "S") {
            g.type = GateType::S;
            int q;
            need(q);
            need(g.q);
            g.qudits = {q};
        } else if (kind == "CNOT") {
            g.type = GateType::CNOT;
            int a, b;
            need(a);
            need(b);
            g.qudits = {a, b};
        } else if (kind == "U") {
            g.type = GateType::Custom;
            int k;
            need(k);
            for (int i = 0; i < k; ++i) {
                int q;
                need(q);
                g.qudits.push_back(q);
            }
            auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), static_cast<std::size_t>(k)));
            Mat m(dim, dim);
            for (Eigen::Index i = 0; i < dim; ++i)
                for (Eigen::Index j = 0; j < dim; ++j) {
                    double re, im;
                    if (!(ls >> re >> im)) throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": short matrix");
                    m(i, j) = cplx(re, im);
                }
            g.custom = std::make_shared<const Mat>(std::move(m));
            g.label = "U";
        } else {
            throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": unknown gate kind " + kind);
        }
        c.add(std::move(g));
    }
    return c;
}

std::vector<Mat> su_generators(int d) {
    auto E = [d](int i, int j) {
        Mat m = Mat::Zero(d, d);
        m(i, j) = 1.0;
        return m;
    };
    const cplx I(0, 1);
    if (d == 2) {
        return {E(0, 1) + E(1, 0), -I * E(0, 1) + I * E(1, 0), E(0, 0) - E(1, 1)};
    }
    if (d == 3) {
        return {E(0, 1) + E(1, 0),
                -I * E(0, 1) + I * E(1, 0),
                E(0, 0) - E(1, 1),
                E(0, 2) + E(2, 0),
                -I * E(0, 2) + I * E(2, 0),
                E(1, 2) + E(2, 1),
                -I * E(1, 2) + I * E(2, 1),
                (E(0, 0) + E(1, 1) - 2.0 * E(2, 2)) / std::sqrt(3.0)};
    }
    throw std::invalid_argument("su_generators: only d = 2 and d = 3 are bundled");
}

UnitaryOp su_d_unitary(const std::vector<double>& theta, int d) {
    auto gens = su_generators(d);
    if (theta.size() != gens.size()) throw std::invalid_argument("su_d_unitary: expected d^2 - 1 parameters");
    Mat h = Mat::Zero(d, d);
    for (std::size_t k = 0; k < gens.size(); ++k) {
        if (!std::isfinite(theta[k])) throw std::invalid_argument("su_d_unitary: non-finite parameter");
        h += theta[k] * gens[k];
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec ph(d);
    for (int i = 0; i < d; ++i) ph(i) = std::exp(cplx(0, es.eigenvalues()(i)));
    Mat u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    return UnitaryOp(std::move(u));
}

std::vector<double> reduce_angles(std::vector<double> theta) {
    const double two_pi = 2.0 * std::numbers::pi;
    for (auto& t : theta) {
        t = std::fmod(t, two_pi);
        if (t < 0) t += two_pi;
        if (t >= two_pi) t -= two_pi;
    }
    return theta;
}

UnitaryOp unitary_fractional_power(const UnitaryOp& u, double alpha) {
    if (!is_unitary(u.mat, tolerances().validation)) throw std::invalid_argument("unitary_fractional_power: non-unitary input");
    Eigen::ComplexSchur<Mat> schur(u.mat);
    const Mat& t = schur.matrixT();
    const Mat& q = schur.matrixU();
    Vec ph(t.rows());
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        double phi = std::arg(t(i, i));
        if (phi <= -std::numbers::pi + 1e-14) phi = std::numbers::pi;
        ph(i) = std::exp(cplx(0, alpha * phi));
    }
    Mat r = q * ph.asDiagonal() * q.adjoint();
    return UnitaryOp(std::move(r));
}

bool dense_to_pauli(const Mat& m, int d, int n, PauliWord* out, double tol) {
    std::size_t dim = ipow(static_cast<std::size_t>(d), static_cast<std::size_t>(n));
    if (static_cast<std::size_t>(m.rows()) != dim || m.cols() != m.rows()) return false;
    // phase X^x Z^z maps |k> to phase w^{z.k} |k + x>: column 0 fixes x, and
    // the ratio between column e_q and column 0 is w^{z_q}.
    Eigen::Index r0;
    m.col(0).cwiseAbs().maxCoeff(&r0);
    if (std::abs(m(r0, 0)) < 0.5) return false;
    std::vector<int> x(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n));
    std::size_t rem = static_cast<std::size_t>(r0);
    for (int q = n - 1; q >= 0; --q) {
        x[static_cast<std::size_t>(q)] = static_cast<int>(rem % static_cast<std::size_t>(d));
        rem /= static_cast<std::size_t>(d);
    }
    for (int q = 0; q < n; ++q) {
        auto col = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), static_cast<std::size_t>(n - 1 - q)));
        Eigen::Index r;
        m.col(col).cwiseAbs().maxCoeff(&r);
        double ang = std::arg(m(r, col) / m(r0, 0));
        long k = std::lround(ang * d / (2.0 * std::numbers::pi));
        z[static_cast<std::size_t>(q)] = static_cast<int>(((k % d) + d) % d);
    }
    PauliWord w(d, x, z, 0);
    for (int k = 0; k < w.phase_modulus(); ++k) {
        w.phase = k;
        if ((dense(w).mat - m).cwiseAbs().maxCoeff() <= tol) {
            if (out) *out = w;
            return true;
        }
    }
    return false;
}

}  // namespace quec
