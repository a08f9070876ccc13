#include "quec/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace quec {

Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

std::size_t checked_dim(int d, int n) {
    if (d < 2) throw std::invalid_argument("qudit dimension must be >= 2");
    if (n < 0) throw std::invalid_argument("negative qudit count");
    if (n * std::log2(static_cast<double>(d)) > kAmplitudeBudgetBits + 1e-9)
        throw std::length_error("register of " + std::to_string(n) + " qudits at d=" + std::to_string(d) +
                                " exceeds the dense amplitude budget");
    return ipow(static_cast<std::size_t>(d), static_cast<std::size_t>(n));
}

QuditState::QuditState(int d_, int n_, Vec amps_) : d(d_), n(n_), amps(std::move(amps_)) {
    if (static_cast<std::size_t>(amps.size()) != checked_dim(d, n))
        throw std::invalid_argument("QuditState: amplitude count != d^n");
}

QuditState QuditState::basis(int d, int n, std::size_t index) {
    std::size_t dim = checked_dim(d, n);
    if (index >= dim) throw std::out_of_range("QuditState::basis: index out of range");
    Vec v = Vec::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return QuditState(d, n, std::move(v));
}

QuditState& QuditState::normalize() {
    double nrm = amps.norm();
    if (!(nrm > 0.0)) throw std::runtime_error("cannot normalize zero state");
    amps /= nrm;
    return *this;
}

DensityOp::DensityOp(int d_, int n_, Mat mat_) : d(d_), n(n_), mat(std::move(mat_)) {
    std::size_t dim = checked_dim(d, n);
    if (static_cast<std::size_t>(mat.rows()) != dim || mat.rows() != mat.cols())
        throw std::invalid_argument("DensityOp: matrix shape != d^n x d^n");
}

DensityOp DensityOp::pure(const QuditState& s) {
    return DensityOp(s.d, s.n, s.amps * s.amps.adjoint());
}

bool DensityOp::valid(double tol) const {
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(mat.trace() - cplx(1.0, 0.0)) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Mat> es(mat);
    return es.eigenvalues().minCoeff() >= -tol;
}

bool is_unitary(const Mat& m, double tol) {
    if (m.rows() != m.cols() || m.size() == 0) return false;
    Mat e = m.adjoint() * m - Mat::Identity(m.rows(), m.cols());
    return e.cwiseAbs().maxCoeff() <= tol;
}

UnitaryOp::UnitaryOp(Mat m) : mat(std::move(m)) {
    if (!is_unitary(mat, tolerances().validation)) throw std::invalid_argument("UnitaryOp: matrix is not unitary");
}

KrausChannel::KrausChannel(std::vector<Mat> ops_) : ops(std::move(ops_)) {
    if (ops.empty()) throw std::invalid_argument("KrausChannel: no operators");
    for (const auto& e : ops)
        if (e.rows() != ops.front().rows() || e.cols() != e.rows())
            throw std::invalid_argument("KrausChannel: operators of unequal or non-square shape");
    if (completeness_error() > tolerances().validation)
        throw std::invalid_argument("KrausChannel: not trace preserving");
}

double KrausChannel::completeness_error() const {
    Mat s = Mat::Zero(ops.front().rows(), ops.front().cols());
    for (const auto& e : ops) s += e.adjoint() * e;
    return (s - Mat::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

namespace {

void check_targets(int n, const std::vector<int>& targets) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= n) throw std::out_of_range("target qudit out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (targets[i] == targets[j]) throw std::invalid_argument("duplicate target qudit");
    }
}

bool is_full_ordered(int n, const std::vector<int>& targets) {
    if (static_cast<int>(targets.size()) != n) return false;
    for (int i = 0; i < n; ++i)
        if (targets[static_cast<std::size_t>(i)] != i) return false;
    return true;
}

}  // namespace

Vec apply_local(const Vec& v, int d, int n, const Mat& op, const std::vector<int>& targets) {
    check_targets(n, targets);
    const std::size_t k = targets.size();
    const std::size_t sub = ipow(static_cast<std::size_t>(d), k);
    if (static_cast<std::size_t>(op.rows()) != sub || op.cols() != op.rows())
        throw std::invalid_argument("operator dimension does not match target count");
    const std::size_t dim = static_cast<std::size_t>(v.size());
    if (dim != ipow(static_cast<std::size_t>(d), static_cast<std::size_t>(n)))
        throw std::invalid_argument("state dimension does not match register");
    if (is_full_ordered(n, targets)) return op * v;

    std::vector<std::size_t> stride(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) stride[static_cast<std::size_t>(q)] = ipow(static_cast<std::size_t>(d), static_cast<std::size_t>(n - 1 - q));
    // Offsets of every local configuration relative to a base index whose
    // target digits are zero. The first target is the most significant local digit.
    std::vector<std::size_t> offset(sub, 0);
    for (std::size_t s = 0; s < sub; ++s) {
        std::size_t rem = s;
        std::size_t off = 0;
        for (std::size_t t = k; t-- > 0;) {
            off += (rem % static_cast<std::size_t>(d)) * stride[static_cast<std::size_t>(targets[t])];
            rem /= static_cast<std::size_t>(d);
        }
        offset[s] = off;
    }
    // Base indices: every configuration of the non-target qudits, target digits zero.
    std::vector<bool> is_target(static_cast<std::size_t>(n), false);
    for (int t : targets) is_target[static_cast<std::size_t>(t)] = true;
    std::vector<std::size_t> bases{0};
    bases.reserve(dim / sub);
    for (int q = n - 1; q >= 0; --q) {
        if (is_target[static_cast<std::size_t>(q)]) continue;
        const std::size_t count = bases.size();
        for (std::size_t a = 1; a < static_cast<std::size_t>(d); ++a)
            for (std::size_t i = 0; i < count; ++i) bases.push_back(bases[i] + a * stride[static_cast<std::size_t>(q)]);
    }
    Vec out(v.size());
    std::vector<cplx> local(sub);
    for (std::size_t base : bases) {
        for (std::size_t s = 0; s < sub; ++s) local[s] = v(static_cast<Eigen::Index>(base + offset[s]));
        for (std::size_t r = 0; r < sub; ++r) {
            cplx acc = 0.0;
            for (std::size_t s = 0; s < sub; ++s) acc += op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) * local[s];
            out(static_cast<Eigen::Index>(base + offset[r])) = acc;
        }
    }
    return out;
}

QuditState apply_unitary(const QuditState& state, const UnitaryOp& u, const std::vector<int>& targets) {
    return QuditState(state.d, state.n, apply_local(state.amps, state.d, state.n, u.mat, targets));
}

QuditState apply_unitary(const QuditState& state, const UnitaryOp& u) {
    std::vector<int> all(static_cast<std::size_t>(state.n));
    for (int i = 0; i < state.n; ++i) all[static_cast<std::size_t>(i)] = i;
    return apply_unitary(state, u, all);
}

namespace {

// op acting on the row index of m (op (x) I) m.
Mat left_apply(const Mat& m, int d, int n, const Mat& op, const std::vector<int>& targets) {
    Mat out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) = apply_local(m.col(c), d, n, op, targets);
    return out;
}

}  // namespace

DensityOp apply_channel(const DensityOp& rho, const KrausChannel& ch, const std::vector<int>& targets) {
    if (ch.ops.empty()) throw std::invalid_argument("empty channel");
    Mat acc = Mat::Zero(rho.mat.rows(), rho.mat.cols());
    const bool full = is_full_ordered(rho.n, targets);
    for (const auto& e : ch.ops) {
        if (full) {
            if (e.rows() != rho.mat.rows()) throw std::invalid_argument("channel dimension mismatch");
            acc += e * rho.mat * e.adjoint();
        } else {
            Mat a = left_apply(rho.mat, rho.d, rho.n, e, targets);
            Mat b = left_apply(a.adjoint(), rho.d, rho.n, e, targets);
            acc += b.adjoint();
        }
    }
    return DensityOp(rho.d, rho.n, std::move(acc));
}

DensityOp apply_channel(const DensityOp& rho, const KrausChannel& ch) {
    std::vector<int> all(static_cast<std::size_t>(rho.n));
    for (int i = 0; i < rho.n; ++i) all[static_cast<std::size_t>(i)] = i;
    return apply_channel(rho, ch, all);
}

std::pair<QuditState, std::size_t> sample_trajectory(const QuditState& state, const KrausChannel& ch,
                                                      const std::vector<int>& targets, Rng& rng) {
    std::vector<Vec> branches;
    std::vector<double> probs;
    branches.reserve(ch.ops.size());
    for (const auto& e : ch.ops) {
        branches.push_back(apply_local(state.amps, state.d, state.n, e, targets));
        probs.push_back(branches.back().squaredNorm());
    }
    double total = 0.0;
    for (double p : probs) total += p;
    if (!(total > 0.0)) throw std::runtime_error("sample_trajectory: all branch probabilities are zero");
    std::size_t k = rng.categorical(probs);
    QuditState out(state.d, state.n, branches[k]);
    out.normalize();
    return {out, k};
}

std::pair<QuditState, std::size_t> sample_trajectory(const QuditState& state, const KrausChannel& ch, Rng& rng) {
    std::vector<int> all(static_cast<std::size_t>(state.n));
    for (int i = 0; i < state.n; ++i) all[static_cast<std::size_t>(i)] = i;
    return sample_trajectory(state, ch, all, rng);
}

double fidelity(const DensityOp& rho, const QuditState& target) {
    if (rho.mat.rows() != target.amps.size()) throw std::invalid_argument("fidelity: dimension mismatch");
    double f = (target.amps.adjoint() * rho.mat * target.amps)(0, 0).real();
    return std::clamp(f, 0.0, 1.0);
}

double fidelity(const QuditState& psi, const QuditState& target) {
    if (psi.amps.size() != target.amps.size()) throw std::invalid_argument("fidelity: dimension mismatch");
    return std::clamp(std::norm(target.amps.dot(psi.amps)), 0.0, 1.0);
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

Mat kron_all(const std::vector<Mat>& factors) {
    Mat r = Mat::Identity(1, 1);
    for (const auto& f : factors) r = kron(r, f);
    return r;
}

}  // namespace quec
