#include "quec/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quec/gates.hpp"

namespace quec {

double alpha_of(double t, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("alpha_of: tau must be positive");
    double s = std::sin(std::numbers::pi * t / tau);
    return s * s;
}

AlphaChannel AlphaChannel::qubit(double p, double tau) {
    AlphaChannel c;
    c.d = 2;
    c.p1 = p;
    c.tau = tau;
    c.validate();
    return c;
}

AlphaChannel AlphaChannel::qutrit(double p1, double p2, double tau) {
    AlphaChannel c;
    c.d = 3;
    c.p1 = p1;
    c.p2 = p2;
    c.tau = tau;
    c.validate();
    return c;
}

void AlphaChannel::validate() const {
    if (d != 2 && d != 3) throw std::invalid_argument("AlphaChannel: d must be 2 or 3");
    if (!(tau > 0.0)) throw std::invalid_argument("AlphaChannel: tau must be positive");
    if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) throw std::invalid_argument("AlphaChannel: probability outside [0,1]");
    if (d == 2 && p2 != 0.0) throw std::invalid_argument("AlphaChannel: qubit channel has a single probability");
    if (p1 + p2 > 1.0) throw std::invalid_argument("AlphaChannel: probabilities sum above 1");
}

std::vector<double> AlphaChannel::branch_probabilities() const {
    if (d == 2) return {p1};
    return {p1, p2};
}

Mat branch_unitary(const AlphaChannel& ch, int branch, double alpha) {
    const int d = ch.d;
    Mat x = dense_single(d, 1, 0);
    Mat z = dense_single(d, 0, 1);
    if (branch == 0) {
        UnitaryOp g(z * x.adjoint());
        return unitary_fractional_power(g, alpha).mat * x;
    }
    if (branch == 1 && d == 3) {
        UnitaryOp g(z * z * x);
        return unitary_fractional_power(g, alpha).mat * x * x;
    }
    throw std::out_of_range("branch_unitary: no such branch");
}

KrausChannel kraus_at_alpha(const AlphaChannel& ch, double alpha) {
    ch.validate();
    auto probs = ch.branch_probabilities();
    double rest = 1.0;
    for (double p : probs) rest -= p;
    std::vector<Mat> ops;
    ops.push_back(std::sqrt(std::max(rest, 0.0)) * Mat::Identity(ch.d, ch.d));
    for (std::size_t b = 0; b < probs.size(); ++b) ops.push_back(std::sqrt(probs[b]) * branch_unitary(ch, static_cast<int>(b), alpha));
    return KrausChannel(std::move(ops));
}

KrausChannel kraus_at(const AlphaChannel& ch, double t) {
    return kraus_at_alpha(ch, alpha_of(t, ch.tau));
}

void PauliChannelSpec::validate() const {
    double total = 0.0;
    for (const auto& [w, p] : errors) {
        if (w.d != d || w.n() != 1) throw std::invalid_argument("PauliChannelSpec: errors must be single-qudit words of matching d");
        if (!(p >= 0.0)) throw std::invalid_argument("PauliChannelSpec: negative probability");
        total += p;
    }
    if (total > 1.0 + 1e-12) throw std::invalid_argument("PauliChannelSpec: probabilities sum above 1");
}

KrausChannel PauliChannelSpec::channel() const {
    validate();
    double total = 0.0;
    for (const auto& e : errors) total += e.second;
    std::vector<Mat> ops;
    ops.push_back(std::sqrt(std::max(1.0 - total, 0.0)) * Mat::Identity(d, d));
    for (const auto& [w, p] : errors)
        if (p > 0.0) ops.push_back(std::sqrt(p) * dense(w).mat);
    return KrausChannel(std::move(ops));
}

KrausChannel tensor_channel(const KrausChannel& single, int n) {
    if (n < 1) throw std::invalid_argument("tensor_channel: n must be >= 1");
    const double count = std::pow(static_cast<double>(single.ops.size()), n);
    if (count > 2.0 * std::pow(4.0, n)) throw std::length_error("tensor_channel: operator count beyond 2 * 4^n");
    const double dim = std::pow(static_cast<double>(single.ops.front().rows()), n);
    if (dim > 4096.0) throw std::length_error("tensor_channel: dense operator beyond 4096 x 4096");
    // Identity-only factors are kept so operator indices stay a mixed-radix product.
    std::vector<Mat> ops = single.ops;
    for (int q = 1; q < n; ++q) {
        std::vector<Mat> next;
        next.reserve(ops.size() * single.ops.size());
        for (const auto& a : ops)
            for (const auto& b : single.ops) next.push_back(kron(a, b));
        ops = std::move(next);
    }
    // Drop exactly-zero operators (p = 0 branches).
    std::vector<Mat> kept;
    for (auto& m : ops)
        if (m.cwiseAbs().maxCoeff() > 0.0) kept.push_back(std::move(m));
    return KrausChannel(std::move(kept));
}

double LocalChannel::completeness_error() const {
    // Fast path when every term is proportional to a unitary.
    double total = 0.0;
    bool scalar = true;
    for (const auto& t : terms) {
        Mat g = t.op.adjoint() * t.op;
        double c = g(0, 0).real();
        if ((g - c * Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > 1e-13) {
            scalar = false;
            break;
        }
        total += c;
    }
    if (scalar) return std::abs(total - 1.0);
    std::size_t dim = checked_dim(d, n);
    if (dim > 4096) throw std::length_error("LocalChannel: completeness check beyond dense budget");
    Mat acc = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& t : terms) {
        Mat e = Mat::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (Eigen::Index c = 0; c < e.cols(); ++c) e.col(c) = apply_local(e.col(c), d, n, t.op, t.targets);
        acc += e.adjoint() * e;
    }
    return (acc - Mat::Identity(acc.rows(), acc.cols())).cwiseAbs().maxCoeff();
}

LocalChannel single_error_channel(const KrausChannel& single, int n) {
    if (n < 1) throw std::invalid_argument("single_error_channel: n must be >= 1");
    const int d = static_cast<int>(single.ops.front().rows());
    LocalChannel ch;
    ch.d = d;
    ch.n = n;
    // The first operator of `single` is taken as the no-error branch.
    double err_weight = 0.0;
    for (std::size_t b = 1; b < single.ops.size(); ++b) {
        Mat g = single.ops[b].adjoint() * single.ops[b];
        err_weight += g.trace().real() / d;
    }
    double rest = 1.0 - n * err_weight;
    if (rest < -1e-12) throw std::invalid_argument("single_error_channel: n * sum p exceeds 1");
    ch.terms.push_back({std::sqrt(std::max(rest, 0.0)) * Mat::Identity(d, d), {0}});
    for (int q = 0; q < n; ++q)
        for (std::size_t b = 1; b < single.ops.size(); ++b)
            if (single.ops[b].cwiseAbs().maxCoeff() > 0.0) ch.terms.push_back({single.ops[b], {q}});
    if (ch.completeness_error() > tolerances().validation) throw std::invalid_argument("single_error_channel: not trace preserving");
    return ch;
}

Vec apply_term(const LocalChannel& ch, std::size_t k, const Vec& v) {
    const auto& t = ch.terms.at(k);
    return apply_local(v, ch.d, ch.n, t.op, t.targets);
}

DensityOp apply_channel(const DensityOp& rho, const LocalChannel& ch) {
    if (rho.d != ch.d || rho.n != ch.n) throw std::invalid_argument("apply_channel: register mismatch");
    Mat acc = Mat::Zero(rho.mat.rows(), rho.mat.cols());
    for (std::size_t k = 0; k < ch.terms.size(); ++k) {
        Mat a(rho.mat.rows(), rho.mat.cols());
        for (Eigen::Index c = 0; c < a.cols(); ++c) a.col(c) = apply_term(ch, k, rho.mat.col(c));
        Mat b(a.rows(), a.cols());
        Mat at = a.adjoint();
        for (Eigen::Index c = 0; c < b.cols(); ++c) b.col(c) = apply_term(ch, k, at.col(c));
        acc += b.adjoint();
    }
    return DensityOp(rho.d, rho.n, std::move(acc));
}

std::pair<QuditState, std::size_t> sample_trajectory(const QuditState& state, const LocalChannel& ch, Rng& rng) {
    std::vector<Vec> branches;
    std::vector<double> probs;
    for (std::size_t k = 0; k < ch.terms.size(); ++k) {
        branches.push_back(apply_term(ch, k, state.amps));
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

std::vector<std::pair<PauliWord, double>> single_error_ensemble(const std::vector<PauliWord>& correctable, int d, int n,
                                                                double p) {
    if (p < 0.0 || p * static_cast<double>(correctable.size()) > 1.0 + 1e-12)
        throw std::invalid_argument("single_error_ensemble: weights outside [0,1]");
    std::vector<std::pair<PauliWord, double>> out;
    out.emplace_back(PauliWord::identity(d, n), 1.0 - p * static_cast<double>(correctable.size()));
    for (const auto& e : correctable) {
        if (e.d != d || e.n() != n) throw std::invalid_argument("single_error_ensemble: register mismatch");
        out.emplace_back(e, p);
    }
    return out;
}

double coherence_time(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("coherence_time: p must lie in (0,1)");
    return -1.0 / std::log(1.0 - p);
}

}  // namespace quec
