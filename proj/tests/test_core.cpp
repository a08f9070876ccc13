#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "quec/core.hpp"
#include "quec/gates.hpp"
#include "quec/noise.hpp"
#include "quec/pauli.hpp"
#include "quec/rng.hpp"

using namespace quec;

namespace {

Mat random_unitary(int dim, Rng& rng) {
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Mat> qr(g);
    return qr.householderQ() * Mat::Identity(dim, dim);
}

QuditState random_state(int d, int n, Rng& rng) {
    Vec v(static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), static_cast<std::size_t>(n))));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(rng.normal(), rng.normal());
    QuditState s(d, n, v);
    s.normalize();
    return s;
}

// Oracle: full Kronecker embedding of a one-qudit operator.
Mat embed_one(const Mat& op, int d, int n, int q) {
    std::vector<Mat> f;
    for (int i = 0; i < n; ++i) f.push_back(i == q ? op : Mat::Identity(d, d));
    return kron_all(f);
}

// Oracle fidelity via the square-root form tr[sqrt(sqrt(rho) sigma sqrt(rho))]^2.
// Square roots of rank-deficient matrices lose about half the digits, hence 1e-7.
double sqrt_fidelity(const Mat& rho, const Mat& sigma) {
    auto msqrt = [](const Mat& m) {
        Eigen::SelfAdjointEigenSolver<Mat> es(m);
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return Mat(es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
    };
    Mat r = msqrt(rho);
    double t = msqrt(r * sigma * r).trace().real();
    return t * t;
}

}  // namespace

TEST(Core, IdentityLeavesStateUnchanged) {
    Rng rng(1);
    auto s = random_state(3, 2, rng);
    auto out = apply_unitary(s, UnitaryOp::identity(3), {1});
    EXPECT_LT((out.amps - s.amps).norm(), 1e-15);
}

TEST(Core, HadamardOnZero) {
    Circuit c(2, 1);
    c.h(0);
    auto out = apply_circuit(QuditState::zero(2, 1), c);
    EXPECT_NEAR(out.amps(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(out.amps(1).real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Core, QutritShiftWrapsTwoToZero) {
    // Oracle: explicit shift matrix with X|k> = |k+1 mod 3>.
    Mat x = Mat::Zero(3, 3);
    for (int k = 0; k < 3; ++k) x((k + 1) % 3, k) = 1.0;
    auto s = QuditState::basis(3, 1, 2);
    Vec oracle = x * s.amps;
    auto out = apply_unitary(s, UnitaryOp(dense_single(3, 1, 0)), {0});
    EXPECT_LT((out.amps - oracle).norm(), 1e-15);
    EXPECT_NEAR(std::abs(out.amps(0)), 1.0, 1e-15);
}

TEST(Core, EmbeddingMatchesKroneckerOracle) {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        int d = trial % 2 ? 3 : 2;
        int n = 3;
        int q = static_cast<int>(rng.below(3));
        Mat u = random_unitary(d, rng);
        auto s = random_state(d, n, rng);
        Vec oracle = embed_one(u, d, n, q) * s.amps;
        auto out = apply_unitary(s, UnitaryOp(u), {q});
        EXPECT_LT((out.amps - oracle).norm(), 1e-12);
    }
}

TEST(Core, TwoQuditTargetOrderMatchesPermutedOracle) {
    Rng rng(3);
    Mat u = random_unitary(4, rng);
    auto s = random_state(2, 3, rng);
    // targets {2, 0}: target 2 is the most significant local digit.
    Mat full = Mat::Zero(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            int bi[3] = {(i >> 2) & 1, (i >> 1) & 1, i & 1};
            int bj[3] = {(j >> 2) & 1, (j >> 1) & 1, j & 1};
            if (bi[1] != bj[1]) continue;
            full(i, j) = u(bi[2] * 2 + bi[0], bj[2] * 2 + bj[0]);
        }
    auto out = apply_unitary(s, UnitaryOp(u), {2, 0});
    EXPECT_LT((out.amps - full * s.amps).norm(), 1e-12);
}

TEST(Core, RejectsBadTargets) {
    auto s = QuditState::zero(2, 2);
    Mat cn = Mat::Identity(4, 4);
    EXPECT_THROW(apply_unitary(s, UnitaryOp(cn), {0, 0}), std::invalid_argument);
    EXPECT_THROW(apply_unitary(s, UnitaryOp(Mat::Identity(2, 2)), {2}), std::out_of_range);
    EXPECT_THROW(apply_unitary(s, UnitaryOp(cn), {0}), std::invalid_argument);
}

TEST(Core, NormPreservationProperty) {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        int d = 2 + static_cast<int>(rng.below(2));
        int n = 1 + static_cast<int>(rng.below(3));
        auto s = random_state(d, n, rng);
        int q = static_cast<int>(rng.below(static_cast<std::size_t>(n)));
        auto out = apply_unitary(s, UnitaryOp(random_unitary(d, rng)), {q});
        EXPECT_NEAR(out.norm(), 1.0, 1e-12);
    }
}

TEST(Core, AmplitudeBudget) {
    EXPECT_NO_THROW(checked_dim(2, 20));
    EXPECT_THROW(checked_dim(2, 21), std::length_error);
    EXPECT_THROW(checked_dim(3, 13), std::length_error);
    EXPECT_NO_THROW(checked_dim(3, 12));
}

TEST(Core, IdentityChannel) {
    Rng rng(5);
    auto rho = DensityOp::pure(random_state(2, 2, rng));
    KrausChannel id({Mat::Identity(2, 2)});
    auto out = apply_channel(rho, id, {1});
    EXPECT_LT((out.mat - rho.mat).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Core, DeterministicBitFlip) {
    auto rho = DensityOp::pure(QuditState::zero(2, 1));
    KrausChannel flip({Mat::Zero(2, 2), dense_single(2, 1, 0)});
    auto out = apply_channel(rho, flip);
    EXPECT_NEAR(out.mat(1, 1).real(), 1.0, 1e-15);
    EXPECT_NEAR(out.mat(0, 0).real(), 0.0, 1e-15);
}

TEST(Core, QutritChannelAtZeroIsIdentity) {
    Rng rng(6);
    auto rho = DensityOp::pure(random_state(3, 1, rng));
    auto out = apply_channel(rho, kraus_at(AlphaChannel::qutrit(0.0, 0.0, 0.3), 0.0));
    EXPECT_LT((out.mat - rho.mat).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Core, RejectsNonTracePreservingChannel) {
    EXPECT_THROW(KrausChannel({0.5 * Mat::Identity(2, 2)}), std::invalid_argument);
}

TEST(Core, ChannelTracePreservationProperty) {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        double t = rng.uniform();
        auto rho = DensityOp::pure(random_state(2, 2, rng));
        auto out = apply_channel(rho, kraus_at(AlphaChannel::qubit(0.2, 0.3), t), {0});
        EXPECT_NEAR(out.mat.trace().real(), 1.0, 1e-10);
        EXPECT_TRUE(out.valid(1e-10));
        auto rho3 = DensityOp::pure(random_state(3, 2, rng));
        auto out3 = apply_channel(rho3, kraus_at(AlphaChannel::qutrit(0.1, 0.15, 0.3), t), {1});
        EXPECT_NEAR(out3.mat.trace().real(), 1.0, 1e-10);
        EXPECT_TRUE(out3.valid(1e-10));
    }
}

TEST(Core, TrajectoryIdentityChannel) {
    Rng rng(8);
    auto s = random_state(2, 1, rng);
    KrausChannel id({Mat::Identity(2, 2)});
    for (int i = 0; i < 10; ++i) {
        auto [out, k] = sample_trajectory(s, id, rng);
        EXPECT_EQ(k, 0u);
        EXPECT_LT((out.amps - s.amps).norm(), 1e-15);
    }
}

TEST(Core, TrajectoryBranchFrequency) {
    Rng rng(9);
    KrausChannel flip({std::sqrt(0.5) * Mat::Identity(2, 2), std::sqrt(0.5) * dense_single(2, 1, 0)});
    auto s = QuditState::zero(2, 1);
    int ones = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) ones += sample_trajectory(s, flip, rng).second == 1 ? 1 : 0;
    EXPECT_NEAR(static_cast<double>(ones) / trials, 0.5, 0.01);
}

TEST(Core, TrajectoryAlphaZeroBranchIsBitFlip) {
    Rng rng(10);
    auto ch = kraus_at(AlphaChannel::qubit(0.2, 0.3), 0.0);
    // Oracle: the dense sqrt(p) X.
    EXPECT_LT((ch.ops[1] - std::sqrt(0.2) * dense_single(2, 1, 0)).cwiseAbs().maxCoeff(), 1e-12);
    auto s = QuditState::zero(2, 1);
    for (int i = 0; i < 200; ++i) {
        auto [out, k] = sample_trajectory(s, ch, rng);
        if (k == 1) {
            EXPECT_NEAR(std::abs(out.amps(1)), 1.0, 1e-12);
            return;
        }
    }
    FAIL() << "branch 1 never sampled";
}

TEST(Core, TrajectoryRejectsZeroChannel) {
    Rng rng(11);
    KrausChannel bad;
    bad.ops = {Mat::Zero(2, 2)};
    EXPECT_THROW(sample_trajectory(QuditState::zero(2, 1), bad, rng), std::runtime_error);
}

TEST(Core, FidelityExamples) {
    Rng rng(12);
    auto phi = random_state(2, 1, rng);
    EXPECT_NEAR(fidelity(DensityOp::pure(phi), phi), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(DensityOp::pure(QuditState::basis(2, 1, 0)), QuditState::basis(2, 1, 1)), 0.0, 1e-15);
    DensityOp mixed(2, 1, 0.5 * Mat::Identity(2, 2));
    EXPECT_NEAR(fidelity(mixed, phi), 0.5, 1e-12);
    EXPECT_NEAR(sqrt_fidelity(mixed.mat, DensityOp::pure(phi).mat), 0.5, 1e-7);
    QuditState shifted(2, 1, cplx(0, 1) * phi.amps);
    EXPECT_NEAR(fidelity(DensityOp::pure(phi), shifted), 1.0, 1e-12);
    EXPECT_THROW(fidelity(mixed, QuditState::zero(2, 2)), std::invalid_argument);
}

TEST(Core, FidelityMatchesSquareRootOracle) {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_state(3, 1, rng), b = random_state(3, 1, rng), target = random_state(3, 1, rng);
        double w = rng.uniform();
        Mat rho = w * DensityOp::pure(a).mat + (1 - w) * DensityOp::pure(b).mat;
        EXPECT_NEAR(fidelity(DensityOp(3, 1, rho), target), sqrt_fidelity(rho, DensityOp::pure(target).mat), 1e-7);
    }
}

TEST(Core, MonteCarloAgreesWithExact) {
    Rng rng(14);
    auto ch = kraus_at(AlphaChannel::qubit(0.3, 0.3), 0.04);
    auto psi = random_state(2, 1, rng);
    auto target = random_state(2, 1, rng);
    double exact = fidelity(apply_channel(DensityOp::pure(psi), ch), target);
    const int trials = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < trials; ++i) {
        double f = fidelity(sample_trajectory(psi, ch, rng).first, target);
        sum += f;
        sum2 += f * f;
    }
    double mean = sum / trials;
    double sigma = std::sqrt((sum2 / trials - mean * mean) / trials);
    EXPECT_LT(std::abs(mean - exact), 3.0 * sigma + 1e-12);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
    Rng a(42, 3), b(42, 3), c(42, 4);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
    Rng a2(42, 3);
    EXPECT_NE(a2.next_u64(), c.next_u64());
}

TEST(Rng, UniformMoments) {
    Rng r(7);
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 0.005);
    EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 0.002);
}

TEST(Rng, CategoricalRejectsZeroWeights) {
    Rng r(1);
    EXPECT_THROW(r.categorical({0.0, 0.0}), std::runtime_error);
}
