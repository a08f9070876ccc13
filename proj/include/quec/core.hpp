#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "quec/rng.hpp"

namespace quec {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Global numeric tolerances. `validation` guards invariants of constructed
// objects, `identity` is used where an algebraic identity should hold to
// rounding error.
struct Tolerances {
    double validation = 1e-10;
    double identity = 1e-12;
};
Tolerances& tolerances();

// Largest n*log2(d) the dense representation accepts.
inline constexpr double kAmplitudeBudgetBits = 20.0;

std::size_t ipow(std::size_t base, std::size_t exp);
// Throws if d^n exceeds the amplitude budget.
std::size_t checked_dim(int d, int n);

struct QuditState {
    int d = 2;
    int n = 0;
    Vec amps;

    QuditState() = default;
    QuditState(int d_, int n_, Vec amps_);

    static QuditState basis(int d, int n, std::size_t index);
    static QuditState zero(int d, int n) { return basis(d, n, 0); }

    std::size_t dim() const { return static_cast<std::size_t>(amps.size()); }
    double norm() const { return amps.norm(); }
    QuditState& normalize();
};

struct DensityOp {
    int d = 2;
    int n = 0;
    Mat mat;

    DensityOp() = default;
    DensityOp(int d_, int n_, Mat mat_);
    static DensityOp pure(const QuditState& s);

    // Hermitian, unit trace, eigenvalues >= -tol.
    bool valid(double tol) const;
};

struct UnitaryOp {
    Mat mat;

    UnitaryOp() = default;
    // Throws if mat is not unitary within the validation tolerance.
    explicit UnitaryOp(Mat m);
    static UnitaryOp identity(std::size_t dim) { return UnitaryOp(Mat::Identity(dim, dim)); }

    std::size_t dim() const { return static_cast<std::size_t>(mat.rows()); }
};

bool is_unitary(const Mat& m, double tol);

struct KrausChannel {
    std::vector<Mat> ops;

    KrausChannel() = default;
    // Throws if sum_k E_k^dag E_k != I within the validation tolerance.
    explicit KrausChannel(std::vector<Mat> ops_);

    std::size_t dim() const { return ops.empty() ? 0 : static_cast<std::size_t>(ops.front().rows()); }
    double completeness_error() const;
};

// Embeds `op` (dimension d^len(targets)) on the target qudits. Qudit 0 is the
// most significant digit of the basis index.
Vec apply_local(const Vec& v, int d, int n, const Mat& op, const std::vector<int>& targets);

QuditState apply_unitary(const QuditState& state, const UnitaryOp& u, const std::vector<int>& targets);
QuditState apply_unitary(const QuditState& state, const UnitaryOp& u);

DensityOp apply_channel(const DensityOp& rho, const KrausChannel& ch, const std::vector<int>& targets);
DensityOp apply_channel(const DensityOp& rho, const KrausChannel& ch);

// Samples branch k with probability ||E_k psi||^2 and returns the renormalized
// post-branch state.
std::pair<QuditState, std::size_t> sample_trajectory(const QuditState& state, const KrausChannel& ch,
                                                      const std::vector<int>& targets, Rng& rng);
std::pair<QuditState, std::size_t> sample_trajectory(const QuditState& state, const KrausChannel& ch, Rng& rng);

// <target|rho|target>, clamped into [0, 1].
double fidelity(const DensityOp& rho, const QuditState& target);
double fidelity(const QuditState& psi, const QuditState& target);

Mat kron(const Mat& a, const Mat& b);
Mat kron_all(const std::vector<Mat>& factors);

}  // namespace quec
