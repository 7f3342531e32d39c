// qfi.hpp: Quantum Fisher information over collective-spin directions n·J
//
// Mixed states use the spectral formula
//   F^{ab} = Σ_{ij} 2(λi-λj)²/(λi+λj) <i|J^a|j><j|J^b|i>,
// pure states use 4·Cov(J^a, J^b). The QFI is the top eigenvalue of the 3×3 matrix,
// the optimal direction its eigenvector.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>

#include "catqed/hilbert.hpp"
#include "catqed/operators.hpp"

namespace catqed {

inline constexpr double kQfiPairThreshold = 1e-12;

struct QfiResult {
    double value = 0.0;
    Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();
    Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();

    double density(int N) const { return value / N; }
};

namespace detail {

inline QfiResult top_direction(const Eigen::Matrix3d& F) {
    const Eigen::Matrix3d sym = 0.5 * (F + F.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sym);
    QfiResult r;
    r.matrix = sym;
    r.value = es.eigenvalues()(2);
    r.direction = es.eigenvectors().col(2);
    // Fix the sign so the direction is reproducible.
    int big = 0;
    r.direction.cwiseAbs().maxCoeff(&big);
    if (r.direction(big) < 0) r.direction = -r.direction;
    return r;
}

}  // namespace detail

inline QfiResult qfi_mixed(const ElectronDensityMatrix& rho, double pair_threshold = kQfiPairThreshold) {
    const int N = rho.N();
    const CollectiveSpin& s = collective_spin(N);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    if (es.info() != Eigen::Success) throw NumericalError("qfi_mixed: eigendecomposition failed");

    RealVector lam = es.eigenvalues().cwiseMax(0.0);
    lam /= lam.sum();
    const Matrix& V = es.eigenvectors();
    const int d = rho.dim();

    std::array<Matrix, 3> X;
    for (int a = 0; a < 3; ++a) X[a] = V.adjoint() * s.axis(a) * V;

    Eigen::Matrix3d F = Eigen::Matrix3d::Zero();
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double sum = lam[i] + lam[j];
            if (sum <= pair_threshold) continue;
            const double diff = lam[i] - lam[j];
            if (diff == 0.0) continue;
            const double w = 2.0 * diff * diff / sum;
            for (int a = 0; a < 3; ++a)
                for (int b = a; b < 3; ++b) F(a, b) += w * (X[a](i, j) * X[b](j, i)).real();
        }
    }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < a; ++b) F(a, b) = F(b, a);
    return detail::top_direction(F);
}

inline QfiResult qfi_pure(const Vector& psi) {
    const int d = static_cast<int>(psi.size());
    if (d < 2) throw std::invalid_argument("qfi_pure: need at least two Dicke levels");
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-10) throw std::invalid_argument("qfi_pure: state not normalized");
    const CollectiveSpin& s = collective_spin(d - 1);
    std::array<Vector, 3> Jpsi;
    Eigen::Vector3d mean;
    for (int a = 0; a < 3; ++a) {
        Jpsi[a] = s.axis(a) * psi;
        mean(a) = psi.dot(Jpsi[a]).real();
    }
    Eigen::Matrix3d C;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) C(a, b) = Jpsi[a].dot(Jpsi[b]).real() - mean(a) * mean(b);
    return detail::top_direction(4.0 * C);
}

// Smallest entanglement depth certified by F_Q: F_Q/N > k rules out k-producibility.
inline int entanglement_depth_bound(double fq, int N, double tol = 1e-9) {
    if (fq < 0.0) throw std::invalid_argument("entanglement_depth_bound: F_Q must be >= 0");
    const double ratio = fq / N;
    int k = static_cast<int>(std::ceil(ratio - tol));
    return std::clamp(k, 1, N);
}

}  // namespace catqed
