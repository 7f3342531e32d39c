// oracles.hpp: independent reference implementations for the unit tests
//
// Nothing here calls into the matrix-free code paths: Hamiltonians are assembled densely from Kronecker
// products, evolution uses a full eigendecomposition, QFI comes from the Bures fidelity.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <random>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Dicke-basis spin matrices for J = N/2, basis ordered m = -J..J.
struct Spin {
    Mat jp, jm, jx, jy, jz;
};

inline Spin spin(int N) {
    const double J = 0.5 * N;
    const int d = N + 1;
    Spin s;
    s.jp = Mat::Zero(d, d);
    s.jz = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = -J + k;
        s.jz(k, k) = m;
        if (k + 1 < d) s.jp(k + 1, k) = std::sqrt((J - m) * (J + m + 1.0));
    }
    s.jm = s.jp.adjoint();
    s.jx = 0.5 * (s.jp + s.jm);
    s.jy = Complex(0, -0.5) * (s.jp - s.jm);
    return s;
}

inline Mat annihilation(int n_max) {
    Mat a = Mat::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

inline Mat kron(const Mat& A, const Mat& B) {
    Mat out(A.rows() * B.rows(), A.cols() * B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

// H = Δ Jz + ω a†a - E·P with E = iγω(a - a†), P = μ Jx. Under the RWA the interaction keeps only
// the energy-conserving pair a J+ and a† J-. Index = k (n_max+1) + n.
inline Mat hamiltonian(int N, int n_max, double gamma, bool rwa, double delta = 1.0, double omega = 1.0, double mu = 1.0) {
    const Spin s = spin(N);
    const Mat a = annihilation(n_max);
    const Mat ad = a.adjoint();
    const Mat Ie = Mat::Identity(N + 1, N + 1), Ip = Mat::Identity(n_max + 1, n_max + 1);
    Mat H = delta * kron(s.jz, Ip) + omega * kron(Ie, ad * a);
    const Complex c(0.0, -0.5 * gamma * omega * mu);
    if (rwa)
        H += c * (kron(s.jp, a) - kron(s.jm, ad));
    else
        H += c * kron(s.jp + s.jm, a - ad);
    return H;
}

inline Vec evolve(const Mat& H, const Vec& psi, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    Vec ph(H.rows());
    for (int i = 0; i < H.rows(); ++i) ph[i] = std::polar(1.0, -es.eigenvalues()[i] * t);
    return es.eigenvectors() * ph.asDiagonal() * (es.eigenvectors().adjoint() * psi);
}

inline Mat expm_hermitian(const Mat& H, Complex scale) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    Vec ph(H.rows());
    for (int i = 0; i < H.rows(); ++i) ph[i] = std::exp(scale * es.eigenvalues()[i]);
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Plain power series, for small well-conditioned arguments.
inline Mat expm_series(const Mat& A, int terms = 80) {
    Mat out = Mat::Identity(A.rows(), A.cols()), term = out;
    for (int k = 1; k < terms; ++k) {
        term = term * A / double(k);
        out += term;
    }
    return out;
}

// ρ_e[i][j] = Σ_n ψ[i,n] conj(ψ[j,n]) by explicit loops over the flat vector.
inline Mat partial_trace(const Vec& psi, int N, int n_max) {
    const int d = N + 1, p = n_max + 1;
    Mat rho = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int n = 0; n < p; ++n) rho(i, j) += psi[i * p + n] * std::conj(psi[j * p + n]);
    return rho;
}

inline Mat sqrtm_psd(const Mat& A) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.adjoint()));
    Eigen::VectorXd l = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * l.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

// Uhlmann fidelity (Tr √(√ρ σ √ρ))².
inline double fidelity(const Mat& rho, const Mat& sigma) {
    const Mat s = sqrtm_psd(rho);
    const Mat inner = sqrtm_psd(s * sigma * s);
    const double tr = inner.trace().real();
    return tr * tr;
}

// F_Q along unit direction n from the Bures distance: F = 8(1 - √F(ρ, ρ_ε))/ε², symmetric difference.
inline double qfi_along(const Mat& rho, int N, const Eigen::Vector3d& n, double eps = 1e-2) {
    const Spin s = spin(N);
    const Mat G = n[0] * s.jx + n[1] * s.jy + n[2] * s.jz;
    auto bures = [&](double e) {
        const Mat U = expm_hermitian(G, Complex(0.0, -e));
        return 8.0 * (1.0 - std::sqrt(fidelity(rho, U * rho * U.adjoint()))) / (e * e);
    };
    // Richardson step cancels the O(ε²) term.
    return (4.0 * bures(eps) - bures(2.0 * eps)) / 3.0;
}

inline Vec random_state(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
    return v.normalized();
}

inline Mat random_density(int dim, int rank, std::mt19937_64& rng) {
    Mat rho = Mat::Zero(dim, dim);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int r = 0; r < rank; ++r) {
        const Vec v = random_state(dim, rng);
        rho += u(rng) * v * v.adjoint();
    }
    return rho / rho.trace().real();
}

inline Mat random_unitary(int dim, std::mt19937_64& rng) {
    Mat A(dim, dim);
    std::normal_distribution<double> g;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<Mat> qr(A);
    return qr.householderQ();
}

// Frozen values from sympy.physics.quantum.cg (20 significant digits).
namespace frozen {

struct CgValue {
    double j1, m1, j2, m2, J, M, value;
};

inline const CgValue kCg[] = {
    {16, -16, 1, 0, 16, -16, -0.97014250014533189408},
    {16, 3, 7, 0, 16, 3, -0.29244140633202385326},
    {16, 0, 16, 0, 16, 0, 0.21099784824656971525},
    {16, -5, 32, 0, 16, -5, -0.067910309140642292751},
    {16, 16, 32, 0, 16, 16, 5.2633662341163702230e-10},
    {16, 10, 13, 0, 16, 10, 0.082291755420458467511},
    {1, 1, 0.5, -0.5, 1.5, 0.5, 0.57735026918962576451},
    {0.5, 0.5, 0.5, -0.5, 1, 0, 0.70710678118654752440},
    {1, 1, 1, -1, 2, 0, 0.40824829046386301637},
};

// Kernel weights Δ_{J,m}, m = -J..J.
inline const double kDeltaN2[] = {0.15327282884151569760, -0.72075922005612644400, 1.5674863912146107464};
inline const double kDeltaN3[] = {-0.067734496711145910803, 0.38474580577962413802, -1.0027797945295189862,
                                  1.6857684854610407590};

}  // namespace frozen

}  // namespace oracle
