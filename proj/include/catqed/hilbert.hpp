// hilbert.hpp: Truncated Dicke ⊗ Fock space, joint state vector, electronic density matrix

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

#include "catqed/errors.hpp"

namespace catqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Row k holds the Fock amplitudes of Dicke state m = -J + k, contiguous in n.
using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kDefaultTailTolerance = 1e-8;
inline constexpr int kTailWindow = 10;

// Maximal-spin sector J = N/2 of N two-level emitters.
struct DickeSpace {
    int N = 1;

    explicit DickeSpace(int n_qubits) : N(n_qubits) {
        if (N < 1) throw ConfigError("DickeSpace: N must be >= 1");
    }

    double J() const { return 0.5 * N; }
    int dim() const { return N + 1; }
    double m(int index) const { return -J() + index; }
    int index(double m_value) const { return static_cast<int>(std::lround(m_value + J())); }
};

struct FockSpace {
    int n_max = 0;

    explicit FockSpace(int cutoff) : n_max(cutoff) {
        if (n_max < 0) throw ConfigError("FockSpace: n_max must be >= 0");
    }

    int dim() const { return n_max + 1; }
};

// Joint electron-photon wave function c[m-index][n] at a given time (units 1/Δ).
class CompositeState {
public:
    CompositeState(int N, int n_max)
        : dicke_(N), fock_(n_max), amps_(Amplitudes::Zero(dicke_.dim(), fock_.dim())) {}

    CompositeState(int N, Amplitudes amps, double t = 0.0)
        : dicke_(N), fock_(static_cast<int>(amps.cols()) - 1), amps_(std::move(amps)), time_(t) {
        if (amps_.rows() != dicke_.dim())
            throw std::invalid_argument("CompositeState: row count must equal N+1");
    }

    const DickeSpace& dicke() const { return dicke_; }
    const FockSpace& fock() const { return fock_; }
    int N() const { return dicke_.N; }
    int n_max() const { return fock_.n_max; }

    const Amplitudes& amplitudes() const { return amps_; }
    Amplitudes& amplitudes() { return amps_; }

    Complex operator()(int m_index, int n) const { return amps_(m_index, n); }
    Complex& operator()(int m_index, int n) { return amps_(m_index, n); }

    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double norm_squared() const { return amps_.squaredNorm(); }

    void normalize() {
        const double nrm = std::sqrt(norm_squared());
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw NumericalError("CompositeState: cannot normalize (norm = " + std::to_string(nrm) + ")");
        amps_ /= nrm;
    }

    bool all_finite() const { return amps_.allFinite(); }

    // Population in the top `window` Fock levels; the truncation health indicator.
    double tail_population(int window = kTailWindow) const {
        const int first = std::max(0, fock_.n_max - window);
        return amps_.rightCols(fock_.dim() - first).squaredNorm();
    }

    bool same_shape(const CompositeState& other) const {
        return N() == other.N() && n_max() == other.n_max();
    }

private:
    DickeSpace dicke_;
    FockSpace fock_;
    Amplitudes amps_;
    double time_ = 0.0;
};

// Normalized electronic density matrix in the Dicke basis (m ordered from -J).
class ElectronDensityMatrix {
public:
    ElectronDensityMatrix() = default;

    // Validates and hermitizes. Tolerances: Hermitian 1e-12 (relative), trace 1e-12, eigenvalues >= -1e-10.
    explicit ElectronDensityMatrix(Matrix rho, double tol = 1e-12) : rho_(std::move(rho)) {
        if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
            throw std::invalid_argument("ElectronDensityMatrix: must be square and non-empty");
        if (!rho_.allFinite()) throw NumericalError("ElectronDensityMatrix: non-finite entries");
        const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
        if (herm > tol * std::max(1.0, rho_.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("ElectronDensityMatrix: not Hermitian (deviation " + std::to_string(herm) + ")");
        rho_ = 0.5 * (rho_ + rho_.adjoint());
        const double tr = rho_.trace().real();
        if (std::abs(tr - 1.0) > tol)
            throw std::invalid_argument("ElectronDensityMatrix: trace " + std::to_string(tr) + " != 1");
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw std::invalid_argument("ElectronDensityMatrix: negative eigenvalue " +
                                        std::to_string(es.eigenvalues().minCoeff()));
    }

    static ElectronDensityMatrix from_pure(const Vector& psi) {
        const double nrm2 = psi.squaredNorm();
        if (std::abs(nrm2 - 1.0) > 1e-10)
            throw std::invalid_argument("ElectronDensityMatrix::from_pure: state not normalized");
        return ElectronDensityMatrix(psi * psi.adjoint() / nrm2);
    }

    const Matrix& matrix() const { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }
    int N() const { return dim() - 1; }
    Complex operator()(int i, int j) const { return rho_(i, j); }

private:
    Matrix rho_;
};

// rho[m][m'] = Σ_n c[m][n] conj(c[m'][n]).
inline ElectronDensityMatrix reduce_to_electron(const CompositeState& state) {
    const Amplitudes& c = state.amplitudes();
    Matrix rho = c * c.adjoint();
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > kNormTolerance)
        throw std::invalid_argument("reduce_to_electron: state not normalized");
    return ElectronDensityMatrix(std::move(rho));
}

}  // namespace catqed
