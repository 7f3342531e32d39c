// operators.hpp: Collective spin and bosonic operators; matrix-free Tavis–Cummings and Rabi–Dicke actions

#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "catqed/hilbert.hpp"

namespace catqed {

struct ModelParams {
    double delta = 1.0;  // level spacing Δ
    double omega = 1.0;  // photon frequency ω
    double gamma = 0.0;  // dimensionless coupling γ
    double mu = 1.0;     // dipole moment μ
    int N = 1;
    bool rwa = true;     // true: Tavis–Cummings, false: Rabi–Dicke

    void validate() const {
        if (!(gamma >= 0.0)) throw ConfigError("ModelParams: gamma must be >= 0");
        if (!(delta > 0.0)) throw ConfigError("ModelParams: delta must be > 0");
        if (!(omega > 0.0)) throw ConfigError("ModelParams: omega must be > 0");
        if (N < 1) throw ConfigError("ModelParams: N must be >= 1");
    }

    // Prefactor of -i(a - a†)(J+ + J-) in the light-matter term; RWA keeps aJ+ and a†J-.
    double half_coupling() const { return 0.5 * gamma * omega * mu; }
};

// Dicke-basis matrices and ladder coefficients for J = N/2.
// ladder[k] = s+(m_k) = sqrt(J(J+1) - m_k(m_k+1)), the |k> -> |k+1> amplitude of J+.
struct CollectiveSpin {
    int N = 0;
    double J = 0.0;
    std::vector<double> m;
    std::vector<double> ladder;
    Matrix Jx, Jy, Jz, Jplus, Jminus;

    explicit CollectiveSpin(int n_qubits) : N(n_qubits), J(0.5 * n_qubits) {
        const int d = N + 1;
        m.resize(d);
        ladder.assign(d, 0.0);
        for (int k = 0; k < d; ++k) m[k] = -J + k;
        for (int k = 0; k + 1 < d; ++k) ladder[k] = std::sqrt(J * (J + 1.0) - m[k] * (m[k] + 1.0));
        Jplus = Matrix::Zero(d, d);
        for (int k = 0; k + 1 < d; ++k) Jplus(k + 1, k) = ladder[k];
        Jminus = Jplus.adjoint();
        Jz = Matrix::Zero(d, d);
        for (int k = 0; k < d; ++k) Jz(k, k) = m[k];
        Jx = 0.5 * (Jplus + Jminus);
        Jy = Complex(0.0, -0.5) * (Jplus - Jminus);
    }

    const Matrix& axis(int a) const { return a == 0 ? Jx : (a == 1 ? Jy : Jz); }
};

// Shared, read-only after construction.
inline const CollectiveSpin& collective_spin(int N) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<CollectiveSpin>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[N];
    if (!slot) slot = std::make_unique<CollectiveSpin>(N);
    return *slot;
}

// Precomputed coefficient tables for one (params, n_max); applies H to raw amplitudes.
class HamiltonianAction {
public:
    HamiltonianAction(const ModelParams& p, int n_max)
        : params_(p), spin_(collective_spin(p.N)), n_max_(n_max), sqrt_n_(n_max + 2) {
        p.validate();
        for (int n = 0; n < n_max + 2; ++n) sqrt_n_[n] = std::sqrt(static_cast<double>(n));
    }

    const ModelParams& params() const { return params_; }
    int n_max() const { return n_max_; }

    // out = H in. Both (N+1) x (n_max+1), row-major. Rows are filled independently in fixed order.
    void apply(const Amplitudes& in, Amplitudes& out) const {
        const int d = params_.N + 1;
        const int np = n_max_ + 1;
        if (in.rows() != d || in.cols() != np)
            throw std::invalid_argument("HamiltonianAction: dimension mismatch");
        out.resize(d, np);
        const Complex mig(0.0, -params_.half_coupling());
        const double w = params_.omega;
        const bool counter = !params_.rwa;
        for (int k = 0; k < d; ++k) {
            const Complex* row = in.data() + static_cast<std::ptrdiff_t>(k) * np;
            const Complex* below = k > 0 ? row - np : nullptr;   // m - 1
            const Complex* above = k + 1 < d ? row + np : nullptr;  // m + 1
            Complex* o = out.data() + static_cast<std::ptrdiff_t>(k) * np;
            const double em = params_.delta * spin_.m[k];
            const double lo = k > 0 ? spin_.ladder[k - 1] : 0.0;  // s+(m-1) = s-(m)
            const double hi = k + 1 < d ? spin_.ladder[k] : 0.0;  // s-(m+1) = s+(m)
            for (int n = 0; n < np; ++n) {
                Complex acc = (em + w * n) * row[n];
                Complex cpl(0.0, 0.0);
                // a J+ from (m-1, n+1); -a† J- from (m+1, n-1)
                if (below && n + 1 < np) cpl += (lo * sqrt_n_[n + 1]) * below[n + 1];
                if (above && n > 0) cpl -= (hi * sqrt_n_[n]) * above[n - 1];
                if (counter) {
                    // a J- from (m+1, n+1); -a† J+ from (m-1, n-1)
                    if (above && n + 1 < np) cpl += (hi * sqrt_n_[n + 1]) * above[n + 1];
                    if (below && n > 0) cpl -= (lo * sqrt_n_[n]) * below[n - 1];
                }
                o[n] = acc + mig * cpl;
            }
        }
    }

private:
    ModelParams params_;
    const CollectiveSpin& spin_;
    int n_max_;
    std::vector<double> sqrt_n_;
};

inline void check_dims(const CompositeState& state, const ModelParams& p) {
    if (state.N() != p.N)
        throw std::invalid_argument("dimension mismatch: state has N=" + std::to_string(state.N()) +
                                    ", params have N=" + std::to_string(p.N));
}

// Unnormalized image H|Ψ>.
inline CompositeState apply_hamiltonian(const CompositeState& state, const ModelParams& p) {
    check_dims(state, p);
    HamiltonianAction h(p, state.n_max());
    Amplitudes out;
    h.apply(state.amplitudes(), out);
    return CompositeState(p.N, std::move(out), state.time());
}

// Electronic Hamiltonian with the field operator replaced by the c-number alpha.
inline Vector apply_electronic_hamiltonian(const Vector& psi, const ModelParams& p, Complex alpha) {
    const CollectiveSpin& s = collective_spin(p.N);
    const int d = p.N + 1;
    if (psi.size() != d) throw std::invalid_argument("apply_electronic_hamiltonian: dimension mismatch");
    const Complex mig(0.0, -p.half_coupling());
    const Complex ac = std::conj(alpha);
    Vector out(d);
    for (int k = 0; k < d; ++k) {
        const double lo = k > 0 ? s.ladder[k - 1] : 0.0;
        const double hi = k + 1 < d ? s.ladder[k] : 0.0;
        const Complex from_below = k > 0 ? lo * psi[k - 1] : Complex(0.0);
        const Complex from_above = k + 1 < d ? hi * psi[k + 1] : Complex(0.0);
        Complex cpl = alpha * from_below - ac * from_above;
        if (!p.rwa) cpl += alpha * from_above - ac * from_below;
        out[k] = p.delta * s.m[k] * psi[k] + mig * cpl;
    }
    return out;
}

enum class Observable { PhotonNumber, Jz, Jx, Jy, Energy, ExcitationNumber };

inline std::string to_string(Observable o) {
    switch (o) {
        case Observable::PhotonNumber: return "photon_number";
        case Observable::Jz: return "jz";
        case Observable::Jx: return "jx";
        case Observable::Jy: return "jy";
        case Observable::Energy: return "energy";
        case Observable::ExcitationNumber: return "excitation_number";
    }
    return "?";
}

inline double expect_photon_number(const CompositeState& state) {
    const Amplitudes& c = state.amplitudes();
    double acc = 0.0;
    for (int n = 1; n < c.cols(); ++n) acc += n * c.col(n).squaredNorm();
    return acc;
}

inline double expect_jz(const CompositeState& state) {
    const CollectiveSpin& s = collective_spin(state.N());
    const Amplitudes& c = state.amplitudes();
    double acc = 0.0;
    for (int k = 0; k < c.rows(); ++k) acc += s.m[k] * c.row(k).squaredNorm();
    return acc;
}

// <J+> = <Jx> + i<Jy>.
inline Complex expect_jplus(const CompositeState& state) {
    const CollectiveSpin& s = collective_spin(state.N());
    const Amplitudes& c = state.amplitudes();
    Complex acc(0.0, 0.0);
    for (int k = 0; k + 1 < c.rows(); ++k)
        acc += s.ladder[k] * c.row(k + 1).conjugate().cwiseProduct(c.row(k)).sum();
    return acc;
}

inline double expectation(const CompositeState& state, Observable obs, const ModelParams& p) {
    switch (obs) {
        case Observable::PhotonNumber: return expect_photon_number(state);
        case Observable::Jz: return expect_jz(state);
        case Observable::Jx: return expect_jplus(state).real();
        case Observable::Jy: return expect_jplus(state).imag();
        case Observable::ExcitationNumber: return expect_jz(state) + expect_photon_number(state) + 0.5 * state.N();
        case Observable::Energy: {
            check_dims(state, p);
            HamiltonianAction h(p, state.n_max());
            Amplitudes hc;
            h.apply(state.amplitudes(), hc);
            return (state.amplitudes().conjugate().cwiseProduct(hc)).sum().real();
        }
    }
    return 0.0;
}

}  // namespace catqed
