// wigner.hpp: SU(2) spin Wigner function on the sphere via the Dicke-state kernel

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "catqed/hilbert.hpp"
#include "catqed/operators.hpp"

namespace catqed {

namespace detail {

// Twice a half-integer, or throws.
inline int twice(double j, const char* what) {
    const double t = 2.0 * j;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9) throw std::invalid_argument(std::string("clebsch_gordan: ") + what + " is not a half-integer");
    return static_cast<int>(r);
}

inline long double log_fact(int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); }

}  // namespace detail

// <j1 m1; j2 m2 | J M> by the Racah sum. Exact zero when a selection rule fails.
inline double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
    const int tj1 = detail::twice(j1, "j1"), tm1 = detail::twice(m1, "m1");
    const int tj2 = detail::twice(j2, "j2"), tm2 = detail::twice(m2, "m2");
    const int tJ = detail::twice(J, "J"), tM = detail::twice(M, "M");
    if (tj1 < 0 || tj2 < 0 || tJ < 0) return 0.0;
    if (tm1 + tm2 != tM) return 0.0;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ) return 0.0;
    if ((tj1 + tm1) % 2 || (tj2 + tm2) % 2 || (tJ + tM) % 2) return 0.0;
    if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2 || (tj1 + tj2 + tJ) % 2) return 0.0;

    // All factorial arguments below are integers.
    const int a = (tj1 + tj2 - tJ) / 2;  // j1+j2-J
    const int b = (tj1 - tm1) / 2;       // j1-m1
    const int c = (tj2 + tm2) / 2;       // j2+m2
    const int d = (tJ - tj2 + tm1) / 2;  // J-j2+m1
    const int e = (tJ - tj1 - tm2) / 2;  // J-j1-m2
    using detail::log_fact;
    const long double log_pre =
        0.5L * (std::log(static_cast<long double>(tJ + 1)) + log_fact((tJ + tj1 - tj2) / 2) +
                log_fact((tJ - tj1 + tj2) / 2) + log_fact(a) - log_fact((tj1 + tj2 + tJ) / 2 + 1) +
                log_fact((tJ + tM) / 2) + log_fact((tJ - tM) / 2) + log_fact(b) + log_fact((tj1 + tm1) / 2) +
                log_fact((tj2 - tm2) / 2) + log_fact(c));
    const int kmin = std::max({0, -d, -e});
    const int kmax = std::min({a, b, c});
    long double sum = 0.0L;
    for (int k = kmin; k <= kmax; ++k) {
        const long double log_den =
            log_fact(k) + log_fact(a - k) + log_fact(b - k) + log_fact(c - k) + log_fact(d + k) + log_fact(e + k);
        const long double term = std::exp(log_pre - log_den);
        sum += (k % 2) ? -term : term;
    }
    return static_cast<double>(sum);
}

// Kernel weights Δ_{J,m} = Σ_{j=0}^{2J} (2j+1)/(2J+1) <J m; j 0|J m>.
class WignerKernel {
public:
    explicit WignerKernel(int N) : N_(N), J_(0.5 * N) {
        if (N < 1) throw std::invalid_argument("WignerKernel: N must be >= 1");
        const int d = N + 1;
        cg_ = RealMatrix::Zero(d, N + 1);  // cg_(k, j) = <J m_k; j 0|J m_k>, j = 0..2J
        for (int k = 0; k < d; ++k)
            for (int j = 0; j <= N; ++j) cg_(k, j) = clebsch_gordan(J_, -J_ + k, j, 0.0, J_, -J_ + k);
        recompute_weights();
    }

    int N() const { return N_; }
    double J() const { return J_; }
    const RealVector& weights() const { return delta_; }
    const RealMatrix& cg_table() const { return cg_; }

    // Replaces the cached Clebsch–Gordan table (used to inject faults in validation).
    void set_cg_table(const RealMatrix& t) {
        if (t.rows() != cg_.rows() || t.cols() != cg_.cols()) throw std::invalid_argument("set_cg_table: shape mismatch");
        cg_ = t;
        recompute_weights();
    }

private:
    void recompute_weights() {
        const int d = N_ + 1;
        delta_ = RealVector::Zero(d);
        for (int k = 0; k < d; ++k)
            for (int j = 0; j <= N_; ++j) delta_[k] += (2.0 * j + 1.0) / (N_ + 1.0) * cg_(k, j);
    }

    int N_;
    double J_;
    RealMatrix cg_;
    RealVector delta_;
};

inline const WignerKernel& wigner_kernel(int N) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<WignerKernel>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[N];
    if (!slot) slot = std::make_unique<WignerKernel>(N);
    return *slot;
}

namespace detail {

// Eigenbasis of Jy with eigenvalues snapped to the exact m values.
struct JyEigen {
    Matrix V;
    RealVector lambda;
};

inline const JyEigen& jy_eigen(int N) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<JyEigen>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[N];
    if (!slot) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(collective_spin(N).Jy);
        auto e = std::make_unique<JyEigen>();
        e->V = es.eigenvectors();
        e->lambda = RealVector(N + 1);
        for (int k = 0; k <= N; ++k) e->lambda[k] = -0.5 * N + k;  // eigenvalues come back ascending
        slot = std::move(e);
    }
    return *slot;
}

}  // namespace detail

// Small-d matrix e^{iθJy}.
inline Matrix small_d(int N, double theta) {
    const auto& e = detail::jy_eigen(N);
    Vector ph(N + 1);
    for (int k = 0; k <= N; ++k) ph[k] = std::polar(1.0, theta * e.lambda[k]);
    return e.V * ph.asDiagonal() * e.V.adjoint();
}

// R(θ,φ) = e^{iφJz} e^{iθJy} in the Dicke basis.
inline Matrix rotation_matrix(int N, double theta, double phi) {
    Matrix d = small_d(N, theta);
    for (int k = 0; k <= N; ++k) d.row(k) *= std::polar(1.0, phi * (-0.5 * N + k));
    return d;
}

struct WignerGridSpec {
    int n_theta = 181;  // [0, π] inclusive
    int n_phi = 360;    // [0, 2π)

    void validate() const {
        if (n_theta < 2) throw ConfigError("WignerGridSpec: n_theta must be >= 2");
        if (n_phi < 1) throw ConfigError("WignerGridSpec: n_phi must be >= 1");
    }
};

struct WignerGrid {
    int N = 0;
    std::vector<double> theta;
    std::vector<double> phi;
    RealMatrix W;  // n_theta x n_phi

    double J() const { return 0.5 * N; }

    // ∫W dΩ with dΩ = (2J+1)/(4π) sinθ dθ dφ: Clenshaw–Curtis in cosθ on the equispaced θ nodes,
    // trapezoid in φ. Exact for the band-limited W when n_theta > 2J.
    double integral() const {
        const int n = static_cast<int>(theta.size()) - 1;
        RealVector w(n + 1);
        for (int i = 0; i <= n; ++i) {
            double s = 1.0;
            for (int j = 1; j <= n / 2; ++j) {
                const double b = (2 * j == n) ? 1.0 : 2.0;
                s -= b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * theta[i]);
            }
            w[i] = (i == 0 || i == n ? 1.0 : 2.0) * s / n;
        }
        const double dphi = 2.0 * std::numbers::pi / phi.size();
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) acc += w[i] * W.row(i).sum() * dphi;
        return (N + 1.0) / (4.0 * std::numbers::pi) * acc;
    }

    double min() const { return W.minCoeff(); }
    double max() const { return W.maxCoeff(); }

    void write(std::ostream& os) const {
        os << "# J=" << J() << " n_theta=" << theta.size() << " n_phi=" << phi.size() << '\n';
        char buf[96];
        for (std::size_t i = 0; i < theta.size(); ++i)
            for (std::size_t j = 0; j < phi.size(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", theta[i], phi[j], W(i, j));
                os << buf;
            }
    }
};

inline constexpr double kWignerImagTolerance = 1e-10;

// W(θ,φ) = Σ_m Δ_{J,m} <J,m|R†ρR|J,m>. With K(θ) = d diag(Δ) d†, W = Σ_q e^{iqφ} Σ_k ρ_{k,k+q} K_{k+q,k}.
inline WignerGrid wigner_function(const ElectronDensityMatrix& rho, const WignerGridSpec& spec = {},
                                  const WignerKernel* kernel = nullptr) {
    spec.validate();
    const int N = rho.N();
    const WignerKernel& ker = kernel ? *kernel : wigner_kernel(N);
    if (ker.N() != N) throw std::invalid_argument("wigner_function: kernel/state dimension mismatch");
    const int d = N + 1;
    const Matrix& r = rho.matrix();

    WignerGrid g;
    g.N = N;
    g.theta.resize(spec.n_theta);
    g.phi.resize(spec.n_phi);
    for (int i = 0; i < spec.n_theta; ++i) g.theta[i] = std::numbers::pi * i / (spec.n_theta - 1);
    for (int j = 0; j < spec.n_phi; ++j) g.phi[j] = 2.0 * std::numbers::pi * j / spec.n_phi;
    g.W.resize(spec.n_theta, spec.n_phi);

    // e^{iqφ_j} for q = -N..N
    Matrix phase(2 * N + 1, spec.n_phi);
    for (int q = -N; q <= N; ++q)
        for (int j = 0; j < spec.n_phi; ++j) phase(q + N, j) = std::polar(1.0, q * g.phi[j]);

    Vector S(2 * N + 1);
    for (int i = 0; i < spec.n_theta; ++i) {
        const Matrix dm = small_d(N, g.theta[i]);
        const Matrix K = dm * ker.weights().cast<Complex>().asDiagonal() * dm.adjoint();
        S.setZero();
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) S[l - k + N] += r(k, l) * K(l, k);
        for (int j = 0; j < spec.n_phi; ++j) {
            const Complex w = (S.array() * phase.col(j).array()).sum();
            if (std::abs(w.imag()) > kWignerImagTolerance * std::max(1.0, std::abs(w.real())))
                throw NumericalError("wigner_function: imaginary residue " + std::to_string(w.imag()));
            g.W(i, j) = w.real();
        }
    }
    return g;
}

}  // namespace catqed
