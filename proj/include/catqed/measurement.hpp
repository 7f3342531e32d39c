// measurement.hpp: Photon-number parity and quadrature projectors, postselected electronic states

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "catqed/hilbert.hpp"

namespace catqed {

inline constexpr double kImpossibleProbability = 1e-14;

enum class ParityOutcome { Even, Odd };

inline std::string to_string(ParityOutcome p) { return p == ParityOutcome::Even ? "even" : "odd"; }

struct PostselectionResult {
    // Outcome probability; for an ideal quadrature projector a probability density in x.
    double probability = 0.0;
    bool is_density = false;
    ElectronDensityMatrix rho_e;
};

// Postselection from an unnormalized conditional Gram matrix Σ_μ c_μ c_μ†.
inline PostselectionResult make_postselection(Matrix gram, double probability, bool is_density,
                                              const std::string& what) {
    if (!(probability >= kImpossibleProbability))
        throw ImpossibleOutcome(what + ": impossible outcome (probability " + std::to_string(probability) + ")");
    gram /= probability;
    return {probability, is_density, ElectronDensityMatrix(std::move(gram))};
}

inline double parity_probability(const CompositeState& state, ParityOutcome outcome) {
    const Amplitudes& c = state.amplitudes();
    double p = 0.0;
    for (int n = outcome == ParityOutcome::Even ? 0 : 1; n < c.cols(); n += 2) p += c.col(n).squaredNorm();
    return p;
}

inline PostselectionResult parity_postselect(const CompositeState& state, ParityOutcome outcome) {
    const Amplitudes& c = state.amplitudes();
    const int d = static_cast<int>(c.rows());
    Matrix gram = Matrix::Zero(d, d);
    double p = 0.0;
    for (int n = outcome == ParityOutcome::Even ? 0 : 1; n < c.cols(); n += 2) {
        gram.noalias() += c.col(n) * c.col(n).adjoint();
        p += c.col(n).squaredNorm();
    }
    return make_postselection(std::move(gram), p, false, "parity_postselect(" + to_string(outcome) + ")");
}

// Normalized Hermite functions ψ_n(x) = H_n(x) e^{-x²/2} / (π^{1/4} √(2ⁿ n!)), n = 0..n_max,
// by the bounded three-term recurrence.
inline RealVector hermite_functions(double x, int n_max) {
    RealVector psi(n_max + 1);
    psi[0] = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    if (n_max >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
    for (int n = 1; n < n_max; ++n)
        psi[n + 1] = std::sqrt(2.0 / (n + 1)) * x * psi[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * psi[n - 1];
    return psi;
}

// v[n] = <x;φ|n> = e^{-inφ} ψ_n(x), the eigenbra of x_φ = (e^{-iφ}a + e^{iφ}a†)/√2.
inline Vector quadrature_amplitudes(double x, double phi, int n_max) {
    const RealVector psi = hermite_functions(x, n_max);
    Vector v(n_max + 1);
    for (int n = 0; n <= n_max; ++n) v[n] = std::polar(psi[n], -n * phi);
    return v;
}

struct QuadratureSpec {
    double x = 0.0;
    double phi = 0.0;
    double delta_x = 0.0;         // 0 selects the ideal projector
    bool phase_tracking = false;  // φ(t) = π/2 - ωt

    double phase_at(double t, double omega) const {
        return phase_tracking ? 0.5 * std::numbers::pi - omega * t : phi;
    }

    void validate() const {
        if (!(delta_x >= 0.0)) throw ConfigError("QuadratureSpec: delta_x must be >= 0");
    }
};

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss–Legendre rule on [-1, 1] (Newton iteration on P_n from Chebyshev guesses).
inline GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

// Unnormalized conditional electronic vector u[m] = Σ_n <x;φ|n> c[m][n].
inline Vector quadrature_conditional(const CompositeState& state, double x, double phi) {
    return state.amplitudes() * quadrature_amplitudes(x, phi, state.n_max());
}

inline constexpr double kWindowStability = 1e-8;
inline constexpr int kMaxWindowNodes = 1 << 14;

inline PostselectionResult quadrature_postselect(const CompositeState& state, const QuadratureSpec& spec,
                                                 double t, double omega = 1.0) {
    spec.validate();
    const double phi = spec.phase_at(t, omega);
    if (spec.delta_x == 0.0) {
        const Vector u = quadrature_conditional(state, spec.x, phi);
        const double p = u.squaredNorm();
        return make_postselection(u * u.adjoint(), p, true, "quadrature_postselect");
    }

    // Window [x - Δx/2, x + Δx/2] integrated by Gauss–Legendre, doubled until rho_e is stable.
    const int d = state.N() + 1;
    auto integrate = [&](int nodes, Matrix& gram) {
        const GaussRule g = gauss_legendre(nodes);
        gram = Matrix::Zero(d, d);
        double p = 0.0;
        const double half = 0.5 * spec.delta_x;
        for (int i = 0; i < nodes; ++i) {
            const double xi = spec.x + half * g.nodes[i];
            const Vector u = quadrature_conditional(state, xi, phi);
            const double w = half * g.weights[i];
            gram.noalias() += w * (u * u.adjoint());
            p += w * u.squaredNorm();
        }
        return p;
    };

    int nodes = std::max(8, static_cast<int>(std::ceil(10.0 * spec.delta_x * std::sqrt(double(state.n_max())))));
    Matrix gram;
    double p = integrate(nodes, gram);
    for (;;) {
        if (2 * nodes > kMaxWindowNodes)
            throw NumericalError("quadrature_postselect: window integration did not converge");
        Matrix gram2;
        const double p2 = integrate(2 * nodes, gram2);
        nodes *= 2;
        double change = 0.0;
        if (p > kImpossibleProbability && p2 > kImpossibleProbability)
            change = (gram / p - gram2 / p2).cwiseAbs().maxCoeff();
        else
            change = std::abs(p - p2);
        gram = std::move(gram2);
        p = p2;
        if (change <= kWindowStability) break;
    }
    return make_postselection(std::move(gram), p, false, "quadrature_postselect");
}

}  // namespace catqed
