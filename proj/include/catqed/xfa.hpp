// xfa.hpp: External-field approximation: c-number-driven electronic branches, ROC/ROK states,
// overcomplete coherent-state expansion of the even cat

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "catqed/hilbert.hpp"
#include "catqed/measurement.hpp"
#include "catqed/operators.hpp"
#include "catqed/qfi.hpp"
#include "catqed/stateprep.hpp"

namespace catqed {

struct ClassicalField {
    Complex alpha{0.0, 0.0};
    double omega = 1.0;

    Complex at(double t) const { return alpha * std::polar(1.0, -omega * t); }
};

inline Vector all_down(int N) {
    Vector v = Vector::Zero(N + 1);
    v[0] = 1.0;
    return v;
}

inline constexpr double kSemiclassicalDt = 1e-3;

// i∂t|ψ> = H_e[α(t)]|ψ> from |↓…↓>, classical RK4 with renormalization. The step is shrunk so that
// the last step lands exactly on t.
inline Vector semiclassical_evolve(const ClassicalField& field, const ModelParams& p, double t,
                                   double dt = kSemiclassicalDt, Vector psi = Vector()) {
    p.validate();
    if (psi.size() == 0) psi = all_down(p.N);
    if (psi.size() != p.N + 1) throw std::invalid_argument("semiclassical_evolve: dimension mismatch");
    if (!(dt > 0.0) || !(t >= 0.0)) throw std::invalid_argument("semiclassical_evolve: need dt > 0 and t >= 0");
    const long long steps = static_cast<long long>(std::ceil(t / dt - 1e-9));
    if (steps == 0) return psi;
    const double h = t / steps;
    const Complex mi(0.0, -1.0);
    auto rhs = [&](const Vector& v, double s) { return Vector(mi * apply_electronic_hamiltonian(v, p, field.at(s))); };
    for (long long k = 0; k < steps; ++k) {
        const double s = k * h;
        const Vector k1 = rhs(psi, s);
        const Vector k2 = rhs(psi + 0.5 * h * k1, s + 0.5 * h);
        const Vector k3 = rhs(psi + 0.5 * h * k2, s + 0.5 * h);
        const Vector k4 = rhs(psi + h * k3, s + h);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double nrm = psi.norm();
        if (!std::isfinite(nrm) || !(nrm > 0.0))
            throw NumericalError("semiclassical_evolve: non-finite state at t=" + std::to_string(s + h));
        psi /= nrm;
    }
    return psi;
}

// Single-emitter resonance solution in the frame rotating at ω, from the ground state.
struct RabiSolution {
    double omega_eff = 0.0;
    Complex e_alpha{0.0, 0.0};  // iγωμα
    double detuning = 0.0;      // Δ - ω

    RabiSolution(const ModelParams& p, Complex alpha)
        : e_alpha(Complex(0.0, p.gamma * p.omega * p.mu) * alpha), detuning(p.delta - p.omega) {
        omega_eff = std::sqrt(detuning * detuning + std::norm(e_alpha));
    }

    Complex a(double t) const {
        if (omega_eff == 0.0) return 1.0;
        const double h = 0.5 * omega_eff * t;
        return Complex(std::cos(h), detuning / omega_eff * std::sin(h));
    }

    Complex b(double t) const {
        if (omega_eff == 0.0) return 0.0;
        return Complex(0.0, 1.0) * e_alpha / omega_eff * std::sin(0.5 * omega_eff * t);
    }
};

// Tavis–Cummings branch: amplitude √C(2J, J+m) a^{J-m} b^{J+m} e^{-imωt} on |J,m>.
inline Vector rabi_solution(const ModelParams& p, Complex alpha, double t) {
    if (!p.rwa) throw std::invalid_argument("rabi_solution: only the rotating-wave model has a closed form");
    const RabiSolution r(p, alpha);
    const Complex a = r.a(t), b = r.b(t);
    const int N = p.N;
    Vector psi(N + 1);
    const double la = std::log(std::abs(a)), lb = std::log(std::abs(b));
    const double pa = std::arg(a), pb = std::arg(b);
    for (int k = 0; k <= N; ++k) {
        // k = J + m excitations, N - k = J - m in the ground state
        const double m = -0.5 * N + k;
        const double log_binom = std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0);
        double mag;
        if ((k > 0 && b == 0.0) || (k < N && a == 0.0))
            mag = 0.0;
        else
            mag = std::exp(0.5 * log_binom + (N - k > 0 ? (N - k) * la : 0.0) + (k > 0 ? k * lb : 0.0));
        psi[k] = std::polar(mag, (N - k) * pa + k * pb - m * p.omega * t);
    }
    return psi;
}

// ψ_α(t): closed form for the rotating-wave model, RK4 otherwise.
inline Vector branch_state(const ModelParams& p, Complex alpha, double t, double dt = kSemiclassicalDt) {
    if (p.rwa) return rabi_solution(p, alpha, t);
    return semiclassical_evolve({alpha, p.omega}, p, t, dt);
}

inline constexpr double kDegenerateNorm = 1e-14;

inline Vector normalized_or_throw(Vector v, const char* what) {
    const double n2 = v.squaredNorm();
    if (!(n2 >= kDegenerateNorm)) throw ImpossibleOutcome(std::string(what) + ": degenerate normalization");
    return v / std::sqrt(n2);
}

// (|ψ_{+α0}> ± |ψ_{-α0}>)/√𝒩, + for the even outcome.
inline Vector roc_state(const ModelParams& p, double alpha0, double t, ParityOutcome outcome,
                        double dt = kSemiclassicalDt) {
    if (alpha0 == 0.0) throw std::invalid_argument("roc_state: alpha0 must be nonzero");
    const Vector plus = branch_state(p, alpha0, t, dt);
    const Vector minus = branch_state(p, -alpha0, t, dt);
    return normalized_or_throw(outcome == ParityOutcome::Even ? Vector(plus + minus) : Vector(plus - minus), "roc_state");
}

// (|ψ_{α0}> + |ψ_0>)/√𝒩'; the vacuum branch |ψ_0> is |↓…↓> with its free phase e^{iΔJt}.
inline Vector rok_state(const ModelParams& p, double alpha0, double t, double dt = kSemiclassicalDt) {
    if (alpha0 == 0.0) throw std::invalid_argument("rok_state: alpha0 must be nonzero");
    const Vector v = branch_state(p, alpha0, t, dt) + branch_state(p, 0.0, t, dt);
    return normalized_or_throw(v, "rok_state");
}

struct XfaBranch {
    Complex weight;
    ClassicalField field;
    Vector psi;
};

// Σ_b w_b |ψ_b(t)>|α_b(t)>; normalization applies to the assembled total only.
struct XfaSuperposition {
    std::vector<XfaBranch> branches;
    double time = 0.0;

    CompositeState assemble(int n_max) const {
        if (branches.empty()) throw std::invalid_argument("XfaSuperposition: no branches");
        const int N = static_cast<int>(branches.front().psi.size()) - 1;
        Amplitudes c = Amplitudes::Zero(N + 1, n_max + 1);
        for (const auto& b : branches) {
            const Vector ph = coherent_vector_unchecked(b.field.at(time), n_max);
            c.noalias() += (b.weight * b.psi) * ph.transpose();
        }
        CompositeState s(N, std::move(c), time);
        s.normalize();
        return s;
    }
};

struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> scaled_weights;  // w_i e^{x_i²}, so Σ W_i g(x_i) ≈ ∫ g dx
};

// Golub–Welsch nodes polished by Newton on the Hermite function h_M; scaled weights from the
// Christoffel sum 1/Σ_{k<M} h_k(x)², which never underflows.
inline GaussHermiteRule gauss_hermite(int M) {
    if (M < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
    RealMatrix T = RealMatrix::Zero(M, M);
    for (int k = 1; k < M; ++k) T(k, k - 1) = T(k - 1, k) = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(T, Eigen::EigenvaluesOnly);
    GaussHermiteRule r;
    r.nodes.resize(M);
    r.scaled_weights.resize(M);
    for (int i = 0; i < M; ++i) {
        double x = es.eigenvalues()[i];
        for (int it = 0; it < 5; ++it) {
            const RealVector h = hermite_functions(x, M);
            const double dh = std::sqrt(2.0 * M) * h[M - 1] - x * h[M];
            if (dh == 0.0) break;
            x -= h[M] / dh;
        }
        const RealVector h = hermite_functions(x, M - 1);
        r.nodes[i] = x;
        r.scaled_weights[i] = 1.0 / h.squaredNorm();
    }
    return r;
}

struct OvercompleteGrid {
    int nodes = 41;      // per axis, per cat component
    double scale = 1.0;  // α = ±α0 + scale·(x + iy)

    void validate() const {
        if (nodes < 1) throw ConfigError("OvercompleteGrid: nodes must be >= 1");
        if (!(scale > 0.0)) throw ConfigError("OvercompleteGrid: scale must be > 0");
    }
};

// Even cat as ∫d²α f̃(α)|α>, f̃(α) = (<α|α0> + <α|-α0>)/π up to normalization; each Gaussian term is
// integrated on its own Gauss–Hermite grid. Every α carries its own electronic branch ψ_α(t).
inline XfaSuperposition overcomplete_xfa(double alpha0, const ModelParams& p, const OvercompleteGrid& grid, double t,
                                         double dt = kSemiclassicalDt) {
    grid.validate();
    p.validate();
    const GaussHermiteRule gh = gauss_hermite(grid.nodes);
    XfaSuperposition sup;
    sup.time = t;
    sup.branches.reserve(2 * static_cast<std::size_t>(grid.nodes) * grid.nodes);
    const double s2 = grid.scale * grid.scale;
    for (double center : {alpha0, -alpha0})
        for (int i = 0; i < grid.nodes; ++i)
            for (int j = 0; j < grid.nodes; ++j) {
                const Complex alpha = center + grid.scale * Complex(gh.nodes[i], gh.nodes[j]);
                const Complex f = std::exp(-0.5 * std::norm(alpha) - 0.5 * center * center + std::conj(alpha) * center) /
                                  std::numbers::pi;
                const Complex w = s2 * gh.scaled_weights[i] * gh.scaled_weights[j] * f;
                sup.branches.push_back({w, {alpha, p.omega}, branch_state(p, alpha, t, dt)});
            }
    return sup;
}

inline constexpr double kOvercompleteTolerance = 0.01;

struct OvercompleteQfi {
    double qfi = 0.0;
    double probability = 0.0;
    double refined_qfi = 0.0;  // with doubled nodes, when checked
};

// Parity-postselected QFI of the assembled overcomplete state. With check, the grid is doubled and a
// relative QFI change above 1% is an error.
inline OvercompleteQfi overcomplete_postselected_qfi(double alpha0, const ModelParams& p, const OvercompleteGrid& grid,
                                                     double t, ParityOutcome outcome, int n_max, bool check = true) {
    auto eval = [&](const OvercompleteGrid& g) {
        const CompositeState s = overcomplete_xfa(alpha0, p, g, t).assemble(n_max);
        const PostselectionResult r = parity_postselect(s, outcome);
        return std::pair{qfi_mixed(r.rho_e).value, r.probability};
    };
    OvercompleteQfi out;
    std::tie(out.qfi, out.probability) = eval(grid);
    out.refined_qfi = out.qfi;
    if (check) {
        OvercompleteGrid fine = grid;
        fine.nodes *= 2;
        out.refined_qfi = eval(fine).first;
        const double rel = std::abs(out.refined_qfi - out.qfi) / std::max(std::abs(out.refined_qfi), 1e-12);
        if (rel > kOvercompleteTolerance)
            throw NumericalError("overcomplete_xfa: grid not converged (QFI changes by " + std::to_string(100 * rel) +
                                 "% when nodes double)");
    }
    return out;
}

}  // namespace catqed
