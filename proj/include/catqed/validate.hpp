// validate.hpp: Fast invariant suite behind `catqed validate`

#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "catqed/measurement.hpp"
#include "catqed/operators.hpp"
#include "catqed/propagator.hpp"
#include "catqed/qfi.hpp"
#include "catqed/stateprep.hpp"
#include "catqed/wigner.hpp"
#include "catqed/xfa.hpp"

namespace catqed {

namespace reference {

// <j1 m1; j2 m2|J M> for fixed (j1, j2), built by lowering from each stretched state and
// Gram–Schmidt against higher J (Condon–Shortley: <j1 j1; j2 J-j1|J J> > 0).
// Key: (2m1, 2m2, 2J, 2M).
inline std::map<std::tuple<int, int, int, int>, double> ladder_cg(double j1, double j2) {
    const int d1 = static_cast<int>(std::lround(2 * j1)) + 1, d2 = static_cast<int>(std::lround(2 * j2)) + 1;
    const int dim = d1 * d2;
    auto idx = [&](int a, int b) { return a * d2 + b; };  // a: m1 = j1 - a, b: m2 = j2 - b
    auto lower = [&](const RealVector& v) {
        RealVector out = RealVector::Zero(dim);
        for (int a = 0; a < d1; ++a)
            for (int b = 0; b < d2; ++b) {
                const double c = v[idx(a, b)];
                if (c == 0.0) continue;
                const double m1 = j1 - a, m2 = j2 - b;
                if (a + 1 < d1) out[idx(a + 1, b)] += c * std::sqrt(j1 * (j1 + 1) - m1 * (m1 - 1));
                if (b + 1 < d2) out[idx(a, b + 1)] += c * std::sqrt(j2 * (j2 + 1) - m2 * (m2 - 1));
            }
        return out;
    };
    std::map<std::pair<int, int>, RealVector> states;  // (2J, 2M) -> vector
    for (double J = j1 + j2; J >= std::abs(j1 - j2) - 1e-9; J -= 1.0) {
        const int tJ = static_cast<int>(std::lround(2 * J));
        RealVector top = RealVector::Zero(dim);
        // Generic vector in the M = J subspace; unequal entries keep it out of the span of higher J.
        for (int a = 0; a < d1; ++a)
            for (int b = 0; b < d2; ++b)
                if (std::abs((j1 - a) + (j2 - b) - J) < 1e-9) top[idx(a, b)] = 1.0 + 0.731 * a;
        for (const auto& [key, v] : states)
            if (key.second == tJ) top -= v.dot(top) * v;
        top.normalize();
        const int a0 = 0, b0 = static_cast<int>(std::lround(j2 - (J - j1)));
        if (b0 >= 0 && b0 < d2 && top[idx(a0, b0)] < 0) top = -top;
        RealVector v = top;
        for (int tM = tJ; tM >= -tJ; tM -= 2) {
            states[{tJ, tM}] = v;
            if (tM > -tJ) {
                const double M = 0.5 * tM;
                v = lower(v) / std::sqrt(J * (J + 1) - M * (M - 1));
            }
        }
    }
    std::map<std::tuple<int, int, int, int>, double> out;
    for (const auto& [key, v] : states)
        for (int a = 0; a < d1; ++a)
            for (int b = 0; b < d2; ++b) {
                const int tm1 = static_cast<int>(std::lround(2 * (j1 - a))), tm2 = static_cast<int>(std::lround(2 * (j2 - b)));
                if (tm1 + tm2 == key.second) out[{tm1, tm2, key.first, key.second}] = v[idx(a, b)];
            }
    return out;
}

}  // namespace reference

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidateOptions {
    bool inject_cg_fault = false;
};

inline std::vector<CheckResult> run_validation(const ValidateOptions& opt = {}) {
    std::vector<CheckResult> out;
    auto record = [&](const std::string& name, double value, double tol) {
        out.push_back({name, value, tol, std::isfinite(value) && value <= tol});
    };
    std::mt19937_64 rng(20240607);
    std::normal_distribution<double> gauss;
    auto random_vector = [&](int d) {
        Vector v(d);
        for (int i = 0; i < d; ++i) v[i] = Complex(gauss(rng), gauss(rng));
        return Vector(v / v.norm());
    };
    auto random_rho = [&](int d) {
        Matrix a(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
        Matrix r = a * a.adjoint();
        return ElectronDensityMatrix(r / r.trace().real());
    };

    // Taylor-4 per-step norm loss and conservation over a short run
    {
        ModelParams p;
        p.N = 4;
        p.gamma = 0.01;
        const PhotonicSpec light = PhotonicSpec::even_cat(1.0);
        CompositeState s = prepare_initial(light, p.N, auto_n_max(light, p.N));
        PropagationPlan plan;
        plan.t_max = 2.0;
        plan.sample_stride = 100;
        const TimeSeries ts = run(s, p, plan,
                                  {monitors::observable(Observable::Energy), monitors::observable(Observable::ExcitationNumber)});
        double drift = 0, de = 0, dx = 0;
        const auto& e = ts.column("energy");
        const auto& x = ts.column("excitation_number");
        for (std::size_t i = 0; i < ts.size(); ++i) {
            drift = std::max(drift, ts.column("norm_drift")[i]);
            de = std::max(de, std::abs(e[i] - e[0]));
            dx = std::max(dx, std::abs(x[i] - x[0]));
        }
        record("taylor4_norm_drift_per_step", drift, 1e-10);
        record("energy_drift", de, 1e-8);
        record("excitation_number_drift", dx, 1e-8);

        TaylorPropagator prop(p, s.n_max());
        for (int k = 0; k < 500; ++k) prop.step(s, 1e-3);
        const double pe = parity_probability(s, ParityOutcome::Even), po = parity_probability(s, ParityOutcome::Odd);
        record("parity_probability_sum", std::abs(pe + po - 1.0), 1e-12);
        const Matrix avg = pe * parity_postselect(s, ParityOutcome::Even).rho_e.matrix() +
                           po * parity_postselect(s, ParityOutcome::Odd).rho_e.matrix();
        record("postselection_average_vs_trace", (avg - reduce_to_electron(s).matrix()).cwiseAbs().maxCoeff(), 1e-10);
    }

    // QFI: pure vs mixed formula, GHZ value
    {
        double worst = 0;
        for (int trial = 0; trial < 4; ++trial) {
            const Vector psi = random_vector(7);
            worst = std::max(worst, std::abs(qfi_pure(psi).value - qfi_mixed(ElectronDensityMatrix::from_pure(psi)).value));
        }
        record("qfi_pure_vs_mixed", worst, 1e-8);
        const int N = 8;
        Vector ghz = Vector::Zero(N + 1);
        ghz[0] = ghz[N] = 1.0 / std::sqrt(2.0);
        record("ghz_qfi", std::abs(qfi_mixed(ElectronDensityMatrix::from_pure(ghz)).value - N * N), 1e-9);
    }

    // Clebsch–Gordan: Racah sum and the cached kernel table against the ladder construction
    {
        double worst = 0;
        for (int tj1 = 1; tj1 <= 6; ++tj1)
            for (int tj2 = 1; tj2 <= tj1; ++tj2) {
                const double j1 = 0.5 * tj1, j2 = 0.5 * tj2;
                for (const auto& [k, v] : reference::ladder_cg(j1, j2)) {
                    const auto [tm1, tm2, tJ, tM] = k;
                    worst = std::max(worst, std::abs(clebsch_gordan(j1, 0.5 * tm1, j2, 0.5 * tm2, 0.5 * tJ, 0.5 * tM) - v));
                }
            }
        record("cg_racah_vs_ladder", worst, 1e-10);

        double table_worst = 0;
        for (int N = 1; N <= 8; ++N) {
            WignerKernel ker = wigner_kernel(N);
            if (opt.inject_cg_fault && N == 4) {
                RealMatrix t = ker.cg_table();
                t(1, 2) += 0.05;
                ker.set_cg_table(t);
            }
            const double J = 0.5 * N;
            for (int j = 0; j <= N; ++j) {
                const auto tab = reference::ladder_cg(J, j);
                for (int k = 0; k <= N; ++k) {
                    const int tm = static_cast<int>(std::lround(2 * (-J + k)));
                    table_worst = std::max(table_worst, std::abs(ker.cg_table()(k, j) - tab.at({tm, 0, N, tm})));
                }
            }
        }
        record("cg_kernel_table", table_worst, 1e-10);
    }

    // Wigner normalization and rotation unitarity
    {
        const int N = 6;
        const ElectronDensityMatrix rho = random_rho(N + 1);
        WignerKernel ker = wigner_kernel(N);
        if (opt.inject_cg_fault) {
            RealMatrix t = ker.cg_table();
            t(1, 2) += 0.05;
            ker.set_cg_table(t);
        }
        const WignerGrid g = wigner_function(rho, {61, 64}, &ker);
        record("wigner_integral", std::abs(g.integral() - 1.0), 1e-6);

        std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
        double worst = 0;
        for (int trial = 0; trial < 4; ++trial) {
            const Matrix R = rotation_matrix(32, 0.5 * ang(rng), ang(rng));
            worst = std::max(worst, (R * R.adjoint() - Matrix::Identity(33, 33)).cwiseAbs().maxCoeff());
        }
        record("rotation_unitarity_J16", worst, 1e-12);
    }

    // Quadrature overlap: Fock series against the closed form
    {
        const int n_max = 80;
        double worst = 0;
        for (const Complex alpha : {Complex(2.0, 0.5), Complex(-1.0, 3.0)})
            for (const double x : {-1.5, 0.0, 2.0})
                for (const double phi : {0.0, 0.7, 2.0}) {
                    const Complex series = quadrature_amplitudes(x, phi, n_max).transpose() * coherent_vector(alpha, n_max);
                    const Complex b = alpha * std::polar(1.0, -phi);
                    const Complex closed = std::pow(std::numbers::pi, -0.25) *
                                           std::exp(-0.5 * x * x + std::sqrt(2.0) * x * b - 0.5 * b * b - 0.5 * std::norm(b));
                    worst = std::max(worst, std::abs(series - closed));
                }
        record("quadrature_overlap_series", worst, 1e-10);
    }

    // Partial trace against the dense density matrix, N=2, n_max=3
    {
        const int N = 2, nm = 3, de = N + 1, dp = nm + 1;
        const Vector flat = random_vector(de * dp);
        Amplitudes c(de, dp);
        for (int k = 0; k < de; ++k)
            for (int n = 0; n < dp; ++n) c(k, n) = flat[k * dp + n];
        const CompositeState s(N, c, 0.0);
        const Matrix full = flat * flat.adjoint();
        Matrix dense = Matrix::Zero(de, de);
        for (int k = 0; k < de; ++k)
            for (int l = 0; l < de; ++l)
                for (int n = 0; n < dp; ++n) dense(k, l) += full(k * dp + n, l * dp + n);
        record("partial_trace_dense", (dense - reduce_to_electron(s).matrix()).cwiseAbs().maxCoeff(), 1e-12);
    }

    // Closed-form Rabi branch against the integrated one
    {
        ModelParams p;
        p.N = 4;
        p.gamma = 0.01;
        const double t = 15.0;
        const Vector a = rabi_solution(p, 10.0, t);
        const Vector b = semiclassical_evolve({10.0, p.omega}, p, t);
        record("rabi_vs_semiclassical", (a - b).cwiseAbs().maxCoeff(), 1e-8);
    }
    return out;
}

inline bool print_validation(std::ostream& os, const std::vector<CheckResult>& rows) {
    bool ok = true;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-34s %-12s %-10s %s\n", "check", "value", "tolerance", "result");
    os << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-34s %-12.3e %-10.1e %s\n", r.name.c_str(), r.value, r.tolerance, r.pass ? "PASS" : "FAIL");
        os << buf;
        ok = ok && r.pass;
    }
    return ok;
}

}  // namespace catqed
