// acceptance.cpp: end-to-end acceptance checks; one PASS/FAIL line per criterion

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "catqed/experiment.hpp"
#include "catqed/measurement.hpp"
#include "catqed/propagator.hpp"
#include "catqed/qfi.hpp"
#include "catqed/stateprep.hpp"
#include "catqed/validate.hpp"
#include "catqed/wigner.hpp"
#include "catqed/xfa.hpp"

using namespace catqed;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ModelParams tc(int N, double gamma = 0.01) {
    ModelParams p;
    p.N = N;
    p.gamma = gamma;
    return p;
}

double rabi_period(double gamma, double alpha0) { return 2.0 * kPi / (gamma * alpha0); }

TimeSeries simulate_run(const ModelParams& p, const PhotonicSpec& light, double t_max, int stride,
                        const std::vector<Monitor>& mons) {
    PropagationPlan plan;
    plan.t_max = t_max;
    plan.sample_stride = stride;
    return run(prepare_initial(light, p.N, auto_n_max(light, p.N)), p, plan, mons);
}

std::size_t argmax_finite(const std::vector<double>& v, std::size_t end) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < end; ++i)
        if (std::isfinite(v[i]) && (!std::isfinite(v[best]) || v[i] > v[best])) best = i;
    return best;
}

std::size_t count_until(const TimeSeries& ts, double t_end) {
    std::size_t n = 0;
    while (n < ts.size() && ts.times[n] <= t_end + 1e-9) ++n;
    return n;
}

Outcome crit1() {
    const auto ts = simulate_run(tc(8), PhotonicSpec::even_cat(1.0), 300.0, 100, {monitors::qfi_trace()});
    const auto s = summarize(ts, "qfi_density");
    return {s.peak >= 4.0, fmt("N=8 alpha0=1: peak qfi_density = %.4f at t = %.1f (need >= 4.0)", s.peak, s.t_peak)};
}

Outcome crit2() {
    const auto ts = simulate_run(tc(8), PhotonicSpec::even_cat(2.0), 300.0, 100,
                                 {monitors::qfi_trace(), monitors::observable(Observable::PhotonNumber)});
    const auto& q = ts.column("qfi_density");
    const std::size_t i = argmax_finite(q, q.size());
    const double n = ts.column("photon_number")[i];
    return {q[i] >= 7.0 && n <= 0.5,
            fmt("N=8 alpha0=2: peak qfi_density = %.4f (need >= 7.0), photon_number at peak = %.4f (need <= 0.5)", q[i], n)};
}

// One N=8, alpha0=10 even-cat run feeds criteria 3 to 6.
struct LargeCatRun {
    TimeSeries ts;
    double period = 0.0;
};

const LargeCatRun& large_cat_run() {
    static const LargeCatRun r = [] {
        LargeCatRun out;
        out.period = rabi_period(0.01, 10.0);
        out.ts = simulate_run(tc(8), PhotonicSpec::even_cat(10.0), 3.0 * out.period, 100,
                              {monitors::qfi_trace(), monitors::parity()});
        return out;
    }();
    return r;
}

Outcome crit3() {
    const auto& r = large_cat_run();
    const auto& q = r.ts.column("qfi_density");
    std::size_t below = 0;
    double mx = 0.0;
    for (double v : q) {
        below += v < 1.3;
        mx = std::max(mx, v);
    }
    const double frac = double(below) / q.size();
    return {frac >= 0.95, fmt("N=8 alpha0=10 trace-out over 3 Rabi periods: %.2f%% of %zu samples below 1.3 (need >= 95%%), max %.3f",
                              100.0 * frac, q.size(), mx)};
}

Outcome crit4() {
    const auto& r = large_cat_run();
    const auto& q = r.ts.column("qfi_even_density");
    const std::size_t i = argmax_finite(q, count_until(r.ts, 2.0 * r.period));
    return {q[i] >= 0.9 * 8, fmt("even-parity max qfi_density = %.4f at t = %.1f within two Rabi cycles (need >= 7.2)", q[i],
                                 r.ts.times[i])};
}

Outcome crit5() {
    const auto& r = large_cat_run();
    const auto& q = r.ts.column("qfi_even_density");
    const std::size_t i = argmax_finite(q, count_until(r.ts, 2.0 * r.period));
    const double pe = r.ts.column("prob_even")[i];
    const double po0 = r.ts.column("prob_odd")[0];
    return {pe >= 0.45 && pe <= 0.55 && po0 < 1e-12,
            fmt("prob_even at QFI max = %.4f (need [0.45, 0.55]); prob_odd(0) = %.2e (need < 1e-12)", pe, po0)};
}

Outcome crit6() {
    const auto& r = large_cat_run();
    const ModelParams p = tc(8);
    const auto& q = r.ts.column("qfi_even_density");
    double worst = 0.0, t_worst = 0.0;
    for (std::size_t i = 0; i < count_until(r.ts, r.period); ++i) {
        const double t = r.ts.times[i];
        const double f_roc = qfi_pure(roc_state(p, 10.0, t, ParityOutcome::Even)).value;
        const double gap = std::abs(q[i] * p.N - f_roc) / (p.N * p.N);
        if (gap > worst) worst = gap, t_worst = t;
    }
    return {worst < 0.1, fmt("max |F_exact - F_ROC|/N^2 over first Rabi period = %.4f at t = %.1f (need < 0.1)", worst, t_worst)};
}

Outcome crit7() {
    QuadratureSpec q;
    q.x = 0.0;
    q.phase_tracking = true;
    const double period = rabi_period(0.01, 10.0);
    const auto ts = simulate_run(tc(8), PhotonicSpec::kitten(10.0), 2.0 * period, 100,
                                 {monitors::qfi_trace(), monitors::quadrature(q)});
    const auto s = summarize(ts, "qfi_quad_density");
    double base = 0.0;
    for (double v : ts.column("qfi_density")) base = std::max(base, v);
    return {s.peak >= 0.9 * 8 && base < 1.3,
            fmt("kitten alpha0=10, x=0, tracked phase: peak qfi_density = %.4f at t = %.1f (need >= 7.2); trace-out max %.4f (need < 1.3)",
                s.peak, s.t_peak, base)};
}

Outcome crit8() {
    const std::vector<double> s = {0.5, 1.0, 1.5, 2.0, 2.5};
    std::vector<std::vector<double>> curves;
    for (double a0 : {6.0, 8.0}) {
        std::vector<Monitor> mons;
        for (std::size_t k = 0; k < s.size(); ++k) {
            QuadratureSpec q;
            q.phase_tracking = true;
            q.delta_x = s[k] / a0;
            mons.push_back(monitors::quadrature(q, "w" + std::to_string(k)));
        }
        const auto ts = simulate_run(tc(8), PhotonicSpec::kitten(a0), rabi_period(0.01, a0), 100, mons);
        std::vector<double> c;
        for (std::size_t k = 0; k < s.size(); ++k) c.push_back(summarize(ts, "qfi_w" + std::to_string(k) + "_density").peak);
        curves.push_back(c);
    }
    double worst = 0.0;
    std::string table;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double a = curves[0][k], b = curves[1][k];
        worst = std::max(worst, std::abs(a - b) / std::max(a, b));
        table += fmt(" s=%.1f:%.3f/%.3f", s[k], a, b);
    }
    return {worst < 0.1, fmt("max QFI density (alpha0=6/8) vs dx*alpha0:%s; max relative gap %.4f (need < 0.1)", table.c_str(), worst)};
}

Outcome crit9() {
    ExperimentConfig c;
    c.model = tc(8);
    c.light = PhotonicSpec::even_cat(2.0);
    c.sample_stride = 20;
    c.monitors = {"qfi_density"};
    c.sweep = SweepConfig{SweepAxis::N, {4, 8, 16}, true, 1.0};
    const auto rows = run_sweep(c, 1);
    std::vector<double> n, fwhm, tp;
    std::string table;
    for (const auto& r : rows) {
        n.push_back(r.N);
        fwhm.push_back(r.fwhm);
        tp.push_back(r.t_peak);
        table += fmt(" N=%d:(fwhm %.2f, t_peak %.2f, %s)", r.N, r.fwhm, r.t_peak, r.status.c_str());
    }
    const double sf = loglog_slope(n, fwhm), st = loglog_slope(n, tp);
    return {sf >= -1.15 && sf <= -0.85 && st >= -0.6 && st <= -0.4,
            fmt("%s; slope fwhm = %.3f (need [-1.15, -0.85]), slope t_peak = %.3f (need [-0.6, -0.4])", table.c_str(), sf, st)};
}

// Hann-windowed periodogram maximum over angular frequencies in [w_lo, w_hi].
double dominant_frequency(const std::vector<double>& t, std::vector<double> y, double w_lo, double w_hi) {
    const std::size_t n = y.size();
    double mean = 0.0;
    for (double v : y) mean += v / n;
    for (std::size_t i = 0; i < n; ++i) y[i] = (y[i] - mean) * (0.5 - 0.5 * std::cos(2.0 * kPi * i / (n - 1)));
    double best_w = w_lo, best_p = -1.0;
    for (double w = w_lo; w <= w_hi; w += 0.002) {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < n; ++i) re += y[i] * std::cos(w * t[i]), im += y[i] * std::sin(w * t[i]);
        const double pw = re * re + im * im;
        if (pw > best_p) best_p = pw, best_w = w;
    }
    return best_w;
}

Outcome crit10() {
    const double a0 = 6.0;
    const double t_max = rabi_period(0.01, a0);
    ModelParams rd = tc(4);
    rd.rwa = false;
    const auto ts_tc = simulate_run(tc(4), PhotonicSpec::even_cat(a0), t_max, 20, {monitors::parity()});
    const auto ts_rd = simulate_run(rd, PhotonicSpec::even_cat(a0), t_max, 20, {monitors::parity()});
    const auto& a = ts_tc.column("qfi_even_density");
    const auto& b = ts_rd.column("qfi_even_density");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];
    const double w = dominant_frequency(ts_tc.times, d, 0.0, 10.0);
    return {std::abs(w - 2.0) <= 0.2,
            fmt("N=4 alpha0=6, RD - TC even-parity QFI over one Rabi period: dominant angular frequency %.3f (need 2 +/- 0.2)", w)};
}

Outcome crit11() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_validation();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int failed = 0;
    std::string names;
    for (const auto& r : rows)
        if (!r.pass) ++failed, names += " " + r.name;
    return {failed == 0 && secs < 120.0,
            fmt("%zu invariant checks, %d failed%s; %.1f s (need < 120 s)", rows.size(), failed, names.c_str(), secs)};
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) ma += a[i] / n, mb += b[i] / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// W along the great circle through the poles perpendicular to the axis joining the Gaussian centers.
std::vector<double> fringe_profile(const WignerGrid& g, int j_center) {
    const int nphi = static_cast<int>(g.phi.size());
    const int j1 = (j_center + nphi / 4) % nphi, j2 = (j_center + 3 * nphi / 4) % nphi;
    std::vector<double> out;
    for (std::size_t i = 0; i < g.theta.size(); ++i) out.push_back(g.W(i, j1));
    for (std::size_t i = g.theta.size() - 1; i-- > 1;) out.push_back(g.W(i, j2));
    return out;
}

Outcome crit12() {
    const ModelParams p = tc(8);
    const PhotonicSpec light = PhotonicSpec::even_cat(10.0);
    const double t = kPi / (2.0 * 0.01 * 10.0);
    CompositeState s = prepare_initial(light, p.N, auto_n_max(light, p.N));
    TaylorPropagator prop(p, s.n_max());
    const long long steps = std::llround(t / 1e-3);
    for (long long k = 0; k < steps; ++k) prop.step(s, 1e-3);
    const WignerGrid even = wigner_function(parity_postselect(s, ParityOutcome::Even).rho_e);
    const WignerGrid odd = wigner_function(parity_postselect(s, ParityOutcome::Odd).rho_e);
    const int eq = static_cast<int>(even.theta.size()) / 2;
    int jc = 0;
    even.W.row(eq).maxCoeff(&jc);
    const double r = pearson(fringe_profile(even, jc), fringe_profile(odd, jc));
    return {r < -0.5 && even.min() < 0 && odd.min() < 0,
            fmt("t = %.4f, Gaussian center at phi = %.3f: Pearson r = %.4f (need < -0.5); min W even %.4f, odd %.4f (need < 0)",
                s.time(), even.phi[jc], r, even.min(), odd.min())};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1  small-amplitude peak", crit1},       {"2  intermediate near-GHZ", crit2},
        {"3  large-amplitude classicality", crit3}, {"4  parity restoration", crit4},
        {"5  parity statistics", crit5},          {"6  ROC agreement", crit6},
        {"7  quadrature restoration", crit7},     {"8  resolution collapse", crit8},
        {"9  scaling laws", crit9},               {"10 non-RWA modulation", crit10},
        {"11 property suite", crit11},            {"12 Wigner fringe signatures", crit12},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %-32s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
