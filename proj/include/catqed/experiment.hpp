// experiment.hpp: Config-driven runs: time series, Wigner snapshots, parameter sweeps

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "catqed/config.hpp"
#include "catqed/measurement.hpp"
#include "catqed/propagator.hpp"
#include "catqed/qfi.hpp"
#include "catqed/stateprep.hpp"
#include "catqed/wigner.hpp"

namespace catqed {

inline std::vector<Monitor> build_monitors(const ExperimentConfig& c) {
    std::vector<std::string> names = c.monitors;
    auto ensure = [&](const std::string& n) {
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    };
    if (c.measurement == MeasurementKind::Parity) ensure("parity");
    if (c.measurement == MeasurementKind::Quadrature) ensure("quadrature");

    std::vector<Monitor> out;
    for (const auto& n : names) {
        if (n == "qfi_density") out.push_back(monitors::qfi_trace());
        else if (n == "photon_number") out.push_back(monitors::observable(Observable::PhotonNumber));
        else if (n == "jz") out.push_back(monitors::observable(Observable::Jz));
        else if (n == "jx") out.push_back(monitors::observable(Observable::Jx));
        else if (n == "jy") out.push_back(monitors::observable(Observable::Jy));
        else if (n == "energy") out.push_back(monitors::observable(Observable::Energy));
        else if (n == "excitation_number") out.push_back(monitors::observable(Observable::ExcitationNumber));
        else if (n == "parity") out.push_back(monitors::parity());
        else if (n == "quadrature") out.push_back(monitors::quadrature(c.quadrature));
        else throw ConfigError("unknown monitor '" + n + "'");
    }
    return out;
}

inline PropagationPlan build_plan(const ExperimentConfig& c) {
    PropagationPlan p;
    p.dt = c.dt;
    p.t_max = c.t_max;
    p.sample_stride = c.sample_stride;
    p.tail_tolerance = c.tail_tolerance;
    return p;
}

inline CompositeState initial_state(const ExperimentConfig& c) {
    return prepare_initial(c.light, c.model.N, c.resolved_n_max());
}

inline TimeSeries simulate(const ExperimentConfig& c) {
    c.validate();
    return run(initial_state(c), c.model, build_plan(c), build_monitors(c));
}

struct RunSummary {
    std::string column;
    double peak = std::numeric_limits<double>::quiet_NaN();
    double t_peak = std::numeric_limits<double>::quiet_NaN();
};

inline RunSummary summarize(const TimeSeries& ts, const std::string& column) {
    RunSummary s;
    s.column = column;
    const auto& v = ts.column(column);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::isfinite(v[i]) && !(v[i] <= s.peak)) {
            s.peak = v[i];
            s.t_peak = ts.times[i];
        }
    return s;
}

struct WignerSnapshot {
    double time = 0.0;
    std::string outcome;  // trace, even, odd, quad
    WignerGrid grid;
};

inline std::string wigner_filename(double t, const std::string& outcome) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "wigner_t%.6g_%s.dat", t, outcome.c_str());
    return buf;
}

// Electronic states for each outcome the configured measurement allows. Impossible outcomes are skipped.
inline std::vector<std::pair<std::string, ElectronDensityMatrix>> conditioned_states(const ExperimentConfig& c,
                                                                                    const CompositeState& s) {
    std::vector<std::pair<std::string, ElectronDensityMatrix>> out;
    switch (c.measurement) {
        case MeasurementKind::None: out.emplace_back("trace", reduce_to_electron(s)); break;
        case MeasurementKind::Parity:
            for (ParityOutcome o : {ParityOutcome::Even, ParityOutcome::Odd}) try {
                    out.emplace_back(to_string(o), parity_postselect(s, o).rho_e);
                } catch (const ImpossibleOutcome&) {
                }
            break;
        case MeasurementKind::Quadrature:
            try {
                out.emplace_back("quad", quadrature_postselect(s, c.quadrature, s.time(), c.model.omega).rho_e);
            } catch (const ImpossibleOutcome&) {
            }
            break;
    }
    return out;
}

inline std::vector<WignerSnapshot> wigner_snapshots(const ExperimentConfig& c, std::vector<double> times) {
    c.validate();
    if (times.empty()) throw ConfigError("wigner: no times requested");
    for (double t : times)
        if (!(t >= 0.0) || t > c.t_max + 0.5 * c.dt)
            throw ConfigError("wigner: time " + std::to_string(t) + " outside [0, t_max]");
    std::sort(times.begin(), times.end());

    CompositeState state = initial_state(c);
    TaylorPropagator prop(c.model, state.n_max());
    const WignerGridSpec spec{c.wigner_n_theta, c.wigner_n_phi};
    std::vector<WignerSnapshot> out;
    long long done = 0;
    for (double t : times) {
        const long long target = std::llround(t / c.dt);
        for (; done < target; ++done) prop.step(state, c.dt);
        state.set_time(done * c.dt);
        const double tail = state.tail_population();
        if (tail > c.tail_tolerance)
            throw TruncationError("Fock truncation n_max=" + std::to_string(state.n_max()) + " too small: tail population " +
                                  std::to_string(tail));
        for (auto& [name, rho] : conditioned_states(c, state)) out.push_back({state.time(), name, wigner_function(rho, spec)});
    }
    return out;
}

struct SweepRow {
    int N = 0;
    double alpha0 = 0.0;
    double gamma = 0.0;
    double t_peak = std::numeric_limits<double>::quiet_NaN();
    double fwhm = std::numeric_limits<double>::quiet_NaN();
    double qfi_max = std::numeric_limits<double>::quiet_NaN();
    double prob_even_at_peak = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
};

inline ExperimentConfig sweep_point(const ExperimentConfig& base, double value) {
    if (!base.sweep) throw ConfigError("sweep: config has no [sweep] section");
    ExperimentConfig c = base;
    const SweepConfig& s = *base.sweep;
    switch (s.axis) {
        case SweepAxis::N: c.model.N = static_cast<int>(value); break;
        case SweepAxis::Alpha0: c.light.alpha = {value, 0.0}; break;
        case SweepAxis::Gamma: c.model.gamma = value; break;
    }
    if (s.couple_alpha) c.light.alpha = {std::sqrt(0.5 * c.model.N), 0.0};
    if (s.t_max_tv > 0.0) c.t_max = s.t_max_tv * 2.0 * std::numbers::pi / (c.model.gamma * std::sqrt(double(c.model.N)));
    if (std::find(c.monitors.begin(), c.monitors.end(), "parity") == c.monitors.end()) c.monitors.push_back("parity");
    c.sweep.reset();
    return c;
}

inline SweepRow run_sweep_point(const ExperimentConfig& c) {
    SweepRow r;
    r.N = c.model.N;
    r.alpha0 = std::abs(c.light.alpha);
    r.gamma = c.model.gamma;
    try {
        const TimeSeries ts = simulate(c);
        const auto& v = ts.column(c.primary_column());
        const RunSummary s = summarize(ts, c.primary_column());
        r.qfi_max = s.peak;
        r.t_peak = s.t_peak;
        const auto it = std::find(ts.times.begin(), ts.times.end(), s.t_peak);
        if (it != ts.times.end()) r.prob_even_at_peak = ts.column("prob_even")[it - ts.times.begin()];
        r.fwhm = peak_and_fwhm(ts.times, v).fwhm;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        r.status = "error: " + msg;
    }
    return r;
}

// Points run on up to `workers` threads; rows come back in axis order.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& base, int workers = 1) {
    base.validate();
    if (!base.sweep) throw ConfigError("sweep: config has no [sweep] section");
    const auto& values = base.sweep->values;
    std::vector<ExperimentConfig> points;
    for (double v : values) {
        points.push_back(sweep_point(base, v));
        points.back().validate();
    }
    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < points.size();) rows[i] = run_sweep_point(points[i]);
    };
    const int k = std::clamp(workers, 1, static_cast<int>(points.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < k; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

// Least-squares slope of log y against log x over finite positive pairs; NaN with fewer than two.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0 && y[i] > 0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    const std::size_t n = lx.size();
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) mx += lx[i] / n, my += ly[i] / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    return sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows, SweepAxis axis) {
    std::ostringstream os;
    os << "N,alpha0,gamma,t_peak,fwhm,qfi_max,prob_even_at_peak,status\n";
    char buf[256];
    std::vector<double> x, fwhm, tpk;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,", r.N, r.alpha0, r.gamma, r.t_peak, r.fwhm,
                      r.qfi_max, r.prob_even_at_peak);
        os << buf << r.status << '\n';
        if (r.status != "ok") continue;
        x.push_back(axis == SweepAxis::N ? r.N : axis == SweepAxis::Alpha0 ? r.alpha0 : r.gamma);
        fwhm.push_back(r.fwhm);
        tpk.push_back(r.t_peak);
    }
    const double sf = loglog_slope(x, fwhm), st = loglog_slope(x, tpk);
    if (std::isfinite(sf)) {
        std::snprintf(buf, sizeof buf, "# slope log(fwhm)/log(%s) = %.6f\n", to_string(axis).c_str(), sf);
        os << buf;
    }
    if (std::isfinite(st)) {
        std::snprintf(buf, sizeof buf, "# slope log(t_peak)/log(%s) = %.6f\n", to_string(axis).c_str(), st);
        os << buf;
    }
    return os.str();
}

}  // namespace catqed
