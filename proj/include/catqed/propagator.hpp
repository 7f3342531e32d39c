// propagator.hpp: Taylor-expanded time stepping with per-step renormalization, sampled monitors

#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "catqed/hilbert.hpp"
#include "catqed/measurement.hpp"
#include "catqed/operators.hpp"
#include "catqed/qfi.hpp"

namespace catqed {

inline constexpr int kDefaultTaylorOrder = 4;
inline constexpr int kDefaultSampleStride = 100;
inline constexpr std::size_t kMaxSamples = 5000;

struct PropagationPlan {
    double dt = 1e-3;
    double t_max = 0.0;
    int sample_stride = 0;  // 0: every 100 steps, widened so a run keeps <= 5000 samples
    double tail_tolerance = kDefaultTailTolerance;
    int taylor_order = kDefaultTaylorOrder;

    long long total_steps() const { return std::llround(t_max / dt); }

    int effective_stride() const {
        if (sample_stride > 0) return sample_stride;
        const long long steps = total_steps();
        const long long wide = (steps + static_cast<long long>(kMaxSamples) - 2) / static_cast<long long>(kMaxSamples - 1);
        return static_cast<int>(std::max<long long>(kDefaultSampleStride, wide));
    }

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("PropagationPlan: dt must be > 0");
        if (!(t_max >= 0.0)) throw ConfigError("PropagationPlan: t_max must be >= 0");
        if (sample_stride < 0) throw ConfigError("PropagationPlan: sample_stride must be >= 1");
        if (taylor_order < 1) throw ConfigError("PropagationPlan: taylor_order must be >= 1");
    }
};

// |Ψ'> = Σ_{k=0}^{order} (-iHδt)^k/k! |Ψ>, evaluated in Horner form, then renormalized.
class TaylorPropagator {
public:
    TaylorPropagator(const ModelParams& p, int n_max, int order = kDefaultTaylorOrder)
        : h_(p, n_max), order_(order) {}

    // Advances in place; returns |‖Ψ'‖ - 1| before renormalization.
    double step(CompositeState& state, double dt) {
        const Amplitudes& psi = state.amplitudes();
        acc_ = psi;
        const Complex x(0.0, -dt);
        for (int k = order_; k >= 1; --k) {
            h_.apply(acc_, tmp_);
            acc_ = psi + (x / static_cast<double>(k)) * tmp_;
        }
        const double nrm = std::sqrt(acc_.squaredNorm());
        if (!std::isfinite(nrm) || !(nrm > 0.0))
            throw NumericalError("TaylorPropagator: non-finite state at t=" + std::to_string(state.time()) +
                                 " (dt=" + std::to_string(dt) + ", n_max=" + std::to_string(h_.n_max()) + ")");
        state.amplitudes() = acc_ / nrm;
        state.set_time(state.time() + dt);
        return std::abs(nrm - 1.0);
    }

    const ModelParams& params() const { return h_.params(); }

private:
    HamiltonianAction h_;
    int order_;
    Amplitudes acc_, tmp_;
};

inline CompositeState step(const CompositeState& state, const ModelParams& p, double dt,
                           int order = kDefaultTaylorOrder) {
    check_dims(state, p);
    TaylorPropagator prop(p, state.n_max(), order);
    CompositeState out = state;
    prop.step(out, dt);
    return out;
}

// Named columns sampled on a common time grid.
struct TimeSeries {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t size() const { return times.size(); }

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool has(const std::string& name) const { return index_of(name) >= 0; }

    const std::vector<double>& column(const std::string& name) const {
        const int i = index_of(name);
        if (i < 0) throw std::out_of_range("TimeSeries: no column '" + name + "'");
        return columns[i];
    }

    void write_csv(std::ostream& os) const {
        os << "time";
        for (const auto& n : names) os << ',' << n;
        os << '\n';
        char buf[40];
        for (std::size_t r = 0; r < times.size(); ++r) {
            std::snprintf(buf, sizeof buf, "%.17g", times[r]);
            os << buf;
            for (const auto& c : columns) {
                std::snprintf(buf, sizeof buf, "%.17g", c[r]);
                os << ',' << buf;
            }
            os << '\n';
        }
    }
};

// Writes through a temporary file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << contents;
        if (!f) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_csv(const TimeSeries& ts, const std::filesystem::path& path) {
    std::ostringstream os;
    ts.write_csv(os);
    write_file_atomic(path, os.str());
}

// A monitor fills one value per named column from the current state.
struct Monitor {
    std::vector<std::string> columns;
    std::function<void(const CompositeState&, const ModelParams&, double*)> eval;
};

namespace monitors {

inline Monitor observable(Observable o) {
    return {{to_string(o)},
            [o](const CompositeState& s, const ModelParams& p, double* out) { out[0] = expectation(s, o, p); }};
}

// QFI density of the photon-traced electronic state.
inline Monitor qfi_trace() {
    return {{"qfi_density"}, [](const CompositeState& s, const ModelParams&, double* out) {
                out[0] = qfi_mixed(reduce_to_electron(s)).value / s.N();
            }};
}

// Even/odd probabilities and QFI densities; QFI is NaN for an impossible outcome.
inline Monitor parity() {
    return {{"prob_even", "prob_odd", "qfi_even_density", "qfi_odd_density"},
            [](const CompositeState& s, const ModelParams&, double* out) {
                const ParityOutcome outcomes[2] = {ParityOutcome::Even, ParityOutcome::Odd};
                for (int i = 0; i < 2; ++i) {
                    out[i] = parity_probability(s, outcomes[i]);
                    try {
                        out[2 + i] = qfi_mixed(parity_postselect(s, outcomes[i]).rho_e).value / s.N();
                    } catch (const ImpossibleOutcome&) {
                        out[2 + i] = std::numeric_limits<double>::quiet_NaN();
                    }
                }
            }};
}

inline Monitor quadrature(const QuadratureSpec& q, const std::string& label = "quad") {
    return {{label + "_prob", "qfi_" + label + "_density"},
            [q](const CompositeState& s, const ModelParams& p, double* out) {
                try {
                    const PostselectionResult r = quadrature_postselect(s, q, s.time(), p.omega);
                    out[0] = r.probability;
                    out[1] = qfi_mixed(r.rho_e).value / s.N();
                } catch (const ImpossibleOutcome&) {
                    out[0] = 0.0;
                    out[1] = std::numeric_limits<double>::quiet_NaN();
                }
            }};
}

}  // namespace monitors

using SampleCallback = std::function<void(const CompositeState&)>;

// Propagates `initial` to plan.t_max. Columns norm_drift (max per-step |‖Ψ'‖-1| since the previous sample)
// and tail_population are always recorded; the run aborts when the tail exceeds plan.tail_tolerance.
inline TimeSeries run(const CompositeState& initial, const ModelParams& params, const PropagationPlan& plan,
                      const std::vector<Monitor>& mons, const SampleCallback& on_sample = {}) {
    plan.validate();
    params.validate();
    check_dims(initial, params);

    TimeSeries ts;
    for (const auto& m : mons)
        for (const auto& c : m.columns) ts.names.push_back(c);
    ts.names.push_back("norm_drift");
    ts.names.push_back("tail_population");
    ts.columns.assign(ts.names.size(), {});

    CompositeState state = initial;
    TaylorPropagator prop(params, state.n_max(), plan.taylor_order);
    const long long steps = plan.total_steps();
    const int stride = plan.effective_stride();
    const double t0 = initial.time();
    std::vector<double> row(ts.names.size());
    double drift = 0.0;

    auto sample = [&] {
        const double tail = state.tail_population();
        if (tail > plan.tail_tolerance)
            throw TruncationError("Fock truncation n_max=" + std::to_string(state.n_max()) +
                                  " too small: tail population " + std::to_string(tail) + " at t=" +
                                  std::to_string(state.time()));
        std::size_t col = 0;
        for (const auto& m : mons) {
            m.eval(state, params, row.data() + col);
            col += m.columns.size();
        }
        row[col++] = drift;
        row[col++] = tail;
        ts.times.push_back(state.time());
        for (std::size_t i = 0; i < row.size(); ++i) ts.columns[i].push_back(row[i]);
        drift = 0.0;
        if (on_sample) on_sample(state);
    };

    sample();
    for (long long k = 1; k <= steps; ++k) {
        drift = std::max(drift, prop.step(state, plan.dt));
        state.set_time(t0 + k * plan.dt);
        if (k % stride == 0 || k == steps) sample();
    }
    return ts;
}

struct PeakInfo {
    double t_peak = 0.0;
    double peak_value = 0.0;
    double fwhm = 0.0;
    double t_left = 0.0;   // half-maximum crossings
    double t_right = 0.0;
};

// Global maximum and its full width at half maximum, crossings by linear interpolation. NaN samples are skipped.
inline PeakInfo peak_and_fwhm(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 3)
        throw std::invalid_argument("peak_and_fwhm: need at least three samples of equal length");
    int imax = -1;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (std::isfinite(values[i]) && (imax < 0 || values[i] > values[imax])) imax = static_cast<int>(i);
    if (imax < 0) throw NumericalError("peak_and_fwhm: no finite samples");
    const int last = static_cast<int>(values.size()) - 1;
    if (imax == 0 || imax == last) throw NumericalError("peak_and_fwhm: series is monotone (maximum at an endpoint)");

    PeakInfo r;
    r.t_peak = times[imax];
    r.peak_value = values[imax];
    const double half = 0.5 * r.peak_value;
    auto crossing = [&](int from, int to) {
        const double f = (half - values[from]) / (values[to] - values[from]);
        return times[from] + f * (times[to] - times[from]);
    };
    std::optional<double> left, right;
    for (int i = imax - 1; i >= 0; --i)
        if (std::isfinite(values[i]) && values[i] < half) {
            left = crossing(i, i + 1);
            break;
        }
    for (int i = imax + 1; i <= last; ++i)
        if (std::isfinite(values[i]) && values[i] < half) {
            right = crossing(i, i - 1);
            break;
        }
    if (!left || !right) throw NumericalError("peak_and_fwhm: no half-maximum crossing on one side of the peak");
    r.t_left = *left;
    r.t_right = *right;
    r.fwhm = *right - *left;
    return r;
}

}  // namespace catqed
