// stateprep.hpp: Coherent, cat and kitten photonic states; joint initial state with all spins down

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "catqed/hilbert.hpp"

namespace catqed {

enum class PhotonicKind { Coherent, GeneralCat, EvenCat, Kitten };

inline std::string to_string(PhotonicKind k) {
    switch (k) {
        case PhotonicKind::Coherent: return "coherent";
        case PhotonicKind::GeneralCat: return "general_cat";
        case PhotonicKind::EvenCat: return "even_cat";
        case PhotonicKind::Kitten: return "kitten";
    }
    return "?";
}

inline PhotonicKind photonic_kind_from_string(const std::string& s) {
    if (s == "coherent") return PhotonicKind::Coherent;
    if (s == "general_cat") return PhotonicKind::GeneralCat;
    if (s == "even_cat") return PhotonicKind::EvenCat;
    if (s == "kitten") return PhotonicKind::Kitten;
    throw ConfigError("unknown photonic kind '" + s + "'");
}

struct PhotonicSpec {
    PhotonicKind kind = PhotonicKind::EvenCat;
    Complex alpha{0.0, 0.0};
    Complex beta{0.0, 0.0};  // general_cat only
    double phi_cat = 0.0;

    static PhotonicSpec coherent(Complex a) { return {PhotonicKind::Coherent, a, {}, 0.0}; }
    static PhotonicSpec even_cat(Complex a0) { return {PhotonicKind::EvenCat, a0, {}, 0.0}; }
    static PhotonicSpec kitten(Complex a0) { return {PhotonicKind::Kitten, a0, {}, 0.0}; }
    static PhotonicSpec general_cat(Complex a, Complex b, double phi) {
        return {PhotonicKind::GeneralCat, a, b, phi};
    }

    // The two coherent components (second weight 0 for a plain coherent state).
    struct Components {
        Complex first, second;
        Complex second_weight;
    };

    Components components() const {
        switch (kind) {
            case PhotonicKind::Coherent: return {alpha, {}, {0.0, 0.0}};
            case PhotonicKind::EvenCat: return {alpha, -alpha, {1.0, 0.0}};
            case PhotonicKind::Kitten: return {alpha, {0.0, 0.0}, {1.0, 0.0}};
            case PhotonicKind::GeneralCat: return {alpha, beta, std::polar(1.0, phi_cat)};
        }
        return {};
    }

    double max_amplitude() const {
        const Components c = components();
        return std::max(std::abs(c.first), std::abs(c.second_weight) > 0 ? std::abs(c.second) : 0.0);
    }
};

inline constexpr double kCoherentLeakTolerance = 1e-10;
inline constexpr double kLogScaleThreshold = 25.0;

// v[n] = e^{-|α|²/2} αⁿ/√n!, no truncation check.
inline Vector coherent_vector_unchecked(Complex alpha, int n_max) {
    if (n_max < 0) throw ConfigError("coherent_vector: n_max must be >= 0");
    Vector v(n_max + 1);
    const double r = std::abs(alpha);
    if (r <= kLogScaleThreshold) {
        v[0] = std::exp(-0.5 * r * r);
        for (int n = 1; n <= n_max; ++n) v[n] = v[n - 1] * alpha / std::sqrt(static_cast<double>(n));
        return v;
    }
    const double log_r = std::log(r);
    const double phase = std::arg(alpha);
    for (int n = 0; n <= n_max; ++n) {
        const double log_mag = -0.5 * r * r + n * log_r - 0.5 * std::lgamma(n + 1.0);
        v[n] = std::polar(std::exp(log_mag), n * phase);
    }
    return v;
}

inline Vector coherent_vector(Complex alpha, int n_max, double leak_tol = kCoherentLeakTolerance) {
    Vector v = coherent_vector_unchecked(alpha, n_max);
    const double leak = 1.0 - v.squaredNorm();
    if (leak > leak_tol)
        throw TruncationError("coherent_vector: truncation leakage " + std::to_string(leak) + " at n_max=" +
                              std::to_string(n_max) + " for |alpha|=" + std::to_string(std::abs(alpha)));
    return v;
}

// |first> + w |second>, before normalization.
inline Vector photonic_superposition(const PhotonicSpec& spec, int n_max) {
    const auto c = spec.components();
    Vector v = coherent_vector(c.first, n_max);
    if (c.second_weight != Complex(0.0, 0.0)) v += c.second_weight * coherent_vector(c.second, n_max);
    return v;
}

inline Vector photonic_vector(const PhotonicSpec& spec, int n_max) {
    Vector v = photonic_superposition(spec, n_max);
    const double nrm = v.norm();
    if (!(nrm > 1e-14)) throw NumericalError("photonic_vector: state has zero norm");
    return v / nrm;
}

// ceil(A² + 7A + N + 10) with A the largest coherent amplitude: Poisson 7σ tail plus absorption headroom.
inline int auto_n_max(const PhotonicSpec& spec, int N) {
    const double a = spec.max_amplitude();
    return static_cast<int>(std::ceil(a * a + 7.0 * a + N + 10.0));
}

// c[m=-J][n] = photonic amplitudes, all other rows zero.
inline CompositeState prepare_initial(const PhotonicSpec& spec, int N, int n_max) {
    CompositeState state(N, n_max);
    state.amplitudes().row(0) = photonic_vector(spec, n_max).transpose();
    return state;
}

}  // namespace catqed
