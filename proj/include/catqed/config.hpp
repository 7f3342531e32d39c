// config.hpp: INI experiment configuration: parse, validate, serialize

#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "catqed/measurement.hpp"
#include "catqed/operators.hpp"
#include "catqed/stateprep.hpp"

namespace catqed {

enum class MeasurementKind { None, Parity, Quadrature };

inline std::string to_string(MeasurementKind k) {
    switch (k) {
        case MeasurementKind::None: return "none";
        case MeasurementKind::Parity: return "parity";
        case MeasurementKind::Quadrature: return "quadrature";
    }
    return "?";
}

enum class SweepAxis { N, Alpha0, Gamma };

inline std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::N: return "N";
        case SweepAxis::Alpha0: return "alpha0";
        case SweepAxis::Gamma: return "gamma";
    }
    return "?";
}

struct SweepConfig {
    SweepAxis axis = SweepAxis::N;
    std::vector<double> values;
    bool couple_alpha = false;  // alpha0 = sqrt(N/2)
    double t_max_tv = 0.0;      // >0: t_max = t_max_tv * 2π/(γ√N)
};

struct ExperimentConfig {
    ModelParams model;
    PhotonicSpec light;
    double dt = 1e-3;
    double t_max = 0.0;
    std::optional<int> n_max;  // auto-sized when absent
    int sample_stride = 0;
    double tail_tolerance = kDefaultTailTolerance;

    MeasurementKind measurement = MeasurementKind::None;
    QuadratureSpec quadrature;

    std::vector<std::string> monitors = {"qfi_density", "photon_number", "jz"};
    std::string csv = "timeseries.csv";

    int wigner_n_theta = 181;
    int wigner_n_phi = 360;

    std::optional<SweepConfig> sweep;

    int resolved_n_max() const { return n_max ? *n_max : auto_n_max(light, model.N); }

    // Column whose peak the run summary reports.
    std::string primary_column() const {
        switch (measurement) {
            case MeasurementKind::Parity: return "qfi_even_density";
            case MeasurementKind::Quadrature: return "qfi_quad_density";
            case MeasurementKind::None: break;
        }
        return "qfi_density";
    }

    void validate() const;
};

// Taylor-4 stays accurate while ω·n_max·dt is small; large cats push n_max past 1000.
inline double default_dt(const PhotonicSpec& light) { return light.max_amplitude() >= 30.0 ? 1e-4 : 1e-3; }

inline const std::set<std::string>& known_monitors() {
    static const std::set<std::string> m = {"qfi_density", "photon_number", "jz",     "jx",
                                            "jy",          "energy",        "excitation_number",
                                            "parity",      "quadrature"};
    return m;
}

inline void ExperimentConfig::validate() const {
    model.validate();
    if (!(dt > 0.0)) throw ConfigError("run.dt must be > 0");
    if (!(t_max >= 0.0)) throw ConfigError("run.t_max must be >= 0");
    if (n_max && *n_max < 1) throw ConfigError("run.n_max must be >= 1");
    if (sample_stride < 0) throw ConfigError("run.sample_stride must be >= 0");
    if (!(tail_tolerance > 0.0)) throw ConfigError("run.tail_tolerance must be > 0");
    quadrature.validate();
    for (const auto& m : monitors)
        if (!known_monitors().count(m)) throw ConfigError("unknown monitor '" + m + "'");
    if (wigner_n_theta < 2 || wigner_n_phi < 1) throw ConfigError("wigner grid too small");
    if (sweep) {
        if (sweep->values.empty()) throw ConfigError("sweep.values must be nonempty");
        if (sweep->axis == SweepAxis::N)
            for (double v : sweep->values)
                if (v < 1 || v != std::floor(v)) throw ConfigError("sweep.values: N must be a positive integer");
        if (sweep->couple_alpha && sweep->axis != SweepAxis::N)
            throw ConfigError("sweep.couple_alpha requires axis = N");
        if (sweep->t_max_tv > 0.0 && !(model.gamma > 0.0)) throw ConfigError("sweep.t_max_tv requires gamma > 0");
    }
}

namespace detail {

using Tree = boost::property_tree::ptree;

inline const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"model", {"kind", "N", "delta", "omega", "gamma", "mu"}},
        {"light", {"kind", "alpha", "alpha_im", "beta", "beta_im", "phi_cat"}},
        {"run", {"dt", "t_max", "n_max", "sample_stride", "tail_tolerance"}},
        {"measurement", {"kind", "x", "phi", "tracking", "delta_x"}},
        {"monitors", {"list"}},
        {"output", {"csv"}},
        {"wigner", {"n_theta", "n_phi"}},
        {"sweep", {"axis", "values", "couple_alpha", "t_max_tv"}},
    };
    return s;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty() && std::isfinite(d)) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a number, got '" + v + "'");
}

inline int parse_int(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return static_cast<int>(d);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& is) {
    using detail::Tree;
    Tree tree;
    try {
        boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    const auto& schema = detail::config_schema();
    for (const auto& [section, sub] : tree) {
        if (sub.empty() && !sub.data().empty()) throw ConfigError("key '" + section + "' outside of a section");
        auto it = schema.find(section);
        if (it == schema.end()) throw ConfigError("unknown section [" + section + "]");
        for (const auto& [key, val] : sub)
            if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
    auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(Tree::path_type(path, '.'))) return detail::trim(*v);
        return std::nullopt;
    };
    auto num = [&](const std::string& path, double& dst) {
        if (auto v = get(path)) dst = detail::parse_double(path, *v);
    };

    ExperimentConfig c;
    if (auto v = get("model.kind")) {
        if (*v == "tc") c.model.rwa = true;
        else if (*v == "rd") c.model.rwa = false;
        else throw ConfigError("model.kind must be tc or rd, got '" + *v + "'");
    }
    if (auto v = get("model.N")) c.model.N = detail::parse_int("model.N", *v);
    num("model.delta", c.model.delta);
    num("model.omega", c.model.omega);
    num("model.gamma", c.model.gamma);
    num("model.mu", c.model.mu);

    if (auto v = get("light.kind")) c.light.kind = photonic_kind_from_string(*v);
    double are = 0, aim = 0, bre = 0, bim = 0;
    num("light.alpha", are);
    num("light.alpha_im", aim);
    num("light.beta", bre);
    num("light.beta_im", bim);
    num("light.phi_cat", c.light.phi_cat);
    c.light.alpha = {are, aim};
    c.light.beta = {bre, bim};

    c.dt = default_dt(c.light);
    num("run.dt", c.dt);
    num("run.t_max", c.t_max);
    if (auto v = get("run.n_max"); v && *v != "auto") c.n_max = detail::parse_int("run.n_max", *v);
    if (auto v = get("run.sample_stride")) c.sample_stride = detail::parse_int("run.sample_stride", *v);
    num("run.tail_tolerance", c.tail_tolerance);

    if (auto v = get("measurement.kind")) {
        if (*v == "none") c.measurement = MeasurementKind::None;
        else if (*v == "parity") c.measurement = MeasurementKind::Parity;
        else if (*v == "quadrature") c.measurement = MeasurementKind::Quadrature;
        else throw ConfigError("measurement.kind must be none, parity or quadrature, got '" + *v + "'");
    }
    num("measurement.x", c.quadrature.x);
    num("measurement.phi", c.quadrature.phi);
    num("measurement.delta_x", c.quadrature.delta_x);
    if (auto v = get("measurement.tracking")) c.quadrature.phase_tracking = detail::parse_bool("measurement.tracking", *v);

    if (auto v = get("monitors.list")) c.monitors = detail::split_list(*v);
    if (auto v = get("output.csv")) c.csv = *v;
    if (auto v = get("wigner.n_theta")) c.wigner_n_theta = detail::parse_int("wigner.n_theta", *v);
    if (auto v = get("wigner.n_phi")) c.wigner_n_phi = detail::parse_int("wigner.n_phi", *v);

    if (tree.get_child_optional("sweep")) {
        SweepConfig s;
        if (auto v = get("sweep.axis")) {
            if (*v == "N") s.axis = SweepAxis::N;
            else if (*v == "alpha0") s.axis = SweepAxis::Alpha0;
            else if (*v == "gamma") s.axis = SweepAxis::Gamma;
            else throw ConfigError("sweep.axis must be N, alpha0 or gamma, got '" + *v + "'");
        }
        if (auto v = get("sweep.values"))
            for (const auto& item : detail::split_list(*v)) s.values.push_back(detail::parse_double("sweep.values", item));
        if (auto v = get("sweep.couple_alpha")) {
            if (*v == "sqrt_half_n") s.couple_alpha = true;
            else if (*v == "none") s.couple_alpha = false;
            else throw ConfigError("sweep.couple_alpha must be sqrt_half_n or none, got '" + *v + "'");
        }
        num("sweep.t_max_tv", s.t_max_tv);
        c.sweep = s;
    }
    c.validate();
    return c;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(f);
}

inline std::string serialize_config(const ExperimentConfig& c) {
    using detail::fmt;
    std::ostringstream os;
    os << "[model]\nkind = " << (c.model.rwa ? "tc" : "rd") << "\nN = " << c.model.N << "\ndelta = " << fmt(c.model.delta)
       << "\nomega = " << fmt(c.model.omega) << "\ngamma = " << fmt(c.model.gamma) << "\nmu = " << fmt(c.model.mu) << "\n\n";
    os << "[light]\nkind = " << to_string(c.light.kind) << "\nalpha = " << fmt(c.light.alpha.real())
       << "\nalpha_im = " << fmt(c.light.alpha.imag()) << "\nbeta = " << fmt(c.light.beta.real())
       << "\nbeta_im = " << fmt(c.light.beta.imag()) << "\nphi_cat = " << fmt(c.light.phi_cat) << "\n\n";
    os << "[run]\ndt = " << fmt(c.dt) << "\nt_max = " << fmt(c.t_max)
       << "\nn_max = " << (c.n_max ? std::to_string(*c.n_max) : std::string("auto")) << "\nsample_stride = " << c.sample_stride
       << "\ntail_tolerance = " << fmt(c.tail_tolerance) << "\n\n";
    os << "[measurement]\nkind = " << to_string(c.measurement) << "\nx = " << fmt(c.quadrature.x)
       << "\nphi = " << fmt(c.quadrature.phi) << "\ntracking = " << (c.quadrature.phase_tracking ? "true" : "false")
       << "\ndelta_x = " << fmt(c.quadrature.delta_x) << "\n\n";
    os << "[monitors]\nlist = ";
    for (std::size_t i = 0; i < c.monitors.size(); ++i) os << (i ? ", " : "") << c.monitors[i];
    os << "\n\n[output]\ncsv = " << c.csv << "\n\n";
    os << "[wigner]\nn_theta = " << c.wigner_n_theta << "\nn_phi = " << c.wigner_n_phi << "\n";
    if (c.sweep) {
        os << "\n[sweep]\naxis = " << to_string(c.sweep->axis) << "\nvalues = ";
        for (std::size_t i = 0; i < c.sweep->values.size(); ++i) os << (i ? ", " : "") << fmt(c.sweep->values[i]);
        os << "\ncouple_alpha = " << (c.sweep->couple_alpha ? "sqrt_half_n" : "none") << "\nt_max_tv = " << fmt(c.sweep->t_max_tv)
           << "\n";
    }
    return os.str();
}

}  // namespace catqed
