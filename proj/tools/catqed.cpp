// catqed.cpp: command-line runner: simulate, wigner, sweep, validate

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "catqed/config.hpp"
#include "catqed/experiment.hpp"
#include "catqed/validate.hpp"

namespace fs = std::filesystem;
using namespace catqed;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidation = 4;

std::vector<double> parse_times(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : detail::split_list(s)) out.push_back(detail::parse_double("--times", item));
    return out;
}

int cmd_simulate(const std::string& config, const fs::path& out_dir) {
    const ExperimentConfig c = load_config(config);
    const TimeSeries ts = simulate(c);
    const fs::path path = out_dir / c.csv;
    write_csv(ts, path);
    const RunSummary s = summarize(ts, c.primary_column());
    std::printf("%s: peak %s = %.6f at t = %.6f (%zu samples, n_max = %d)\n", path.string().c_str(), s.column.c_str(), s.peak,
                s.t_peak, ts.size(), c.resolved_n_max());
    return kExitOk;
}

int cmd_wigner(const std::string& config, const fs::path& out_dir, const std::string& times) {
    const ExperimentConfig c = load_config(config);
    if (times.empty()) throw ConfigError("wigner: --times is required");
    for (const auto& snap : wigner_snapshots(c, parse_times(times))) {
        std::ostringstream os;
        snap.grid.write(os);
        const fs::path path = out_dir / wigner_filename(snap.time, snap.outcome);
        write_file_atomic(path, os.str());
        std::printf("%s: t = %.6f outcome = %s min W = %.6g max W = %.6g\n", path.string().c_str(), snap.time,
                    snap.outcome.c_str(), snap.grid.min(), snap.grid.max());
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config, const fs::path& out_dir, int workers) {
    const ExperimentConfig c = load_config(config);
    if (!c.sweep) throw ConfigError("sweep: config has no [sweep] section");
    const auto rows = run_sweep(c, workers);
    const std::string csv = sweep_csv(rows, c.sweep->axis);
    const fs::path path = out_dir / "sweep_summary.csv";
    write_file_atomic(path, csv);
    std::cout << csv;
    int failed = 0;
    for (const auto& r : rows) failed += r.status != "ok";
    if (failed) std::fprintf(stderr, "sweep: %d of %zu points failed\n", failed, rows.size());
    return failed ? kExitNumerical : kExitOk;
}

int cmd_validate(const std::string& config, const std::string& fault) {
    if (!config.empty()) {
        // A directory of configs: each must parse.
        if (!fs::is_directory(config)) throw ConfigError("validate: --config expects a directory of *.ini files");
        int n = 0;
        for (const auto& e : fs::directory_iterator(config))
            if (e.path().extension() == ".ini") {
                load_config(e.path().string());
                ++n;
            }
        if (n == 0) {
            std::fprintf(stderr, "usage: catqed validate [--config DIR]\n  no *.ini files found in %s\n", config.c_str());
            return kExitConfig;
        }
        std::printf("%d config(s) parsed\n", n);
    }
    ValidateOptions opt;
    if (fault == "cg") opt.inject_cg_fault = true;
    else if (!fault.empty()) throw ConfigError("validate: unknown fault '" + fault + "'");
    return print_validation(std::cout, run_validation(opt)) ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Emitters coupled to a cat-state cavity mode: simulation and analysis"};
    app.require_subcommand(1);

    std::string config, out = ".", times, fault;
    int workers = 1;

    auto* sim = app.add_subcommand("simulate", "propagate and write the time-series CSV");
    auto* wig = app.add_subcommand("wigner", "write spin Wigner grids at the requested times");
    auto* swp = app.add_subcommand("sweep", "run a parameter sweep and write a summary CSV");
    auto* val = app.add_subcommand("validate", "run the invariant suite");
    for (auto* s : {sim, wig, swp}) {
        s->add_option("--config", config, "experiment config (INI)")->required();
        s->add_option("--out", out, "output directory");
    }
    wig->add_option("--times", times, "comma-separated times, e.g. \"0,15.7,31.4\"");
    swp->add_option("--workers", workers, "concurrent sweep points")->check(CLI::PositiveNumber);
    val->add_option("--config", config, "directory of configs to parse-check");
    val->add_option("--inject-fault", fault, "corrupt an internal table to exercise the checks (cg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(config, out);
        if (*wig) return cmd_wigner(config, out, times);
        if (*swp) return cmd_sweep(config, out, workers);
        if (*val) return cmd_validate(config, fault);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}
