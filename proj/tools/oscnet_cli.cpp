// oscnet_cli.cpp — scenario-driven command line front end

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "oscnet/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv("OSCNET_OUT"); env && *env) return env;
    return "out";
}

oscnet::Scenario load_scenario(const std::string& name_or_path) {
    const auto names = oscnet::builtin_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end())
        return oscnet::builtin_scenario(name_or_path);
    return oscnet::parse_scenario_file(name_or_path);
}

void apply_oracle_flags(oscnet::Scenario& s, bool oracle, int trunc, double dt, int points) {
    if (oracle) s.oracle.enabled = true;
    if (trunc > 0) s.oracle.truncation = trunc;
    if (dt > 0.0) s.oracle.dt_lambda = dt;
    if (points > 0) s.oracle.points = points;
}

int run_command(const std::vector<std::string>& specs, const std::filesystem::path& out_dir,
                bool oracle, int trunc, double dt, int points, int jobs) {
    std::vector<oscnet::Scenario> scenarios;
    for (const auto& entry : specs) {
        oscnet::Scenario s = load_scenario(entry);
        apply_oracle_flags(s, oracle, trunc, dt, points);
        scenarios.push_back(std::move(s));
    }

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex io_mutex;
    auto worker = [&]() {
        while (true) {
            const size_t idx = next.fetch_add(1);
            if (idx >= scenarios.size()) return;
            try {
                const oscnet::RunResult res = oscnet::run_scenario(scenarios[idx], out_dir);
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cout << res.name << ": wrote " << res.csv_files.size()
                          << " series to " << res.out_dir.string() << "\n";
                if (res.manifest.contains("oracle") &&
                    !res.manifest["oracle"]["passed"].get<bool>()) {
                    std::cout << res.name << ": oracle comparison FAILED (max trace distance "
                              << res.manifest["oracle"]["max_trace_distance"] << ")\n";
                    failed = true;
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cerr << scenarios[idx].name << ": error: " << e.what() << "\n";
                failed = true;
            }
        }
    };

    const int nthreads = std::max(1, std::min<int>(jobs, int(scenarios.size())));
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return failed ? kExitValidationFailure : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"oscnet — coherence dynamics of two coupled dissipative quantum oscillators"};
    app.require_subcommand(1);

    // run
    std::vector<std::string> run_specs;
    std::string out_dir = default_out_dir().string();
    bool oracle = false;
    int trunc = 0, points = 0, jobs = 1;
    double dt = 0.0;
    auto* cmd_run = app.add_subcommand("run", "run scenarios (preset name or config file)");
    cmd_run->add_option("scenario", run_specs, "preset name or .cfg path")->required();
    cmd_run->add_option("--out", out_dir, "output directory (default $OSCNET_OUT or ./out)");
    cmd_run->add_flag("--oracle", oracle, "also run the brute-force comparison");
    cmd_run->add_option("--trunc", trunc, "oracle Fock truncation per mode");
    cmd_run->add_option("--dt", dt, "oracle step in units of 1/lambda");
    cmd_run->add_option("--points", points, "oracle comparison points");
    cmd_run->add_option("--jobs", jobs, "run scenarios concurrently");

    // list-builtins
    auto* cmd_list = app.add_subcommand("list-builtins", "list preset scenarios");

    // validate
    std::string val_spec;
    int val_trunc = 0, val_points = 0;
    double val_dt = 0.0;
    auto* cmd_validate =
        app.add_subcommand("validate", "closed form vs brute-force integration");
    cmd_validate->add_option("scenario", val_spec, "preset name or .cfg path")->required();
    cmd_validate->add_option("--trunc", val_trunc, "Fock truncation per mode");
    cmd_validate->add_option("--dt", val_dt, "step in units of 1/lambda");
    cmd_validate->add_option("--points", val_points, "comparison points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (cmd_list->parsed()) {
            for (const auto& name : oscnet::builtin_names()) {
                const oscnet::Scenario s = oscnet::builtin_scenario(name);
                std::cout << name << ": lambda = " << s.config.lambda
                          << ", Gamma1 = " << s.config.gamma_scale_1
                          << ", Gamma2 = " << s.config.gamma_scale_2
                          << ", F = " << s.config.drive_amplitude << "\n";
            }
            return kExitOk;
        }
        if (cmd_run->parsed())
            return run_command(run_specs, out_dir, oracle, trunc, dt, points, jobs);
        if (cmd_validate->parsed()) {
            oscnet::Scenario s = load_scenario(val_spec);
            apply_oracle_flags(s, true, val_trunc, val_dt, val_points);
            const oscnet::ValidationReport rep = oscnet::validate_scenario(s);
            std::cout << "points: " << rep.points << "\n"
                      << "max trace distance:    " << rep.max_trace_distance
                      << " (threshold " << rep.threshold_trace_distance << ")\n"
                      << "max offdiag deviation: " << rep.max_offdiag_deviation
                      << " (threshold " << rep.threshold_offdiag << ")\n"
                      << "min fidelity:          " << rep.min_fidelity << "\n"
                      << (rep.passed ? "PASS" : "FAIL") << "\n";
            return rep.passed ? kExitOk : kExitValidationFailure;
        }
    } catch (const oscnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidationFailure;
    }
    return kExitOk;
}
