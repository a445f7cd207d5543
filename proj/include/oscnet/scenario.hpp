// scenario.hpp — Scenario definitions, config-file parsing, preset scenarios,
// CSV/manifest emission and closed-form-vs-oracle validation

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vendor_json.hpp"

#include "oscnet/observables.hpp"
#include "oscnet/fock.hpp"

namespace oscnet {

struct StateSpec {
    std::string kind = "product_cat"; // product_cat | eigen_minus | eigen_plus
    double alpha = 1.0;
    double eta = 1.0; // mode-2 amplitude, product_cat only
    int sign = +1;

    InitialSuperposition build() const;
    StateKind state_kind() const;
};

struct OracleOptions {
    bool enabled = false;
    int truncation = 12;
    double dt_lambda = 0.01; // step in units of 1/lambda
    int points = 17;
};

struct Scenario {
    std::string name = "scenario";
    std::string figure_tag; // set for presets
    SystemConfig config;
    StateSpec state;
    std::vector<std::string> observables;
    double tmax_lambda = 12.566370614359172; // grid extent in lambda*t
    int samples = 1001;
    OracleOptions oracle;
    bool waive_coupling_guard = false;
    std::map<std::string, double> notes; // extra values recorded in the manifest

    void validate() const; // throws ConfigError
};

// Names of all supported observables.
const std::vector<std::string>& known_observables();

// Preset scenarios fig4a..fig4f, fig5, fig6, fig7a, fig7b, fig8a, fig8b.
std::vector<std::string> builtin_names();
Scenario builtin_scenario(const std::string& name);

// Parses the key-value config format; errors carry file:line context.
Scenario parse_scenario_file(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<string>");

struct ValidationReport {
    int points = 0;
    double max_trace_distance = 0.0;
    double max_offdiag_deviation = 0.0; // max |ratio - 1|
    double min_fidelity = 1.0;
    double threshold_trace_distance = 1e-3;
    double threshold_offdiag = 1e-3;
    bool passed = false;
};

ValidationReport validate_scenario(const Scenario& scenario);

struct RunResult {
    std::string name;
    std::filesystem::path out_dir;
    std::map<std::string, std::filesystem::path> csv_files;
    nlohmann::json manifest;
};

RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_root);

// One observable evaluated over the scenario grid (used by run_scenario and tests).
TimeSeries evaluate_observable(const Scenario& scenario, const std::string& observable);

// 17-significant-digit CSV with columns t,lambda_t,value and \n endings.
std::string format_csv(const TimeSeries& series, double lambda);

} // namespace oscnet
